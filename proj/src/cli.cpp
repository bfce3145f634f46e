#include "hhfrac/cli.hpp"

#include "hhfrac/laws.hpp"
#include "hhfrac/spaces.hpp"
#include "hhfrac/testfn.hpp"
#include "hhfrac/theorem.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <sstream>

namespace hhfrac {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Thrown for bad user input; maps to kExitInvalidInput.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json solver_defaults() {
    return json{{"alpha1", 0.8},       {"alpha2", 0.5},    {"beta", 0.5},      {"p", 2.0},         {"N", 1},
                {"L", 4.0},            {"n", 63},          {"a", 1.0},         {"T_end", 10.0},    {"M_t", 800},
                {"grading", 2.0},      {"u0", "bump"},     {"u0_amplitude", 5.0}, {"u0_center", 0.5}, {"u0_width", 0.25},
                {"source_on", true},   {"threshold", 1e3}};
}

const std::map<std::string, json>& defaults_table() {
    static const std::map<std::string, json> table = [] {
        std::map<std::string, json> t;
        t["laws"] = json{{"grid", 2048}, {"cases", 100}, {"grading", 1.0}, {"a", 1.0}, {"T", 2.718281828459045},
                         {"threads", 0}, {"convergence_from", 0}};
        t["certificate"] = json{{"alpha1", 0.8}, {"alpha2", 0.5}, {"beta", 0.5}, {"p", 2.0}, {"N", 1}};
        t["testfn-decay"] = json{{"alpha", 0.5}, {"p", 2.0}, {"ell", 4.0}, {"a", 1.0}, {"alpha2", 0.5},
                                 {"T_list", json::array({10.0, 20.0, 40.0})}, {"M", 4096}, {"ratio_exponent", 5.0}};
        t["scaling"] = json{{"alpha2", 0.5}, {"N", 1}, {"p", 2.0}, {"mu", 4.0}, {"a", 1.0},
                            {"T_list", json::array({1e2, 1e3, 1e4})}, {"slope_tol", 0.1}};
        t["solve"] = solver_defaults();
        auto scan = solver_defaults();
        scan["p_list"] = json::array({2.0, 6.0});
        t["scan-p"] = scan;
        auto weak = solver_defaults();
        weak["L"] = 6.0;
        weak["T_end"] = 1.5;
        weak["M_t"] = 100;
        weak["u0_amplitude"] = 1.0;
        weak["levels"] = 3;
        weak["test_T"] = 0.0;
        t["weakcheck"] = weak;
        return t;
    }();
    return table;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        std::size_t used = 0;
        const std::string tok = item.substr(b, e - b + 1);
        double x = 0.0;
        try {
            x = std::stod(tok, &used);
        } catch (const std::exception&) {
            throw InputError("not a number: '" + tok + "'");
        }
        if (used != tok.size()) throw InputError("not a number: '" + tok + "'");
        v.push_back(x);
    }
    return v;
}

// Coerces `value` to the type of `like`.  Strings come from command-line flags.
json coerce(const std::string& key, const json& like, const json& value) {
    auto fail = [&] { return InputError("parameter '" + key + "': cannot use " + value.dump()); };
    if (like.is_array()) {
        if (value.is_array()) {
            for (const auto& x : value)
                if (!x.is_number()) throw fail();
            return value;
        }
        if (value.is_string()) return json(parse_list(value.get<std::string>()));
        if (value.is_number()) return json::array({value});
        throw fail();
    }
    if (like.is_boolean()) {
        if (value.is_boolean()) return value;
        if (value.is_string()) {
            const auto s = value.get<std::string>();
            if (s == "true" || s == "1") return true;
            if (s == "false" || s == "0") return false;
        }
        throw fail();
    }
    if (like.is_string()) {
        if (value.is_string()) return value;
        throw fail();
    }
    double x = 0.0;
    if (value.is_number()) {
        x = value.get<double>();
    } else if (value.is_string()) {
        const auto s = value.get<std::string>();
        std::size_t used = 0;
        try {
            x = std::stod(s, &used);
        } catch (const std::exception&) {
            throw fail();
        }
        if (used != s.size()) throw fail();
    } else {
        throw fail();
    }
    if (!std::isfinite(x)) throw fail();
    if (like.is_number_integer()) {
        if (x != std::floor(x) || std::abs(x) > 1e15) throw fail();
        return static_cast<long long>(x);
    }
    return x;
}

json resolve(const RunConfig& cfg) {
    const auto& defaults = command_defaults(cfg.command);
    if (!cfg.parameters.is_object()) throw InputError("parameters must be a JSON object");
    json merged = defaults;
    for (const auto& [key, value] : cfg.parameters.items()) {
        if (!defaults.contains(key)) throw InputError("unknown parameter '" + key + "' for command '" + cfg.command + "'");
        merged[key] = coerce(key, defaults.at(key), value);
    }
    return merged;
}

ProblemSpec spec_from(const json& P) {
    ProblemSpec s;
    s.alpha1 = P.at("alpha1");
    s.alpha2 = P.at("alpha2");
    s.beta = P.at("beta");
    s.p = P.at("p");
    s.N = P.at("N");
    s.L = P.at("L");
    s.n = P.at("n");
    s.a = P.at("a");
    s.T_end = P.at("T_end");
    s.M_t = P.at("M_t");
    s.grading = P.at("grading");
    const std::string kind = P.at("u0");
    if (kind == "bump") s.u0.kind = InitialData::Kind::Bump;
    else if (kind == "zero") s.u0.kind = InitialData::Kind::Zero;
    else throw InputError("u0 must be 'bump' or 'zero'");
    s.u0.amplitude = P.at("u0_amplitude");
    s.u0.center = P.at("u0_center");
    s.u0.width = P.at("u0_width");
    s.source_on = P.at("source_on");
    s.validate();
    if (!(s.u0.center > 0.0 && s.u0.center < 1.0)) throw InputError("u0_center must lie in (0, 1)");
    return s;
}

// Files written by the current run, removed again if it fails.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

    fs::path file(const std::string& name) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw IoError(dir_.string() + ": " + ec.message());
        fs::path p = dir_ / name;
        written_.push_back(p);
        return p;
    }

    void discard() {
        for (const auto& p : written_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        written_.clear();
    }

private:
    fs::path dir_;
    std::vector<fs::path> written_;
};

std::string yes_no(bool b) { return b ? "true" : "false"; }

struct Outcome {
    bool pass = true;
};

Outcome cmd_laws(const json& P, std::uint64_t seed, OutputSet& files, std::ostream& out) {
    LawSuiteConfig c;
    c.M = P.at("grid");
    c.cases = P.at("cases");
    c.grading = P.at("grading");
    c.a = P.at("a");
    c.T = P.at("T");
    c.threads = static_cast<unsigned>(P.at("threads").get<long long>());
    c.seed = seed;
    const int coarse = P.at("convergence_from");
    if (c.M < 16) throw InputError("grid must be >= 16");
    if (c.cases < 1) throw InputError("cases must be >= 1");
    if (P.at("threads").get<long long>() < 0) throw InputError("threads must be >= 0");
    LogGrid::graded(c.a, c.T, c.M, c.grading);

    const auto reports = run_law_suite(c);
    std::vector<std::vector<std::string>> rows;
    std::map<std::string, std::pair<int, double>> failures;  // law -> (fails, worst)
    const std::size_t per_case = reports.size() / static_cast<std::size_t>(c.cases);
    bool pass = true;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        rows.push_back({std::to_string(i / per_case), r.law_name, format_real(r.discrepancy), format_real(r.tolerance),
                        yes_no(r.pass)});
        auto& f = failures[r.law_name];
        f.first += r.pass ? 0 : 1;
        f.second = std::max(f.second, r.discrepancy);
        pass = pass && r.pass;
    }
    emit_csv({"case", "law", "discrepancy", "tolerance", "pass"}, rows, files.file("laws.csv"));

    out << "law suite: M = " << c.M << ", cases = " << c.cases << ", tol = " << law_tolerance(c.M) << "\n";
    for (const auto& [name, f] : failures)
        out << "  " << name << ": worst " << f.second << ", failed " << f.first << "/" << c.cases << "\n";

    if (coarse > 0) {
        if (coarse < 16 || coarse >= c.M) throw InputError("convergence_from must lie in [16, grid)");
        const auto conv = law_convergence(c, coarse, c.M);
        for (const auto& [name, lc] : conv) {
            const bool ok = lc.order >= 0.9;
            out << "  order " << name << ": " << lc.order << (ok ? "" : "  (below 0.9)") << "\n";
            pass = pass && ok;
        }
    }
    out << (pass ? "all laws pass\n" : "law suite FAILED\n");
    return {pass};
}

Outcome cmd_certificate(const json& P, OutputSet& files, std::ostream& out) {
    const double a1 = P.at("alpha1"), a2 = P.at("alpha2"), b = P.at("beta"), p = P.at("p");
    const int N = P.at("N");
    const Certificate c = certificate(a1, a2, b, p, N);
    out << "p_crit = " << c.p_crit << "\n"
        << "p' = " << c.p_conj << "\n"
        << "e1 = " << c.exponent_e1 << " (with e^-T)\n"
        << "e2 = " << c.exponent_e2 << "\n"
        << "e3 = " << c.exponent_e3 << "\n"
        << "decays = " << yes_no(c.decays) << " (" << to_string(c.verdict) << ")\n";
    json hyps = json::array();
    for (const auto& h : c.hypotheses) {
        out << "  [" << (h.holds ? "ok" : "FAIL") << "] " << h.name << "  (" << h.detail << ")\n";
        hyps.push_back({{"name", h.name}, {"holds", h.holds}, {"detail", h.detail}});
    }
    json j{{"p_crit", c.p_crit}, {"p_conj", c.p_conj}, {"e1", c.exponent_e1}, {"e1_exp_rate", c.exp_rate_e1},
           {"e2", c.exponent_e2}, {"e3", c.exponent_e3}, {"decays", c.decays}, {"verdict", to_string(c.verdict)},
           {"hypotheses", hyps}};
    const auto path = files.file("certificate.json");
    std::ofstream f(path);
    if (!(f << j.dump(2) << "\n")) throw IoError(path.string() + ": write failed");
    return {c.hypotheses_hold()};
}

Outcome cmd_decay(const json& P, OutputSet& files, std::ostream& out) {
    const double alpha = P.at("alpha"), p = P.at("p"), ell = P.at("ell"), a = P.at("a"), a2 = P.at("alpha2");
    const int M = P.at("M");
    const double gap = P.at("ratio_exponent");
    const auto Ts = P.at("T_list").get<std::vector<double>>();
    if (Ts.size() < 2) throw InputError("T_list needs at least two values");
    if (M < 16) throw InputError("M must be >= 16");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
    for (double T : Ts) TestFnConfig::make(a, T, p, a2, 0.0, ell);
    if (ell < 2.0 * conjugate_exponent(p)) throw InputError("ell must be >= 2p'");

    const auto base = TestFnConfig::make(a, Ts.front(), p, a2, 0.0, ell);
    const auto vals = decay_ladder(base, alpha, Ts, M);
    std::vector<std::vector<std::string>> rows;
    bool pass = true;
    const double bound = std::exp(-gap);
    for (std::size_t i = 0; i < Ts.size(); ++i) {
        std::string ratio;
        if (i > 0) {
            const double r = vals[i] / vals[i - 1];
            ratio = format_real(r);
            pass = pass && vals[i] < vals[i - 1] && r <= bound;
        }
        rows.push_back({format_real(Ts[i]), format_real(vals[i]), ratio});
        out << "T = " << Ts[i] << ": J = " << vals[i] << (i > 0 ? "  ratio " + ratio : "") << "\n";
    }
    emit_csv({"T", "value", "ratio"}, rows, files.file("decay.csv"));
    out << (pass ? "decay check passes" : "decay check FAILED") << " (strictly decreasing, ratios <= e^-" << gap << ")\n";
    return {pass};
}

Outcome cmd_scaling(const json& P, OutputSet& files, std::ostream& out) {
    const double a2 = P.at("alpha2"), p = P.at("p"), mu = P.at("mu"), a = P.at("a"), tol = P.at("slope_tol");
    const int N = P.at("N");
    const auto Ts = P.at("T_list").get<std::vector<double>>();
    if (Ts.size() < 2) throw InputError("T_list needs at least two values");
    if (N != 1 && N != 2) throw InputError("N must be 1 or 2");
    for (double T : Ts)
        if (!(T > 0.0)) throw InputError("T values must be positive");
    if (!(a2 > 0.0 && a2 < 1.0)) throw InputError("alpha2 must lie in (0, 1)");
    if (!(p > 1.0)) throw InputError("p must exceed 1");
    if (!(a > 0.0)) throw InputError("a must be positive");

    TestFnConfig base;
    base.a = a;
    base.p = p;
    base.alpha2 = a2;
    base.mu = mu;
    const auto res = scaling_ladder(base, N, Ts);
    std::vector<double> ys;
    std::vector<std::vector<std::string>> rows;
    bool bounded = true;
    for (std::size_t i = 0; i < Ts.size(); ++i) {
        ys.push_back(res[i].computed);
        bounded = bounded && res[i].integrand_bounded;
        rows.push_back({format_real(Ts[i]), format_real(res[i].computed), format_real(res[i].integrand_max)});
    }
    emit_csv({"T", "computed", "integrand_max"}, rows, files.file("scaling.csv"));
    if (!bounded) {
        out << "mu below 2p/(p-1): integrand unbounded where phi2 -> 0\n";
        return {false};
    }
    const double slope = loglog_slope(Ts, ys);
    const double pred = res.front().predicted_exponent;
    const bool pass = std::abs(slope - pred) <= tol;
    out << "slope = " << slope << ", predicted alpha2 N - 2 alpha2 p' = " << pred << (pass ? "  ok\n" : "  FAILED\n");
    return {pass};
}

void write_norms(const SolveResult& r, const fs::path& path) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& n : r.norms) rows.push_back({format_real(n.t), format_real(n.sup_norm), format_real(n.l2_norm)});
    emit_csv({"t", "sup_norm", "l2_norm"}, rows, path);
}

Outcome cmd_solve(const json& P, OutputSet& files, std::ostream& out) {
    const ProblemSpec spec = spec_from(P);
    SolveOptions opt;
    opt.threshold = P.at("threshold");
    if (!(opt.threshold > 0.0)) throw InputError("threshold must be positive");
    const SolveResult r = solve(spec, opt);
    write_norms(r, files.file("norms.csv"));
    double peak = 0.0;
    for (const auto& n : r.norms) peak = std::max(peak, n.sup_norm);
    out << "steps = " << r.steps << ", max sup-norm = " << peak << "\n";
    if (r.blew_up)
        out << "growth beyond threshold " << opt.threshold << " at t* = " << *r.t_star << " (observational)\n";
    else
        out << "sup-norm stayed below threshold " << opt.threshold << " up to T_end = " << spec.T_end << "\n";
    return {true};
}

Outcome cmd_scan(const json& P, OutputSet& files, std::ostream& out) {
    const auto ps = P.at("p_list").get<std::vector<double>>();
    if (ps.empty()) throw InputError("no scan points");
    ProblemSpec base = spec_from(P);
    SolveOptions opt;
    opt.threshold = P.at("threshold");
    if (!(opt.threshold > 0.0)) throw InputError("threshold must be positive");
    std::vector<ProblemSpec> specs;
    for (double p : ps) {
        ProblemSpec s = base;
        s.p = p;
        s.validate();
        specs.push_back(s);
    }
    std::vector<std::future<SolveResult>> jobs;
    for (const auto& s : specs) jobs.push_back(std::async(std::launch::async, [s, opt] { return solve(s, opt); }));

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const SolveResult r = jobs[i].get();
        const Certificate c = certificate(base.alpha1, base.alpha2, base.beta, ps[i], base.N);
        double peak = 0.0;
        for (const auto& n : r.norms) peak = std::max(peak, n.sup_norm);
        rows.push_back({format_real(ps[i]), format_real(c.p_crit), yes_no(c.decays), yes_no(r.blew_up),
                        r.t_star ? format_real(*r.t_star) : "", format_real(peak), std::to_string(r.steps)});
        out << "p = " << ps[i] << " (p_crit " << c.p_crit << "): "
            << (r.blew_up ? "growth beyond threshold at t* = " + format_real(*r.t_star) : std::string("bounded over horizon"))
            << ", max sup-norm " << peak << "\n";
    }
    emit_csv({"p", "p_crit", "decays", "blew_up", "t_star", "max_norm", "steps"}, rows, files.file("scan.csv"));
    return {true};
}

Outcome cmd_weak(const json& P, OutputSet& files, std::ostream& out) {
    ProblemSpec spec = spec_from(P);
    const int levels = P.at("levels");
    if (levels < 2) throw InputError("levels must be >= 2");
    double testT = P.at("test_T");
    if (testT <= 0.0) testT = spec.T_end;
    const auto cfg = TestFnConfig::make(spec.a, testT, spec.p, spec.alpha2);
    if (4.0 * cfg.radius() > spec.L) throw InputError("support of phi2 does not fit in the box; raise L");
    if (testT > spec.T_end) throw InputError("test_T must not exceed T_end");

    std::vector<std::vector<std::string>> rows;
    std::vector<double> res;
    for (int k = 0; k < levels; ++k) {
        SolveOptions opt;
        opt.keep_trajectory = true;
        opt.threshold = std::numeric_limits<double>::infinity();
        const SolveResult r = solve(spec, opt);
        if (r.steps < spec.M_t) throw InputError("solution left the finite range before T_end");
        const double R = weak_residual(r, cfg, spec);
        res.push_back(std::abs(R));
        rows.push_back({std::to_string(spec.M_t), std::to_string(spec.n), format_real(R)});
        out << "M_t = " << spec.M_t << ", n = " << spec.n << ": residual " << R << "\n";
        spec.M_t *= 2;
        spec.n = 2 * spec.n + 1;
    }
    emit_csv({"M_t", "n", "residual"}, rows, files.file("weak.csv"));
    bool pass = true;
    for (std::size_t i = 1; i < res.size(); ++i) pass = pass && res[i] < res[i - 1];
    out << (pass ? "residual decreases under refinement\n" : "residual does NOT decrease monotonically\n");
    return {pass};
}

}  // namespace

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> command_names() {
    std::vector<std::string> names;
    for (const auto& [k, v] : defaults_table()) names.push_back(k);
    return names;
}

const json& command_defaults(const std::string& command) {
    const auto& t = defaults_table();
    const auto it = t.find(command);
    if (it == t.end()) throw InputError("unknown command '" + command + "'");
    return it->second;
}

json load_config(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw InputError(path.string() + ": cannot open config");
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw InputError(path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw InputError(path.string() + ": config must be a flat JSON object");
    for (const auto& [k, v] : j.items())
        if (v.is_object()) throw InputError(path.string() + ": nested value for '" + k + "'");
    return j;
}

void emit_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows,
              const fs::path& path) {
    std::ofstream f(path, std::ios::binary);
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) f << (i ? "," : "") << cells[i];
        f << "\n";
    };
    if (f) {
        line(header);
        for (const auto& r : rows) {
            if (r.size() != header.size()) {
                f.close();
                std::error_code ec;
                fs::remove(path, ec);
                throw std::invalid_argument("emit_csv: row width does not match header");
            }
            line(r);
        }
        f.flush();
    }
    if (!f) {
        std::error_code ec;
        fs::remove(path, ec);
        throw IoError(path.string() + ": " + std::strerror(errno));
    }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    OutputSet files(config.output_path);
    json params;
    try {
        params = resolve(config);
        Outcome o;
        const auto& c = config.command;
        if (c == "laws") o = cmd_laws(params, config.seed, files, out);
        else if (c == "certificate") o = cmd_certificate(params, files, out);
        else if (c == "testfn-decay") o = cmd_decay(params, files, out);
        else if (c == "scaling") o = cmd_scaling(params, files, out);
        else if (c == "solve") o = cmd_solve(params, files, out);
        else if (c == "scan-p") o = cmd_scan(params, files, out);
        else if (c == "weakcheck") o = cmd_weak(params, files, out);

        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json report{{"command", c}, {"parameters", params}, {"pass", o.pass}, {"wall_time_s", wall}};
        report["parameters"]["seed"] = config.seed;
        const auto path = files.file("report.json");
        std::ofstream f(path);
        if (!(f << report.dump(2) << "\n")) throw IoError(path.string() + ": " + std::strerror(errno));
        return o.pass ? kExitOk : kExitFailedCheck;
    } catch (const InputError& e) {
        files.discard();
        err << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const DomainError& e) {
        files.discard();
        err << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const IoError& e) {
        files.discard();
        err << "I/O error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const json::exception& e) {
        files.discard();
        err << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }
}

}  // namespace hhfrac
