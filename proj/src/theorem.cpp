#include "hhfrac/theorem.hpp"

#include "hhfrac/spaces.hpp"

#include <sstream>

namespace hhfrac {

double critical_p(double alpha2, int N) {
    if (!(alpha2 > 0.0 && alpha2 < 1.0)) throw DomainError("critical_p: alpha2 must lie in (0, 1)");
    if (N < 1) throw DomainError("critical_p: N must be >= 1");
    const double top = alpha2 * N + 1.0;
    const double den = top - 2.0 * alpha2;
    if (!(den > 0.0)) throw DomainError("critical_p: nonpositive denominator");
    return top / den;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Decays: return "decays";
        case Verdict::NoDecay: return "no decay";
        case Verdict::Inconclusive: return "critical: inconclusive";
    }
    return "?";
}

bool Certificate::hypotheses_hold() const {
    for (const auto& h : hypotheses)
        if (!h.holds) return false;
    return true;
}

bool singularity_condition(double alpha1, double alpha2, double beta) {
    return (1.0 - beta) * (1.0 - alpha1) < (1.0 - beta) * (1.0 - alpha2);
}

namespace {

std::string fmt(std::initializer_list<std::pair<const char*, double>> kv) {
    std::ostringstream os;
    os.precision(6);
    bool first = true;
    for (const auto& [k, v] : kv) {
        os << (first ? "" : ", ") << k << " = " << v;
        first = false;
    }
    return os.str();
}

}  // namespace

Certificate certificate(double alpha1, double alpha2, double beta, double p, int N) {
    if (!(p > 1.0)) throw DomainError("certificate: p must exceed 1");
    Certificate c;
    c.p = p;
    c.p_conj = p / (p - 1.0);
    c.p_crit = critical_p(alpha2, N);
    c.exponent_e1 = alpha2 * N;
    c.exponent_e2 = c.exponent_e1 - 2.0 * alpha2 * c.p_conj;
    c.exponent_e3 = c.exponent_e2 + 1.0;

    if (std::abs(p - c.p_crit) <= kTieBand * std::max(1.0, c.p_crit)) {
        c.verdict = Verdict::Inconclusive;
        c.decays = false;
    } else {
        c.decays = c.exponent_e3 < 0.0;
        c.verdict = c.decays ? Verdict::Decays : Verdict::NoDecay;
    }

    const double gamma = 1.0 - (1.0 - alpha1) * (1.0 - beta);
    const double inner = (1.0 - beta) * (1.0 - alpha1);  // 1 - gamma
    c.hypotheses.push_back({"0 < alpha2 < alpha1 < 1", alpha2 > 0.0 && alpha2 < alpha1 && alpha1 < 1.0,
                            fmt({{"alpha1", alpha1}, {"alpha2", alpha2}})});
    c.hypotheses.push_back({"0 < beta < 1", beta > 0.0 && beta < 1.0, fmt({{"beta", beta}})});
    c.hypotheses.push_back({"0 < gamma < 1", gamma > 0.0 && gamma < 1.0, fmt({{"gamma", gamma}})});
    c.hypotheses.push_back({"1 - gamma < (1 - beta)(1 - alpha2)", singularity_condition(alpha1, alpha2, beta),
                            fmt({{"1 - gamma", inner}, {"(1 - beta)(1 - alpha2)", (1.0 - beta) * (1.0 - alpha2)}})});
    c.hypotheses.push_back({"p'(1 - gamma) < 1", c.p_conj * inner < 1.0, fmt({{"p'(1 - gamma)", c.p_conj * inner}})});
    return c;
}

double weak_residual(const SolveResult& u, const TestFnConfig& cfg, const ProblemSpec& spec) {
    const auto& grid = u.grid;
    const Box& box = u.box;
    if (u.trajectory.rows() != static_cast<Eigen::Index>(grid.size()) ||
        u.trajectory.cols() != static_cast<Eigen::Index>(box.size()))
        throw DomainError("weak_residual: mesh mismatch (trajectory missing or wrong shape)");
    if (box.N != spec.N || box.n != spec.n || box.L != spec.L || grid.M() != spec.M_t)
        throw DomainError("weak_residual: mesh mismatch with problem spec");
    if (u.steps < grid.M()) throw DomainError("weak_residual: trajectory stops before the last node");
    if (cfg.T > grid.T() * (1.0 + 1e-12)) throw DomainError("weak_residual: test function support exceeds the time horizon");
    if (4.0 * cfg.radius() > box.L) throw DomainError("weak_residual: support of phi2 leaves the box");

    const std::size_t nt = grid.size();
    const auto p1 = spec.params1(), p2 = spec.params2();
    std::vector<double> w1(nt, 0.0);
    for (std::size_t j = 1; j < nt; ++j) w1[j] = phi1(grid.t(j), cfg);

    std::vector<std::vector<double>> g;
    if (spec.forcing && spec.forcing->pointwise) {
        g.assign(nt, std::vector<double>(box.size(), 0.0));
        for (std::size_t j = 1; j < nt; ++j) spec.forcing->pointwise(grid.t(j), box, g[j]);
    }

    double total = 0.0;
    std::vector<double> a(nt), b(nt);
    for (std::size_t i = 0; i < box.size(); ++i) {
        auto x = box.point(i);
        for (auto& xi : x) xi -= 0.5 * box.L;
        const double f2 = phi2(x, cfg);
        const double lap = laplacian_phi2(x, cfg);
        if (f2 == 0.0 && lap == 0.0) continue;

        GridFn ui(grid);
        for (std::size_t j = 1; j < nt; ++j) ui[j] = u.trajectory(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
        const GridFn d1 = hilfer_hadamard(ui, p1);
        const GridFn d2 = hilfer_hadamard(ui, p2);
        a[0] = b[0] = 0.0;
        for (std::size_t j = 1; j < nt; ++j) {
            double src = std::pow(std::abs(ui[j]), spec.p);
            if (!g.empty()) src += g[j][i];
            a[j] = w1[j] * (d1[j] - src);
            b[j] = w1[j] * (d2[j] + ui[j]);
        }
        total += box.cell_volume() * (f2 * integrate_s(grid, a) - lap * integrate_s(grid, b));
    }
    return total;
}

}  // namespace hhfrac
