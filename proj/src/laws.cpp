#include "hhfrac/laws.hpp"

#include <algorithm>
#include <future>
#include <numbers>
#include <random>
#include <thread>

namespace hhfrac {

double law_tolerance(int M) {
    if (M < 2) throw DomainError("law_tolerance: M must be >= 2");
    return 5e-4 * std::pow(static_cast<double>(M) / 2048.0, -0.9);
}

namespace {

LawReport make_report(std::string name, double discrepancy, int M) {
    LawReport r;
    r.law_name = std::move(name);
    r.discrepancy = discrepancy;
    r.tolerance = law_tolerance(M);
    r.pass = discrepancy <= r.tolerance;
    return r;
}

}  // namespace

LawReport check_parts(const GridFn& phi, const GridFn& psi, double alpha, double p) {
    require_same_grid(phi, psi);
    if (!(alpha > 0.0)) throw DomainError("check_parts: alpha must be positive");
    if (!(p >= 1.0)) throw DomainError("check_parts: p must be >= 1");
    const auto& g = phi.grid;
    const GridFn left = iL(psi, alpha);
    const GridFn right = iR(phi, alpha);
    std::vector<double> lhs(g.size()), rhs(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        lhs[j] = phi[j] * left[j];
        rhs[j] = right[j] * psi[j];
    }
    return make_report("parts", std::abs(integrate_s(g, lhs) - integrate_s(g, rhs)), g.M());
}

LawReport check_semigroup(const GridFn& f, double alpha, double beta) {
    if (!(alpha > 0.0 && beta > 0.0)) throw DomainError("check_semigroup: orders must be positive");
    if (alpha + beta > 1.5) throw DomainError("check_semigroup: alpha + beta must not exceed 1.5");
    const GridFn twice = iL(iL(f, beta), alpha);
    const GridFn once = iL(f, alpha + beta);
    double d = 0.0;
    for (std::size_t j : assessment_nodes(f.grid, Singular::Left)) d = std::max(d, std::abs(twice[j] - once[j]));
    return make_report("semigroup", d, f.grid.M());
}

LawReport check_repr(const GridFn& f, double alpha, Side side) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("check_repr: alpha must lie in (0, 1)");
    const auto& g = f.grid;
    const GridFn tf = delta_via_t(f);
    const double c = 1.0 / gamma_fn(1.0 - alpha);
    const double L = g.span();
    const std::size_t M = g.size() - 1;

    GridFn direct(g), formula(g);
    if (side == Side::Left) {
        direct = dL(f, alpha);
        const GridFn tail = iL(tf, 1.0 - alpha);
        for (std::size_t j = 1; j <= M; ++j) formula[j] = f[0] * c * std::pow(g.s(j), -alpha) + tail[j];
    } else {
        direct = dR(f, alpha);
        const GridFn tail = iR(tf, 1.0 - alpha);
        for (std::size_t j = 0; j < M; ++j) formula[j] = f[M] * c * std::pow(L - g.s(j), -alpha) - tail[j];
    }
    double d = 0.0;
    for (std::size_t j : assessment_nodes(g, side == Side::Left ? Singular::Left : Singular::Right))
        d = std::max(d, std::abs(direct[j] - formula[j]));
    return make_report(side == Side::Left ? "repr_left" : "repr_right", d, g.M());
}

LawReport check_regularization(const GridFn& f, double gamma, double alpha) {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw DomainError("check_regularization: gamma must lie in [0, 1)");
    if (!(alpha > 0.0)) throw DomainError("check_regularization: alpha must be positive");
    if (gamma > alpha) throw DomainError("check_regularization: needs gamma <= alpha");
    const auto& g = f.grid;
    const std::size_t n = g.size();

    double norm = 0.0;
    for (std::size_t j = 1; j < n; ++j) norm = std::max(norm, std::abs(std::pow(g.s(j), gamma) * f[j]));

    GridFn weight(g);
    for (std::size_t j = 1; j < n; ++j) weight[j] = std::pow(g.s(j), -gamma);
    const GridFn majorant = iL(weight, alpha);
    const GridFn v = iL(f, alpha);

    double scale = 0.0, excess = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
        scale = std::max(scale, norm * majorant[j]);
        excess = std::max(excess, std::abs(v[j]) - norm * majorant[j]);
    }
    double d = scale > 0.0 ? std::max(excess, 0.0) / scale : 0.0;

    const std::size_t J = std::max<std::size_t>(1, (n - 1 + 9) / 10);
    double near = 0.0;
    for (std::size_t j = 1; j <= J; ++j) near = std::max(near, std::abs(v[j]));

    if (gamma < alpha && norm > 0.0) {
        for (std::size_t j = J; j > 1; j /= 2)
            if (!(std::abs(v[j / 2]) < std::abs(v[j]))) d += 1.0;
    }
    auto r = make_report("regularization", d, g.M());
    r.observed = near;
    return r;
}

namespace {

// Band-limited smooth function on [0, L] with coefficients in [-1, 1].
struct SmoothFn {
    double c0 = 0.0;
    double a[3] = {};
    double b[3] = {};
    double L = 1.0;

    double operator()(double s) const {
        double v = c0;
        for (int k = 1; k <= 3; ++k) {
            const double w = k * std::numbers::pi * s / L;
            v += (a[k - 1] * std::cos(w) + b[k - 1] * std::sin(w)) / k;
        }
        return v;
    }
    double bound() const {
        double m = std::abs(c0);
        for (int k = 1; k <= 3; ++k) m += (std::abs(a[k - 1]) + std::abs(b[k - 1])) / k;
        return m;
    }
};

SmoothFn draw_smooth(std::mt19937_64& rng, double L) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SmoothFn f;
    f.L = L;
    f.c0 = u(rng);
    for (int k = 0; k < 3; ++k) {
        f.a[k] = u(rng);
        f.b[k] = u(rng);
    }
    return f;
}

std::vector<LawReport> run_case(const LogGrid& grid, std::uint64_t seed, int k) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double L = grid.span();
    std::vector<LawReport> out;

    {
        const SmoothFn phi = draw_smooth(rng, L), psi = draw_smooth(rng, L);
        const double alpha = 0.1 + 1.4 * u(rng);
        const double p = 1.5 + 2.5 * u(rng);
        out.push_back(check_parts(sample_s(grid, phi), sample_s(grid, psi), alpha, p));
    }
    {
        const SmoothFn f = draw_smooth(rng, L);
        const double alpha = 0.1 + 0.65 * u(rng), beta = 0.1 + 0.65 * u(rng);
        out.push_back(check_semigroup(sample_s(grid, f), alpha, beta));
    }
    {
        // Inner and outer exponents of a Hilfer-Hadamard derivative.
        const SmoothFn f = draw_smooth(rng, L);
        const auto fp = FracParams::make(0.05 + 0.9 * u(rng), 0.05 + 0.9 * u(rng));
        auto r = check_semigroup(sample_s(grid, f), fp.outer_order(), fp.inner_order());
        r.law_name = "semigroup_hilfer";
        out.push_back(r);
    }
    {
        const SmoothFn f = draw_smooth(rng, L);
        const double alpha = 0.1 + 0.8 * u(rng);
        const GridFn sampled = sample_s(grid, f);
        out.push_back(check_repr(sampled, alpha, Side::Left));
        out.push_back(check_repr(sampled, alpha, Side::Right));
    }
    {
        const SmoothFn h = draw_smooth(rng, L);
        const double gamma = 0.8 * u(rng);
        const double alpha = gamma + 0.2 + (1.5 - gamma - 0.2) * u(rng);
        const double hb = h.bound();
        GridFn f = sample_s(grid, [&](double s) { return std::pow(s, -gamma) * (1.0 + 0.25 * (s / L) * h(s) / hb); });
        f[0] = 0.0;
        out.push_back(check_regularization(f, gamma, alpha));
    }
    return out;
}

}  // namespace

std::vector<LawReport> run_law_suite(const LawSuiteConfig& cfg) {
    if (cfg.cases < 1) throw DomainError("law suite: cases must be >= 1");
    const LogGrid grid = LogGrid::graded(cfg.a, cfg.T, cfg.M, cfg.grading);
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = std::min<unsigned>(cfg.threads ? cfg.threads : hw, static_cast<unsigned>(cfg.cases));

    std::vector<std::vector<LawReport>> per_case(static_cast<std::size_t>(cfg.cases));
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (int k = static_cast<int>(w); k < cfg.cases; k += static_cast<int>(workers))
                per_case[static_cast<std::size_t>(k)] = run_case(grid, cfg.seed, k);
        }));
    }
    for (auto& j : jobs) j.get();

    std::vector<LawReport> all;
    for (auto& c : per_case) all.insert(all.end(), c.begin(), c.end());
    return all;
}

std::map<std::string, LawConvergence> law_convergence(LawSuiteConfig cfg, int M_coarse, int M_fine) {
    auto worst = [&](int M) {
        cfg.M = M;
        std::map<std::string, double> w;
        for (const auto& r : run_law_suite(cfg))
            if (r.law_name != "regularization") w[r.law_name] = std::max(w[r.law_name], r.discrepancy);
        return w;
    };
    const auto coarse = worst(M_coarse);
    const auto fine = worst(M_fine);
    std::map<std::string, LawConvergence> out;
    for (const auto& [name, c] : coarse) {
        LawConvergence lc{c, fine.at(name), 0.0};
        lc.order = std::log(lc.coarse / lc.fine) / std::log(static_cast<double>(M_fine) / M_coarse);
        out[name] = lc;
    }
    return out;
}

}  // namespace hhfrac
