#include "hhfrac/testfn.hpp"

#include "hhfrac/spaces.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <future>
#include <limits>
#include <numbers>

namespace hhfrac {

TestFnConfig TestFnConfig::make(double a, double T, double p, double alpha2, double mu, double ell) {
    const double pc = conjugate_exponent(p);
    if (!(a > 0.0)) throw DomainError("TestFnConfig: a must be positive");
    if (!(alpha2 > 0.0 && alpha2 < 1.0)) throw DomainError("TestFnConfig: alpha2 must lie in (0, 1)");
    TestFnConfig c;
    c.a = a;
    c.T = T;
    c.p = p;
    c.alpha2 = alpha2;
    c.theta = -std::expm1(-T);
    c.mu = mu > 0.0 ? mu : 2.0 * p / (p - 1.0);
    c.ell = ell > 0.0 ? ell : std::ceil(2.0 * pc - 1e-12);
    if (!(c.theta_T() > a)) throw DomainError("TestFnConfig: need theta T > a");
    if (c.mu < 2.0 * p / (p - 1.0) * (1.0 - 1e-12)) throw DomainError("TestFnConfig: mu must be >= 2p/(p-1)");
    return c;
}

namespace {

// rho in [0, 1] on the transition zone, from t.
double rho_of(double t, const TestFnConfig& cfg) {
    return std::clamp((cfg.T - t) / cfg.transition_width(), 0.0, 1.0);
}

}  // namespace

double phi1(double t, const TestFnConfig& cfg) {
    if (t < cfg.a) throw DomainError("phi1: t must be >= a");
    if (cfg.flat_phi1) return 1.0;
    if (t >= cfg.T) return 0.0;
    if (t <= cfg.theta_T()) return 1.0;
    return std::pow(smoothstep5(rho_of(t, cfg)), cfg.ell);
}

double delta_phi1(double t, const TestFnConfig& cfg) {
    if (t < cfg.a) throw DomainError("delta_phi1: t must be >= a");
    if (cfg.flat_phi1 || t >= cfg.T || t <= cfg.theta_T()) return 0.0;
    const double rho = rho_of(t, cfg);
    return -t / cfg.transition_width() * cfg.ell * std::pow(smoothstep5(rho), cfg.ell - 1.0) * smoothstep5_d1(rho);
}

double phi2_radial(double r, const TestFnConfig& cfg) {
    if (cfg.flat_phi2) return 1.0;
    return std::pow(smooth_cutoff(r / cfg.radius()), cfg.mu);
}

double phi2(std::span<const double> x, const TestFnConfig& cfg) {
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    return phi2_radial(std::sqrt(r2), cfg);
}

double laplacian_phi2(std::span<const double> x, const TestFnConfig& cfg) {
    if (cfg.flat_phi2) return 0.0;
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    const double R = cfg.radius();
    const double sigma = std::sqrt(r2) / R;
    if (sigma <= 1.0 || sigma >= 2.0) return 0.0;
    const double f = smooth_cutoff(sigma), f1 = smooth_cutoff_d1(sigma), f2 = smooth_cutoff_d2(sigma);
    const double mu = cfg.mu;
    const double N = static_cast<double>(x.size());
    const double radial = mu * std::pow(f, mu - 2.0) * (f * f2 + (mu - 1.0) * f1 * f1 + (N - 1.0) * f * f1 / sigma);
    return radial / (R * R);
}

GridFn right_frac_of_phi1(const TestFnConfig& cfg, double alpha_i, double beta, const LogGrid& grid) {
    if (!(alpha_i > 0.0 && alpha_i < 1.0)) throw DomainError("right_frac_of_phi1: alpha_i must lie in (0, 1)");
    if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("right_frac_of_phi1: beta must lie in [0, 1]");
    if (std::abs(grid.T() - cfg.T) > 1e-12 * cfg.T) throw DomainError("right_frac_of_phi1: grid must end at T");
    const GridFn d = delta_op(sample_t(grid, [&](double t) { return phi1(t, cfg); }));
    const double order = beta * (1.0 - alpha_i);
    GridFn out(grid);
    detail::right_integral(grid.nodes(), d.values, order, out.values);
    for (auto& v : out.values) v = -v;
    return out;
}

double decay_functional(const TestFnConfig& cfg, double alpha_i, int M) {
    if (!(alpha_i > 0.0 && alpha_i < 1.0)) throw DomainError("decay_functional: alpha_i must lie in (0, 1)");
    const double pc = conjugate_exponent(cfg.p);
    if (cfg.ell < 2.0 * pc * (1.0 - 1e-12))
        throw DomainError("decay_functional: ell below 2p' lets |delta phi1| / phi1^(1/p) overflow at T");
    if (cfg.flat_phi1) return 0.0;

    // u = log(T/t) runs over [0, U]; s = U - u is log(t / theta T).
    const double U = -std::log1p(-std::exp(-cfg.T));
    const LogGrid grid = LogGrid::with_span(cfg.theta_T(), U, M, 1.0);
    const double eT = std::exp(cfg.T);
    const double power = cfg.ell - 1.0 - cfg.ell / cfg.p;
    std::vector<double> q(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double u = U - grid.s(j);
        const double rho = std::min(1.0, -std::expm1(-u) * eT);
        const double S = smoothstep5(rho);
        q[j] = S > 0.0 ? cfg.ell * std::pow(S, power) * smoothstep5_d1(rho) * eT * std::exp(-u) : 0.0;
        if (!std::isfinite(q[j])) throw DomainError("decay_functional: quotient overflow");
    }
    std::vector<double> inner(grid.size());
    detail::right_integral(grid.nodes(), q, 1.0 - alpha_i, inner);
    for (auto& v : inner) v = std::pow(std::abs(v), pc);
    return integrate_s(grid, inner);
}

ScalingResult laplacian_scaling(const TestFnConfig& cfg, int N) {
    if (N != 1 && N != 2) throw DomainError("laplacian_scaling: N must be 1 or 2");
    const double pc = conjugate_exponent(cfg.p);
    ScalingResult r;
    r.predicted_exponent = cfg.alpha2 * N - 2.0 * cfg.alpha2 * pc;
    if (cfg.flat_phi2) return r;

    const double mu = cfg.mu;
    const double expo = (mu * (cfg.p - 1.0) - 2.0 * cfg.p) / (cfg.p - 1.0);
    if (expo < -1e-12) {
        r.integrand_bounded = false;
        r.computed = r.integrand_max = std::numeric_limits<double>::infinity();
        return r;
    }
    // phi2^(-p'/p) |Laplacian phi2|^p' with the powers of Phi collected and
    // the radius scaled out: |x| = R sigma.
    auto core = [&](double sigma) {
        const double f = smooth_cutoff(sigma), f1 = smooth_cutoff_d1(sigma), f2 = smooth_cutoff_d2(sigma);
        const double bracket = f * f2 + (mu - 1.0) * f1 * f1 + (N - 1.0) * f * f1 / sigma;
        const double fpow = expo > 0.0 ? std::pow(f, std::max(expo, 0.0)) : 1.0;
        return std::pow(mu, pc) * fpow * std::pow(std::abs(bracket), pc) * std::pow(sigma, N - 1.0);
    };
    for (int k = 0; k <= 2000; ++k) r.integrand_max = std::max(r.integrand_max, core(1.0 + k / 2000.0));

    const double I = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(core, 1.0, 2.0, 15, 1e-13);
    const double surface = N == 1 ? 2.0 : 2.0 * std::numbers::pi;
    const double R = cfg.radius();
    r.computed = surface * std::pow(R, N - 2.0 * pc) * I;
    return r;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("loglog_slope: need two or more matching points");
    double mx = 0.0, my = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]) / n;
        my += std::log(y[i]) / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

std::vector<double> decay_ladder(const TestFnConfig& base, double alpha_i, std::span<const double> Ts, int M) {
    std::vector<std::future<double>> jobs;
    for (double T : Ts) {
        TestFnConfig c = TestFnConfig::make(base.a, T, base.p, base.alpha2, base.mu, base.ell);
        c.flat_phi1 = base.flat_phi1;
        jobs.push_back(std::async(std::launch::async, [c, alpha_i, M] { return decay_functional(c, alpha_i, M); }));
    }
    std::vector<double> out;
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

std::vector<ScalingResult> scaling_ladder(const TestFnConfig& base, int N, std::span<const double> Ts) {
    std::vector<std::future<ScalingResult>> jobs;
    for (double T : Ts) {
        TestFnConfig c = base;
        c.T = T;
        c.theta = -std::expm1(-T);
        jobs.push_back(std::async(std::launch::async, [c, N] { return laplacian_scaling(c, N); }));
    }
    std::vector<ScalingResult> out;
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

}  // namespace hhfrac
