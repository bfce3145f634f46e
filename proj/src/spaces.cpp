#include "hhfrac/spaces.hpp"

#include <limits>

namespace hhfrac {

double conjugate_exponent(double p) {
    if (!(p > 1.0)) throw DomainError("conjugate exponent needs p > 1");
    return p / (p - 1.0);
}

NormReport c_gamma_log_norm(const GridFn& f, double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw DomainError("c_gamma_log_norm: gamma must lie in [0, 1)");
    NormReport r;
    r.attained_at = 1;
    for (std::size_t j = 1; j < f.size(); ++j) {
        const double w = std::abs(std::pow(f.grid.s(j), gamma) * f[j]);
        if (!std::isfinite(w)) {
            r.finite = false;
            r.norm_value = std::numeric_limits<double>::infinity();
            r.attained_at = j;
            return r;
        }
        if (w > r.norm_value) {
            r.norm_value = w;
            r.attained_at = j;
        }
    }
    return r;
}

namespace {

NormReport weighted_lp(const GridFn& f, double p, double c) {
    if (!(p >= 1.0)) throw DomainError("norm exponent p must be >= 1");
    const auto& g = f.grid;
    std::vector<double> integrand(f.size(), 0.0);
    NormReport r;
    double peak = -1.0;
    for (std::size_t j = 1; j < f.size(); ++j) {
        const double w = std::abs(std::pow(g.a(), c) * std::exp(c * g.s(j)) * f[j]);
        integrand[j] = std::pow(w, p);
        if (w > peak) {
            peak = w;
            r.attained_at = j;
        }
    }
    r.norm_value = std::pow(integrate_s(g, integrand), 1.0 / p);
    r.finite = std::isfinite(r.norm_value);
    return r;
}

}  // namespace

NormReport xpc_norm(const GridFn& f, double p, double c) { return weighted_lp(f, p, c); }

NormReport lp_norm(const GridFn& f, double p) {
    if (!(p >= 1.0)) throw DomainError("norm exponent p must be >= 1");
    const auto& g = f.grid;
    std::vector<double> integrand(f.size(), 0.0);
    NormReport r;
    double peak = -1.0;
    for (std::size_t j = 1; j < f.size(); ++j) {
        integrand[j] = std::pow(std::abs(f[j]), p) * g.t(j);
        if (std::abs(f[j]) > peak) {
            peak = std::abs(f[j]);
            r.attained_at = j;
        }
    }
    r.norm_value = std::pow(integrate_s(g, integrand), 1.0 / p);
    r.finite = std::isfinite(r.norm_value);
    return r;
}

MembershipReport dgamma_membership(const GridFn& u, const FracParams& params, double p, double rel_tol) {
    const double pc = conjugate_exponent(p);
    const double gamma = params.gamma;
    if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("dgamma_membership: gamma must lie in (0, 1)");

    const GridFn d = dL(u, gamma);
    const auto& g = u.grid;
    std::vector<double> integrand(u.size(), 0.0);
    for (std::size_t j = 1; j < u.size(); ++j)
        integrand[j] = std::pow(std::abs(std::pow(g.t(j), -1.0 / p) * d[j]), pc);

    MembershipReport r;
    r.integral = integrate_s(g, integrand);
    r.sup_weighted = c_gamma_log_norm(d, 1.0 - gamma).norm_value;
    r.exponent = pc * (1.0 - gamma);
    if (r.exponent >= 1.0) {
        r.bound_infinite = true;
        r.bound = std::numeric_limits<double>::infinity();
    } else {
        r.bound = std::pow(r.sup_weighted, pc) * std::pow(g.a(), 1.0 - pc) * std::pow(pc - 1.0, r.exponent - 1.0) *
                  std::tgamma(1.0 - r.exponent);
    }
    r.holds = r.integral <= r.bound * (1.0 + rel_tol);
    return r;
}

}  // namespace hhfrac
