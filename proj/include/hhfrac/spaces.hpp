#pragma once

#include "hhfrac/hadamard.hpp"

#include <cstddef>

namespace hhfrac {

struct NormReport {
    double norm_value = 0.0;
    std::size_t attained_at = 0;  // node of the largest weighted value
    bool finite = true;
};

/// sup_{j >= 1} |s_j^gamma f_j|, the C_{gamma,log} norm on the node set.
NormReport c_gamma_log_norm(const GridFn& f, double gamma);

/// (integral of |t^c f|^p dt/t)^(1/p), with t^c = a^c e^(cs) and dt/t = ds.
NormReport xpc_norm(const GridFn& f, double p, double c);

/// Plain L^p(a, T) norm against dt, written as dt = t ds on the same rule.
NormReport lp_norm(const GridFn& f, double p);

struct MembershipReport {
    double integral = 0.0;    // integral of |t^(-1/p) D^gamma u|^p' dt/t over (a, T)
    double bound = 0.0;       // M^p' a^(1-p') (p'-1)^(p'(1-gamma)-1) Gamma(1 - p'(1-gamma))
    double sup_weighted = 0.0;  // M = C_{1-gamma,log} norm of D^gamma u
    double exponent = 0.0;    // p'(1-gamma); the bound is infinite once this reaches 1
    bool bound_infinite = false;
    bool holds = false;
};

/// Evaluates both sides of the X^{p'}_{-1/p} membership estimate for the
/// Hadamard derivative of order gamma (params.gamma) of u.
MembershipReport dgamma_membership(const GridFn& u, const FracParams& params, double p, double rel_tol = 1e-6);

/// p / (p - 1).
double conjugate_exponent(double p);

}  // namespace hhfrac
