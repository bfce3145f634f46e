#pragma once

#include "hhfrac/hadamard.hpp"

#include <span>
#include <vector>

namespace hhfrac {

/**
 * Parameters of the test pair phi1(t) phi2(x).
 *
 * phi1 is 1 on [a, theta T], 0 on [T, inf) and S(rho)^ell in between, with
 * rho = (T - t)/(T - theta T) and S the quintic smoothstep.  phi2 is
 * Phi(|x| / T^alpha2)^mu.
 */
struct TestFnConfig {
    double a = 1.0;
    double T = 10.0;
    double theta = 0.0;  // 1 - e^-T
    double mu = 4.0;
    double ell = 4.0;
    double alpha2 = 0.5;
    double p = 2.0;
    bool flat_phi1 = false;  // phi1 == 1 on [a, T]: no transition
    bool flat_phi2 = false;  // phi2 == 1 everywhere

    /// mu <= 0 selects 2p/(p-1); ell <= 0 selects ceil(2p').
    static TestFnConfig make(double a, double T, double p, double alpha2, double mu = 0.0, double ell = 0.0);

    double theta_T() const { return T - T * std::exp(-T); }
    double transition_width() const { return T * std::exp(-T); }
    double radius() const { return std::pow(T, alpha2); }
};

double phi1(double t, const TestFnConfig& cfg);
/// t phi1'(t) in closed form.
double delta_phi1(double t, const TestFnConfig& cfg);

double phi2_radial(double r, const TestFnConfig& cfg);
double phi2(std::span<const double> x, const TestFnConfig& cfg);
/// Laplacian of phi2 in R^N, N = x.size().
double laplacian_phi2(std::span<const double> x, const TestFnConfig& cfg);

/// -I^{beta(1-alpha_i)}_{T-} delta phi1 on `grid`, whose last node must be T.
/// This is the right derivative of order 1 - beta(1 - alpha_i) of phi1, which
/// vanishes at T.
GridFn right_frac_of_phi1(const TestFnConfig& cfg, double alpha_i, double beta, const LogGrid& grid);

/**
 * integral over (theta T, T) of |I^{1-alpha_i}_{T-}(|delta phi1| / phi1^(1/p))|^p' dt/t.
 *
 * Computed in u = log(T/t), which stays resolvable when T - theta T is
 * below the spacing of doubles near T.  0/0 is taken as 0 at t = T.
 */
double decay_functional(const TestFnConfig& cfg, double alpha_i, int M = 4096);

struct ScalingResult {
    double computed = 0.0;
    double predicted_exponent = 0.0;  // alpha2 N - 2 alpha2 p'
    double integrand_max = 0.0;
    bool integrand_bounded = true;    // false when mu(p-1) - 2p < 0
};

/// integral over T^alpha2 <= |x| <= 2T^alpha2 of phi2^(-p'/p) |Laplacian phi2|^p' dx, N in {1, 2}.
ScalingResult laplacian_scaling(const TestFnConfig& cfg, int N);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// decay_functional over a ladder of T, evaluated concurrently.
std::vector<double> decay_ladder(const TestFnConfig& base, double alpha_i, std::span<const double> Ts, int M = 4096);
/// laplacian_scaling over a ladder of T, evaluated concurrently.
std::vector<ScalingResult> scaling_ladder(const TestFnConfig& base, int N, std::span<const double> Ts);

}  // namespace hhfrac
