#pragma once

#include "hhfrac/solver.hpp"
#include "hhfrac/testfn.hpp"

#include <string>
#include <vector>

namespace hhfrac {

/// (alpha2 N + 1) / (alpha2 N + 1 - 2 alpha2).
double critical_p(double alpha2, int N);

struct Hypothesis {
    std::string name;
    bool holds = false;
    std::string detail;
};

enum class Verdict { Decays, NoDecay, Inconclusive };

const char* to_string(Verdict v);

/**
 * T-powers of the final estimate
 *   C e^-T T^e1 + C T^e2 + C T^e3,  e1 = alpha2 N, e2 = e1 - 2 alpha2 p', e3 = e2 + 1.
 * The first term is kept as the pair (exponential rate -1, power e1); it
 * vanishes for every e1.
 */
struct Certificate {
    double p = 0.0;
    double p_conj = 0.0;
    double p_crit = 0.0;
    double exponent_e1 = 0.0;
    double exp_rate_e1 = -1.0;
    double exponent_e2 = 0.0;
    double exponent_e3 = 0.0;
    bool decays = false;
    Verdict verdict = Verdict::NoDecay;
    std::vector<Hypothesis> hypotheses;

    bool hypotheses_hold() const;
};

/// |p - p_crit| below this (relative to max(1, p_crit)) is reported inconclusive.
inline constexpr double kTieBand = 1e-12;

Certificate certificate(double alpha1, double alpha2, double beta, double p, int N);

/// (1-beta)(1-alpha1) < (1-beta)(1-alpha2), i.e. 1 - gamma < (1-beta)(1-alpha2).
bool singularity_condition(double alpha1, double alpha2, double beta);

/**
 * Residual of the weak formulation against phi1(t)/t phi2(x), phi2 centered
 * in the box:
 *   int int phi D^{alpha1,beta} u - int int (Lap phi) D^{alpha2,beta} u
 *     - int int (Lap phi) u - int int (|u|^p + g) phi.
 * Time integrals run in s (dt/t = ds); space uses the interior node sum.
 * Needs a trajectory reaching cfg.T and the support of phi2 inside the box.
 */
double weak_residual(const SolveResult& u, const TestFnConfig& cfg, const ProblemSpec& spec);

}  // namespace hhfrac
