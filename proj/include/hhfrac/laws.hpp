#pragma once

#include "hhfrac/hadamard.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hhfrac {

struct LawReport {
    std::string law_name;
    double discrepancy = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    // Law-specific side quantity: max |I^alpha f| on the first 10% of nodes
    // for the regularization check, NaN elsewhere.
    double observed = std::nan("");
};

/// Resolution-indexed tolerance c M^(-0.9), c fixed so that tol(2048) = 5e-4.
double law_tolerance(int M);

/// |integral phi I^alpha_{a+} psi ds - integral (I^alpha_{b-} phi) psi ds|.
LawReport check_parts(const GridFn& phi, const GridFn& psi, double alpha, double p);

/// max of |I^alpha I^beta f - I^(alpha+beta) f| outside the endpoint layer at t = a.
LawReport check_semigroup(const GridFn& f, double alpha, double beta);

enum class Side { Left, Right };

/// Compares dL (dR) with f(a) s^-alpha / Gamma(1-alpha) + I^(1-alpha) (t f')
/// (resp. its mirror at b), where t f' is differenced against the t-nodes.
/// Max over nodes outside the endpoint layer at the singular end.
LawReport check_repr(const GridFn& f, double alpha, Side side);

/// Boundedness of I^alpha on C_{gamma,log}: |I^alpha f| must sit under
/// ||f||_{C_gamma} I^alpha s^-gamma node by node, and for gamma < alpha the
/// values must fall toward t = a along the dyadic nodes J, J/2, ..., 1 of the
/// first 10% of the grid.
LawReport check_regularization(const GridFn& f, double gamma, double alpha);

struct LawSuiteConfig {
    int M = 2048;
    int cases = 100;
    std::uint64_t seed = 7;
    double a = 1.0;
    double T = 2.718281828459045;
    double grading = 1.0;
    unsigned threads = 0;  // 0: hardware concurrency
};

/// Every randomized case of every law, ordered by (case, law).  Case k draws
/// from its own generator seeded with (seed, k), so results do not depend on
/// M, thread count or scheduling.
std::vector<LawReport> run_law_suite(const LawSuiteConfig& cfg);

struct LawConvergence {
    double coarse = 0.0;  // max discrepancy over cases at the coarse M
    double fine = 0.0;
    double order = 0.0;   // log(coarse/fine) / log(M_fine/M_coarse)
};

/// Per-law worst-case discrepancy at two resolutions.  The regularization
/// check is exact up to rounding and is left out.
std::map<std::string, LawConvergence> law_convergence(LawSuiteConfig cfg, int M_coarse, int M_fine);

}  // namespace hhfrac
