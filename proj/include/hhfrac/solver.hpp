#pragma once

#include "hhfrac/hadamard.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <optional>
#include <vector>

namespace hhfrac {

/// Interior nodes of the box (0, L)^N, n per dimension, x_i = (i + 1) L / (n + 1).
/// Node (i, k) of the square has flat index i + n k.
struct Box {
    int N = 1;
    int n = 64;
    double L = 1.0;

    double h() const { return L / (n + 1); }
    std::size_t size() const { return N == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n; }
    double coord(int i) const { return (i + 1) * h(); }
    /// Coordinates of flat node `idx`, N entries.
    std::vector<double> point(std::size_t idx) const;
    double cell_volume() const { return N == 1 ? h() : h() * h(); }
};

/// Five-point (three-point in 1D) Laplacian with homogeneous Dirichlet data
/// eliminated.  Symmetric negative definite.
Eigen::SparseMatrix<double> discrete_laplacian(int n, double L, int N);

struct InitialData {
    enum class Kind { Zero, Bump };
    Kind kind = Kind::Zero;
    double amplitude = 0.0;
    double center = 0.5;  // fraction of L, same in every dimension
    double width = 0.25;  // support radius as a fraction of L

    /// amplitude cos^2(pi r / 2w) for r = |x - c| < w, else 0.
    double operator()(std::span<const double> x, double L) const;
};

/// Extra source g(t, x) added to |u|^p.  `integrated` returns the left
/// Hadamard integral of order alpha1 of g at t, which is what the scheme
/// consumes; when absent it is formed by product integration of `pointwise`.
struct Forcing {
    std::function<void(double t, const Box&, std::span<double>)> pointwise;
    std::function<void(double t, const Box&, std::span<double>)> integrated;
};

struct ProblemSpec {
    double alpha1 = 0.8;
    double alpha2 = 0.5;
    double beta = 0.5;
    double p = 2.0;
    int N = 1;
    double L = 1.0;
    int n = 64;
    double a = 1.0;
    double T_end = 10.0;
    int M_t = 400;
    double grading = 2.0;
    InitialData u0;
    bool source_on = true;
    std::optional<Forcing> forcing;

    Box box() const { return Box{N, n, L}; }
    /// Throws DomainError on any violated range.
    void validate() const;
    FracParams params1() const { return FracParams::make(alpha1, beta); }
    FracParams params2() const { return FracParams::make(alpha2, beta); }
};

struct NormSample {
    double t;
    double sup_norm;
    double l2_norm;
};

struct SolveResult {
    LogGrid grid;
    Box box;
    std::vector<NormSample> norms;  // nodes j >= 1 that were reached
    bool blew_up = false;
    std::optional<double> t_star;
    std::vector<double> final_state;
    // Row j holds u at time node j; row 0 is unused (u is singular there).
    // Filled only when requested.
    Eigen::MatrixXd trajectory;
    int steps = 0;
};

struct SolveOptions {
    double threshold = 1e3;
    bool keep_trajectory = false;
};

/**
 * Advances the semidiscrete problem in s = log(t/a).  With A = -Laplacian,
 * applying the order-alpha1 integral to the equation and using the weighted
 * initial condition (I^{1-gamma1} u)(a) = u0 and (I^{1-gamma2} u)(a) = 0 gives
 *
 *   u + A I^{alpha1-alpha2} u + A I^{alpha1} u = u0 s^{gamma1-1}/Gamma(gamma1) + I^{alpha1}(|u|^p + g).
 *
 * The singular term is split off exactly and the remainder is discretized by
 * product integration; each step solves (I + c A) w_j = rhs with c the sum of
 * the current-node weights.
 */
SolveResult solve(const ProblemSpec& spec, const SolveOptions& opt = {});

/// Flags the first recorded node whose sup-norm exceeds `threshold` or is
/// not finite, and sets t_star there.  Clears the flag otherwise.
void detect_blowup(SolveResult& result, double threshold);

struct Manufactured {
    std::function<double(double t, double x)> exact;
    Forcing forcing;
};

/// u*(t, x) = (eps + s^gamma1) sin(pi x / L) for N = 1 and its forcing.
Manufactured manufactured(const ProblemSpec& spec, double eps = 0.5, double amplitude = 1.0);

/// Max over recorded nodes j >= 1 and all interior x of |u - u*|.  Needs a
/// trajectory.
double max_error(const SolveResult& r, const std::function<double(double, double)>& exact);

}  // namespace hhfrac
