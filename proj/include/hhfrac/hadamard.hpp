#pragma once

#include "hhfrac/logtime.hpp"

namespace hhfrac {

/// Order/type pair of a Hilfer-Hadamard derivative with gamma = alpha + beta - alpha*beta.
struct FracParams {
    double alpha = 0.5;
    double beta = 0.5;
    double gamma = 0.75;

    /// Validates 0 < alpha < 1 and 0 <= beta <= 1.
    static FracParams make(double alpha, double beta);

    /// beta(1 - alpha) == gamma - alpha: order of the outer integral.
    double outer_order() const { return gamma - alpha; }
    /// (1 - beta)(1 - alpha) == 1 - gamma: order of the inner integral.
    double inner_order() const { return 1.0 - gamma; }
};

// All operators work in s = log(t/a), where the Hadamard kernels become
// Riemann-Liouville convolutions with kernel s^(alpha-1)/Gamma(alpha).
//
// Quadrature is product integration: the data is interpolated linearly on
// each cell and integrated exactly against the kernel.  The cell touching the
// singular endpoint (t = a for left operators, t = b for right ones) carries
// its interior nodal value as a constant, so data singular there may hold any
// finite placeholder at that node.

/// Left Hadamard integral I^alpha_{a+}.  Node 0 maps to 0.
GridFn iL(const GridFn& f, double alpha);

/// Right Hadamard integral I^alpha_{b-} with b the last grid node.  Node M maps to 0.
GridFn iR(const GridFn& f, double alpha);

/// Left Hadamard derivative delta(I^(1-alpha) f), 0 < alpha < 1.  NaN at node 0.
GridFn dL(const GridFn& f, double alpha);

/// Right Hadamard derivative -delta(I^(1-alpha)_{b-} f), 0 < alpha < 1.  NaN at node M.
GridFn dR(const GridFn& f, double alpha);

/// Hilfer-Hadamard derivative computed as I^(gamma-alpha) delta I^(1-gamma).
/// beta = 0 dispatches to dL.  NaN at node 0.
GridFn hilfer_hadamard(const GridFn& f, const FracParams& params);

/// Same operator with the exponents formed as beta(1-alpha) and
/// (1-beta)(1-alpha); kept as an independent cross-check of the reduction.
GridFn hilfer_hadamard_direct(const GridFn& f, const FracParams& params);

/// Fraction of the log-span next to a singular endpoint that is left out of
/// pointwise error metrics.  Centered differences of (log t/a)^(-alpha)
/// profiles lose accuracy there at any resolution on a graded grid.
inline constexpr double kEndpointLayer = 0.05;

enum class Singular { Left, Right, Both, None };

/// Node indices outside the endpoint layer(s) named by `side`.
std::vector<std::size_t> assessment_nodes(const LogGrid& grid, Singular side, double layer = kEndpointLayer);

namespace detail {

/// far^alpha - near^alpha for far > near >= 0, without cancellation when
/// the two are close.
double power_increment(double far, double near, double alpha);

struct CellWeights {
    double far;   // weight of the nodal value farther from the evaluation point
    double near;  // weight of the nearer one
};

/// Exact moments of u^(nu-1)/Gamma(nu) against the linear interpolant on one
/// cell u in [near, far], split between its two nodal values.  Both are
/// nonnegative and they sum to (far^nu - near^nu)/Gamma(nu+1).
CellWeights cell_weights(double far, double near, double nu);

/// Raw left/right integrals over spans; alpha == 0 is the identity.
void left_integral(std::span<const double> s, std::span<const double> f, double alpha, std::span<double> out);
void right_integral(std::span<const double> s, std::span<const double> f, double alpha, std::span<double> out);

}  // namespace detail

}  // namespace hhfrac
