#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hhfrac {

/// Raised when an argument falls outside the domain an operation accepts.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/**
 * Graded mesh on (a, T] carried in log-time s = log(t/a).
 *
 * Nodes are s_j = (j/M)^r * log(T/a), j = 0..M.  r = 1 is uniform in s;
 * r > 1 clusters nodes at t = a.  Copies share the node array.
 */
class LogGrid {
public:
    static LogGrid graded(double a, double T, int M, double r);

    /// Same as graded() but with the log-span log(T/a) given directly.  Used
    /// where T/a is too close to 1 to be formed in floating point.
    static LogGrid with_span(double a, double span, int M, double r);

    double a() const { return a_; }
    double T() const { return a_ * std::exp(span_); }
    double span() const { return span_; }
    int M() const { return M_; }
    double grading() const { return r_; }
    bool uniform() const { return r_ == 1.0; }

    std::size_t size() const { return nodes_->size(); }
    std::span<const double> nodes() const { return *nodes_; }
    double s(std::size_t j) const { return (*nodes_)[j]; }
    double t(std::size_t j) const { return a_ * std::exp((*nodes_)[j]); }
    double step(std::size_t j) const { return (*nodes_)[j] - (*nodes_)[j - 1]; }
    double max_step() const;

    bool same_as(const LogGrid& other) const;

private:
    LogGrid(double a, double span, int M, double r);

    double a_;
    double span_;
    int M_;
    double r_;
    std::shared_ptr<const std::vector<double>> nodes_;
};

LogGrid make_graded_grid(double a, double T, int M, double r = 2.0);

/// Real function sampled at the nodes of a LogGrid.
struct GridFn {
    LogGrid grid;
    std::vector<double> values;

    GridFn(LogGrid g, std::vector<double> v);
    explicit GridFn(LogGrid g) : GridFn(g, std::vector<double>(g.size(), 0.0)) {}

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t j) const { return values[j]; }
    double& operator[](std::size_t j) { return values[j]; }
};

/// Samples f(s) at every node.  Node 0 is included; callers with data
/// singular at t = a pass a value there that operators never read.
GridFn sample_s(const LogGrid& grid, const std::function<double(double)>& f);
GridFn sample_t(const LogGrid& grid, const std::function<double(double)>& f);

void require_same_grid(const GridFn& f, const GridFn& g);

/// Integral over (a, T] against dt/t, i.e. ds.  Trapezoid rule, except the
/// cell at t = a which carries its right-hand value, so node 0 is never read.
double integrate_s(const LogGrid& grid, std::span<const double> values);

/// t df/dt by three-point differences against the t-node positions.  An
/// independent route to delta_op for smooth data.
GridFn delta_via_t(const GridFn& f);

double gamma_fn(double x);

enum class Endpoint { Keep, ExcludeLeft, ExcludeRight };

/**
 * delta = t d/dt, computed as d/ds on the node set.  Interior nodes use the
 * three-point nonuniform centered formula (exact for quadratics in s),
 * endpoints use three-point one-sided formulas.
 *
 * ExcludeLeft treats node 0 as a singular endpoint: its value is never read,
 * node 1 gets a forward one-sided stencil and the result at node 0 is NaN.
 * ExcludeRight mirrors this at node M.
 */
GridFn delta_op(const GridFn& f, Endpoint policy = Endpoint::Keep);

/// Quintic smoothstep 6x^5 - 15x^4 + 10x^3, clamped to [0, 1].
double smoothstep5(double x);
double smoothstep5_d1(double x);
double smoothstep5_d2(double x);

/// The cutoff Phi: 1 on [0, 1], 0 on [2, inf), C^2 and decreasing between.
double smooth_cutoff(double sigma);
double smooth_cutoff_d1(double sigma);
double smooth_cutoff_d2(double sigma);

}  // namespace hhfrac
