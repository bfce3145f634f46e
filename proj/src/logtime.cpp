#include "hhfrac/logtime.hpp"

#include <algorithm>
#include <limits>

namespace hhfrac {

LogGrid::LogGrid(double a, double span, int M, double r) : a_(a), span_(span), M_(M), r_(r) {
    auto nodes = std::make_shared<std::vector<double>>(static_cast<std::size_t>(M) + 1);
    for (int j = 0; j <= M; ++j) {
        const double x = static_cast<double>(j) / M;
        (*nodes)[j] = (r == 1.0 ? x : std::pow(x, r)) * span;
    }
    (*nodes)[M] = span;
    nodes_ = std::move(nodes);
}

LogGrid LogGrid::graded(double a, double T, int M, double r) {
    if (!(a > 0.0)) throw DomainError("LogGrid: left endpoint a must be positive");
    if (!(T > a)) throw DomainError("LogGrid: right endpoint T must exceed a");
    return with_span(a, std::log(T / a), M, r);
}

LogGrid LogGrid::with_span(double a, double span, int M, double r) {
    if (!(a > 0.0)) throw DomainError("LogGrid: left endpoint a must be positive");
    if (!(span > 0.0) || !std::isfinite(span)) throw DomainError("LogGrid: log-span must be positive");
    if (M < 2) throw DomainError("LogGrid: need M >= 2");
    if (!(r >= 1.0)) throw DomainError("LogGrid: grading exponent must be >= 1");
    return LogGrid(a, span, M, r);
}

double LogGrid::max_step() const {
    double h = 0.0;
    for (std::size_t j = 1; j < size(); ++j) h = std::max(h, step(j));
    return h;
}

bool LogGrid::same_as(const LogGrid& other) const {
    return nodes_ == other.nodes_ ||
           (a_ == other.a_ && span_ == other.span_ && M_ == other.M_ && r_ == other.r_);
}

LogGrid make_graded_grid(double a, double T, int M, double r) { return LogGrid::graded(a, T, M, r); }

GridFn::GridFn(LogGrid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.size()) throw DomainError("GridFn: value count does not match node count");
}

GridFn sample_s(const LogGrid& grid, const std::function<double(double)>& f) {
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid.s(j));
    return GridFn(grid, std::move(v));
}

GridFn sample_t(const LogGrid& grid, const std::function<double(double)>& f) {
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid.t(j));
    return GridFn(grid, std::move(v));
}

void require_same_grid(const GridFn& f, const GridFn& g) {
    if (!f.grid.same_as(g.grid)) throw DomainError("grid mismatch");
}

double integrate_s(const LogGrid& grid, std::span<const double> values) {
    const auto s = grid.nodes();
    double acc = (s[1] - s[0]) * values[1];
    for (std::size_t k = 2; k < s.size(); ++k) acc += 0.5 * (s[k] - s[k - 1]) * (values[k - 1] + values[k]);
    return acc;
}

double gamma_fn(double x) {
    if (!(x > 0.0)) throw DomainError("gamma_fn: argument must be positive");
    return std::tgamma(x);
}

namespace {

// f'(s0) from f0, f1, f2 with steps h1 = s1 - s0, h2 = s2 - s1 (signed).
double one_sided(double f0, double f1, double f2, double h1, double h2) {
    return (f1 - f0) / h1 * (h1 + h2) / h2 - (f2 - f0) / (h1 + h2) * h1 / h2;
}

double centered(double fm, double f0, double fp, double hm, double hp) {
    return (hm * hm * (fp - f0) + hp * hp * (f0 - fm)) / (hm * hp * (hm + hp));
}

}  // namespace

GridFn delta_op(const GridFn& f, Endpoint policy) {
    const auto& g = f.grid;
    const std::size_t n = g.size();
    if (n < 4) throw DomainError("delta_op: grid too small (need M >= 3)");
    const auto s = g.nodes();
    const auto& v = f.values;
    std::vector<double> d(n);

    for (std::size_t j = 1; j + 1 < n; ++j) d[j] = centered(v[j - 1], v[j], v[j + 1], s[j] - s[j - 1], s[j + 1] - s[j]);
    d[0] = one_sided(v[0], v[1], v[2], s[1] - s[0], s[2] - s[1]);
    d[n - 1] = one_sided(v[n - 1], v[n - 2], v[n - 3], s[n - 2] - s[n - 1], s[n - 3] - s[n - 2]);

    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    if (policy == Endpoint::ExcludeLeft) {
        d[0] = nan;
        d[1] = one_sided(v[1], v[2], v[3], s[2] - s[1], s[3] - s[2]);
    } else if (policy == Endpoint::ExcludeRight) {
        d[n - 1] = nan;
        d[n - 2] = one_sided(v[n - 2], v[n - 3], v[n - 4], s[n - 3] - s[n - 2], s[n - 4] - s[n - 3]);
    }
    return GridFn(g, std::move(d));
}

GridFn delta_via_t(const GridFn& f) {
    const auto& g = f.grid;
    const std::size_t n = g.size();
    if (n < 4) throw DomainError("delta_via_t: grid too small (need M >= 3)");
    std::vector<double> t(n), d(n);
    for (std::size_t j = 0; j < n; ++j) t[j] = g.t(j);
    const auto& v = f.values;
    for (std::size_t j = 1; j + 1 < n; ++j) d[j] = t[j] * centered(v[j - 1], v[j], v[j + 1], t[j] - t[j - 1], t[j + 1] - t[j]);
    d[0] = t[0] * one_sided(v[0], v[1], v[2], t[1] - t[0], t[2] - t[1]);
    d[n - 1] = t[n - 1] * one_sided(v[n - 1], v[n - 2], v[n - 3], t[n - 2] - t[n - 1], t[n - 3] - t[n - 2]);
    return GridFn(g, std::move(d));
}

double smoothstep5(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x * x * x * (x * (6.0 * x - 15.0) + 10.0);
}

double smoothstep5_d1(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return 30.0 * x * x * (x - 1.0) * (x - 1.0);
}

double smoothstep5_d2(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return 60.0 * x * (x - 1.0) * (2.0 * x - 1.0);
}

double smooth_cutoff(double sigma) {
    if (sigma < 0.0) throw DomainError("smooth_cutoff: sigma must be nonnegative");
    return 1.0 - smoothstep5(sigma - 1.0);
}

double smooth_cutoff_d1(double sigma) {
    if (sigma < 0.0) throw DomainError("smooth_cutoff: sigma must be nonnegative");
    return -smoothstep5_d1(sigma - 1.0);
}

double smooth_cutoff_d2(double sigma) {
    if (sigma < 0.0) throw DomainError("smooth_cutoff: sigma must be nonnegative");
    return -smoothstep5_d2(sigma - 1.0);
}

}  // namespace hhfrac
