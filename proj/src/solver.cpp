#include "hhfrac/solver.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <Eigen/SparseCholesky>

#include <cmath>
#include <limits>
#include <numbers>

namespace hhfrac {

std::vector<double> Box::point(std::size_t idx) const {
    if (N == 1) return {coord(static_cast<int>(idx))};
    const int i = static_cast<int>(idx % static_cast<std::size_t>(n));
    const int k = static_cast<int>(idx / static_cast<std::size_t>(n));
    return {coord(i), coord(k)};
}

Eigen::SparseMatrix<double> discrete_laplacian(int n, double L, int N) {
    if (N != 1 && N != 2) throw DomainError("discrete_laplacian: N must be 1 or 2");
    if (n < 3) throw DomainError("discrete_laplacian: need n >= 3");
    if (!(L > 0.0)) throw DomainError("discrete_laplacian: L must be positive");
    const double h = L / (n + 1);
    const double c = 1.0 / (h * h);
    const int size = N == 1 ? n : n * n;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(size) * (2 * N + 1));
    for (int idx = 0; idx < size; ++idx) {
        const int i = idx % n;
        const int k = idx / n;
        trips.emplace_back(idx, idx, -2.0 * N * c);
        if (i > 0) trips.emplace_back(idx, idx - 1, c);
        if (i + 1 < n) trips.emplace_back(idx, idx + 1, c);
        if (N == 2) {
            if (k > 0) trips.emplace_back(idx, idx - n, c);
            if (k + 1 < n) trips.emplace_back(idx, idx + n, c);
        }
    }
    Eigen::SparseMatrix<double> A(size, size);
    A.setFromTriplets(trips.begin(), trips.end());
    return A;
}

double InitialData::operator()(std::span<const double> x, double L) const {
    if (kind == Kind::Zero) return 0.0;
    double r2 = 0.0;
    for (double xi : x) r2 += (xi - center * L) * (xi - center * L);
    const double r = std::sqrt(r2) / (width * L);
    if (r >= 1.0) return 0.0;
    const double c = std::cos(0.5 * std::numbers::pi * r);
    return amplitude * c * c;
}

void ProblemSpec::validate() const {
    if (!(alpha2 > 0.0 && alpha2 < alpha1 && alpha1 < 1.0)) throw DomainError("ProblemSpec: need 0 < alpha2 < alpha1 < 1");
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("ProblemSpec: beta must lie in (0, 1)");
    if (!(p > 1.0)) throw DomainError("ProblemSpec: p must exceed 1");
    if (N != 1 && N != 2) throw DomainError("ProblemSpec: N must be 1 or 2");
    if (!(L > 0.0)) throw DomainError("ProblemSpec: L must be positive");
    if (n < 3) throw DomainError("ProblemSpec: n must be >= 3");
    if (!(a > 0.0)) throw DomainError("ProblemSpec: a must be positive");
    if (!(T_end > a)) throw DomainError("ProblemSpec: T_end must exceed a");
    if (M_t < 3) throw DomainError("ProblemSpec: M_t must be >= 3");
    if (!(grading >= 1.0)) throw DomainError("ProblemSpec: grading must be >= 1");
    if (u0.kind == InitialData::Kind::Bump) {
        if (!(u0.amplitude >= 0.0)) throw DomainError("ProblemSpec: bump amplitude must be nonnegative");
        if (!(u0.width > 0.0)) throw DomainError("ProblemSpec: bump width must be positive");
    }
}

namespace {

// Node weights of the order-nu left integral at node j: out[i], i = 1..j.
// Mirrors detail::left_integral, including the constant first cell.
void node_weights(std::span<const double> s, std::size_t j, double nu, std::vector<double>& out) {
    out.assign(j + 1, 0.0);
    {
        const auto c = detail::cell_weights(s[j], s[j] - s[1], nu);
        out[1] += c.far + c.near;
    }
    for (std::size_t k = 2; k <= j; ++k) {
        const auto c = detail::cell_weights(s[j] - s[k - 1], s[j] - s[k], nu);
        out[k - 1] += c.far;
        out[k] += c.near;
    }
}

}  // namespace

void detect_blowup(SolveResult& result, double threshold) {
    result.blew_up = false;
    result.t_star.reset();
    for (const auto& n : result.norms) {
        if (!std::isfinite(n.sup_norm) || n.sup_norm > threshold) {
            result.blew_up = true;
            result.t_star = n.t;
            return;
        }
    }
}

SolveResult solve(const ProblemSpec& spec, const SolveOptions& opt) {
    spec.validate();
    const Box box = spec.box();
    const LogGrid grid = LogGrid::graded(spec.a, spec.T_end, spec.M_t, spec.grading);
    const auto s = grid.nodes();
    const std::size_t M = static_cast<std::size_t>(spec.M_t);
    const std::size_t P = box.size();
    const double g1 = spec.params1().gamma;
    const double nu2 = spec.alpha1 - spec.alpha2;
    const double nu1 = spec.alpha1;

    const Eigen::SparseMatrix<double> lap = discrete_laplacian(spec.n, spec.L, spec.N);
    const Eigen::SparseMatrix<double> A = -lap;

    Eigen::VectorXd u0(static_cast<Eigen::Index>(P));
    for (std::size_t i = 0; i < P; ++i) u0[static_cast<Eigen::Index>(i)] = spec.u0(box.point(i), spec.L);
    const bool has_u0 = u0.cwiseAbs().maxCoeff() > 0.0;
    const Eigen::VectorXd Au0 = A * u0;

    // u = u0 k(s) + w with k(s) = s^(gamma1-1)/Gamma(gamma1); the integrals of
    // k are closed-form powers.
    auto kernel_part = [&](double sj) { return std::pow(sj, g1 - 1.0) / std::tgamma(g1); };
    auto kernel_integral = [&](double sj, double nu) { return std::pow(sj, g1 - 1.0 + nu) / std::tgamma(g1 + nu); };

    SolveResult res{grid, box, {}, false, std::nullopt, {}, {}, 0};
    if (opt.keep_trajectory) {
        res.trajectory = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(M + 1), static_cast<Eigen::Index>(P));
        res.trajectory.row(0).setConstant(std::numeric_limits<double>::quiet_NaN());
    }

    std::vector<Eigen::VectorXd> w(M + 1, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(P)));
    std::vector<Eigen::VectorXd> src(M + 1, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(P)));
    std::vector<double> om1, om2, buf(P);
    const bool pointwise_forcing = spec.forcing && !spec.forcing->integrated && spec.forcing->pointwise;
    const bool integrated_forcing = spec.forcing && spec.forcing->integrated;

    Eigen::SparseMatrix<double> eye(static_cast<Eigen::Index>(P), static_cast<Eigen::Index>(P));
    eye.setIdentity();
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    ldlt.analyzePattern(eye + A);

    auto source = [&](const Eigen::VectorXd& u, double t) {
        Eigen::VectorXd q = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(P));
        if (spec.source_on) q = u.array().abs().pow(spec.p).matrix();
        if (pointwise_forcing) {
            spec.forcing->pointwise(t, box, buf);
            for (std::size_t i = 0; i < P; ++i) q[static_cast<Eigen::Index>(i)] += buf[i];
        }
        return q;
    };

    for (std::size_t j = 1; j <= M; ++j) {
        const double sj = s[j];
        const double tj = grid.t(j);
        node_weights(s, j, nu1, om1);
        node_weights(s, j, nu2, om2);

        Eigen::VectorXd hist = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(P));
        Eigen::VectorXd hsrc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(P));
        for (std::size_t i = 1; i < j; ++i) {
            hist.noalias() += (om1[i] + om2[i]) * w[i];
            hsrc.noalias() += om1[i] * src[i];
        }
        Eigen::VectorXd known = -(A * hist) + hsrc;
        Eigen::VectorXd phi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(P));
        if (has_u0) {
            known -= (kernel_integral(sj, nu1) + kernel_integral(sj, nu2)) * Au0;
            phi = kernel_part(sj) * u0;
        }
        if (integrated_forcing) {
            spec.forcing->integrated(tj, box, buf);
            for (std::size_t i = 0; i < P; ++i) known[static_cast<Eigen::Index>(i)] += buf[i];
        }

        const double c = om1[j] + om2[j];
        ldlt.factorize(eye + c * A);
        if (ldlt.info() != Eigen::Success) throw std::runtime_error("solve: step matrix factorization failed");

        // Lagged source, then one fixed-point correction.
        Eigen::VectorXd guess = phi + w[j - 1];
        src[j] = source(guess, tj);
        w[j] = ldlt.solve(known + om1[j] * src[j]);
        src[j] = source(phi + w[j], tj);
        w[j] = ldlt.solve(known + om1[j] * src[j]);
        const Eigen::VectorXd u = phi + w[j];
        src[j] = source(u, tj);

        res.steps = static_cast<int>(j);
        if (opt.keep_trajectory) res.trajectory.row(static_cast<Eigen::Index>(j)) = u.transpose();
        const double sup = u.allFinite() ? u.cwiseAbs().maxCoeff() : std::numeric_limits<double>::infinity();
        const double l2 = std::sqrt(u.squaredNorm() * box.cell_volume());
        res.norms.push_back({tj, sup, std::isfinite(l2) ? l2 : std::numeric_limits<double>::infinity()});
        res.final_state.assign(u.data(), u.data() + u.size());
        if (!std::isfinite(sup) || sup > opt.threshold) {
            res.blew_up = true;
            res.t_star = tj;
            break;
        }
    }
    return res;
}

Manufactured manufactured(const ProblemSpec& spec, double eps, double amplitude) {
    if (spec.N != 1) throw DomainError("manufactured: only N = 1 is supported");
    const double a = spec.a, L = spec.L, p = spec.p;
    const double a1 = spec.alpha1, a2 = spec.alpha2;
    const double g1 = spec.params1().gamma;
    const double k2 = std::pow(std::numbers::pi / L, 2);
    const double G1 = std::tgamma(g1 + 1.0);

    auto P = [=](double s) { return amplitude * (eps + std::pow(s, g1)); };
    auto X = [=](double x) { return std::sin(std::numbers::pi * x / L); };
    auto D = [=](double s, double alpha) {
        return amplitude * (eps * std::pow(s, -alpha) / std::tgamma(1.0 - alpha) + G1 / std::tgamma(g1 + 1.0 - alpha) * std::pow(s, g1 - alpha));
    };
    auto I = [=](double s, double nu) {
        return amplitude * (eps * std::pow(s, nu) / std::tgamma(1.0 + nu) + G1 / std::tgamma(g1 + 1.0 + nu) * std::pow(s, g1 + nu));
    };
    // Order-alpha1 integral of P^p by the substitution sigma = s (1 - y^(1/alpha1)),
    // which absorbs the kernel singularity.
    auto Ipow = [=](double s) {
        if (s <= 0.0) return 0.0;
        boost::math::quadrature::tanh_sinh<double> q;
        const double v = q.integrate([&](double y) { return std::pow(P(s * (1.0 - std::pow(y, 1.0 / a1))), p); }, 0.0, 1.0);
        return std::pow(s, a1) / (a1 * std::tgamma(a1)) * v;
    };

    Manufactured m;
    m.exact = [=](double t, double x) { return P(std::log(t / a)) * X(x); };
    m.forcing.pointwise = [=](double t, const Box& box, std::span<double> out) {
        const double s = std::log(t / a);
        const double lin = D(s, a1) + k2 * D(s, a2) + k2 * P(s);
        const double pp = std::pow(P(s), p);
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double xv = X(box.coord(static_cast<int>(i)));
            out[i] = lin * xv - pp * std::pow(std::abs(xv), p);
        }
    };
    m.forcing.integrated = [=](double t, const Box& box, std::span<double> out) {
        const double s = std::log(t / a);
        const double lin = P(s) + k2 * I(s, a1 - a2) + k2 * I(s, a1);
        const double ip = Ipow(s);
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double xv = X(box.coord(static_cast<int>(i)));
            out[i] = lin * xv - ip * std::pow(std::abs(xv), p);
        }
    };
    return m;
}

double max_error(const SolveResult& r, const std::function<double(double, double)>& exact) {
    if (r.trajectory.rows() == 0) throw DomainError("max_error: result has no trajectory");
    double e = 0.0;
    for (int j = 1; j <= r.steps; ++j) {
        const double t = r.grid.t(static_cast<std::size_t>(j));
        for (std::size_t i = 0; i < r.box.size(); ++i)
            e = std::max(e, std::abs(r.trajectory(j, static_cast<Eigen::Index>(i)) - exact(t, r.box.coord(static_cast<int>(i)))));
    }
    return e;
}

}  // namespace hhfrac
