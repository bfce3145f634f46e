#include "hhfrac/solver.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <limits>

using namespace hhfrac;

namespace {

ProblemSpec mms_spec(int M, int n) {
    ProblemSpec s;
    s.alpha1 = 0.8;
    s.alpha2 = 0.5;
    s.beta = 0.5;
    s.p = 2.0;
    s.N = 1;
    s.L = 1.0;
    s.n = n;
    s.a = 1.0;
    s.T_end = std::exp(1.0);
    s.M_t = M;
    s.grading = 2.0;
    s.source_on = true;
    return s;
}

double mms_error(int M, int n) {
    auto s = mms_spec(M, n);
    const auto m = manufactured(s);
    s.forcing = m.forcing;
    SolveOptions o;
    o.keep_trajectory = true;
    o.threshold = std::numeric_limits<double>::infinity();
    return max_error(solve(s, o), m.exact);
}

}  // namespace

TEST(Laplacian, EigenRelation1D) {
    const double L = 2.0, pi = std::acos(-1.0);
    std::vector<double> err;
    for (int n : {31, 63}) {
        const auto A = discrete_laplacian(n, L, 1);
        const Box b{1, n, L};
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = std::sin(pi * b.coord(i) / L);
        const Eigen::VectorXd r = A * v + (pi / L) * (pi / L) * v;
        err.push_back(r.cwiseAbs().maxCoeff());
    }
    EXPECT_LT(err[0], 1e-2);
    EXPECT_NEAR(err[0] / err[1], 4.0, 0.2);
}

TEST(Laplacian, EigenRelation2DAndZero) {
    const double L = 1.0, pi = std::acos(-1.0);
    const int n = 31;
    const auto A = discrete_laplacian(n, L, 2);
    const Box b{2, n, L};
    Eigen::VectorXd v(b.size());
    for (std::size_t k = 0; k < b.size(); ++k) {
        const auto x = b.point(k);
        v[static_cast<Eigen::Index>(k)] = std::sin(pi * x[0] / L) * std::sin(pi * x[1] / L);
    }
    const Eigen::VectorXd r = A * v + 2.0 * (pi / L) * (pi / L) * v;
    EXPECT_LT(r.cwiseAbs().maxCoeff(), 2e-2);
    EXPECT_EQ((A * Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b.size()))).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_THROW(discrete_laplacian(n, L, 3), DomainError);
    EXPECT_THROW(discrete_laplacian(2, L, 1), DomainError);
}

TEST(Laplacian, SymmetricNegativeDefinite) {
    for (int N : {1, 2}) {
        const Eigen::MatrixXd A = Eigen::MatrixXd(discrete_laplacian(7, 1.0, N));
        EXPECT_EQ((A - A.transpose()).cwiseAbs().maxCoeff(), 0.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
        EXPECT_LT(es.eigenvalues().maxCoeff(), 0.0);
    }
}

TEST(ProblemSpec, Validation) {
    ProblemSpec s;
    EXPECT_NO_THROW(s.validate());
    auto bad = s;
    bad.alpha2 = 0.9;
    EXPECT_THROW(bad.validate(), DomainError);
    bad = s;
    bad.beta = 1.0;
    EXPECT_THROW(bad.validate(), DomainError);
    bad = s;
    bad.p = 1.0;
    EXPECT_THROW(bad.validate(), DomainError);
    bad = s;
    bad.N = 3;
    EXPECT_THROW(bad.validate(), DomainError);
    bad = s;
    bad.u0 = {InitialData::Kind::Bump, -1.0, 0.5, 0.25};
    EXPECT_THROW(bad.validate(), DomainError);
    bad = s;
    bad.T_end = 0.5;
    EXPECT_THROW(solve(bad), DomainError);
}

TEST(Solve, ZeroDataStaysZero) {
    for (int N : {1, 2}) {
        ProblemSpec s;
        s.N = N;
        s.n = N == 1 ? 40 : 12;
        s.M_t = 60;
        s.source_on = false;
        SolveOptions o;
        o.keep_trajectory = true;
        const auto r = solve(s, o);
        EXPECT_FALSE(r.blew_up);
        EXPECT_EQ(r.steps, 60);
        EXPECT_EQ(r.trajectory.bottomRows(60).cwiseAbs().maxCoeff(), 0.0);
        for (const auto& n : r.norms) EXPECT_EQ(n.sup_norm, 0.0);
        s.source_on = true;
        EXPECT_EQ(solve(s, o).trajectory.bottomRows(60).cwiseAbs().maxCoeff(), 0.0);
    }
}

TEST(Solve, LinearProblemStaysNonnegative) {
    ProblemSpec s;
    s.L = 4.0;
    s.n = 63;
    s.T_end = 10.0;
    s.M_t = 200;
    s.source_on = false;
    s.u0 = {InitialData::Kind::Bump, 5.0, 0.5, 0.25};
    SolveOptions o;
    o.keep_trajectory = true;
    const auto r = solve(s, o);
    EXPECT_GE(r.trajectory.bottomRows(200).minCoeff(), -10 * std::numeric_limits<double>::epsilon() * 5.0);
}

TEST(Solve, ManufacturedForcingVanishesWithAmplitude) {
    auto s = mms_spec(40, 20);
    const auto m = manufactured(s, 0.0, 0.0);
    std::vector<double> g(20);
    m.forcing.pointwise(2.0, s.box(), g);
    for (double v : g) EXPECT_EQ(v, 0.0);
    m.forcing.integrated(2.0, s.box(), g);
    for (double v : g) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(m.exact(2.0, 0.3), 0.0);
    s.forcing = m.forcing;
    SolveOptions o;
    o.keep_trajectory = true;
    EXPECT_EQ(solve(s, o).trajectory.bottomRows(40).cwiseAbs().maxCoeff(), 0.0);
    auto two = s;
    two.N = 2;
    EXPECT_THROW(manufactured(two), DomainError);
}

TEST(Solve, HilferOfProfileMatchesClosedForm) {
    const auto s = mms_spec(40, 20);
    const double g1 = s.params1().gamma, a1 = s.alpha1;
    const auto grid = make_graded_grid(1.0, std::exp(1.0), 4096, 2.0);
    const auto f = sample_s(grid, [&](double x) { return std::pow(x, g1); });
    const auto d = hilfer_hadamard(f, s.params1());
    const double c = std::tgamma(g1 + 1) / std::tgamma(g1 + 1 - a1);
    for (auto j : assessment_nodes(grid, Singular::Left)) EXPECT_NEAR(d[j] / (c * std::pow(grid.s(j), g1 - a1)), 1.0, 1e-4);
}

TEST(Solve, ManufacturedConverges) {
    const double t1 = mms_error(25, 200), t2 = mms_error(50, 200);
    const double gamma1 = mms_spec(25, 200).params1().gamma;
    EXPECT_GE(std::log2(t1 / t2), 0.8 * std::min(1.0, gamma1));
    const double x1 = mms_error(400, 8), x2 = mms_error(400, 16);
    EXPECT_GE(std::log2(x1 / x2), 1.8);
}

TEST(DetectBlowup, Contract) {
    SolveResult r{make_graded_grid(1.0, 3.0, 4, 1.0), Box{}, {}, false, {}, {}, {}, 0};
    for (int j = 1; j <= 4; ++j) r.norms.push_back({r.grid.t(j), std::pow(10.0, j), 1.0});
    detect_blowup(r, 1e5);
    EXPECT_FALSE(r.blew_up);
    EXPECT_FALSE(r.t_star.has_value());
    detect_blowup(r, 500.0);
    ASSERT_TRUE(r.blew_up);
    EXPECT_EQ(*r.t_star, r.grid.a() * std::exp(r.grid.s(3)));
    r.norms[1].sup_norm = std::numeric_limits<double>::quiet_NaN();
    detect_blowup(r, 500.0);
    EXPECT_EQ(*r.t_star, r.grid.t(2));
}

TEST(DetectBlowup, ThresholdSensitivity) {
    ProblemSpec s;
    s.L = 4.0;
    s.n = 63;
    s.T_end = 10.0;
    s.M_t = 800;
    s.u0 = {InitialData::Kind::Bump, 5.0, 0.5, 0.25};
    SolveOptions o;
    o.threshold = 1e6;
    auto r = solve(s, o);
    ASSERT_TRUE(r.blew_up);
    const double t6 = *r.t_star;
    detect_blowup(r, 1e3);
    ASSERT_TRUE(r.blew_up);
    EXPECT_NEAR(*r.t_star / t6, 1.0, 0.1);
}
