#include "hhfrac/hadamard.hpp"
#include "hhfrac/laws.hpp"
#include "hhfrac/testfn.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include <random>

using namespace hhfrac;

namespace {

const double e1 = std::exp(1.0);

// (1/Gamma(alpha)) int_0^s (s - u)^(alpha - 1) f(u) du by tanh-sinh, the
// endpoint singularities handled by the rule itself.
double rl_oracle(const std::function<double(double)>& f, double alpha, double s) {
    boost::math::quadrature::tanh_sinh<double> ts;
    // The complement argument carries s - u exactly near the upper limit.
    auto g = [&](double u, double uc) { return std::pow(u > 0.5 * s ? uc : s - u, alpha - 1.0) * f(u); };
    return ts.integrate(g, 0.0, s) / std::tgamma(alpha);
}

double max_rel_on(const GridFn& f, const std::function<double(double)>& exact, Singular side) {
    double worst = 0.0;
    for (auto j : assessment_nodes(f.grid, side)) {
        const double e = exact(f.grid.s(j));
        worst = std::max(worst, std::abs(f[j] - e) / std::max(std::abs(e), 1e-300));
    }
    return worst;
}

GridFn random_smooth(const LogGrid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const double c0 = U(rng), c1 = U(rng), c2 = U(rng), w = 1.0 + 3.0 * std::abs(U(rng));
    return sample_s(g, [=](double s) { return c0 + c1 * std::cos(w * s) + c2 * s * s; });
}

}  // namespace

TEST(FracParams, Identities) {
    for (double a = 0.05; a < 1.0; a += 0.05)
        for (double b = 0.0; b <= 1.0; b += 0.125) {
            const auto P = FracParams::make(a, b);
            EXPECT_NEAR(P.gamma, a + b - a * b, 1e-15);
            EXPECT_NEAR(P.outer_order(), b * (1 - a), 1e-14);
            EXPECT_NEAR(P.inner_order(), (1 - b) * (1 - a), 1e-14);
            if (b < 1.0) {
                EXPECT_GT(P.gamma, 0.0);
                EXPECT_LT(P.gamma, 1.0);
            }
        }
    EXPECT_EQ(FracParams::make(0.4, 1.0).gamma, 1.0);
    EXPECT_THROW(FracParams::make(0.0, 0.5), DomainError);
    EXPECT_THROW(FracParams::make(1.0, 0.5), DomainError);
    EXPECT_THROW(FracParams::make(0.5, -0.1), DomainError);
    EXPECT_THROW(FracParams::make(0.5, 1.1), DomainError);
}

TEST(CellWeights, MomentsAndSign) {
    for (double nu : {0.1, 0.5, 0.9, 1.0, 1.4}) {
        for (double near : {0.0, 1e-6, 0.3, 5.0, 400.0}) {
            const double far = near + 0.25;
            const auto w = detail::cell_weights(far, near, nu);
            EXPECT_GE(w.far, 0.0);
            EXPECT_GE(w.near, 0.0);
            const double mass = (std::pow(far, nu) - std::pow(near, nu)) / std::tgamma(nu + 1.0);
            EXPECT_NEAR((w.far + w.near) / mass, 1.0, 1e-12) << nu << " " << near;
            // First moment: the linear interpolant of u itself integrates u^nu.
            const double first = (std::pow(far, nu + 1.0) - std::pow(near, nu + 1.0)) / (nu + 1.0) / std::tgamma(nu);
            EXPECT_NEAR((w.far * far + w.near * near) / first, 1.0, 1e-11) << nu << " " << near;
        }
    }
}

TEST(IL, ConstantClosedForm) {
    for (double r : {1.0, 2.0}) {
        const auto g = make_graded_grid(1.0, e1, 64, r);
        const auto one = sample_s(g, [](double) { return 1.0; });
        EXPECT_NEAR(iL(one, 0.5).values.back(), 1.0 / std::tgamma(1.5), 1e-12);
        EXPECT_NEAR(iL(one, 0.5).values.back(), 1.1283791670955126, 1e-12);
        EXPECT_NEAR(iL(one, 1.0).values.back(), 1.0, 1e-13);
        EXPECT_EQ(iL(one, 0.5)[0], 0.0);
    }
    EXPECT_NEAR(rl_oracle([](double) { return 1.0; }, 0.5, 1.0), 1.0 / std::tgamma(1.5), 1e-12);
}

TEST(IL, PowerOfLog) {
    const double exact = std::tgamma(1.3) / std::tgamma(1.8);
    EXPECT_NEAR(exact, 0.963588506, 1e-9);
    EXPECT_NEAR(rl_oracle([](double u) { return std::pow(u, 0.3); }, 0.5, 1.0), exact, 1e-12);
    const auto g = make_graded_grid(1.0, e1, 2048, 2.0);
    const auto f = sample_s(g, [](double s) { return std::pow(s, 0.3); });
    const auto out = iL(f, 0.5);
    EXPECT_NEAR(out.values.back() / exact, 1.0, 1e-5);
    EXPECT_LT(max_rel_on(out, [](double s) { return std::tgamma(1.3) / std::tgamma(1.8) * std::pow(s, 0.8); }, Singular::Left),
              1e-4);
}

TEST(IR, ClosedForms) {
    const auto g = make_graded_grid(1.0, e1, 128, 2.0);
    const auto one = sample_s(g, [](double) { return 1.0; });
    EXPECT_NEAR(iR(one, 1.0)[0], 1.0, 1e-13);
    EXPECT_NEAR(iR(one, 0.5)[0], 1.0 / std::tgamma(1.5), 1e-12);
    EXPECT_EQ(iR(one, 0.5).values.back(), 0.0);
    for (double v : iR(GridFn(g), 0.7).values) EXPECT_EQ(v, 0.0);
    EXPECT_THROW(iR(one, 0.0), DomainError);
    EXPECT_THROW(iL(one, -1.0), DomainError);
}

TEST(IR, MirrorsIL) {
    const auto g = make_graded_grid(1.0, 5.0, 200, 1.0);
    const double L = g.span();
    const auto f = sample_s(g, [](double s) { return std::exp(-s) + s; });
    const auto fr = sample_s(g, [&](double s) { return std::exp(-(L - s)) + (L - s); });
    const auto a = iL(f, 0.35), b = iR(fr, 0.35);
    for (std::size_t j = 0; j < g.size(); ++j) EXPECT_NEAR(a[j], b[g.size() - 1 - j], 1e-12);
}

TEST(IL, AgainstQuadratureOracle) {
    const auto g = make_graded_grid(1.0, 4.0, 1024, 1.0);
    auto fn = [](double s) { return std::cos(3.0 * s) + s; };
    const auto out = iL(sample_s(g, fn), 0.4);
    for (std::size_t j : {100u, 400u, 1024u}) EXPECT_NEAR(out[j], rl_oracle(fn, 0.4, g.s(j)), 2e-5);
}

TEST(DL, ConstantAndPower) {
    const auto g = make_graded_grid(1.0, e1, 2048, 2.0);
    for (double alpha : {0.3, 0.5, 0.8}) {
        const auto c = sample_s(g, [](double) { return 2.5; });
        EXPECT_LT(max_rel_on(dL(c, alpha), [&](double s) { return 2.5 * std::pow(s, -alpha) / std::tgamma(1 - alpha); },
                             Singular::Left),
                  1e-4)
            << alpha;
        const auto pw = sample_s(g, [&](double s) { return std::pow(s, alpha); });
        EXPECT_LT(max_rel_on(dL(pw, alpha), [&](double) { return std::tgamma(alpha + 1); }, Singular::Left), 1e-4) << alpha;
        EXPECT_TRUE(std::isnan(dL(pw, alpha)[0]));
    }
    EXPECT_THROW(dL(GridFn(g), 1.0), DomainError);
}

TEST(DL, LeftInverseOfIL) {
    const auto g = make_graded_grid(1.0, e1, 2048, 2.0);
    const auto f = sample_s(g, [](double s) { return 1.0 + std::sin(2.0 * s); });
    const auto back = dL(iL(f, 0.6), 0.6);
    for (auto j : assessment_nodes(g, Singular::Left)) EXPECT_NEAR(back[j], f[j], 5e-4);
}

TEST(DR, ConstantAndZero) {
    const auto g = make_graded_grid(1.0, e1, 2048, 2.0);
    const double L = g.span();
    for (double alpha : {0.3, 0.5}) {
        const auto c = sample_s(g, [](double) { return -1.5; });
        EXPECT_LT(max_rel_on(dR(c, alpha), [&](double s) { return -1.5 * std::pow(L - s, -alpha) / std::tgamma(1 - alpha); },
                             Singular::Both),
                  1e-4);
    }
    for (double v : dR(GridFn(g), 0.5).values)
        if (!std::isnan(v)) EXPECT_EQ(v, 0.0);
    EXPECT_TRUE(std::isnan(dR(GridFn(g), 0.5).values.back()));
}

TEST(DR, PhiOneRepresentation) {
    const auto cfg = TestFnConfig::make(1.0, 2.0, 2.0, 0.5);
    const auto g = make_graded_grid(1.0, 2.0, 2048, 1.0);
    const auto phi = sample_t(g, [&](double t) { return phi1(t, cfg); });
    const auto viaR = right_frac_of_phi1(cfg, 0.5, 1.0, g);
    const auto d = dR(phi, 0.5);
    for (auto j : assessment_nodes(g, Singular::Right)) EXPECT_NEAR(d[j], viaR[j], law_tolerance(2048)) << j;
}

TEST(Hilfer, BetaZeroIsDL) {
    const auto g = make_graded_grid(1.0, e1, 256, 2.0);
    const auto f = sample_s(g, [](double s) { return 1.0 + s * s; });
    const auto a = hilfer_hadamard(f, FracParams::make(0.6, 0.0)), b = dL(f, 0.6);
    for (std::size_t j = 1; j < g.size(); ++j) EXPECT_EQ(a[j], b[j]);
}

TEST(Hilfer, ConstantWithBetaOne) {
    const auto g = make_graded_grid(1.0, e1, 256, 2.0);
    const auto c = sample_s(g, [](double) { return 3.0; });
    const auto h = hilfer_hadamard(c, FracParams::make(0.4, 1.0));
    for (std::size_t j = 1; j < g.size(); ++j) EXPECT_NEAR(h[j], 0.0, 1e-12);
}

TEST(Hilfer, KernelFunctionIsAnnihilated) {
    const auto g = make_graded_grid(1.0, e1, 2048, 2.0);
    for (auto [a, b] : {std::pair{0.8, 0.5}, std::pair{0.5, 0.3}, std::pair{0.3, 0.7}}) {
        const auto P = FracParams::make(a, b);
        const auto k = sample_s(g, [&](double s) { return s > 0 ? std::pow(s, P.gamma - 1) : 0.0; });
        const auto h = hilfer_hadamard(k, P);
        for (auto j : assessment_nodes(g, Singular::Left)) EXPECT_NEAR(h[j], 0.0, 1e-4) << a << " " << b;
    }
}

TEST(Hilfer, PowerOfLogClosedForm) {
    const auto g = make_graded_grid(1.0, e1, 2048, 2.0);
    const auto P = FracParams::make(0.8, 0.5);
    const double g1 = P.gamma;
    const auto f = sample_s(g, [&](double s) { return std::pow(s, g1); });
    const double c = std::tgamma(g1 + 1) / std::tgamma(g1 + 1 - 0.8);
    EXPECT_LT(max_rel_on(hilfer_hadamard(f, P), [&](double s) { return c * std::pow(s, g1 - 0.8); }, Singular::Left), 1e-4);
}

TEST(Hilfer, DirectCompositionAgrees) {
    const auto g = make_graded_grid(1.0, e1, 1024, 2.0);
    const auto f = sample_s(g, [](double s) { return std::cos(s) + s; });
    for (double b : {0.2, 0.5, 0.9}) {
        const auto P = FracParams::make(0.7, b);
        const auto x = hilfer_hadamard(f, P), y = hilfer_hadamard_direct(f, P);
        for (std::size_t j = 1; j < g.size(); ++j) EXPECT_NEAR(x[j], y[j], 1e-10);
    }
}

TEST(Hilfer, BetaOneIsIntegralOfDelta) {
    const auto g = make_graded_grid(1.0, e1, 2048, 2.0);
    const auto f = sample_s(g, [](double s) { return std::sin(2 * s) + 0.5; });
    const auto h = hilfer_hadamard(f, FracParams::make(0.6, 1.0));
    const auto ref = iL(delta_op(f), 0.4);
    for (auto j : assessment_nodes(g, Singular::Left)) EXPECT_NEAR(h[j], ref[j], law_tolerance(2048));
}

// Exact up to rounding.  The derivatives difference their integrals across
// one cell, so their rounding grows like span / local step.
TEST(Operators, Linearity) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    const auto P = FracParams::make(0.6, 0.4);
    const std::vector<std::function<GridFn(const GridFn&)>> ops = {
        [](const GridFn& f) { return iL(f, 0.45); }, [](const GridFn& f) { return iR(f, 0.45); },
        [](const GridFn& f) { return dL(f, 0.45); }, [](const GridFn& f) { return dR(f, 0.45); },
        [&](const GridFn& f) { return hilfer_hadamard(f, P); }};
    for (double r : {1.0, 2.0}) {
        const auto g = make_graded_grid(1.0, 3.0, 300, r);
        for (int trial = 0; trial < 10; ++trial) {
            const auto f = random_smooth(g, rng), h = random_smooth(g, rng);
            const double lam = U(rng), mu = U(rng);
            GridFn comb(g);
            for (std::size_t j = 0; j < g.size(); ++j) comb[j] = lam * f[j] + mu * h[j];
            for (std::size_t k = 0; k < ops.size(); ++k) {
                const auto a = ops[k](comb), b = ops[k](f), c = ops[k](h);
                for (std::size_t j = 0; j < g.size(); ++j) {
                    if (std::isnan(a[j])) continue;
                    const double want = lam * b[j] + mu * c[j];
                    double cond = 1.0;
                    if (k >= 2) {
                        const double hl = j > 0 ? g.step(j) : g.step(1);
                        const double hr = j + 1 < g.size() ? g.step(j + 1) : hl;
                        cond = g.span() / std::min(hl, hr);
                    }
                    EXPECT_NEAR(a[j], want, 1e-12 * cond * (1.0 + std::abs(want))) << "op " << k << " node " << j;
                }
            }
        }
    }
}

TEST(Operators, Positivity) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = make_graded_grid(1.0, 1.0 + 10 * U(rng), 50 + trial * 7, 1.0 + U(rng));
        GridFn f(g);
        for (auto& v : f.values) v = U(rng) * U(rng);
        const double alpha = 0.05 + 1.4 * U(rng);
        for (double v : iL(f, alpha).values) EXPECT_GE(v, 0.0);
        for (double v : iR(f, alpha).values) EXPECT_GE(v, 0.0);
    }
}

TEST(IL, ConsistencyOrder) {
    auto diff = [](int M) {
        const auto c = make_graded_grid(1.0, e1, M, 1.0), f = make_graded_grid(1.0, e1, 2 * M, 1.0);
        const auto a = iL(sample_s(c, [](double s) { return std::sin(s); }), 0.5);
        const auto b = iL(sample_s(f, [](double s) { return std::sin(s); }), 0.5);
        double m = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j) m = std::max(m, std::abs(a[j] - b[2 * j]));
        return m;
    };
    const double d1 = diff(128), d2 = diff(256);
    EXPECT_GE(std::log2(d1 / d2), 0.9);
}

TEST(AssessmentNodes, Windows) {
    const auto g = make_graded_grid(1.0, e1, 100, 1.0);
    const auto left = assessment_nodes(g, Singular::Left);
    EXPECT_EQ(left.front(), 5u);
    EXPECT_EQ(left.back(), 100u);
    const auto right = assessment_nodes(g, Singular::Right);
    EXPECT_EQ(right.front(), 0u);
    EXPECT_EQ(right.back(), 95u);
}
