#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "tjsolve/linear_system.hpp"
#include "tjsolve/sampling.hpp"

using namespace tjsolve;

namespace {

Eigen::VectorXd sample_nodes(int n, const std::function<double(double)>& fn) {
    const auto c = chebyshev_ops(n);
    Eigen::VectorXd v(n);
    for (int j = 0; j < n; ++j) v(j) = fn(c->nodes(j));
    return v;
}

double rel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).cwiseAbs().maxCoeff() / std::max(1e-300, b.cwiseAbs().maxCoeff());
}

PeriodicMap periodic(int ny, const std::function<double(double)>& fn) {
    PeriodicMap p(ny);
    for (int m = 0; m < ny; ++m) p(m) = fn(static_cast<double>(m) / ny);
    return p;
}

} // namespace

TEST(Decouple, ConstantsAndBoundaryCombinations) {
    const Grid2D g(16, 16);
    const PeriodicTriple ones(PeriodicMap::Ones(16), PeriodicMap::Ones(16), PeriodicMap::Ones(16));
    const BoundaryDefect G0{PeriodicMap::Zero(16), PeriodicMap::Zero(16)};
    auto p = decouple(TripleField(g), G0, ones);
    EXPECT_EQ(p[0].kind, BoundaryKind::dirichlet);
    EXPECT_EQ(p[1].kind, BoundaryKind::mixed);
    EXPECT_EQ(p[2].kind, BoundaryKind::mixed);
    EXPECT_EQ(p[0].phi(0), 3.0);
    EXPECT_EQ(p[1].phi(0), 0.0);
    EXPECT_EQ(p[2].phi(0), 0.0);

    auto c = [&](double v) { return ScalarField::sample(g, [v](double, double) { return v; }); };
    p = decouple(TripleField(c(1.0), c(2.0), c(3.0)), G0, PeriodicTriple(16));
    EXPECT_EQ(p[0].f(4, 4), 6.0);
    EXPECT_EQ(p[1].f(4, 4), -1.0);
    EXPECT_EQ(p[2].f(4, 4), -1.5);
}

TEST(Recompose, Examples) {
    const Grid2D g(16, 16);
    auto c = [&](double v) { return ScalarField::sample(g, [v](double, double) { return v; }); };
    TripleField u = recompose(c(3.0), c(0.0), c(0.0));
    EXPECT_EQ(u[0](0, 0), 1.0);
    EXPECT_EQ(u[1](0, 0), 1.0);
    EXPECT_EQ(u[2](0, 0), 1.0);
    u = recompose(c(0.0), c(2.0), c(0.0));
    EXPECT_EQ(u[0](0, 0), 0.0);
    EXPECT_EQ(u[1](0, 0), 1.0);
    EXPECT_EQ(u[2](0, 0), -1.0);
}

TEST(Recompose, RoundTripWithinFourUlp) {
    const Grid2D g(16, 16);
    std::mt19937_64 rng(2);
    const double eps = std::numeric_limits<double>::epsilon();
    for (int s = 0; s < 20; ++s) {
        const TripleField u = random_compatible_field(g, rng);
        const TripleField r = recompose(u[0] + u[1] + u[2], u[1] - u[2], u[0] - 0.5 * (u[1] + u[2]));
        for (std::size_t c = 0; c < 3; ++c) {
            const double scale = std::max({u[0].sup_norm(), u[1].sup_norm(), u[2].sup_norm()});
            EXPECT_LE((r[c] - u[c]).sup_norm(), 4.0 * eps * scale);
        }
    }
}

TEST(ModeSolve, DirichletHarmonic) {
    const int n = 48;
    const ModeProblem p{1, BoundaryKind::dirichlet, Eigen::VectorXd::Zero(n), 0.0, 1.0};
    const Eigen::VectorXd a = mode_solve_dirichlet(p);
    const auto c = chebyshev_ops(n);
    for (int j = 0; j < n; ++j) EXPECT_NEAR(a(j), std::sinh(2.0 * pi * c->nodes(j)) / std::sinh(2.0 * pi), 1e-13);
    EXPECT_NEAR(chebyshev_interpolate(*c, a, 0.5), 0.0431334, 1e-7);
    EXPECT_NEAR(chebyshev_interpolate(*c, a, 0.5), std::sinh(pi) / std::sinh(2.0 * pi), 1e-12);
}

TEST(ModeSolve, ZeroModeLinear) {
    const int n = 24;
    const auto c = chebyshev_ops(n);
    const Eigen::VectorXd a = mode_solve_dirichlet({0, BoundaryKind::dirichlet, Eigen::VectorXd::Zero(n), 0.0, 2.5});
    for (int j = 0; j < n; ++j) EXPECT_NEAR(a(j), 2.5 * c->nodes(j), 1e-14);
    const Eigen::VectorXd b = mode_solve_mixed({0, BoundaryKind::mixed, Eigen::VectorXd::Zero(n), 1.0, 0.0});
    for (int j = 0; j < n; ++j) EXPECT_NEAR(b(j), 1.0 - c->nodes(j), 1e-14);
}

TEST(ModeSolve, MixedHarmonic) {
    const int n = 48;
    const Eigen::VectorXd a = mode_solve_mixed({1, BoundaryKind::mixed, Eigen::VectorXd::Zero(n), 0.0, 1.0});
    const auto c = chebyshev_ops(n);
    for (int j = 0; j < n; ++j) EXPECT_NEAR(a(j), std::cosh(2.0 * pi * c->nodes(j)) / std::cosh(2.0 * pi), 1e-13);
    EXPECT_NEAR(a(0), 0.00373487, 1e-8);
    EXPECT_THROW((void)mode_solve_mixed({1, BoundaryKind::dirichlet, Eigen::VectorXd::Zero(n), 0.0, 1.0}),
                 std::invalid_argument);
}

TEST(ModeSolve, FormulaMatchesCollocationLowModes) {
    const int n = 48;
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    for (int k = 0; k <= 16; ++k) {
        const double c0 = normal(rng), c1 = normal(rng), c2 = normal(rng);
        const Eigen::VectorXd f = sample_nodes(n, [&](double x) { return c0 + c1 * std::cos(2.0 * x) + c2 * x * x * x; });
        const ModeProblem d{k, BoundaryKind::dirichlet, f, 0.0, normal(rng)};
        EXPECT_LT(rel(mode_solve_dirichlet(d), mode_solve_collocation(d)), 1e-8) << "k=" << k;
        const ModeProblem m{k, BoundaryKind::mixed, f, normal(rng), normal(rng)};
        EXPECT_LT(rel(mode_solve_mixed(m), mode_solve_collocation(m)), 1e-8) << "k=" << k;
    }
}

TEST(ModeSolve, HighModesAgreeOnFineCollocation) {
    const int n = 240;
    const Eigen::VectorXd f = sample_nodes(n, [](double x) { return 1.0 + x - 2.0 * x * x + 0.5 * x * x * x; });
    const ModeProblem d{200, BoundaryKind::dirichlet, f, 0.0, 0.3};
    const Eigen::VectorXd a = mode_solve_dirichlet(d);
    ASSERT_TRUE(a.allFinite());
    EXPECT_LT(rel(a, mode_solve_collocation(d)), 1e-8);

    std::mt19937_64 rng(64);
    std::normal_distribution<double> normal;
    const double c0 = normal(rng), c1 = normal(rng);
    const Eigen::VectorXd g = sample_nodes(n, [&](double x) { return c0 * std::sin(3.0 * x) + c1 * std::exp(x); });
    const ModeProblem m{64, BoundaryKind::mixed, g, normal(rng), normal(rng)};
    EXPECT_LT(rel(mode_solve_mixed(m), mode_solve_collocation(m)), 1e-8);
}

TEST(ModeSolve, NoOverflowUpTo512) {
    const int n = 48;
    const Eigen::VectorXd f = sample_nodes(n, [](double x) { return std::cos(x); });
    for (int k : {256, 400, 512}) {
        EXPECT_TRUE(mode_solve_dirichlet({k, BoundaryKind::dirichlet, f, 0.0, 1.0}).allFinite());
        EXPECT_TRUE(mode_solve_mixed({k, BoundaryKind::mixed, f, 1.0, 1.0}).allFinite());
        EXPECT_TRUE(mode_solve_collocation({k, BoundaryKind::mixed, f, 1.0, 1.0}).allFinite());
    }
}

TEST(ModeSolve, ResidualAndBoundaryRows) {
    const int n = 48;
    std::mt19937_64 rng(8);
    std::normal_distribution<double> normal;
    for (int k = 0; k <= 32; ++k) {
        const double c0 = normal(rng);
        const Eigen::VectorXd f = sample_nodes(n, [&](double x) { return c0 * std::exp(-x) + x; });
        for (BoundaryKind kind : {BoundaryKind::dirichlet, BoundaryKind::mixed}) {
            const ModeProblem p{k, kind, f, kind == BoundaryKind::mixed ? normal(rng) : 0.0, normal(rng)};
            const Eigen::VectorXd a = mode_solve_collocation(p);
            const ModeResidual r = mode_residual(p, a);
            const double scale = f.cwiseAbs().maxCoeff() + std::abs(p.phi) + std::abs(p.g);
            EXPECT_LT(r.interior, 1e-8 * scale);
            EXPECT_LT(r.inner_bc, 1e-9);
            EXPECT_LT(r.outer_bc, 1e-14);
        }
    }
}

TEST(SolveDirichlet, ManufacturedAndZero) {
    const Grid2D g(48, 64);
    const ScalarField f = ScalarField::sample(g, [](double x, double y) {
        return -5.0 * pi * pi * std::sin(pi * x) * std::sin(2.0 * pi * y);
    });
    const ScalarField exact = ScalarField::sample(g, [](double x, double y) { return std::sin(pi * x) * std::sin(2.0 * pi * y); });
    EXPECT_LT((solve_dirichlet(f, PeriodicMap::Zero(64)) - exact).sup_norm(), 1e-8);
    EXPECT_EQ(solve_dirichlet(ScalarField(g), PeriodicMap::Zero(64)).sup_norm(), 0.0);
}

TEST(SolveDirichlet, Superposition) {
    const Grid2D g(24, 16);
    std::mt19937_64 rng(6);
    const TripleField a = random_compatible_field(g, rng);
    const TripleField b = random_compatible_field(g, rng);
    const PeriodicTriple pa = random_boundary(16, rng);
    const PeriodicTriple pb = random_boundary(16, rng);
    const ScalarField lhs = solve_dirichlet(a[0] + 2.0 * b[0], pa[0] + 2.0 * pb[0]);
    const ScalarField rhs = solve_dirichlet(a[0], pa[0]) + 2.0 * solve_dirichlet(b[0], pb[0]);
    EXPECT_LT((lhs - rhs).sup_norm(), 1e-11);
}

TEST(SolveMixed, ManufacturedZeroAndNeumannTrace) {
    const Grid2D g(48, 64);
    const PeriodicMap phi = periodic(64, [](double y) { return std::cos(2.0 * pi * y); });
    const ScalarField exact = ScalarField::sample(g, [](double x, double y) {
        return std::cosh(2.0 * pi * x) * std::cos(2.0 * pi * y) / std::cosh(2.0 * pi);
    });
    EXPECT_LT((solve_mixed(ScalarField(g), PeriodicMap::Zero(64), phi) - exact).sup_norm(), 1e-8);
    EXPECT_EQ(solve_mixed(ScalarField(g), PeriodicMap::Zero(64), PeriodicMap::Zero(64)).sup_norm(), 0.0);

    std::mt19937_64 rng(12);
    for (int s = 0; s < 5; ++s) {
        const PeriodicTriple gg = random_boundary(64, rng, 6);
        const ScalarField v = solve_mixed(random_compatible_field(g, rng)[0], gg[0], gg[1]);
        EXPECT_LT((normal_derivative_inner(v) - gg[0]).cwiseAbs().maxCoeff(), 1e-8);
        EXPECT_LT((trace(v, BoundaryEnd::outer) - gg[1]).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(SolveLinearSystem, ZeroAndConstantData) {
    const Grid2D g(32, 32);
    const BoundaryDefect G0{PeriodicMap::Zero(32), PeriodicMap::Zero(32)};
    EXPECT_EQ(solve_linear_system(TripleField(g), G0, PeriodicTriple(32)).sup_norm(), 0.0);
    const PeriodicTriple c(PeriodicMap::Constant(32, 0.01), PeriodicMap::Constant(32, 0.01), PeriodicMap::Constant(32, 0.01));
    const TripleField u = solve_linear_system(TripleField(g), G0, c);
    const BoundaryOperatorValues b = boundary_operator(u);
    EXPECT_LT(b.trace_sum.cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT(b.b2.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(b.b3.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SolveLinearSystem, RandomResiduals) {
    const Grid2D g(48, 32);
    std::mt19937_64 rng(19);
    for (int s = 0; s < 5; ++s) {
        const TripleField F = random_compatible_field(g, rng);
        const PeriodicTriple gb = random_boundary(32, rng);
        const BoundaryDefect G{gb[0], gb[1]};
        const PeriodicTriple phi = random_boundary(32, rng);
        std::vector<ModeRecord> dump;
        const TripleField u = solve_linear_system(F, G, phi, &dump);
        const double scale = F.sup_norm() + gb.sup_norm() + phi.sup_norm();
        for (std::size_t c = 0; c < 3; ++c) {
            const Eigen::MatrixXd r = laplacian(u[c]).values() - F[c].values();
            EXPECT_LT(r.middleRows(1, g.nx() - 2).cwiseAbs().maxCoeff(), 1e-8 * scale);
            EXPECT_LT((trace(u[c], BoundaryEnd::outer) - phi[c]).cwiseAbs().maxCoeff(), 1e-13);
        }
        const BoundaryOperatorValues b = boundary_operator(u);
        EXPECT_LT(b.trace_sum.cwiseAbs().maxCoeff(), 1e-8 * scale);
        EXPECT_LT((b.b2 - G.g1).cwiseAbs().maxCoeff(), 1e-8 * scale);
        EXPECT_LT((b.b3 - G.g2).cwiseAbs().maxCoeff(), 1e-8 * scale);
        // 17 cosine and 15 sine modes for each of the three scalar problems.
        EXPECT_EQ(dump.size(), 3u * 32u);
        for (const auto& rec : dump) EXPECT_LT(rec.residual, 1e-8 * scale);
    }
}

TEST(SchauderProbe, FiniteStableAndAtLeastOneForBoundaryData) {
    const Grid2D g(32, 32);
    const SchauderProbe a = schauder_probe(g, 6, 1);
    const SchauderProbe b = schauder_probe(g, 12, 1);
    EXPECT_TRUE(std::isfinite(a.c_lin) && a.c_lin > 0.0);
    EXPECT_NEAR(b.c_lin / a.c_lin, 1.0, 0.2);
    const SchauderProbe phi_only = schauder_probe(g, 6, 2, 0.5, ProbeInputs::boundary_only);
    for (double r : phi_only.ratios) EXPECT_GE(r, 1.0);
}

TEST(SchauderProbe, GridIndependentBeyondResolution) {
    const double coarse = schauder_probe(Grid2D(32, 32), 6, 4).c_lin;
    const double fine = schauder_probe(Grid2D(48, 64), 6, 4).c_lin;
    EXPECT_NEAR(fine / coarse, 1.0, 0.2);
}

TEST(ContractionEstimates, Formula) {
    const ContractionEstimates e = contraction_estimates(2.0, 3.0, 1.0);
    EXPECT_DOUBLE_EQ(e.c1, 8.0);
    EXPECT_DOUBLE_EQ(e.c2, 8.0);
    EXPECT_DOUBLE_EQ(e.r_tilde, 1.0 / 32.0);
    EXPECT_LE(contraction_estimates(0.1, 0.1, 0.1).r_tilde, 1.0);
}
