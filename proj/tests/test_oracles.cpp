#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "tjsolve/linear_system.hpp"
#include "tjsolve/oracles.hpp"
#include "tjsolve/picard.hpp"
#include "tjsolve/sampling.hpp"

using namespace tjsolve;

namespace {

const Grid2D grid(48, 64);
const CutoffProfile cutoff(0.25);

double slope(double e_coarse, double e_fine, double ratio = 2.0) { return std::log(e_coarse / e_fine) / std::log(ratio); }

} // namespace

TEST(FdMeanCurvature, FlatSheet) {
    const SurfaceChart chart(TripleField(grid), cutoff);
    for (TripleIndex i : TripleIndex::all()) EXPECT_NEAR(fd_mean_curvature(chart, i, 0.4, 0.3, 1e-3), 0.0, 1e-8);
}

TEST(FdMeanCurvature, TranslationFamily) {
    const ExactFamily ex = exact_family({FamilyKind::translate, Vec2(0.01, 0.0), 0.0}, grid, cutoff.delta());
    const SurfaceChart chart(ex.u, cutoff);
    for (TripleIndex i : TripleIndex::all()) {
        for (double x : {0.1, 0.3, 0.37, 0.6}) EXPECT_NEAR(fd_mean_curvature(chart, i, x, 0.55, 1e-3), 0.0, 1e-6);
    }
}

TEST(FdMeanCurvature, DomainAndStepChecks) {
    const SurfaceChart chart(TripleField(grid), cutoff);
    EXPECT_THROW((void)fd_mean_curvature(chart, TripleIndex(1), 0.001, 0.0, 1e-3), std::out_of_range);
    EXPECT_THROW((void)fd_mean_curvature(chart, TripleIndex(1), 0.5, 0.0, 1e-6), std::invalid_argument);
    EXPECT_THROW((void)fd_mean_curvature(chart, TripleIndex(1), 0.5, 0.0, 0.1), std::invalid_argument);
}

TEST(FdMeanCurvature, SecondOrderAgainstSpectral) {
    std::mt19937_64 rng(71);
    const TripleField u = scale_to_proxy(random_compatible_field(grid, rng), cutoff.delta() / 20.0);
    const SurfaceChart chart(u, cutoff);
    for (TripleIndex i : TripleIndex::all()) {
        const ScalarField H = mean_curvature_scalar(i, u, cutoff);
        for (int j : {8, 30}) {
            const double e1 = std::abs(fd_mean_curvature(chart, i, grid.x(j), grid.y(9), 4e-3) - H(j, 9));
            const double e2 = std::abs(fd_mean_curvature(chart, i, grid.x(j), grid.y(9), 2e-3) - H(j, 9));
            EXPECT_NEAR(slope(e1, e2), 2.0, 0.2);
            // Error within C h^2 plus the 1e-6 allowance.
            EXPECT_LT(e2, 1e-6 + 0.25 * e1 * 1.2);
        }
    }
}

TEST(FdLinearSolve, ZeroData) {
    EXPECT_EQ(fd_linear_solve(FdProblem{}, 16).cwiseAbs().maxCoeff(), 0.0);
    FdProblem m;
    m.kind = BoundaryKind::mixed;
    EXPECT_EQ(fd_linear_solve(m, 16).cwiseAbs().maxCoeff(), 0.0);
}

TEST(FdLinearSolve, ManufacturedSecondOrder) {
    FdProblem p;
    p.f = [](double x, double y) { return -5.0 * pi * pi * std::sin(pi * x) * std::sin(2.0 * pi * y); };
    std::vector<double> err;
    for (int n : {16, 32, 64}) {
        const Eigen::MatrixXd v = fd_linear_solve(p, n);
        double e = 0.0;
        for (int j = 0; j <= n; ++j) {
            for (int m = 0; m < n; ++m) {
                e = std::max(e, std::abs(v(j, m) - std::sin(pi * j / static_cast<double>(n)) * std::sin(2.0 * pi * m / static_cast<double>(n))));
            }
        }
        err.push_back(e);
    }
    EXPECT_NEAR(slope(err[0], err[1]), 2.0, 0.2);
    EXPECT_NEAR(slope(err[1], err[2]), 2.0, 0.2);
}

TEST(FdLinearSolve, AgreesWithSpectralMixedSolve) {
    std::mt19937_64 rng(72);
    std::normal_distribution<double> normal;
    for (int s = 0; s < 3; ++s) {
        const double a = 0.01 * normal(rng), b = 0.01 * normal(rng), c = 0.01 * normal(rng), d = 0.01 * normal(rng);
        FdProblem p;
        p.kind = BoundaryKind::mixed;
        p.f = [=](double x, double y) { return a * std::cos(2.0 * pi * y) * (1.0 + x * x) + b * x; };
        p.g = [=](double y) { return c * std::sin(2.0 * pi * y) + d; };
        p.phi = [=](double y) { return d * std::cos(4.0 * pi * y) + a; };
        const ScalarField f = ScalarField::sample(grid, p.f);
        PeriodicMap gv(64), pv(64);
        for (int m = 0; m < 64; ++m) {
            gv(m) = p.g(grid.y(m));
            pv(m) = p.phi(grid.y(m));
        }
        const FieldInterpolant spectral(solve_mixed(f, gv, pv));
        for (int n : {16, 32}) {
            const Eigen::MatrixXd v = fd_linear_solve(p, n);
            double e = 0.0;
            for (int j = 0; j <= n; ++j) {
                for (int m = 0; m < n; ++m) e = std::max(e, std::abs(v(j, m) - spectral(j / double(n), m / double(n))));
            }
            EXPECT_LT(e, 5.0 / (n * n));
        }
    }
}

TEST(JunctionAngles, FlatAndRotation) {
    EXPECT_LT(junction_angle_check(TripleField(grid)).max_deviation, 1e-15);
    const ExactFamily ex = exact_family({FamilyKind::rotate, Vec2::Zero(), 0.01}, grid, cutoff.delta());
    EXPECT_LT(junction_angle_check(ex.u).max_deviation, 1e-12);
}

TEST(JunctionAngles, ConvergedRandomSolution) {
    std::mt19937_64 rng(73);
    const PeriodicTriple phi = scale_to_proxy(random_boundary(64, rng), 0.005);
    const SolveResult r = solve_nonlinear(phi, grid, cutoff);
    ASSERT_EQ(r.report.status, SolveStatus::converged);
    EXPECT_LT(junction_angle_check(r.u).max_deviation, 1e-4);
}

TEST(ExactFamily, BoundaryData) {
    const ExactFamily t = exact_family({FamilyKind::translate, Vec2(0.01, 0.0), 0.0}, grid, cutoff.delta());
    EXPECT_NEAR(t.phi[0](3), 0.0, 1e-18);
    EXPECT_NEAR(t.phi[1](3), 0.00866025, 1e-8);
    EXPECT_NEAR(t.phi[2](3), -0.00866025, 1e-8);
    const ExactFamily r = exact_family({FamilyKind::rotate, Vec2::Zero(), 0.01}, grid, cutoff.delta());
    for (std::size_t s = 0; s < 3; ++s) EXPECT_DOUBLE_EQ(r.phi[s](5), 0.01);
}

TEST(ExactFamily, StationaryResiduals) {
    for (const FamilySpec& spec : {FamilySpec{FamilyKind::translate, Vec2(0.01, 0.0), 0.0},
                                   FamilySpec{FamilyKind::rotate, Vec2::Zero(), 0.01}}) {
        const ExactFamily ex = exact_family(spec, grid, cutoff.delta());
        EXPECT_LT(F_eval(ex.u, cutoff).sup_norm(), 1e-12);
        const BoundaryDefect G = G_eval(ex.u);
        EXPECT_LT(std::max(G.g1.cwiseAbs().maxCoeff(), G.g2.cwiseAbs().maxCoeff()), 1e-12);
    }
}

TEST(ExactFamily, MagnitudeGuard) {
    EXPECT_THROW((void)exact_family({FamilyKind::translate, Vec2(0.02, 0.0), 0.0}, grid, 0.25), ConfigError);
    EXPECT_THROW((void)exact_family({FamilyKind::rotate, Vec2::Zero(), -0.013}, grid, 0.25), ConfigError);
    EXPECT_NO_THROW((void)exact_family({FamilyKind::rotate, Vec2::Zero(), 0.0125}, grid, 0.25));
}

TEST(FdCurvatureScan, CoversEverySheet) {
    const auto samples = fd_curvature_scan(TripleField(grid), cutoff, 1e-3, 3, 2);
    EXPECT_EQ(samples.size(), 18u);
    for (const auto& s : samples) {
        EXPECT_GE(s.x, 2e-3);
        EXPECT_LE(s.x, 1.0 - 2e-3);
        EXPECT_NEAR(s.value, 0.0, 1e-8);
    }
}
