#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/LU>

#include "tjsolve/cutoff.hpp"
#include "tjsolve/errors.hpp"
#include "tjsolve/field.hpp"
#include "tjsolve/frame.hpp"
#include "tjsolve/geometry.hpp"
#include "tjsolve/mode_solver.hpp"
#include "tjsolve/nonlinearity.hpp"

namespace tjsolve {

// ---- finite-difference mean curvature ---------------------------------------

/// tr(g^{-1} h) of sheet i at (x, y) from 5 x 5 centred differences of chart samples.
/// The normal is e1 x e2, which is (nu_i, 0) on the flat sheet.
[[nodiscard]] inline double fd_mean_curvature(const SurfaceChart& chart, TripleIndex i, double x, double y, double h) {
    if (!(h >= 1e-5 && h <= 1e-2)) throw std::invalid_argument("fd_mean_curvature: h must lie in [1e-5, 1e-2]");
    if (x - 2.0 * h < 0.0 || x + 2.0 * h > 1.0) throw std::out_of_range("fd_mean_curvature: stencil leaves [0,1]");
    auto P = [&](int a, int b) { return chart.embed(i, x + a * h, y + b * h); };
    auto e1 = [&](int a, int b) -> Vec3 { return (P(a + 1, b) - P(a - 1, b)) / (2.0 * h); };
    auto e2 = [&](int a, int b) -> Vec3 { return (P(a, b + 1) - P(a, b - 1)) / (2.0 * h); };
    const Vec3 t1 = e1(0, 0);
    const Vec3 t2 = e2(0, 0);
    const Vec3 p11 = (e1(1, 0) - e1(-1, 0)) / (2.0 * h);
    const Vec3 p12 = (e1(0, 1) - e1(0, -1)) / (2.0 * h);
    const Vec3 p22 = (e2(0, 1) - e2(0, -1)) / (2.0 * h);
    const Vec3 normal = t1.cross(t2).normalized();
    Eigen::Matrix2d g;
    g << t1.dot(t1), t1.dot(t2), t1.dot(t2), t2.dot(t2);
    Eigen::Matrix2d second;
    second << p11.dot(normal), p12.dot(normal), p12.dot(normal), p22.dot(normal);
    return (g.inverse() * second).trace();
}

[[nodiscard]] inline double fd_mean_curvature(TripleIndex i, const TripleField& u, double x, double y, double h,
                                              const CutoffProfile& cutoff) {
    return fd_mean_curvature(SurfaceChart(u, cutoff), i, x, y, h);
}

struct FdCurvatureSample {
    int sheet;
    double x;
    double y;
    double value;
};

/// Samples |H| on an interior lattice of every sheet.
[[nodiscard]] inline std::vector<FdCurvatureSample> fd_curvature_scan(const TripleField& u, const CutoffProfile& cutoff,
                                                                      double h = 1e-3, int mx = 9, int my = 8) {
    const SurfaceChart chart(u, cutoff);
    std::vector<FdCurvatureSample> out;
    for (TripleIndex i : TripleIndex::all()) {
        for (int a = 0; a < mx; ++a) {
            const double x = 2.0 * h + (1.0 - 4.0 * h) * (a + 0.5) / mx;
            for (int b = 0; b < my; ++b) {
                const double y = (b + 0.25) / my;
                out.push_back({i.value(), x, y, fd_mean_curvature(chart, i, x, y, h)});
            }
        }
    }
    return out;
}

// ---- finite-difference linear solver ----------------------------------------

/// Scalar BVP given by functions, for the uniform-grid oracle.
struct FdProblem {
    BoundaryKind kind = BoundaryKind::dirichlet;
    std::function<double(double, double)> f = [](double, double) { return 0.0; };
    std::function<double(double)> g = [](double) { return 0.0; };
    std::function<double(double)> phi = [](double) { return 0.0; };
};

/// Five-point Laplacian on x_j = j / n (j = 0..n), y_m = m / n (m < n), n even.
/// Diagonalised in y by a plain complex DFT; each mode is a tridiagonal solve.
/// Neumann data enters through the ghost value a_{-1} = a_1 + 2 h g.
/// Returns values with rows indexed by x and columns by y.
[[nodiscard]] inline Eigen::MatrixXd fd_linear_solve(const FdProblem& p, int n) {
    if (n < 4 || n % 2 != 0) throw std::invalid_argument("fd_linear_solve: n must be even and >= 4");
    using C = std::complex<double>;
    const double h = 1.0 / n;
    Eigen::MatrixXcd fhat(n + 1, n);
    Eigen::VectorXcd ghat(n), phat(n);
    std::vector<C> twiddle(n);
    for (int m = 0; m < n; ++m) twiddle[m] = std::polar(1.0, -2.0 * pi * m / n);

    auto dft = [&](auto&& sample) {
        std::vector<C> out(n, C(0.0));
        std::vector<double> s(n);
        for (int m = 0; m < n; ++m) s[m] = sample(m * h);
        for (int k = 0; k < n; ++k) {
            for (int m = 0; m < n; ++m) out[k] += s[m] * twiddle[(static_cast<long>(k) * m) % n];
            out[k] /= static_cast<double>(n);
        }
        return out;
    };
    for (int j = 0; j <= n; ++j) {
        const auto row = dft([&](double y) { return p.f(j * h, y); });
        for (int k = 0; k < n; ++k) fhat(j, k) = row[k];
    }
    {
        const auto gr = dft(p.g);
        const auto pr = dft(p.phi);
        for (int k = 0; k < n; ++k) {
            ghat(k) = gr[k];
            phat(k) = pr[k];
        }
    }

    Eigen::MatrixXcd ahat(n + 1, n);
    const bool mixed = p.kind == BoundaryKind::mixed;
    for (int k = 0; k < n; ++k) {
        const double lam = std::pow(2.0 * n * std::sin(pi * k / n), 2);
        // Unknowns a_0..a_{n-1}; a_n = phi.
        std::vector<C> lo(n, 0.0), di(n, 0.0), up(n, 0.0), rhs(n, 0.0);
        for (int j = 0; j < n; ++j) {
            lo[j] = 1.0 / (h * h);
            up[j] = 1.0 / (h * h);
            di[j] = -2.0 / (h * h) - lam;
            rhs[j] = fhat(j, k);
        }
        if (mixed) {
            up[0] = 2.0 / (h * h);
            rhs[0] -= 2.0 * ghat(k) / h;
        } else {
            di[0] = 1.0;
            up[0] = 0.0;
            rhs[0] = 0.0;
        }
        rhs[n - 1] -= up[n - 1] * phat(k);
        // Thomas algorithm.
        for (int j = 1; j < n; ++j) {
            const C w = lo[j] / di[j - 1];
            di[j] -= w * up[j - 1];
            rhs[j] -= w * rhs[j - 1];
        }
        std::vector<C> a(n + 1);
        a[n] = phat(k);
        a[n - 1] = rhs[n - 1] / di[n - 1];
        for (int j = n - 2; j >= 0; --j) a[j] = (rhs[j] - up[j] * a[j + 1]) / di[j];
        for (int j = 0; j <= n; ++j) ahat(j, k) = a[j];
    }

    Eigen::MatrixXd v(n + 1, n);
    for (int j = 0; j <= n; ++j) {
        for (int m = 0; m < n; ++m) {
            C acc(0.0);
            for (int k = 0; k < n; ++k) acc += ahat(j, k) * std::conj(twiddle[(static_cast<long>(k) * m) % n]);
            v(j, m) = acc.real();
        }
    }
    return v;
}

// ---- junction angles ---------------------------------------------------------

struct JunctionAngleReport {
    Eigen::MatrixXd angles;  ///< row m: angles (xi1, xi2), (xi2, xi3), (xi3, xi1) at y_m
    double max_deviation;    ///< max |angle - 2 pi / 3|
};

[[nodiscard]] inline JunctionAngleReport junction_angle_check(const TripleField& u) {
    const PeriodicVec3Map x1 = conormal_xi(TripleIndex(1), u);
    const PeriodicVec3Map x2 = conormal_xi(TripleIndex(2), u);
    const PeriodicVec3Map x3 = conormal_xi(TripleIndex(3), u);
    JunctionAngleReport r{Eigen::MatrixXd(x1.rows(), 3), 0.0};
    auto angle = [](const Eigen::RowVector3d& a, const Eigen::RowVector3d& b) {
        return std::acos(std::clamp(a.dot(b), -1.0, 1.0));
    };
    for (Eigen::Index m = 0; m < x1.rows(); ++m) {
        r.angles(m, 0) = angle(x1.row(m), x2.row(m));
        r.angles(m, 1) = angle(x2.row(m), x3.row(m));
        r.angles(m, 2) = angle(x3.row(m), x1.row(m));
    }
    r.max_deviation = (r.angles.array() - 2.0 * pi / 3.0).abs().maxCoeff();
    return r;
}

// ---- exact stationary families ----------------------------------------------

enum class FamilyKind { translate, rotate };

struct FamilySpec {
    FamilyKind kind = FamilyKind::translate;
    Vec2 c = Vec2::Zero();  ///< translation vector
    double beta = 0.0;      ///< rotation slope

    [[nodiscard]] FamilySpec scaled(double t) const { return {kind, t * c, t * beta}; }
};

struct ExactFamily {
    PeriodicTriple phi;
    TripleField u;
};

/// translate: u_i = <c, nu_i>;  rotate: u_i = beta x.
[[nodiscard]] inline ExactFamily exact_family(const FamilySpec& spec, const Grid2D& grid, double delta) {
    const double size = spec.kind == FamilyKind::translate ? spec.c.norm() : std::abs(spec.beta);
    if (!(size <= delta / 20.0)) {
        throw ConfigError("exact family parameter " + std::to_string(size) + " exceeds delta/20 = " +
                          std::to_string(delta / 20.0));
    }
    const JunctionFrame frame = frame_vectors();
    auto height = [&](TripleIndex i, double x) {
        return spec.kind == FamilyKind::translate ? spec.c.dot(frame.normal(i)) : spec.beta * x;
    };
    PeriodicTriple phi = PeriodicTriple::sample(grid.ny(), [&](TripleIndex i, double) { return height(i, 1.0); });
    auto comp = [&](int s) {
        return ScalarField::sample(grid, [&](double x, double) { return height(TripleIndex(s), x); });
    };
    return {std::move(phi), TripleField(comp(1), comp(2), comp(3))};
}

} // namespace tjsolve
