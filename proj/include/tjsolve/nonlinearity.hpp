#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "tjsolve/cutoff.hpp"
#include "tjsolve/errors.hpp"
#include "tjsolve/field.hpp"
#include "tjsolve/frame.hpp"
#include "tjsolve/geometry.hpp"

namespace tjsolve {

inline constexpr double degenerate_metric_threshold = 1e-6;

/// Local differential geometry of sheet i at one grid point.
struct MetricShapeData {
    Vec3 e1;
    Vec3 e2;
    Eigen::Matrix2d g;
    Eigen::Matrix2d g_inv;
    Vec3 normal;
    double beta;
    double gamma;
    double h11;
    double h12;
    double h22;

    [[nodiscard]] double mean_curvature() const {
        return g_inv(0, 0) * h11 + 2.0 * g_inv(0, 1) * h12 + g_inv(1, 1) * h22;
    }
};

/// Grid samples of every quantity the sheet geometry depends on.
struct SheetJets {
    Eigen::MatrixXd ux, uy, uxx, uxy, uyy;
    PeriodicMap s, ds, dds;  // <w_i, n_i> and its y-derivatives
};

[[nodiscard]] inline SheetJets sheet_jets(TripleIndex i, const TripleField& u) {
    const ScalarField& ui = u[i];
    SheetJets j;
    j.ux = diff(ui, 1, 0).values();
    j.uy = diff(ui, 0, 1).values();
    j.uxx = diff(ui, 2, 0).values();
    j.uxy = diff(ui, 1, 1).values();
    j.uyy = diff(ui, 0, 2).values();
    j.s = wall_amplitude(trace(u, BoundaryEnd::inner), i);
    j.ds = periodic_derivative(j.s, 1);
    j.dds = periodic_derivative(j.s, 2);
    return j;
}

[[nodiscard]] inline MetricShapeData metric_shape_at(const Vec2& n, const Vec2& nu, const CutoffValues& eta,
                                                     double ux, double uy, double uxx, double uxy, double uyy,
                                                     double s, double ds, double dds) {
    auto lift = [](const Vec2& p, double z) { return Vec3(p.x(), p.y(), z); };
    MetricShapeData d;
    d.e1 = lift(-n + ux * nu + eta.d1 * s * n, 0.0);
    d.e2 = lift(uy * nu + eta.eta * ds * n, 1.0);
    d.g << d.e1.dot(d.e1), d.e1.dot(d.e2), d.e2.dot(d.e1), d.e2.dot(d.e2);
    const double det = d.g.determinant();
    if (!(det >= degenerate_metric_threshold)) {
        throw DegenerateMetric("induced metric determinant " + std::to_string(det) + " below threshold");
    }
    d.g_inv << d.g(1, 1) / det, -d.g(0, 1) / det, -d.g(1, 0) / det, d.g(0, 0) / det;
    d.beta = ux / (1.0 - eta.d1 * s);
    d.gamma = -uy - d.beta * eta.eta * ds;
    d.normal = lift(d.beta * n + nu, d.gamma) / std::sqrt(1.0 + d.beta * d.beta + d.gamma * d.gamma);
    d.h11 = lift(uxx * nu + eta.d2 * s * n, 0.0).dot(d.normal);
    d.h12 = lift(uxy * nu + eta.d1 * ds * n, 0.0).dot(d.normal);
    d.h22 = lift(uyy * nu + eta.eta * dds * n, 0.0).dot(d.normal);
    return d;
}

/// Metric and shape data of sheet i on every grid point, row-major in (x, y).
[[nodiscard]] inline std::vector<MetricShapeData> metric_shape_data(TripleIndex i, const TripleField& u,
                                                                   const CutoffProfile& cutoff,
                                                                   const JunctionFrame& frame = frame_vectors()) {
    const Grid2D& g = u.grid();
    const SheetJets j = sheet_jets(i, u);
    std::vector<MetricShapeData> out;
    out.reserve(static_cast<std::size_t>(g.nx()) * g.ny());
    for (int a = 0; a < g.nx(); ++a) {
        const CutoffValues eta = cutoff.eval(g.x(a));
        for (int m = 0; m < g.ny(); ++m) {
            out.push_back(metric_shape_at(frame.conormal(i), frame.normal(i), eta, j.ux(a, m), j.uy(a, m), j.uxx(a, m),
                                          j.uxy(a, m), j.uyy(a, m), j.s(m), j.ds(m), j.dds(m)));
        }
    }
    return out;
}

/// tr(g^{-1} h) of sheet i against the normal that reduces to (nu_i, 0) at u = 0.
[[nodiscard]] inline ScalarField mean_curvature_scalar(TripleIndex i, const TripleField& u, const CutoffProfile& cutoff,
                                                       const JunctionFrame& frame = frame_vectors()) {
    const Grid2D& g = u.grid();
    const SheetJets j = sheet_jets(i, u);
    Eigen::MatrixXd h(g.nx(), g.ny());
    for (int a = 0; a < g.nx(); ++a) {
        const CutoffValues eta = cutoff.eval(g.x(a));
        for (int m = 0; m < g.ny(); ++m) {
            h(a, m) = metric_shape_at(frame.conormal(i), frame.normal(i), eta, j.ux(a, m), j.uy(a, m), j.uxx(a, m),
                                      j.uxy(a, m), j.uyy(a, m), j.s(m), j.ds(m), j.dds(m))
                          .mean_curvature();
        }
    }
    return {g, std::move(h)};
}

/// F_i = Delta u_i - tr(g^{-1} h), so that minimality of sheet i reads Delta u_i = F_i.
[[nodiscard]] inline TripleField F_eval(const TripleField& u, const CutoffProfile& cutoff,
                                        const JunctionFrame& frame = frame_vectors()) {
    auto one = [&](int s) {
        const TripleIndex i(s);
        return laplacian(u[i]) - mean_curvature_scalar(i, u, cutoff, frame);
    };
    return {one(1), one(2), one(3)};
}

/// 3-vector samples on the y-nodes.
using PeriodicVec3Map = Eigen::Matrix<double, Eigen::Dynamic, 3>;

/// Tangent (v'(y), 1) of the spine, from the i = 1 reconstruction.
[[nodiscard]] inline PeriodicVec3Map spine_tangent(const TripleField& u, const JunctionFrame& frame = frame_vectors()) {
    const PeriodicTriple t = trace(u, BoundaryEnd::inner);
    const SpineCurve spine(spine_candidate(t, TripleIndex(1), frame));
    PeriodicVec3Map T(t.ny(), 3);
    T.leftCols<2>() = spine.derivative();
    T.col(2).setOnes();
    return T;
}

/// Unit conormal of the spine inside sheet i, pointing into the sheet.
[[nodiscard]] inline PeriodicVec3Map conormal_xi(TripleIndex i, const TripleField& u,
                                                 const JunctionFrame& frame = frame_vectors()) {
    const PeriodicVec3Map T = spine_tangent(u, frame);
    const Eigen::VectorXd ux0 = (u.grid().cheb().d1.row(0) * u[i].values()).transpose();
    PeriodicVec3Map xi(T.rows(), 3);
    for (Eigen::Index m = 0; m < T.rows(); ++m) {
        const Vec2 t2 = -frame.conormal(i) + ux0(m) * frame.normal(i);
        const Vec3 tau(t2.x(), t2.y(), 0.0);
        const Vec3 tm = T.row(m).transpose();
        const Vec3 c = tau - (tau.dot(tm) / tm.squaredNorm()) * tm;
        xi.row(m) = c.normalized().transpose();
    }
    return xi;
}

/// S(y) = sum_i xi_i(y); vanishes exactly when the sheets meet at 120 degrees.
[[nodiscard]] inline PeriodicVec3Map conormal_defect(const TripleField& u, const JunctionFrame& frame = frame_vectors()) {
    return conormal_xi(TripleIndex(1), u, frame) + conormal_xi(TripleIndex(2), u, frame) +
           conormal_xi(TripleIndex(3), u, frame);
}

struct BoundaryDefect {
    PeriodicMap g1;
    PeriodicMap g2;
};

/// Linear parts of the boundary operator: (dn u2 - dn u3, dn u1 - (dn u2 + dn u3) / 2) on {0} x S^1.
[[nodiscard]] inline BoundaryDefect neumann_combinations(const TripleField& u) {
    const PeriodicMap d1 = normal_derivative_inner(u[0]);
    const PeriodicMap d2 = normal_derivative_inner(u[1]);
    const PeriodicMap d3 = normal_derivative_inner(u[2]);
    return {d2 - d3, d1 - 0.5 * (d2 + d3)};
}

/// Projections P1 = <S, b1>, P2 = <S, b2> of the conormal defect on the
/// basis b1 = (n_1, (u2_y - u3_y)(0,.) / sqrt3), b2 = (nu_1, -u1_y(0,.))
/// of the plane orthogonal to the spine tangent.
[[nodiscard]] inline BoundaryDefect conormal_projections(const TripleField& u, const JunctionFrame& frame = frame_vectors()) {
    const PeriodicVec3Map S = conormal_defect(u, frame);
    const PeriodicTriple t = trace(u, BoundaryEnd::inner);
    const PeriodicMap t1y = periodic_derivative(t[0], 1);
    const PeriodicMap t2y = periodic_derivative(t[1], 1);
    const PeriodicMap t3y = periodic_derivative(t[2], 1);
    const Vec2& n1 = frame.n[0];
    const Vec2& nu1 = frame.nu[0];
    BoundaryDefect p{PeriodicMap(t.ny()), PeriodicMap(t.ny())};
    for (int m = 0; m < t.ny(); ++m) {
        const Vec3 b1(n1.x(), n1.y(), (t2y(m) - t3y(m)) / sqrt3);
        const Vec3 b2(nu1.x(), nu1.y(), -t1y(m));
        const Vec3 sm = S.row(m).transpose();
        p.g1(m) = sm.dot(b1);
        p.g2(m) = sm.dot(b2);
    }
    return p;
}

/// Boundary right-hand sides (G1, G2). The linear part of (P1, P2) is
/// ((sqrt3 / 2) L1, -L2) with (L1, L2) = neumann_combinations(u), so
/// L1 = G1 and L2 = G2 hold exactly when P1 = P2 = 0.
[[nodiscard]] inline BoundaryDefect G_eval(const TripleField& u, const JunctionFrame& frame = frame_vectors()) {
    const BoundaryDefect lin = neumann_combinations(u);
    const BoundaryDefect p = conormal_projections(u, frame);
    return {lin.g1 - (2.0 / sqrt3) * p.g1, lin.g2 + p.g2};
}

} // namespace tjsolve
