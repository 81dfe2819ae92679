#pragma once

#include <array>
#include <cmath>
#include <string>

#include <Eigen/Core>

#include "tjsolve/cutoff.hpp"
#include "tjsolve/errors.hpp"
#include "tjsolve/field.hpp"
#include "tjsolve/frame.hpp"
#include "tjsolve/norms.hpp"

namespace tjsolve {

/// 2-vector samples on the y-nodes; row m is the value at y = m / ny.
using PeriodicCurve = Eigen::Matrix<double, Eigen::Dynamic, 2>;

inline constexpr double compatibility_tolerance = 1e-10;

/// Scalar amplitude <w_i, n_i> = (u_{i-1}(0,.) - u_{i+1}(0,.)) / sqrt(3).
[[nodiscard]] inline PeriodicMap wall_amplitude(const PeriodicTriple& traces, TripleIndex i) {
    return (traces[i.pred()] - traces[i.succ()]) / sqrt3;
}

/// w_i(y) = <w_i, n_i>(y) n_i.
[[nodiscard]] inline PeriodicCurve wall_offset(const PeriodicTriple& traces, TripleIndex i,
                                               const JunctionFrame& frame = frame_vectors()) {
    const PeriodicMap s = wall_amplitude(traces, i);
    PeriodicCurve w(s.size(), 2);
    w.col(0) = s * frame.conormal(i).x();
    w.col(1) = s * frame.conormal(i).y();
    return w;
}

/// v_i = w_i + u_i(0,.) nu_i. The three candidates agree exactly when the traces sum to zero.
[[nodiscard]] inline PeriodicCurve spine_candidate(const PeriodicTriple& traces, TripleIndex i,
                                                   const JunctionFrame& frame = frame_vectors()) {
    PeriodicCurve v = wall_offset(traces, i, frame);
    v.col(0) += traces[i] * frame.normal(i).x();
    v.col(1) += traces[i] * frame.normal(i).y();
    return v;
}

[[nodiscard]] inline double trace_sum_defect(const PeriodicTriple& traces) {
    return (traces[0] + traces[1] + traces[2]).cwiseAbs().maxCoeff();
}

/// Junction curve y -> v(y) with spectral derivative.
class SpineCurve {
public:
    explicit SpineCurve(PeriodicCurve values) : values_(std::move(values)) {
        derivative_.resize(values_.rows(), 2);
        derivative_.col(0) = periodic_derivative(values_.col(0), 1);
        derivative_.col(1) = periodic_derivative(values_.col(1), 1);
    }

    [[nodiscard]] const PeriodicCurve& values() const noexcept { return values_; }
    [[nodiscard]] const PeriodicCurve& derivative() const noexcept { return derivative_; }
    [[nodiscard]] int ny() const noexcept { return static_cast<int>(values_.rows()); }

    [[nodiscard]] Vec2 at(double y) const {
        return {PeriodicInterpolant(values_.col(0))(y), PeriodicInterpolant(values_.col(1))(y)};
    }

    /// sup_y |v(y)| over the nodes.
    [[nodiscard]] double sup_norm() const { return values_.rowwise().norm().maxCoeff(); }

private:
    PeriodicCurve values_;
    PeriodicCurve derivative_;
};

[[nodiscard]] inline SpineCurve spine_from_traces(const PeriodicTriple& traces,
                                                 double tolerance = compatibility_tolerance,
                                                 const JunctionFrame& frame = frame_vectors()) {
    const double defect = trace_sum_defect(traces);
    if (defect > tolerance) {
        throw CompatibilityViolation("inner traces do not sum to zero (max |sum| = " + std::to_string(defect) + ")");
    }
    return SpineCurve(spine_candidate(traces, TripleIndex(1), frame));
}

/// Parametrisation of the three perturbed sheets in the unrolled chart (p1, p2, y):
/// (x, y) -> (-x n_i + u_i(x,y) nu_i + eta(x) w_i(y), y).
class SurfaceChart {
public:
    SurfaceChart(const TripleField& u, const CutoffProfile& cutoff, const JunctionFrame& frame = frame_vectors())
        : cutoff_(cutoff), frame_(frame),
          heights_{FieldInterpolant(u[0]), FieldInterpolant(u[1]), FieldInterpolant(u[2])},
          walls_{PeriodicInterpolant(wall_amplitude(trace(u, BoundaryEnd::inner), TripleIndex(1))),
                 PeriodicInterpolant(wall_amplitude(trace(u, BoundaryEnd::inner), TripleIndex(2))),
                 PeriodicInterpolant(wall_amplitude(trace(u, BoundaryEnd::inner), TripleIndex(3)))} {}

    /// y is used unwrapped for the third coordinate and wrapped for evaluation.
    [[nodiscard]] Vec3 embed(TripleIndex i, double x, double y) const {
        if (!(x >= 0.0 && x <= 1.0)) throw std::out_of_range("embed: x outside [0,1]");
        const double yw = y - std::floor(y);
        const double height = heights_[i.slot()](x, yw);
        const double wall = walls_[i.slot()](yw);
        const double eta = cutoff_.eval(x).eta;
        const Vec2 p = (-x + eta * wall) * frame_.conormal(i) + height * frame_.normal(i);
        return {p.x(), p.y(), y};
    }

    [[nodiscard]] const CutoffProfile& cutoff() const noexcept { return cutoff_; }

private:
    CutoffProfile cutoff_;
    JunctionFrame frame_;
    std::array<FieldInterpolant, 3> heights_;
    std::array<PeriodicInterpolant, 3> walls_;
};

[[nodiscard]] inline Vec3 embed_point(TripleIndex i, double x, double y, const TripleField& u,
                                      const JunctionFrame& frame, const CutoffProfile& cutoff) {
    return SurfaceChart(u, cutoff, frame).embed(i, x, y);
}

struct C0Diagnostics {
    double max_trace_sum;        ///< max_y |sum_i u_i(0,y)|
    double monotonicity_margin;  ///< min of 1 - eta'(x) <w_i, n_i>(y); > 0 means no self-intersection
    double proxy;                ///< C^{2,alpha} proxy of u
    bool small;                  ///< proxy < delta / 10
};

[[nodiscard]] inline C0Diagnostics check_c0_compatibility(const TripleField& u, const CutoffProfile& cutoff,
                                                          double alpha = 0.5) {
    const PeriodicTriple traces = trace(u, BoundaryEnd::inner);
    const Grid2D& g = u.grid();
    // Grid x-nodes plus the point of steepest descent of eta.
    std::vector<double> slopes;
    for (int j = 0; j < g.nx(); ++j) slopes.push_back(cutoff.eval(g.x(j)).d1);
    slopes.push_back(cutoff.eval(1.5 * cutoff.delta()).d1);

    double margin = 1.0;
    for (TripleIndex i : TripleIndex::all()) {
        const PeriodicMap s = wall_amplitude(traces, i);
        for (double d1 : slopes) {
            for (Eigen::Index m = 0; m < s.size(); ++m) margin = std::min(margin, 1.0 - d1 * s(m));
        }
    }
    const double proxy = norm_proxy(u, alpha);
    return {trace_sum_defect(traces), margin, proxy, proxy < cutoff.delta() / 10.0};
}

} // namespace tjsolve
