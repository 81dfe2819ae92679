#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "tjsolve/frame.hpp"
#include "tjsolve/grid.hpp"

namespace tjsolve {

/// Samples of a 1-periodic function on the y-nodes m / ny.
using PeriodicMap = Eigen::VectorXd;

/// Scalar function on [0,1] x S^1 sampled on a Grid2D. Rows index x, columns y.
class ScalarField {
public:
    explicit ScalarField(Grid2D grid) : grid_(std::move(grid)), values_(Eigen::MatrixXd::Zero(grid_.nx(), grid_.ny())) {}

    ScalarField(Grid2D grid, Eigen::MatrixXd values) : grid_(std::move(grid)), values_(std::move(values)) {
        if (values_.rows() != grid_.nx() || values_.cols() != grid_.ny()) {
            throw std::invalid_argument("ScalarField: value shape does not match grid");
        }
        if (!values_.allFinite()) throw std::invalid_argument("ScalarField: non-finite values");
    }

    template <class Fn>
    [[nodiscard]] static ScalarField sample(const Grid2D& grid, Fn&& fn) {
        Eigen::MatrixXd v(grid.nx(), grid.ny());
        for (int j = 0; j < grid.nx(); ++j) {
            for (int m = 0; m < grid.ny(); ++m) v(j, m) = fn(grid.x(j), grid.y(m));
        }
        return {grid, std::move(v)};
    }

    [[nodiscard]] const Grid2D& grid() const noexcept { return grid_; }
    [[nodiscard]] const Eigen::MatrixXd& values() const noexcept { return values_; }
    [[nodiscard]] double operator()(int j, int m) const { return values_(j, m); }

    [[nodiscard]] double sup_norm() const { return values_.cwiseAbs().maxCoeff(); }

    ScalarField& operator+=(const ScalarField& o) {
        check_same(o);
        values_ += o.values_;
        return *this;
    }
    ScalarField& operator-=(const ScalarField& o) {
        check_same(o);
        values_ -= o.values_;
        return *this;
    }
    ScalarField& operator*=(double s) {
        values_ *= s;
        return *this;
    }
    friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
    friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
    friend ScalarField operator*(double s, ScalarField a) { return a *= s; }

private:
    void check_same(const ScalarField& o) const {
        if (!(grid_ == o.grid_)) throw std::invalid_argument("ScalarField: grid mismatch");
    }

    Grid2D grid_;
    Eigen::MatrixXd values_;
};

/// The unknown (u_1, u_2, u_3) on a shared grid.
class TripleField {
public:
    explicit TripleField(const Grid2D& grid) : comp_{ScalarField(grid), ScalarField(grid), ScalarField(grid)} {}

    TripleField(ScalarField a, ScalarField b, ScalarField c) : comp_{std::move(a), std::move(b), std::move(c)} {
        if (!(comp_[0].grid() == comp_[1].grid()) || !(comp_[0].grid() == comp_[2].grid())) {
            throw std::invalid_argument("TripleField: components live on different grids");
        }
    }

    [[nodiscard]] const Grid2D& grid() const noexcept { return comp_[0].grid(); }
    [[nodiscard]] const ScalarField& operator[](TripleIndex i) const { return comp_[i.slot()]; }
    [[nodiscard]] const ScalarField& operator[](std::size_t slot) const { return comp_.at(slot); }

    [[nodiscard]] double sup_norm() const {
        return std::max({comp_[0].sup_norm(), comp_[1].sup_norm(), comp_[2].sup_norm()});
    }

    TripleField& operator+=(const TripleField& o) {
        for (std::size_t s = 0; s < 3; ++s) comp_[s] += o.comp_[s];
        return *this;
    }
    TripleField& operator-=(const TripleField& o) {
        for (std::size_t s = 0; s < 3; ++s) comp_[s] -= o.comp_[s];
        return *this;
    }
    TripleField& operator*=(double t) {
        for (auto& c : comp_) c *= t;
        return *this;
    }
    friend TripleField operator+(TripleField a, const TripleField& b) { return a += b; }
    friend TripleField operator-(TripleField a, const TripleField& b) { return a -= b; }
    friend TripleField operator*(double t, TripleField a) { return a *= t; }

private:
    std::array<ScalarField, 3> comp_;
};

/// Three periodic maps on a common y-grid: boundary data phi, or the inner traces u_i(0, .).
class PeriodicTriple {
public:
    explicit PeriodicTriple(int ny) : maps_{PeriodicMap::Zero(ny), PeriodicMap::Zero(ny), PeriodicMap::Zero(ny)} {}

    PeriodicTriple(PeriodicMap a, PeriodicMap b, PeriodicMap c) : maps_{std::move(a), std::move(b), std::move(c)} {
        if (maps_[0].size() != maps_[1].size() || maps_[0].size() != maps_[2].size()) {
            throw std::invalid_argument("PeriodicTriple: grid sizes differ");
        }
        for (const auto& m : maps_) {
            if (!m.allFinite()) throw std::invalid_argument("PeriodicTriple: non-finite values");
        }
    }

    template <class Fn>
    [[nodiscard]] static PeriodicTriple sample(int ny, Fn&& fn) {
        PeriodicTriple t(ny);
        for (int s = 0; s < 3; ++s) {
            for (int m = 0; m < ny; ++m) t.maps_[s](m) = fn(TripleIndex(s + 1), static_cast<double>(m) / ny);
        }
        return t;
    }

    [[nodiscard]] int ny() const noexcept { return static_cast<int>(maps_[0].size()); }
    [[nodiscard]] const PeriodicMap& operator[](TripleIndex i) const { return maps_[i.slot()]; }
    [[nodiscard]] const PeriodicMap& operator[](std::size_t slot) const { return maps_.at(slot); }

    [[nodiscard]] PeriodicTriple scaled(double t) const { return {t * maps_[0], t * maps_[1], t * maps_[2]}; }

    [[nodiscard]] double sup_norm() const {
        return std::max({maps_[0].cwiseAbs().maxCoeff(), maps_[1].cwiseAbs().maxCoeff(), maps_[2].cwiseAbs().maxCoeff()});
    }

private:
    std::array<PeriodicMap, 3> maps_;
};

using BoundaryTriple = PeriodicTriple;

enum class BoundaryEnd { inner, outer };

// ---- spectral calculus -------------------------------------------------------

[[nodiscard]] inline ScalarField diff(const ScalarField& f, int order_x, int order_y) {
    if (order_x < 0 || order_y < 0 || order_x + order_y > 2) {
        throw std::invalid_argument("diff: need order_x + order_y <= 2");
    }
    const Grid2D& g = f.grid();
    Eigen::MatrixXd v = f.values();
    if (order_x == 1) v = g.cheb().d1 * v;
    if (order_x == 2) v = g.cheb().d2 * v;
    if (order_y == 1) v = v * g.fourier().d1.transpose();
    if (order_y == 2) v = v * g.fourier().d2.transpose();
    return {g, std::move(v)};
}

[[nodiscard]] inline ScalarField laplacian(const ScalarField& f) {
    return diff(f, 2, 0) + diff(f, 0, 2);
}

[[nodiscard]] inline PeriodicMap trace(const ScalarField& f, BoundaryEnd end) {
    const int row = (end == BoundaryEnd::inner) ? 0 : f.grid().nx() - 1;
    return f.values().row(row).transpose();
}

/// Outward normal derivative on {0} x S^1, i.e. -d/dx at x = 0.
[[nodiscard]] inline PeriodicMap normal_derivative_inner(const ScalarField& f) {
    return -(f.grid().cheb().d1.row(0) * f.values()).transpose();
}

[[nodiscard]] inline PeriodicMap periodic_derivative(const PeriodicMap& p, int order) {
    if (order == 0) return p;
    const auto ops = fourier_ops(static_cast<int>(p.size()));
    if (order == 1) return ops->d1 * p;
    if (order == 2) return ops->d2 * p;
    throw std::invalid_argument("periodic_derivative: order must be 0, 1 or 2");
}

[[nodiscard]] inline PeriodicTriple trace(const TripleField& u, BoundaryEnd end) {
    return {trace(u[0], end), trace(u[1], end), trace(u[2], end)};
}

/// Fraction of spectral energy carried by the top third of the y-wavenumbers,
/// maximised over x-rows. Used as an aliasing indicator.
[[nodiscard]] inline double high_mode_fraction(const Eigen::MatrixXd& rows_by_y) {
    const int ny = static_cast<int>(rows_by_y.cols());
    const auto ops = fourier_ops(ny);
    const Eigen::MatrixXd c = rows_by_y * ops->analysis_cos.transpose();
    const Eigen::MatrixXd s = rows_by_y * ops->analysis_sin.transpose();
    const int cutoff = (2 * ops->kmax) / 3;
    double worst = 0.0;
    for (Eigen::Index r = 0; r < rows_by_y.rows(); ++r) {
        double total = 0.0;
        double high = 0.0;
        for (int k = 0; k <= ops->kmax; ++k) {
            const double e = c(r, k) * c(r, k) + s(r, k) * s(r, k);
            total += e;
            if (k > cutoff) high += e;
        }
        if (total > 0.0) worst = std::max(worst, high / total);
    }
    return worst;
}

inline constexpr double aliasing_threshold = 1e-8;

[[nodiscard]] inline bool aliasing_flag(const ScalarField& f) {
    return high_mode_fraction(f.values()) > aliasing_threshold;
}

[[nodiscard]] inline bool aliasing_flag(const PeriodicMap& p) {
    return high_mode_fraction(p.transpose()) > aliasing_threshold;
}

// ---- off-grid evaluation -----------------------------------------------------

/// Evaluates a 1-periodic trigonometric interpolant at arbitrary y.
class PeriodicInterpolant {
public:
    explicit PeriodicInterpolant(const PeriodicMap& p) {
        const auto ops = fourier_ops(static_cast<int>(p.size()));
        kmax_ = ops->kmax;
        a_ = ops->analysis_cos * p;
        b_ = ops->analysis_sin * p;
    }

    [[nodiscard]] double operator()(double y) const {
        double v = 0.0;
        for (int k = 0; k <= kmax_; ++k) {
            const double th = 2.0 * pi * k * y;
            v += a_(k) * std::cos(th) + b_(k) * std::sin(th);
        }
        return v;
    }

private:
    int kmax_ = 0;
    Eigen::VectorXd a_;
    Eigen::VectorXd b_;
};

/// Spectral interpolant of a ScalarField: trigonometric in y, barycentric Chebyshev in x.
class FieldInterpolant {
public:
    explicit FieldInterpolant(const ScalarField& f) : grid_(f.grid()) {
        const auto& ops = grid_.fourier();
        a_ = f.values() * ops.analysis_cos.transpose();
        b_ = f.values() * ops.analysis_sin.transpose();
    }

    [[nodiscard]] double operator()(double x, double y) const {
        const int kc = grid_.kmax() + 1;
        Eigen::VectorXd cs(kc);
        Eigen::VectorXd sn(kc);
        for (int k = 0; k < kc; ++k) {
            const double th = 2.0 * pi * k * y;
            cs(k) = std::cos(th);
            sn(k) = std::sin(th);
        }
        const Eigen::VectorXd column = a_ * cs + b_ * sn;
        return chebyshev_interpolate(grid_.cheb(), column, x);
    }

private:
    Grid2D grid_;
    Eigen::MatrixXd a_;
    Eigen::MatrixXd b_;
};

} // namespace tjsolve
