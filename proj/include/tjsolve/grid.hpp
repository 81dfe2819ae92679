#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "tjsolve/frame.hpp"

namespace tjsolve {

/// Chebyshev-Lobatto nodes on [0,1] (x_0 = 0, x_{n-1} = 1) with spectral
/// differentiation matrices and barycentric weights.
struct ChebyshevOps {
    Eigen::VectorXd nodes;
    Eigen::MatrixXd d1;
    Eigen::MatrixXd d2;
    Eigen::VectorXd bary;
};

namespace detail {

inline ChebyshevOps build_chebyshev(int n) {
    const int m = n - 1;
    ChebyshevOps ops;
    ops.nodes.resize(n);
    ops.bary.resize(n);
    for (int j = 0; j < n; ++j) {
        // (1 - cos(pi j / m)) / 2 written as sin^2 to keep x_j small near 0 accurate.
        const double s = std::sin(pi * j / (2.0 * m));
        ops.nodes(j) = s * s;
        ops.bary(j) = ((j % 2 == 0) ? 1.0 : -1.0) * ((j == 0 || j == m) ? 0.5 : 1.0);
    }
    ops.nodes(m) = 1.0;

    // Off-diagonal entries from node differences computed with the
    // sine identity, diagonal by the negative-sum rule.
    ops.d1 = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            // x_i - x_j = sin(pi (i + j) / 2m) sin(pi (i - j) / 2m)
            const double dx = std::sin(pi * (i + j) / (2.0 * m)) * std::sin(pi * (i - j) / (2.0 * m));
            const double v = (ops.bary(j) / ops.bary(i)) / dx;
            ops.d1(i, j) = v;
            row_sum += v;
        }
        ops.d1(i, i) = -row_sum;
    }
    ops.d2 = ops.d1 * ops.d1;
    for (int i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i != j) row_sum += ops.d2(i, j);
        }
        ops.d2(i, i) = -row_sum;
    }
    return ops;
}

} // namespace detail

[[nodiscard]] inline std::shared_ptr<const ChebyshevOps> chebyshev_ops(int n) {
    if (n < 2) throw std::invalid_argument("Chebyshev grid needs at least 2 nodes");
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const ChebyshevOps>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<const ChebyshevOps>(detail::build_chebyshev(n));
    return slot;
}

/// Barycentric interpolation of Chebyshev-node samples at an arbitrary x in [0,1].
[[nodiscard]] inline double chebyshev_interpolate(const ChebyshevOps& ops, const Eigen::Ref<const Eigen::VectorXd>& values,
                                                  double x) {
    double num = 0.0;
    double den = 0.0;
    for (Eigen::Index j = 0; j < ops.nodes.size(); ++j) {
        const double diff = x - ops.nodes(j);
        if (diff == 0.0) return values(j);
        const double w = ops.bary(j) / diff;
        num += w * values(j);
        den += w;
    }
    return num / den;
}

/// Real discrete Fourier transform on n equispaced points of the unit circle.
/// Coefficients are stored as cosine/sine pairs for k = 0..n/2; the sine
/// entries at k = 0 and k = n/2 are identically zero.
struct FourierOps {
    int n = 0;
    int kmax = 0;
    Eigen::MatrixXd analysis_cos;   // (kmax+1) x n
    Eigen::MatrixXd analysis_sin;   // (kmax+1) x n
    Eigen::MatrixXd synthesis_cos;  // n x (kmax+1)
    Eigen::MatrixXd synthesis_sin;  // n x (kmax+1)
    Eigen::MatrixXd d1;             // n x n, Nyquist mode dropped
    Eigen::MatrixXd d2;             // n x n, Nyquist mode kept
};

namespace detail {

inline FourierOps build_fourier(int n) {
    FourierOps ops;
    ops.n = n;
    ops.kmax = n / 2;
    const int kc = ops.kmax + 1;
    ops.analysis_cos = Eigen::MatrixXd::Zero(kc, n);
    ops.analysis_sin = Eigen::MatrixXd::Zero(kc, n);
    ops.synthesis_cos = Eigen::MatrixXd::Zero(n, kc);
    ops.synthesis_sin = Eigen::MatrixXd::Zero(n, kc);
    for (int k = 0; k < kc; ++k) {
        const double scale = (k == 0 || k == ops.kmax) ? 1.0 / n : 2.0 / n;
        for (int m = 0; m < n; ++m) {
            // Reduce k*m mod n before the trig call so tables are exact at symmetric points.
            const long long r = (static_cast<long long>(k) * m) % n;
            const double theta = 2.0 * pi * static_cast<double>(r) / n;
            const double c = std::cos(theta);
            const double s = (k == 0 || k == ops.kmax) ? 0.0 : std::sin(theta);
            ops.analysis_cos(k, m) = scale * c;
            ops.analysis_sin(k, m) = scale * s;
            ops.synthesis_cos(m, k) = c;
            ops.synthesis_sin(m, k) = s;
        }
    }
    Eigen::VectorXd w1 = Eigen::VectorXd::Zero(kc);
    Eigen::VectorXd w2 = Eigen::VectorXd::Zero(kc);
    for (int k = 0; k < kc; ++k) {
        const double K = 2.0 * pi * k;
        w1(k) = (k == ops.kmax) ? 0.0 : K;
        w2(k) = -K * K;
    }
    // d/dy (a cos + b sin) = K (b cos - a sin)
    ops.d1 = ops.synthesis_cos * w1.asDiagonal() * ops.analysis_sin - ops.synthesis_sin * w1.asDiagonal() * ops.analysis_cos;
    ops.d2 = ops.synthesis_cos * w2.asDiagonal() * ops.analysis_cos + ops.synthesis_sin * w2.asDiagonal() * ops.analysis_sin;
    return ops;
}

} // namespace detail

[[nodiscard]] inline std::shared_ptr<const FourierOps> fourier_ops(int n) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("Fourier grid size must be even and >= 2");
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const FourierOps>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<const FourierOps>(detail::build_fourier(n));
    return slot;
}

/// Chebyshev x Fourier tensor grid on [0,1] x S^1, S^1 = R/Z.
class Grid2D {
public:
    Grid2D(int nx, int ny) {
        if (nx < 8) throw std::invalid_argument("Grid2D: nx must be >= 8, got " + std::to_string(nx));
        if (ny < 8 || ny % 2 != 0) {
            throw std::invalid_argument("Grid2D: ny must be even and >= 8, got " + std::to_string(ny));
        }
        cheb_ = chebyshev_ops(nx);
        fourier_ = fourier_ops(ny);
    }

    [[nodiscard]] int nx() const noexcept { return static_cast<int>(cheb_->nodes.size()); }
    [[nodiscard]] int ny() const noexcept { return fourier_->n; }
    [[nodiscard]] int kmax() const noexcept { return fourier_->kmax; }

    [[nodiscard]] double x(int j) const { return cheb_->nodes(j); }
    [[nodiscard]] double y(int m) const { return static_cast<double>(m) / ny(); }

    [[nodiscard]] const ChebyshevOps& cheb() const noexcept { return *cheb_; }
    [[nodiscard]] const FourierOps& fourier() const noexcept { return *fourier_; }

    friend bool operator==(const Grid2D& a, const Grid2D& b) noexcept {
        return a.nx() == b.nx() && a.ny() == b.ny();
    }

private:
    std::shared_ptr<const ChebyshevOps> cheb_;
    std::shared_ptr<const FourierOps> fourier_;
};

} // namespace tjsolve
