#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/LU>

#include "tjsolve/frame.hpp"
#include "tjsolve/grid.hpp"

namespace tjsolve {

enum class BoundaryKind { dirichlet, mixed };

/// One Fourier mode of a scalar boundary value problem on [0,1]:
///   a'' - (2 pi k)^2 a = f,  a(1) = phi,
///   a(0) = 0 (dirichlet)  or  a'(0) = -g (mixed; g is the outward normal derivative).
/// f is sampled on the Chebyshev-Lobatto nodes of its own length.
struct ModeProblem {
    int k = 0;
    BoundaryKind kind = BoundaryKind::dirichlet;
    Eigen::VectorXd f;
    double g = 0.0;
    double phi = 0.0;
};

// ---- Clenshaw-Curtis quadrature --------------------------------------------

struct ClenshawCurtisRule {
    Eigen::VectorXd nodes;    // cos(pi j / m) on [-1, 1]
    Eigen::VectorXd weights;  // for [-1, 1]
};

namespace detail {

inline ClenshawCurtisRule build_clenshaw_curtis(int m) {
    ClenshawCurtisRule r;
    r.nodes.resize(m + 1);
    r.weights = Eigen::VectorXd::Zero(m + 1);
    for (int j = 0; j <= m; ++j) r.nodes(j) = std::cos(pi * j / m);
    Eigen::VectorXd v = Eigen::VectorXd::Ones(m - 1);
    for (int j = 1; j < m; ++j) {
        const double theta = pi * j / m;
        double acc = 1.0;
        for (int k = 1; k < m / 2; ++k) acc -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
        acc -= std::cos(m * theta) / (static_cast<double>(m) * m - 1.0);
        v(j - 1) = acc;
    }
    r.weights(0) = 1.0 / (static_cast<double>(m) * m - 1.0);
    r.weights(m) = r.weights(0);
    r.weights.segment(1, m - 1) = 2.0 * v / m;
    return r;
}

} // namespace detail

/// Rule with m + 1 points, m even.
[[nodiscard]] inline std::shared_ptr<const ClenshawCurtisRule> clenshaw_curtis(int m) {
    if (m < 2 || m % 2 != 0) throw std::invalid_argument("Clenshaw-Curtis order must be even and >= 2");
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const ClenshawCurtisRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[m];
    if (!slot) slot = std::make_shared<const ClenshawCurtisRule>(detail::build_clenshaw_curtis(m));
    return slot;
}

namespace detail {

/// Integral over [a, b] of p(t) * kernel(t), p the Chebyshev interpolant of `samples`.
template <class Kernel>
double cc_integrate(const ChebyshevOps& cheb, const Eigen::VectorXd& samples, const ClenshawCurtisRule& rule, double a,
                    double b, Kernel&& kernel) {
    if (b <= a) return 0.0;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (Eigen::Index j = 0; j < rule.nodes.size(); ++j) {
        const double t = mid + half * rule.nodes(j);
        sum += rule.weights(j) * chebyshev_interpolate(cheb, samples, t) * kernel(t);
    }
    return half * sum;
}

inline int quadrature_order(int n, double K) {
    int m = n + static_cast<int>(std::ceil(K)) + 32;
    return m + (m % 2);
}

inline void check_problem(const ModeProblem& p, BoundaryKind expected) {
    if (p.kind != expected) throw std::invalid_argument("mode problem has the wrong boundary kind");
    if (p.k < 0) throw std::invalid_argument("mode wavenumber must be >= 0");
    if (p.f.size() < 2) throw std::invalid_argument("mode forcing needs at least 2 samples");
}

/// Closed-form solution shared by both boundary kinds. Every exponential is
/// evaluated with a non-positive argument:
///   a(x) = [C1 e^{Kx} - A(x) - C2 e^{-Kx} - B(x)] / (2K),
///   A(x) = int_x^1 f(t) e^{K(x-t)} dt,  B(x) = int_0^x f(t) e^{-K(x-t)} dt,
/// with C1 e^{Kx}, C2 e^{-Kx} rewritten after dividing the constants by e^{2K}.
inline Eigen::VectorXd closed_form(const ModeProblem& p) {
    const auto cheb = chebyshev_ops(static_cast<int>(p.f.size()));
    const Eigen::VectorXd& x = cheb->nodes;
    const Eigen::Index n = x.size();
    Eigen::VectorXd a(n);
    const bool mixed = p.kind == BoundaryKind::mixed;

    if (p.k == 0) {
        const auto rule = clenshaw_curtis(quadrature_order(static_cast<int>(n), 0.0));
        auto Q = [&](double xv) {
            return cc_integrate(*cheb, p.f, *rule, 0.0, xv, [xv](double t) { return xv - t; });
        };
        const double q1 = Q(1.0);
        for (Eigen::Index j = 0; j < n; ++j) {
            a(j) = mixed ? Q(x(j)) - p.g * x(j) + p.phi - q1 + p.g : Q(x(j)) + (p.phi - q1) * x(j);
        }
        return a;
    }

    const double K = 2.0 * pi * p.k;
    const auto rule = clenshaw_curtis(quadrature_order(static_cast<int>(n), K));
    const double J1 = cc_integrate(*cheb, p.f, *rule, 0.0, 1.0, [K](double t) { return std::exp(-K * t); });
    const double J2s = cc_integrate(*cheb, p.f, *rule, 0.0, 1.0, [K](double t) { return std::exp(K * (t - 1.0)); });
    const double e2 = std::exp(-2.0 * K);
    const double lead = 2.0 * K * p.phi + J2s;
    const double inner = mixed ? J1 - 2.0 * p.g : -J1;
    const double denom = mixed ? 1.0 + e2 : 1.0 - e2;

    for (Eigen::Index j = 0; j < n; ++j) {
        const double xv = x(j);
        const double A = cc_integrate(*cheb, p.f, *rule, xv, 1.0, [K, xv](double t) { return std::exp(K * (xv - t)); });
        const double B = cc_integrate(*cheb, p.f, *rule, 0.0, xv, [K, xv](double t) { return std::exp(-K * (xv - t)); });
        const double c1 = (lead * std::exp(K * (xv - 1.0)) + inner * std::exp(K * (xv - 2.0))) / denom;
        const double c2 = mixed ? (inner * std::exp(-K * xv) - lead * std::exp(-K * (1.0 + xv))) / denom
                                : (lead * std::exp(-K * (1.0 + xv)) + inner * std::exp(-K * xv)) / denom;
        a(j) = (c1 - A - c2 - B) / (2.0 * K);
    }
    return a;
}

} // namespace detail

/// Variation-of-parameters solution with a(0) = 0, a(1) = phi.
[[nodiscard]] inline Eigen::VectorXd mode_solve_dirichlet(const ModeProblem& p) {
    detail::check_problem(p, BoundaryKind::dirichlet);
    return detail::closed_form(p);
}

/// Variation-of-parameters solution with a'(0) = -g, a(1) = phi.
[[nodiscard]] inline Eigen::VectorXd mode_solve_mixed(const ModeProblem& p) {
    detail::check_problem(p, BoundaryKind::mixed);
    return detail::closed_form(p);
}

/// Factorised Chebyshev collocation operator for one (n, k, kind).
class ModeOperator {
public:
    ModeOperator(int n, int k, BoundaryKind kind) : cheb_(chebyshev_ops(n)), kind_(kind) {
        const double K = 2.0 * pi * k;
        Eigen::MatrixXd A = cheb_->d2 - K * K * Eigen::MatrixXd::Identity(n, n);
        if (kind == BoundaryKind::dirichlet) {
            A.row(0).setZero();
            A(0, 0) = 1.0;
        } else {
            A.row(0) = cheb_->d1.row(0);
        }
        A.row(n - 1).setZero();
        A(n - 1, n - 1) = 1.0;
        lu_ = Eigen::PartialPivLU<Eigen::MatrixXd>(A);
    }

    [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& f, double g, double phi) const {
        const Eigen::Index n = cheb_->nodes.size();
        if (f.size() != n) throw std::invalid_argument("ModeOperator: forcing has wrong length");
        Eigen::VectorXd rhs = f;
        rhs(0) = (kind_ == BoundaryKind::dirichlet) ? 0.0 : -g;
        rhs(n - 1) = phi;
        return lu_.solve(rhs);
    }

    /// Several right-hand sides at once, one per column.
    [[nodiscard]] Eigen::MatrixXd solve(Eigen::MatrixXd rhs) const { return lu_.solve(rhs); }

private:
    std::shared_ptr<const ChebyshevOps> cheb_;
    BoundaryKind kind_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

[[nodiscard]] inline Eigen::VectorXd mode_solve_collocation(const ModeProblem& p) {
    if (p.k < 0) throw std::invalid_argument("mode wavenumber must be >= 0");
    return ModeOperator(static_cast<int>(p.f.size()), p.k, p.kind).solve(p.f, p.g, p.phi);
}

struct ModeResidual {
    double interior;  ///< max |a'' - K^2 a - f| over interior nodes
    double inner_bc;  ///< |a(0)| or |a'(0) + g|
    double outer_bc;  ///< |a(1) - phi|
};

[[nodiscard]] inline ModeResidual mode_residual(const ModeProblem& p, const Eigen::VectorXd& a) {
    const auto cheb = chebyshev_ops(static_cast<int>(a.size()));
    const double K = 2.0 * pi * p.k;
    const Eigen::VectorXd r = cheb->d2 * a - K * K * a - p.f;
    const Eigen::Index n = a.size();
    const double interior = (n > 2) ? r.segment(1, n - 2).cwiseAbs().maxCoeff() : 0.0;
    const double inner = (p.kind == BoundaryKind::dirichlet) ? std::abs(a(0))
                                                             : std::abs(cheb->d1.row(0).dot(a) + p.g);
    return {interior, inner, std::abs(a(n - 1) - p.phi)};
}

} // namespace tjsolve
