#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "tjsolve/field.hpp"

namespace tjsolve {

// Discrete stand-ins for C^{k,alpha} norms:
//   sum_{j <= k} max_grid |D^j u| + max_pairs |D^k u(p) - D^k u(q)| / dist(p, q)^alpha,
// where |D^j u| is the largest component of the order-j derivative and the
// pairs are all grid-row and grid-column pairs at lags 1, 2, 4, ...

namespace detail {

inline double holder_seminorm_2d(const Eigen::MatrixXd& v, const Grid2D& g, double alpha) {
    double best = 0.0;
    const int nx = g.nx();
    const int ny = g.ny();
    for (int lag = 1; lag <= ny / 2; lag *= 2) {
        const double d = std::pow(static_cast<double>(lag) / ny, alpha);
        for (int j = 0; j < nx; ++j) {
            for (int m = 0; m < ny; ++m) best = std::max(best, std::abs(v(j, m) - v(j, (m + lag) % ny)) / d);
        }
    }
    for (int lag = 1; lag < nx; lag *= 2) {
        for (int j = 0; j + lag < nx; ++j) {
            const double d = std::pow(g.x(j + lag) - g.x(j), alpha);
            for (int m = 0; m < ny; ++m) best = std::max(best, std::abs(v(j + lag, m) - v(j, m)) / d);
        }
    }
    return best;
}

inline double holder_seminorm_1d(const PeriodicMap& p, double alpha) {
    const int n = static_cast<int>(p.size());
    double best = 0.0;
    for (int lag = 1; lag <= n / 2; lag *= 2) {
        const double d = std::pow(static_cast<double>(lag) / n, alpha);
        for (int m = 0; m < n; ++m) best = std::max(best, std::abs(p(m) - p((m + lag) % n)) / d);
    }
    return best;
}

inline void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("Hoelder exponent must lie in (0,1)");
}

} // namespace detail

/// C^{order,alpha} proxy of one scalar field, order in {0, 1, 2}.
[[nodiscard]] inline double holder_proxy(const ScalarField& f, int order, double alpha) {
    detail::check_alpha(alpha);
    if (order < 0 || order > 2) throw std::invalid_argument("holder_proxy: order must be 0, 1 or 2");
    double total = 0.0;
    std::vector<ScalarField> top;
    for (int j = 0; j <= order; ++j) {
        double sup = 0.0;
        for (int ox = j; ox >= 0; --ox) {
            ScalarField d = diff(f, ox, j - ox);
            sup = std::max(sup, d.sup_norm());
            if (j == order) top.push_back(std::move(d));
        }
        total += sup;
    }
    double semi = 0.0;
    for (const auto& d : top) semi = std::max(semi, detail::holder_seminorm_2d(d.values(), f.grid(), alpha));
    return total + semi;
}

[[nodiscard]] inline double holder_proxy(const PeriodicMap& p, int order, double alpha) {
    detail::check_alpha(alpha);
    if (order < 0 || order > 2) throw std::invalid_argument("holder_proxy: order must be 0, 1 or 2");
    double total = 0.0;
    PeriodicMap top = p;
    for (int j = 0; j <= order; ++j) {
        top = periodic_derivative(p, j);
        total += top.cwiseAbs().maxCoeff();
    }
    return total + detail::holder_seminorm_1d(top, alpha);
}

/// Triple C^{2,alpha} proxy: sum of the component proxies.
[[nodiscard]] inline double norm_proxy(const TripleField& u, double alpha = 0.5) {
    return holder_proxy(u[0], 2, alpha) + holder_proxy(u[1], 2, alpha) + holder_proxy(u[2], 2, alpha);
}

[[nodiscard]] inline double norm_proxy(const PeriodicTriple& phi, int order = 2, double alpha = 0.5) {
    return holder_proxy(phi[0], order, alpha) + holder_proxy(phi[1], order, alpha) + holder_proxy(phi[2], order, alpha);
}

} // namespace tjsolve
