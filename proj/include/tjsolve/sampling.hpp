#pragma once

#include <cmath>
#include <random>

#include "tjsolve/field.hpp"
#include "tjsolve/frame.hpp"
#include "tjsolve/norms.hpp"

namespace tjsolve {

/// Random smooth triple with compatible inner traces:
///   u_i = <c(y), nu_i> (1 - x)^2 + x r_i(x, y),
/// c and r_i trigonometric polynomials in y up to `max_mode`, r_i quadratic in x.
[[nodiscard]] inline TripleField random_compatible_field(const Grid2D& grid, std::mt19937_64& rng, int max_mode = 2) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const JunctionFrame frame = frame_vectors();
    const int nk = max_mode + 1;
    Eigen::MatrixXd cc(nk, 2), cs(nk, 2);
    for (int k = 0; k < nk; ++k) {
        const double decay = 1.0 / (1.0 + k * k);
        for (int d = 0; d < 2; ++d) {
            cc(k, d) = decay * normal(rng);
            cs(k, d) = (k == 0) ? 0.0 : decay * normal(rng);
        }
    }
    // r[i](deg * nk + k, cos | sin)
    std::array<Eigen::MatrixXd, 3> r;
    for (int i = 0; i < 3; ++i) {
        r[i] = Eigen::MatrixXd(3 * nk, 2);
        for (int deg = 0; deg < 3; ++deg) {
            for (int k = 0; k < nk; ++k) {
                const double decay = 1.0 / ((1.0 + k * k) * (1.0 + deg));
                r[i](deg * nk + k, 0) = decay * normal(rng);
                r[i](deg * nk + k, 1) = (k == 0) ? 0.0 : decay * normal(rng);
            }
        }
    }
    auto component = [&](int i) {
        return ScalarField::sample(grid, [&](double x, double y) {
            Vec2 c = Vec2::Zero();
            double rv = 0.0;
            for (int k = 0; k < nk; ++k) {
                const double ck = std::cos(2.0 * pi * k * y);
                const double sk = std::sin(2.0 * pi * k * y);
                c += ck * cc.row(k).transpose() + sk * cs.row(k).transpose();
                for (int deg = 0; deg < 3; ++deg) {
                    rv += std::pow(x, deg) * (ck * r[i](deg * nk + k, 0) + sk * r[i](deg * nk + k, 1));
                }
            }
            return c.dot(frame.nu[i]) * (1.0 - x) * (1.0 - x) + x * rv;
        });
    };
    return {component(0), component(1), component(2)};
}

inline constexpr int y_independent_dim = 11;

/// y-independent member of the same family: c = (t0, t1), r_i = t[2+3i] + t[3+3i] x + t[4+3i] x^2.
[[nodiscard]] inline TripleField y_independent_field(const Grid2D& grid, const Eigen::VectorXd& t) {
    const JunctionFrame frame = frame_vectors();
    const Vec2 c(t(0), t(1));
    auto component = [&](int i) {
        return ScalarField::sample(grid, [&](double x, double) {
            const double rv = t(2 + 3 * i) + x * (t(3 + 3 * i) + x * t(4 + 3 * i));
            return c.dot(frame.nu[i]) * (1.0 - x) * (1.0 - x) + x * rv;
        });
    };
    return {component(0), component(1), component(2)};
}

[[nodiscard]] inline TripleField scale_to_proxy(const TripleField& u, double target, double alpha = 0.5) {
    const double p = norm_proxy(u, alpha);
    if (p == 0.0) return u;
    return (target / p) * u;
}

/// Random trigonometric boundary data with modes up to `max_mode`, coefficients decaying like 1/(1+k^2).
[[nodiscard]] inline PeriodicTriple random_boundary(int ny, std::mt19937_64& rng, int max_mode = 3) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::array<PeriodicMap, 3> maps;
    for (auto& mp : maps) {
        mp = PeriodicMap::Zero(ny);
        for (int k = 0; k <= max_mode; ++k) {
            const double decay = 1.0 / (1.0 + k * k);
            const double a = decay * normal(rng);
            const double b = (k == 0) ? 0.0 : decay * normal(rng);
            for (int m = 0; m < ny; ++m) {
                const double y = static_cast<double>(m) / ny;
                mp(m) += a * std::cos(2.0 * pi * k * y) + b * std::sin(2.0 * pi * k * y);
            }
        }
    }
    return {maps[0], maps[1], maps[2]};
}

[[nodiscard]] inline PeriodicTriple scale_to_proxy(const PeriodicTriple& phi, double target, double alpha = 0.5) {
    const double p = norm_proxy(phi, 2, alpha);
    if (p == 0.0) return phi;
    return phi.scaled(target / p);
}

} // namespace tjsolve
