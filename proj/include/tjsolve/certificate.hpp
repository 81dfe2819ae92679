#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tjsolve/cutoff.hpp"
#include "tjsolve/nonlinearity.hpp"
#include "tjsolve/norms.hpp"
#include "tjsolve/sampling.hpp"

namespace tjsolve {

struct CertificateSample {
    double proxy;
    double f_sup;
    double g_sup;
};

/// Empirical constants with ||F(u)||_inf <= C_F proxy(u)^2 and ||G(u)||_inf <= C_G proxy(u)^2.
struct StructuralCertificate {
    double sample_radius = 0.0;
    double c_f = 0.0;
    double c_g = 0.0;
    std::vector<CertificateSample> samples;
};

[[nodiscard]] inline double sup_norm(const BoundaryDefect& g) {
    return std::max(g.g1.cwiseAbs().maxCoeff(), g.g2.cwiseAbs().maxCoeff());
}

struct FamilySup {
    double c_f = 0.0;
    double c_g = 0.0;
};

/// Random fields rarely come near the supremum of |F|/proxy^2: the proxy of y-dependent
/// fields is dominated by (2 pi k)^2 factors. The largest ratios sit in the y-independent
/// family, which is small enough to maximise by compass search from a few starts.
[[nodiscard]] inline FamilySup y_independent_sup(const CutoffProfile& cutoff, double sample_radius, double alpha,
                                                 std::uint64_t seed, int starts = 3) {
    const Grid2D grid(24, 8);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    auto search = [&](auto&& value) {
        auto ratio = [&](const Eigen::VectorXd& t) {
            const TripleField u = scale_to_proxy(y_independent_field(grid, t), sample_radius, alpha);
            const double p = norm_proxy(u, alpha);
            return p > 0.0 ? value(u) / (p * p) : 0.0;
        };
        double best = 0.0;
        for (int s = 0; s < starts; ++s) {
            Eigen::VectorXd t(y_independent_dim);
            for (auto& v : t) v = normal(rng);
            t.normalize();
            double r = ratio(t);
            for (double step = 0.5; step > 1e-3; step *= 0.5) {
                bool moved = true;
                while (moved) {
                    moved = false;
                    for (int d = 0; d < y_independent_dim; ++d) {
                        for (double sign : {1.0, -1.0}) {
                            Eigen::VectorXd c = t;
                            c(d) += sign * step;
                            if (c.norm() == 0.0) continue;
                            c.normalize();
                            const double rc = ratio(c);
                            if (rc > r) {
                                r = rc;
                                t = c;
                                moved = true;
                            }
                        }
                    }
                }
            }
            best = std::max(best, r);
        }
        return best;
    };
    return {search([&](const TripleField& u) { return F_eval(u, cutoff).sup_norm(); }),
            search([&](const TripleField& u) { return sup_norm(G_eval(u)); })};
}

[[nodiscard]] inline StructuralCertificate structural_certificate(const Grid2D& grid, const CutoffProfile& cutoff,
                                                                  double sample_radius, int n_samples,
                                                                  std::uint64_t seed = 11, double alpha = 0.5) {
    if (!(sample_radius > 0.0) || sample_radius > cutoff.delta() / 10.0 * (1.0 + 1e-12)) {
        throw std::invalid_argument("structural_certificate: sample radius must lie in (0, delta/10]");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> radius(0.25, 1.0);
    StructuralCertificate cert;
    cert.sample_radius = sample_radius;
    for (int s = 0; s < n_samples; ++s) {
        const TripleField u = scale_to_proxy(random_compatible_field(grid, rng), sample_radius * radius(rng), alpha);
        const double p = norm_proxy(u, alpha);
        if (p == 0.0) continue;
        const CertificateSample cs{p, F_eval(u, cutoff).sup_norm(), sup_norm(G_eval(u))};
        cert.c_f = std::max(cert.c_f, cs.f_sup / (p * p));
        cert.c_g = std::max(cert.c_g, cs.g_sup / (p * p));
        cert.samples.push_back(cs);
    }
    const FamilySup sup = y_independent_sup(cutoff, sample_radius, alpha, seed);
    cert.c_f = std::max(cert.c_f, sup.c_f);
    cert.c_g = std::max(cert.c_g, sup.c_g);
    return cert;
}

[[nodiscard]] inline std::string format_certificate(const StructuralCertificate& c) {
    std::ostringstream os;
    os << "structural certificate (empirical)\n"
       << "  sample radius  " << c.sample_radius << "\n"
       << "  samples        " << c.samples.size() << "\n"
       << "  C_F            " << c.c_f << "\n"
       << "  C_G            " << c.c_g << "\n";
    return os.str();
}

} // namespace tjsolve
