#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "tjsolve/certificate.hpp"
#include "tjsolve/cutoff.hpp"
#include "tjsolve/errors.hpp"
#include "tjsolve/geometry.hpp"
#include "tjsolve/linear_system.hpp"
#include "tjsolve/nonlinearity.hpp"
#include "tjsolve/norms.hpp"
#include "tjsolve/sampling.hpp"

namespace tjsolve {

struct SolveOptions {
    double tol = 1e-10;
    int max_iter = 50;
    std::optional<double> r_guard;  ///< default min(delta / 10, 0.05)
    double alpha = 0.5;
    std::optional<double> epsilon;  ///< warning threshold on proxy(phi); estimated when unset

    [[nodiscard]] double guard_radius(const CutoffProfile& cutoff) const {
        return r_guard.value_or(std::min(cutoff.delta() / 10.0, 0.05));
    }

    void validate() const {
        if (!(tol > 0.0)) throw ConfigError("tol must be positive");
        if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
        if (r_guard && !(*r_guard > 0.0)) throw ConfigError("r_guard must be positive");
        if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
    }
};

enum class SolveStatus { converged, no_convergence, guard_violation };

[[nodiscard]] inline std::string to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::no_convergence: return "no_convergence";
    case SolveStatus::guard_violation: return "guard_violation";
    }
    return "unknown";
}

struct FinalResiduals {
    double laplace = 0.0;      ///< max |Delta u_i - F_i(u)| over interior nodes
    double boundary = 0.0;     ///< max |B u - (0, G1(u), G2(u))| on {0} x S^1
    double conormal = 0.0;     ///< max_y |S(y)|
    double outer_trace = 0.0;  ///< max |u(1, .) - phi|
    double trace_sum = 0.0;    ///< max |sum_i u_i(0, .)|

    [[nodiscard]] double max() const { return std::max({laplace, boundary, conormal, outer_trace, trace_sum}); }
};

/// The ball test uses the largest component proxy: the embeddedness argument only
/// needs each sheet below delta/10, and the summed proxy of the rotated cone with
/// beta = delta/25 already exceeds delta/10. The summed proxy is reported alongside.
struct GuardRecord {
    double proxy = 0.0;            ///< summed proxy of the iterate
    double component_proxy = 0.0;  ///< max_i proxy(u_i)
    double r_guard = 0.0;
    double embedded_margin = 1.0;
    [[nodiscard]] bool proxy_ok() const { return component_proxy <= r_guard; }
    [[nodiscard]] bool margin_ok() const { return embedded_margin > 0.0; }
};

struct SolveReport {
    SolveStatus status = SolveStatus::no_convergence;
    int iterations = 0;
    std::vector<double> update_norms;        ///< sup |u_{n+1} - u_n|
    std::vector<double> update_proxies;      ///< proxy(u_{n+1} - u_n)
    std::vector<double> contraction_ratios;  ///< update_norms[j+1] / update_norms[j]
    std::vector<double> proxies;             ///< proxy(u_{n+1})
    std::vector<bool> aliasing;              ///< F(u_n) under-resolved in y
    FinalResiduals residuals;
    GuardRecord guards;
    double phi_proxy = 0.0;
    double epsilon = 0.0;
    double residual_gate = 0.0;
    std::vector<std::string> warnings;
    std::string message;
};

struct SolveResult {
    TripleField u;
    SolveReport report;
};

/// One application of the fixed-point map: solve Delta w = F(u), B w = (0, G(u)), w(1,.) = phi.
[[nodiscard]] inline TripleField picard_step(const TripleField& u, const PeriodicTriple& phi,
                                             const CutoffProfile& cutoff) {
    return solve_linear_system(F_eval(u, cutoff), G_eval(u), phi);
}

[[nodiscard]] inline FinalResiduals final_residuals(const TripleField& u, const PeriodicTriple& phi,
                                                    const CutoffProfile& cutoff) {
    FinalResiduals r;
    const TripleField F = F_eval(u, cutoff);
    const Grid2D& g = u.grid();
    for (std::size_t s = 0; s < 3; ++s) {
        const Eigen::MatrixXd d = laplacian(u[s]).values() - F[s].values();
        r.laplace = std::max(r.laplace, d.middleRows(1, g.nx() - 2).cwiseAbs().maxCoeff());
    }
    const BoundaryOperatorValues b = boundary_operator(u);
    const BoundaryDefect G = G_eval(u);
    r.trace_sum = b.trace_sum.cwiseAbs().maxCoeff();
    r.boundary = std::max({r.trace_sum, (b.b2 - G.g1).cwiseAbs().maxCoeff(), (b.b3 - G.g2).cwiseAbs().maxCoeff()});
    r.conormal = conormal_defect(u).rowwise().norm().maxCoeff();
    const PeriodicTriple outer = trace(u, BoundaryEnd::outer);
    for (std::size_t s = 0; s < 3; ++s) {
        r.outer_trace = std::max(r.outer_trace, (outer[s] - phi[s]).cwiseAbs().maxCoeff());
    }
    return r;
}

/// r_guard (1/C1 - r_guard), C1 from small empirical probes. Deterministic, so cached per configuration.
[[nodiscard]] inline double default_epsilon(const Grid2D& grid, const CutoffProfile& cutoff, double r_guard,
                                            double alpha = 0.5) {
    using Key = std::tuple<int, int, double, double, double>;
    static std::mutex mutex;
    static std::map<Key, double> cache;
    const Key key{grid.nx(), grid.ny(), cutoff.delta(), r_guard, alpha};
    {
        const std::lock_guard<std::mutex> lock(mutex);
        if (const auto it = cache.find(key); it != cache.end()) return it->second;
    }
    const double radius = std::min(r_guard, cutoff.delta() / 10.0);
    const StructuralCertificate cert = structural_certificate(grid, cutoff, radius, 6, 11, alpha);
    const SchauderProbe probe = schauder_probe(grid, 6, 7, alpha);
    const ContractionEstimates est = contraction_estimates(probe.c_lin, cert.c_f, cert.c_g);
    const double eps = r_guard * (1.0 / est.c1 - r_guard);
    const std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(key, eps);
    return eps;
}

/// u_{n+1} = picard_step(u_n, phi) from u_0 = 0 until the sup-norm update drops below tol.
[[nodiscard]] inline SolveResult solve_nonlinear(const PeriodicTriple& phi, const Grid2D& grid,
                                                 const CutoffProfile& cutoff, const SolveOptions& opts = {}) {
    opts.validate();
    if (phi.ny() != grid.ny()) throw ConfigError("boundary data does not match the grid");
    SolveResult res{TripleField(grid), {}};
    SolveReport& rep = res.report;
    rep.guards.r_guard = opts.guard_radius(cutoff);
    rep.phi_proxy = norm_proxy(phi, 2, opts.alpha);
    rep.epsilon = opts.epsilon ? *opts.epsilon : default_epsilon(grid, cutoff, rep.guards.r_guard, opts.alpha);
    if (rep.phi_proxy > rep.epsilon) {
        rep.warnings.push_back("proxy(phi) = " + std::to_string(rep.phi_proxy) + " exceeds epsilon = " +
                               std::to_string(rep.epsilon) + "; outside the certified smallness regime");
    }
    for (std::size_t s = 0; s < 3; ++s) {
        if (aliasing_flag(phi[s])) rep.warnings.push_back("boundary data is under-resolved on the y-grid");
    }

    auto violate = [&](std::string why) {
        rep.status = SolveStatus::guard_violation;
        rep.message = std::move(why);
    };

    bool done = false;
    for (int it = 0; it < opts.max_iter && !done; ++it) {
        TripleField next(grid);
        try {
            const TripleField F = F_eval(res.u, cutoff);
            rep.aliasing.push_back(aliasing_flag(F[0]) || aliasing_flag(F[1]) || aliasing_flag(F[2]));
            next = solve_linear_system(F, G_eval(res.u), phi);
        } catch (const DegenerateMetric& e) {
            violate(std::string("degenerate metric: ") + e.what());
            break;
        }
        const TripleField delta = next - res.u;
        const double upd = delta.sup_norm();
        rep.iterations = it + 1;
        if (!rep.update_norms.empty() && rep.update_norms.back() > 0.0) {
            rep.contraction_ratios.push_back(upd / rep.update_norms.back());
        }
        rep.update_norms.push_back(upd);
        rep.update_proxies.push_back(norm_proxy(delta, opts.alpha));
        res.u = next;
        const C0Diagnostics c0 = check_c0_compatibility(res.u, cutoff, opts.alpha);
        rep.proxies.push_back(c0.proxy);
        rep.guards.proxy = c0.proxy;
        rep.guards.component_proxy = std::max({holder_proxy(res.u[0], 2, opts.alpha), holder_proxy(res.u[1], 2, opts.alpha),
                                               holder_proxy(res.u[2], 2, opts.alpha)});
        rep.guards.embedded_margin = c0.monotonicity_margin;
        if (!std::isfinite(upd)) {
            rep.status = SolveStatus::no_convergence;
            rep.message = "non-finite update";
            break;
        }
        if (!rep.guards.proxy_ok()) {
            violate("iterate component proxy " + std::to_string(rep.guards.component_proxy) +
                    " left the guard ball of radius " +
                    std::to_string(rep.guards.r_guard));
            break;
        }
        if (!rep.guards.margin_ok()) {
            violate("embeddedness margin " + std::to_string(c0.monotonicity_margin) + " is not positive");
            break;
        }
        done = upd < opts.tol;
    }

    if (rep.guards.proxy > rep.guards.r_guard && rep.guards.proxy_ok()) {
        rep.warnings.push_back("summed proxy " + std::to_string(rep.guards.proxy) + " exceeds r_guard; components are inside");
    }
    if (rep.status == SolveStatus::guard_violation) {
        try {
            rep.residuals = final_residuals(res.u, phi, cutoff);
        } catch (const DegenerateMetric&) {
            rep.residuals = {};
        }
        return res;
    }
    rep.residuals = final_residuals(res.u, phi, cutoff);
    rep.residual_gate = 10.0 * opts.tol * std::max(1.0, rep.guards.proxy);
    if (!done) {
        rep.status = SolveStatus::no_convergence;
        if (rep.message.empty()) rep.message = "max_iter reached without the update dropping below tol";
    } else if (rep.residuals.max() > rep.residual_gate) {
        rep.status = SolveStatus::no_convergence;
        rep.message = "update converged but residual " + std::to_string(rep.residuals.max()) +
                      " exceeds gate " + std::to_string(rep.residual_gate);
    } else {
        rep.status = SolveStatus::converged;
        rep.message = "converged";
    }
    return res;
}

[[nodiscard]] inline SolveResult solve_nonlinear(const PeriodicTriple& phi, const CutoffProfile& cutoff,
                                                 const SolveOptions& opts = {}) {
    return solve_nonlinear(phi, Grid2D(48, phi.ny()), cutoff, opts);
}

struct ContractionDiagnostics {
    ContractionEstimates estimates;
    std::vector<double> ratios;  ///< proxy(A^n u - A^n v) / proxy(A^{n-1} u - A^{n-1} v)
    std::vector<double> differences;
};

/// Runs the map from u_0 = 0 and from a random start of the same proxy size as phi.
[[nodiscard]] inline ContractionDiagnostics contraction_diagnostics(const PeriodicTriple& phi, const Grid2D& grid,
                                                                    const CutoffProfile& cutoff,
                                                                    const SolveOptions& opts = {},
                                                                    std::uint64_t seed = 5) {
    ContractionDiagnostics d;
    const double r_guard = opts.guard_radius(cutoff);
    const StructuralCertificate cert =
        structural_certificate(grid, cutoff, std::min(r_guard, cutoff.delta() / 10.0), 6, 11, opts.alpha);
    d.estimates = contraction_estimates(schauder_probe(grid, 6, 7, opts.alpha).c_lin, cert.c_f, cert.c_g);

    const double size = norm_proxy(phi, 2, opts.alpha);
    if (size == 0.0) return d;
    std::mt19937_64 rng(seed);
    TripleField u(grid);
    TripleField v = scale_to_proxy(random_compatible_field(grid, rng), size, opts.alpha);
    double prev = norm_proxy(u - v, opts.alpha);
    d.differences.push_back(prev);
    // Below the solver tolerance the proxy of the difference is round-off amplified by
    // second derivatives, and ratios carry no information.
    const double floor = opts.tol * std::max(1.0, size);
    for (int it = 0; it < opts.max_iter && prev > floor; ++it) {
        try {
            u = picard_step(u, phi, cutoff);
            v = picard_step(v, phi, cutoff);
        } catch (const DegenerateMetric&) {
            d.ratios.push_back(std::numeric_limits<double>::infinity());
            break;
        }
        const double cur = norm_proxy(u - v, opts.alpha);
        d.ratios.push_back(cur / prev);
        d.differences.push_back(cur);
        prev = cur;
    }
    return d;
}

} // namespace tjsolve
