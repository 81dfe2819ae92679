#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tjsolve/field.hpp"
#include "tjsolve/mode_solver.hpp"
#include "tjsolve/nonlinearity.hpp"
#include "tjsolve/norms.hpp"
#include "tjsolve/sampling.hpp"

namespace tjsolve {

/// Delta v = f on (0,1) x S^1, v = phi on {1} x S^1, and on {0} x S^1 either
/// v = 0 (dirichlet) or d_n v = g (mixed).
struct ScalarProblem {
    BoundaryKind kind;
    ScalarField f;
    PeriodicMap g;
    PeriodicMap phi;
};

/// Splits the coupled system for u into problems for
/// v1 = u1 + u2 + u3, v2 = u2 - u3, v3 = u1 - (u2 + u3) / 2.
[[nodiscard]] inline std::array<ScalarProblem, 3> decouple(const TripleField& F, const BoundaryDefect& G,
                                                          const PeriodicTriple& phi) {
    if (phi.ny() != F.grid().ny() || G.g1.size() != phi.ny() || G.g2.size() != phi.ny()) {
        throw std::invalid_argument("decouple: inputs live on different y-grids");
    }
    const int ny = phi.ny();
    return {ScalarProblem{BoundaryKind::dirichlet, F[0] + F[1] + F[2], PeriodicMap::Zero(ny), phi[0] + phi[1] + phi[2]},
            ScalarProblem{BoundaryKind::mixed, F[1] - F[2], G.g1, phi[1] - phi[2]},
            ScalarProblem{BoundaryKind::mixed, F[0] - 0.5 * (F[1] + F[2]), G.g2, phi[0] - 0.5 * (phi[1] + phi[2])}};
}

[[nodiscard]] inline TripleField recompose(const ScalarField& v1, const ScalarField& v2, const ScalarField& v3) {
    const ScalarField common = (1.0 / 3.0) * (v1 - v3);
    return {(1.0 / 3.0) * (v1 + 2.0 * v3), common + 0.5 * v2, common - 0.5 * v2};
}

enum class ModePart { cosine, sine };

/// One line of the mode-level debug dump.
struct ModeRecord {
    int k;
    ModePart part;
    BoundaryKind kind;
    double residual;
    std::string path;
};

/// Fourier-analyses the data in y, solves every mode by collocation and synthesises.
[[nodiscard]] inline ScalarField solve_scalar(const ScalarProblem& p, std::vector<ModeRecord>* dump = nullptr) {
    const Grid2D& grid = p.f.grid();
    const FourierOps& fo = grid.fourier();
    if (p.phi.size() != grid.ny() || p.g.size() != grid.ny()) {
        throw std::invalid_argument("solve_scalar: boundary data has the wrong length");
    }
    const int nx = grid.nx();
    const int kc = fo.kmax + 1;
    const Eigen::MatrixXd fc = p.f.values() * fo.analysis_cos.transpose();
    const Eigen::MatrixXd fs = p.f.values() * fo.analysis_sin.transpose();
    const Eigen::VectorXd phic = fo.analysis_cos * p.phi;
    const Eigen::VectorXd phis = fo.analysis_sin * p.phi;
    const Eigen::VectorXd gc = fo.analysis_cos * p.g;
    const Eigen::VectorXd gs = fo.analysis_sin * p.g;

    Eigen::MatrixXd ac = Eigen::MatrixXd::Zero(nx, kc);
    Eigen::MatrixXd as = Eigen::MatrixXd::Zero(nx, kc);
    for (int k = 0; k < kc; ++k) {
        const ModeOperator op(nx, k, p.kind);
        ac.col(k) = op.solve(fc.col(k), gc(k), phic(k));
        const bool has_sine = k > 0 && k < fo.kmax;
        if (has_sine) as.col(k) = op.solve(fs.col(k), gs(k), phis(k));
        if (dump) {
            auto record = [&](ModePart part, const Eigen::VectorXd& f, double g, double phi, const Eigen::VectorXd& a) {
                const ModeResidual r = mode_residual(ModeProblem{k, p.kind, f, g, phi}, a);
                dump->push_back({k, part, p.kind, std::max({r.interior, r.inner_bc, r.outer_bc}), "collocation"});
            };
            record(ModePart::cosine, fc.col(k), gc(k), phic(k), ac.col(k));
            if (has_sine) record(ModePart::sine, fs.col(k), gs(k), phis(k), as.col(k));
        }
    }
    Eigen::MatrixXd v = ac * fo.synthesis_cos.transpose() + as * fo.synthesis_sin.transpose();
    return {grid, std::move(v)};
}

/// Delta v = f, v(0,.) = 0, v(1,.) = phi.
[[nodiscard]] inline ScalarField solve_dirichlet(const ScalarField& f, const PeriodicMap& phi,
                                                 std::vector<ModeRecord>* dump = nullptr) {
    return solve_scalar({BoundaryKind::dirichlet, f, PeriodicMap::Zero(phi.size()), phi}, dump);
}

/// Delta v = f, d_n v(0,.) = g, v(1,.) = phi.
[[nodiscard]] inline ScalarField solve_mixed(const ScalarField& f, const PeriodicMap& g, const PeriodicMap& phi,
                                             std::vector<ModeRecord>* dump = nullptr) {
    return solve_scalar({BoundaryKind::mixed, f, g, phi}, dump);
}

/// Solves Delta u = F, B u = (0, G1, G2) on {0} x S^1, u = phi on {1} x S^1.
[[nodiscard]] inline TripleField solve_linear_system(const TripleField& F, const BoundaryDefect& G,
                                                     const PeriodicTriple& phi,
                                                     std::vector<ModeRecord>* dump = nullptr) {
    const auto problems = decouple(F, G, phi);
    return recompose(solve_scalar(problems[0], dump), solve_scalar(problems[1], dump), solve_scalar(problems[2], dump));
}

/// B u = (u1 + u2 + u3, d_n u2 - d_n u3, d_n u1 - (d_n u2 + d_n u3) / 2) on {0} x S^1.
struct BoundaryOperatorValues {
    PeriodicMap trace_sum;
    PeriodicMap b2;
    PeriodicMap b3;
};

[[nodiscard]] inline BoundaryOperatorValues boundary_operator(const TripleField& u) {
    const PeriodicTriple t = trace(u, BoundaryEnd::inner);
    const BoundaryDefect lin = neumann_combinations(u);
    return {t[0] + t[1] + t[2], lin.g1, lin.g2};
}

// ---- Schauder constant probe -------------------------------------------------

struct ContractionEstimates {
    double c_lin = 0.0;  ///< empirical Schauder constant
    double c1 = 0.0;
    double c2 = 0.0;
    double r_tilde = 0.0;
};

/// Empirical stand-ins for the contraction constants:
/// C1 = C_lin max(1, C_F + C_G), C2 = C_lin (C_F + C_G), r~ = min(1/C1, 1/(4 C2), 1).
[[nodiscard]] inline ContractionEstimates contraction_estimates(double c_lin, double c_f, double c_g) {
    ContractionEstimates e;
    e.c_lin = c_lin;
    e.c1 = c_lin * std::max(1.0, c_f + c_g);
    e.c2 = c_lin * (c_f + c_g);
    e.r_tilde = std::min({1.0 / e.c1, (e.c2 > 0.0) ? 1.0 / (4.0 * e.c2) : 1.0, 1.0});
    return e;
}

/// ||u||_{2,a} / (||F||_{0,a} + ||G||_{1,a} + ||phi||_{2,a}) for the solution u of the linear system.
[[nodiscard]] inline double schauder_ratio(const TripleField& F, const BoundaryDefect& G, const PeriodicTriple& phi,
                                           double alpha = 0.5) {
    const TripleField u = solve_linear_system(F, G, phi);
    double data = holder_proxy(G.g1, 1, alpha) + holder_proxy(G.g2, 1, alpha) + norm_proxy(phi, 2, alpha);
    for (std::size_t s = 0; s < 3; ++s) data += holder_proxy(F[s], 0, alpha);
    return data > 0.0 ? norm_proxy(u, alpha) / data : 0.0;
}

enum class ProbeInputs { all, boundary_only };

struct SchauderProbe {
    double c_lin = 0.0;
    std::vector<double> ratios;
};

/// Maximum Schauder ratio over random smooth inputs normalised to unit proxy norm.
[[nodiscard]] inline SchauderProbe schauder_probe(const Grid2D& grid, int n_samples, std::uint64_t seed = 7,
                                                  double alpha = 0.5, ProbeInputs inputs = ProbeInputs::all) {
    std::mt19937_64 rng(seed);
    SchauderProbe probe;
    for (int s = 0; s < n_samples; ++s) {
        PeriodicTriple phi = scale_to_proxy(random_boundary(grid.ny(), rng), 1.0, alpha);
        TripleField F(grid);
        BoundaryDefect G{PeriodicMap::Zero(grid.ny()), PeriodicMap::Zero(grid.ny())};
        const TripleField shapes = random_compatible_field(grid, rng);
        const PeriodicTriple gshape = random_boundary(grid.ny(), rng);
        if (inputs == ProbeInputs::all) {
            double fp = 0.0;
            for (std::size_t c = 0; c < 3; ++c) fp += holder_proxy(shapes[c], 0, alpha);
            F = (1.0 / fp) * shapes;
            const double gp = holder_proxy(gshape[0], 1, alpha) + holder_proxy(gshape[1], 1, alpha);
            G = {gshape[0] / gp, gshape[1] / gp};
        }
        const double r = schauder_ratio(F, G, phi, alpha);
        probe.ratios.push_back(r);
        probe.c_lin = std::max(probe.c_lin, r);
    }
    return probe;
}

} // namespace tjsolve
