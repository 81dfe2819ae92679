#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "tjsolve/geometry.hpp"
#include "tjsolve/io.hpp"
#include "tjsolve/mesh.hpp"
#include "tjsolve/oracles.hpp"
#include "tjsolve/picard.hpp"

namespace tjsolve {

enum ExitCode : int {
    exit_ok = 0,
    exit_verify_failed = 1,
    exit_no_convergence = 2,
    exit_guard_violation = 3,
    exit_config_error = 4,
};

[[nodiscard]] inline int exit_code(SolveStatus s) {
    switch (s) {
    case SolveStatus::converged: return exit_ok;
    case SolveStatus::no_convergence: return exit_no_convergence;
    case SolveStatus::guard_violation: return exit_guard_violation;
    }
    return exit_no_convergence;
}

[[nodiscard]] inline std::vector<std::string> config_lines(const RunConfig& cfg) {
    std::vector<std::string> out;
    for (const auto& [k, v] : cfg.entries()) out.push_back(k + "=" + v);
    return out;
}

inline void write_comments(std::ostream& os, const std::vector<std::string>& lines) {
    for (const auto& l : lines) os << "# " << l << "\n";
}

struct MeshResolution {
    int mx = 33;
    int my = 64;
};

inline void write_mesh(const fs::path& path, const TripleField& u, const RunConfig& cfg, const MeshResolution& res,
                       const std::vector<std::string>& extra = {}) {
    const SurfaceMesh mesh = mesh_surface(u, cfg.cutoff(), res.mx, res.my);
    std::vector<std::string> header = config_lines(cfg);
    header.push_back("mesh resolution " + std::to_string(res.mx) + " x " + std::to_string(res.my));
    header.insert(header.end(), extra.begin(), extra.end());
    write_atomic(path, [&](std::ostream& os) { write_obj(os, mesh, header); });
}

/// Solves for the configured boundary data and writes every artifact into cfg.out.
[[nodiscard]] inline int cmd_solve(const RunConfig& cfg, std::ostream& log, const MeshResolution& mesh = {}) {
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return exit_config_error;
    }
    const Grid2D grid = cfg.grid();
    const CutoffProfile cutoff = cfg.cutoff();
    const PeriodicTriple phi = boundary_data(cfg.boundary, cfg.ny);
    const SolveResult res = solve_nonlinear(phi, grid, cutoff, cfg.options());
    const SolveReport& rep = res.report;
    const fs::path dir(cfg.out);
    const auto echo = config_lines(cfg);

    std::vector<std::string> extra;
    if (cfg.boundary.family) {
        const FamilySpec& f = *cfg.boundary.family;
        const double size = f.kind == FamilyKind::translate ? f.c.norm() : std::abs(f.beta);
        if (size <= cfg.delta / 20.0) {
            const ExactFamily ex = exact_family(f, grid, cfg.delta);
            extra.push_back("exact_error=" + detail::format_double((res.u - ex.u).sup_norm()));
        }
    }

    write_atomic(dir / "config.txt", [&](std::ostream& os) { write_config(os, cfg); });
    write_atomic(dir / "phi.csv", [&](std::ostream& os) {
        write_comments(os, echo);
        write_boundary_csv(os, phi);
    });
    for (int s = 0; s < 3; ++s) {
        write_atomic(dir / ("u" + std::to_string(s + 1) + ".csv"),
                     [&](std::ostream& os) { write_field_csv(os, res.u[s], cfg.delta, echo); });
    }
    write_atomic(dir / "report.csv", [&](std::ostream& os) {
        write_comments(os, echo);
        write_report_csv(os, rep);
    });
    write_atomic(dir / "summary.txt", [&](std::ostream& os) {
        write_comments(os, echo);
        write_summary(os, rep);
        for (const auto& e : extra) os << e << "\n";
    });
    // The spine is only meaningful for compatible traces; a guard failure may not have them.
    try {
        const SpineCurve spine = spine_from_traces(trace(res.u, BoundaryEnd::inner));
        write_atomic(dir / "spine.csv", [&](std::ostream& os) {
            write_comments(os, echo);
            write_spine_csv(os, spine);
        });
    } catch (const CompatibilityViolation& e) {
        log << "spine not written: " << e.what() << "\n";
    }
    write_mesh(dir / "mesh.obj", res.u, cfg, mesh,
               {"status=" + to_string(rep.status), "residual_max=" + detail::format_double(rep.residuals.max())});

    write_summary(log, rep);
    for (const auto& e : extra) log << e << "\n";
    log << "artifacts in " << dir.string() << "\n";
    return exit_code(rep.status);
}

struct VerifyCheck {
    std::string name;
    double value;
    double threshold;
    bool pass;
};

struct LoadedRun {
    RunConfig cfg;
    TripleField u;
    PeriodicTriple phi;
    std::map<std::string, std::string> summary;
};

[[nodiscard]] inline LoadedRun load_run(const fs::path& dir) {
    RunConfig cfg;
    load_config(dir / "config.txt", cfg);
    std::array<ScalarField, 3> comps{read_field_csv(dir / "u1.csv").field, read_field_csv(dir / "u2.csv").field,
                                     read_field_csv(dir / "u3.csv").field};
    return {cfg, TripleField(comps[0], comps[1], comps[2]), read_boundary_csv(dir / "phi.csv"),
            read_summary(dir / "summary.txt")};
}

/// Re-runs the oracles on stored artifacts.
[[nodiscard]] inline std::vector<VerifyCheck> verify_run(const LoadedRun& run, double h = 1e-3) {
    std::vector<VerifyCheck> checks;
    auto add = [&](std::string name, double value, double threshold) {
        checks.push_back({std::move(name), value, threshold, std::isfinite(value) && value <= threshold});
    };
    const CutoffProfile cutoff = run.cfg.cutoff();
    const auto num = [&](const char* key, double fallback) {
        const auto it = run.summary.find(key);
        return it == run.summary.end() ? fallback : detail::parse_double(key, it->second);
    };

    checks.push_back({"status converged", 0.0, 0.0, run.summary.count("status") && run.summary.at("status") == "converged"});
    double curvature = 0.0;
    for (const auto& s : fd_curvature_scan(run.u, cutoff, h)) curvature = std::max(curvature, std::abs(s.value));
    add("fd mean curvature", curvature, 1e-4);
    add("junction angle deviation", junction_angle_check(run.u).max_deviation, 1e-4);

    const FinalResiduals r = final_residuals(run.u, run.phi, cutoff);
    const double proxy = norm_proxy(run.u, run.cfg.alpha);
    const double gate = 10.0 * run.cfg.tol * std::max(1.0, proxy);
    add("trace sum", r.trace_sum, 1e-10);
    add("outer trace", r.outer_trace, 1e-10);
    add("boundary operator residual", r.boundary, gate);
    add("laplace residual", r.laplace, gate);
    add("conormal defect", r.conormal, 1e-6);
    const double margin = check_c0_compatibility(run.u, cutoff, run.cfg.alpha).monotonicity_margin;
    checks.push_back({"embeddedness margin", margin, 0.0, margin > 0.0});

    const std::pair<const char*, double> stored[] = {
        {"residual_laplace", r.laplace},         {"residual_boundary", r.boundary},
        {"residual_conormal", r.conormal},       {"residual_outer_trace", r.outer_trace},
        {"residual_trace_sum", r.trace_sum},
    };
    double mismatch = 0.0;
    for (const auto& [key, value] : stored) {
        const double s = num(key, std::numeric_limits<double>::quiet_NaN());
        if (std::isnan(s)) {
            mismatch = s;
            break;
        }
        if (s != value) mismatch = std::max(mismatch, std::abs(s - value) / std::max(std::abs(s), std::abs(value)));
    }
    add("stored residuals reproduced (relative)", mismatch, 1e-9);
    return checks;
}

inline void print_checks(std::ostream& os, const std::vector<VerifyCheck>& checks) {
    os << std::left << std::setw(40) << "check" << std::setw(14) << "value" << std::setw(14) << "threshold"
       << "result\n";
    for (const auto& c : checks) {
        os << std::left << std::setw(40) << c.name << std::setw(14) << c.value << std::setw(14) << c.threshold
           << (c.pass ? "PASS" : "FAIL") << "\n";
    }
}

[[nodiscard]] inline int cmd_verify(const fs::path& dir, std::ostream& log) {
    LoadedRun run = [&] {
        try {
            return load_run(dir);
        } catch (const std::exception& e) {
            log << "cannot load run: " << e.what() << "\n";
            throw;
        }
    }();
    const auto checks = verify_run(run);
    print_checks(log, checks);
    const bool ok = std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.pass; });
    log << (ok ? "all checks passed" : "verification failed") << "\n";
    return ok ? exit_ok : exit_verify_failed;
}

struct SweepRow {
    double scale;
    std::string status;
    int iterations;
    double residual;
    double max_ratio;
    std::string message;
};

/// Solves for every scaled copy of the configured boundary data; failures are recorded per row.
[[nodiscard]] inline std::vector<SweepRow> sweep(const RunConfig& cfg, const std::vector<double>& scales) {
    cfg.validate();
    std::vector<SweepRow> rows;
    for (double t : scales) {
        SweepRow row{t, "error", 0, std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(), ""};
        try {
            const PeriodicTriple phi = boundary_data(scaled(cfg.boundary, t), cfg.ny);
            const SolveResult res = solve_nonlinear(phi, cfg.grid(), cfg.cutoff(), cfg.options());
            const SolveReport& r = res.report;
            row.status = to_string(r.status);
            row.iterations = r.iterations;
            row.residual = r.residuals.max();
            row.max_ratio = r.contraction_ratios.empty()
                                ? 0.0
                                : *std::max_element(r.contraction_ratios.begin(), r.contraction_ratios.end());
            row.message = r.message;
        } catch (const std::exception& e) {
            row.message = e.what();
        }
        rows.push_back(row);
    }
    return rows;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "scale,status,iterations,final_residual,max_contraction_ratio,message\n";
    os.precision(10);
    for (const auto& r : rows) {
        std::string msg = r.message;
        std::replace(msg.begin(), msg.end(), ',', ';');
        os << r.scale << "," << r.status << "," << r.iterations << "," << r.residual << "," << r.max_ratio << ","
           << msg << "\n";
    }
}

[[nodiscard]] inline int cmd_sweep(const RunConfig& cfg, const std::vector<double>& scales, std::ostream& log) {
    std::vector<SweepRow> rows;
    try {
        rows = sweep(cfg, scales);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return exit_config_error;
    }
    write_atomic(fs::path(cfg.out) / "sweep.csv", [&](std::ostream& os) {
        write_comments(os, config_lines(cfg));
        write_sweep_csv(os, rows);
    });
    write_sweep_csv(log, rows);
    return exit_ok;
}

[[nodiscard]] inline int cmd_export_mesh(const fs::path& run_dir, const fs::path& out, const MeshResolution& res,
                                         std::ostream& log) {
    const LoadedRun run = load_run(run_dir);
    write_mesh(out, run.u, run.cfg, res);
    log << "wrote " << out.string() << "\n";
    return exit_ok;
}

} // namespace tjsolve
