#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "tjsolve/commands.hpp"

namespace {

using Overrides = std::vector<std::pair<std::string, std::string>>;

/// Registers the flags shared by solve and sweep; each one becomes a key=value override.
void add_run_flags(CLI::App& cmd, std::string& config_path, Overrides& overrides) {
    cmd.add_option("--config", config_path, "key=value configuration file");
    const std::pair<const char*, const char*> keys[] = {
        {"--nx", "nx"},           {"--ny", "ny"},           {"--delta", "delta"},     {"--alpha", "alpha"},
        {"--tol", "tol"},         {"--max-iter", "max_iter"}, {"--r-guard", "r_guard"}, {"--epsilon", "epsilon"},
        {"--family", "family"},   {"--phi1", "phi1"},       {"--phi2", "phi2"},       {"--phi3", "phi3"},
        {"--out", "out"},
    };
    for (const auto& [flag, key] : keys) {
        cmd.add_option_function<std::string>(
            flag, [&overrides, k = std::string(key)](const std::string& v) { overrides.emplace_back(k, v); },
            std::string("overrides '") + key + "'");
    }
}

tjsolve::RunConfig build_config(const std::string& path, const Overrides& overrides) {
    tjsolve::RunConfig cfg;
    if (!path.empty()) tjsolve::load_config(path, cfg);
    for (const auto& [k, v] : overrides) cfg.set(k, v);
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stationary perturbations of the triple-junction surface"};
    app.require_subcommand(1);

    std::string solve_config;
    Overrides solve_overrides;
    tjsolve::MeshResolution solve_mesh;
    auto* solve = app.add_subcommand("solve", "run the fixed-point solver and write artifacts");
    add_run_flags(*solve, solve_config, solve_overrides);
    solve->add_option("--mesh-mx", solve_mesh.mx, "mesh samples in x")->check(CLI::Range(2, 100000));
    solve->add_option("--mesh-my", solve_mesh.my, "mesh samples in y")->check(CLI::Range(3, 100000));

    std::string verify_dir;
    auto* verify = app.add_subcommand("verify", "re-run the oracles on a solve directory");
    verify->add_option("run", verify_dir, "directory written by solve")->required();

    std::string sweep_config;
    Overrides sweep_overrides;
    std::vector<double> scales{0.0, 0.5, 1.0};
    auto* sweep = app.add_subcommand("sweep", "solve for scaled copies of the boundary data");
    add_run_flags(*sweep, sweep_config, sweep_overrides);
    sweep->add_option("--scales", scales, "scale factors")->delimiter(',');

    std::string mesh_dir;
    std::string mesh_out;
    tjsolve::MeshResolution mesh_res;
    auto* mesh = app.add_subcommand("export-mesh", "write an OBJ mesh for a solve directory");
    mesh->add_option("run", mesh_dir, "directory written by solve")->required();
    mesh->add_option("--out", mesh_out, "OBJ path (default RUN/mesh.obj)");
    mesh->add_option("--mx", mesh_res.mx, "samples in x")->check(CLI::Range(2, 100000));
    mesh->add_option("--my", mesh_res.my, "samples in y")->check(CLI::Range(3, 100000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : tjsolve::exit_config_error;
    }

    try {
        if (*solve) return tjsolve::cmd_solve(build_config(solve_config, solve_overrides), std::cout, solve_mesh);
        if (*verify) return tjsolve::cmd_verify(verify_dir, std::cout);
        if (*sweep) return tjsolve::cmd_sweep(build_config(sweep_config, sweep_overrides), scales, std::cout);
        if (*mesh) {
            const tjsolve::fs::path out = mesh_out.empty() ? tjsolve::fs::path(mesh_dir) / "mesh.obj" : tjsolve::fs::path(mesh_out);
            return tjsolve::cmd_export_mesh(mesh_dir, out, mesh_res, std::cout);
        }
    } catch (const tjsolve::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return tjsolve::exit_config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
