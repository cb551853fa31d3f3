// SPDX-License-Identifier: Apache-2.0
// Convergence study driver for the Ventcel problem on the unit disk.
#include <liftfem/study.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

constexpr int exit_certify_failure = 2;
constexpr int exit_runtime_error = 3;

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Curved-mesh Lagrange FEM convergence study for the Ventcel problem on the unit disk"};

    std::string config_file, orders, degrees, levels, lift, exponent, solution, out;
    double kappa = 0, alpha = 0, beta = 0, rel_tol = 0;
    bool dump_mesh = false, dump_matrix = false, run_certify = false;

    app.add_option("--config", config_file, "key = value file; flags override its entries");
    app.add_option("--r", orders, "mesh orders, e.g. 2, 1,3 or 1..3 (default 1..3)");
    app.add_option("--k", degrees, "finite element degrees (default 1..4)");
    app.add_option("--levels", levels, "refinement levels A..B (default 1..5)");
    app.add_option("--lift", lift, "volume lift: new or former")->check(CLI::IsMember({"new", "former"}));
    app.add_option("--s", exponent, "lift exponent: auto (r+2), 1 or 2");
    app.add_option("--kappa", kappa, "volume mass coefficient (default 0)");
    app.add_option("--alpha", alpha, "boundary mass coefficient (default 1)");
    app.add_option("--beta", beta, "Laplace-Beltrami coefficient (default 1)");
    app.add_option("--rel-tol", rel_tol, "solver relative residual tolerance (default 1e-12)");
    app.add_option("--solution", solution, "manufactured solution: y_exp_x, constant or linear");
    app.add_option("--out", out, "output directory (default out)");
    app.add_flag("--dump-mesh", dump_mesh, "write every curved mesh to OUT/meshes");
    app.add_flag("--dump-matrix", dump_matrix, "write every system matrix as `i j value`");
    app.add_flag("--certify", run_certify, "run the property, trace and slope certification");

    CLI11_PARSE(app, argc, argv);

    try {
        liftfem::RunConfig config;
        if (!config_file.empty()) {
            std::ifstream in(config_file);
            if (!in) throw std::runtime_error("cannot open config file '" + config_file + "'");
            liftfem::apply_config_file(config, in);
        }
        auto set = [&](const char* flag, const std::string& key, const std::string& value) {
            if (app.count(flag) > 0) liftfem::apply_config_entry(config, key, value);
        };
        set("--r", "r", orders);
        set("--k", "k", degrees);
        set("--levels", "levels", levels);
        set("--lift", "lift", lift);
        set("--s", "s", exponent);
        set("--solution", "solution", solution);
        set("--out", "out", out);
        if (app.count("--kappa")) config.kappa = kappa;
        if (app.count("--alpha")) config.alpha = alpha;
        if (app.count("--beta")) config.beta = beta;
        if (app.count("--rel-tol")) config.rel_tol = rel_tol;
        if (dump_mesh) config.dump_mesh = true;
        if (dump_matrix) config.dump_matrix = true;
        if (run_certify) config.certify = true;
        config.validate();

        const liftfem::UnitDisk disk;
        liftfem::MeshCache cache(disk);
        const auto table = liftfem::run_study(config, cache);
        for (const auto& row : table.rows) {
            std::cout << row.directory_name();
            for (auto kind : liftfem::all_norms) {
                std::cout << ' ' << liftfem::norm_label(kind) << '=' << row.slope(kind);
            }
            std::cout << (liftfem::cubic_defect_observed(row) ? " [defect observed]" : "") << '\n';
        }

        if (config.certify) {
            const auto checks = liftfem::certify(config, cache, &table);
            if (!config.out.empty()) {
                std::filesystem::create_directories(config.out);
                std::ofstream report(std::filesystem::path(config.out) / "certify.txt");
                liftfem::write_checks(report, checks);
            }
            liftfem::write_checks(std::cout, checks);
            if (!liftfem::all_passed(checks)) return exit_certify_failure;
        }
    } catch (const std::exception& e) {
        std::cerr << "liftfem: " << e.what() << '\n';
        return exit_runtime_error;
    }
    return 0;
}
