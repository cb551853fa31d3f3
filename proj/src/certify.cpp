// SPDX-License-Identifier: Apache-2.0
#include <liftfem/study.hpp>

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>

namespace liftfem {

namespace {

std::string format(const char* pattern, double a, double b = 0.0)
{
    char buffer[160];
    std::snprintf(buffer, sizeof buffer, pattern, a, b);
    return buffer;
}

double factorial(int n)
{
    double result = 1.0;
    for (int i = 2; i <= n; ++i) result *= i;
    return result;
}

CheckResult check_partition_of_unity()
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int k = 1; k <= max_lagrange_degree; ++k) {
        const LagrangeBasis<double> basis(k);
        LagrangeBasis<double>::Values phi;
        LagrangeBasis<double>::Gradients dphi;
        for (int i = 0; i < 50; ++i) {
            double x = unit(rng), y = unit(rng);
            if (x + y > 1.0) {
                x = 1.0 - x;
                y = 1.0 - y;
            }
            basis.eval(Vec2(x, y), phi, dphi);
            worst = std::max(worst, std::abs(phi.sum() - 1.0));
            worst = std::max(worst, dphi.colwise().sum().cwiseAbs().maxCoeff());
        }
    }
    return {"partition_of_unity", worst <= 1e-12, format("max deviation %.3e", worst)};
}

CheckResult check_quadrature_exactness()
{
    double worst = 0.0;
    for (int p = 0; p <= max_quadrature_degree; ++p) {
        const auto triangle = triangle_quadrature<double>(p);
        const auto segment = segment_quadrature<double>(p);
        for (int a = 0; a <= p; ++a) {
            const int b = p - a;
            double sum = 0.0;
            for (int q = 0; q < triangle.size(); ++q) {
                sum += triangle.weights[q] * std::pow(triangle.points[q].x(), a) * std::pow(triangle.points[q].y(), b);
            }
            const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
            worst = std::max(worst, std::abs(sum - exact) / exact);
        }
        double sum = 0.0;
        for (int q = 0; q < segment.size(); ++q) {
            sum += segment.weights[q] * std::pow(segment.points[q][0], p);
        }
        worst = std::max(worst, std::abs(sum - 1.0 / (p + 1)) * (p + 1));
    }
    return {"quadrature_exactness", worst <= 1e-12, format("max relative error %.3e up to degree 20", worst)};
}

CheckResult check_dof_count(MeshCache& cache)
{
    bool ok = true;
    for (int level = 0; level <= 3; ++level) {
        const auto& mesh = cache.curved(1, level);
        const int v = static_cast<int>(mesh.affine.vertices.size());
        const int t = static_cast<int>(mesh.affine.triangles.size());
        const int e = EdgeTable(mesh.affine.triangles).size();
        for (int k = 1; k <= max_lagrange_degree; ++k) {
            ok = ok && DofMap(mesh, k).size() == DofMap::expected_size(k, v, e, t) && v - e + t == 1;
        }
    }
    return {"dof_count_formula", ok, "levels 0..3, k = 1..4"};
}

CheckResult check_matrix(MeshCache& cache, const ProblemSpec& spec)
{
    double asymmetry = 0.0;
    bool definite = true;
    for (int r = 1; r <= 3; ++r) {
        const auto& mesh = cache.curved(r, 1);
        const LiftMap lift(mesh, cache.boundary());
        const DofMap dofs(mesh, 3);
        const auto system = assemble(lift, spec, dofs);
        const Eigen::MatrixXd dense(system.matrix);
        asymmetry = std::max(asymmetry, (dense - dense.transpose()).cwiseAbs().maxCoeff() / dense.cwiseAbs().maxCoeff());
        const Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> cholesky(system.matrix);
        definite = definite && cholesky.info() == Eigen::Success;
    }
    return {"matrix_symmetric_positive_definite", asymmetry <= 1e-12 && definite,
            format("relative asymmetry %.3e", asymmetry)};
}

CheckResult check_galerkin(MeshCache& cache, const ProblemSpec& spec)
{
    double worst = 0.0;
    for (int r = 1; r <= 3; ++r) {
        const auto& mesh = cache.curved(r, 2);
        const LiftMap lift(mesh, cache.boundary());
        const DofMap dofs(mesh, 2);
        const auto system = assemble(lift, spec, dofs);
        const auto uh = solve(system);
        const Eigen::VectorXd residual = system.rhs - system.matrix * uh;
        worst = std::max(worst, residual.cwiseAbs().maxCoeff() / system.rhs.cwiseAbs().maxCoeff());
    }
    return {"galerkin_orthogonality", worst <= 1e-10, format("max |l_h - a_h(u_h, .)| / |b|_inf = %.3e", worst)};
}

CheckResult check_round_trip(MeshCache& cache)
{
    double worst = 0.0;
    const auto& samples = triangle_quadrature<double>(6).points;
    for (int r = 1; r <= 3; ++r) {
        const auto& mesh = cache.curved(r, 1);
        for (auto variant : {LiftVariant::New, LiftVariant::Former}) {
            const LiftMap lift(mesh, cache.boundary(), {variant, 0});
            for (int e = 0; e < mesh.num_elements(); ++e) {
                for (const auto& xhat : samples) {
                    const Vec2 x = mesh.element_map(e).value(xhat);
                    const Vec2 z = lift.eval(e, x);
                    worst = std::max(worst, (lift.eval(e, lift.inverse(e, z)) - z).norm());
                }
            }
        }
    }
    return {"lift_round_trip", worst <= 1e-10, format("max |G(G^-1(z)) - z| = %.3e", worst)};
}

CheckResult check_differential(MeshCache& cache)
{
    double worst = 0.0;
    const double step = 1e-5;
    const auto& samples = triangle_quadrature<double>(4).points;
    for (int r = 1; r <= 3; ++r) {
        const auto& mesh = cache.curved(r, 1);
        for (auto variant : {LiftVariant::New, LiftVariant::Former}) {
            const LiftMap lift(mesh, cache.boundary(), {variant, 0});
            for (int e = 0; e < mesh.num_elements(); ++e) {
                if (mesh.elements[e].internal) continue;
                for (const auto& xhat : samples) {
                    Mat2 fd;
                    for (int j = 0; j < 2; ++j) {
                        const Vec2 delta = step * Vec2::Unit(j);
                        fd.col(j) = (lift.lift_reference(e, xhat + delta) - lift.lift_reference(e, xhat - delta)) /
                                    (2.0 * step);
                    }
                    const Mat2 dg_fd = fd * mesh.element_map(e).jacobian(xhat).inverse();
                    worst = std::max(worst, (dg_fd - lift.differential_reference(e, xhat).dg).cwiseAbs().maxCoeff());
                }
            }
        }
    }
    return {"lift_differential_fd", worst <= 1e-6, format("max |DG_fd - DG| = %.3e", worst)};
}

} // namespace

std::vector<CheckResult> run_property_checks(MeshCache& cache)
{
    const auto spec = derive_manufactured(manufactured_y_exp_x(), 0.0, 1.0, 1.0, cache.boundary());
    return {
        check_partition_of_unity(),
        check_quadrature_exactness(),
        check_dof_count(cache),
        check_matrix(cache, spec),
        check_galerkin(cache, spec),
        check_round_trip(cache),
        check_differential(cache),
    };
}

double trace_compatibility_defect(const LiftMap& lift, int quadrature_degree)
{
    const auto segment = segment_quadrature<double>(quadrature_degree);
    double worst = 0.0;
    for (const auto& edge : lift.mesh().boundary_edges) {
        for (const auto& t : segment.points) {
            const auto tp = lift.trace(edge, t[0]);
            worst = std::max(worst, (tp.volume_lift_point - tp.lifted_point).norm());
        }
    }
    return worst;
}

std::vector<CheckResult> certify(const RunConfig& config, MeshCache& cache, const ConvergenceTable* baseline)
{
    config.validate();
    auto checks = run_property_checks(cache);
    const auto levels = config.levels();

    for (int r : config.orders) {
        double worst = 0.0;
        for (int level : levels) {
            const LiftMap lift(cache.curved(r, level), cache.boundary());
            worst = std::max(worst, trace_compatibility_defect(lift, QuadratureDegrees::assembly(4, r).boundary));
        }
        checks.push_back({"trace_compatibility r=" + std::to_string(r), worst <= 1e-10,
                          format("max |G - b| = %.3e", worst)});
    }

    if (levels.size() < 4) {
        checks.push_back({"slope_certification", false, "needs at least four levels"});
    } else {
        for (int r : config.orders) {
            std::vector<const CurvedMesh*> series;
            for (int level : levels) series.push_back(&cache.curved(r, level));
            for (int s : {r + 2, 2, 1}) {
                const auto report = certify_prop44(series, levels, cache.boundary(), {LiftVariant::New, s});
                const std::string name = "lift_slope r=" + std::to_string(r) + " s=" + std::to_string(s);
                checks.push_back({name, report.pass,
                                  format("slope_dg %.3f, slope_jh %.3f", report.slope_dg, report.slope_jh) +
                                      (report.note.empty() ? "" : "; " + report.note),
                                  report.gated});
                if (!config.out.empty()) {
                    const auto dir = std::filesystem::path(config.out) / "slopes";
                    std::filesystem::create_directories(dir);
                    std::ofstream out(dir / ("r" + std::to_string(r) + "_s" + std::to_string(s) + ".csv"));
                    write_slope_csv(out, report);
                }
            }
        }
    }

    // EOC tables with s = 2 against s = r + 2, for the new lift.
    RunConfig reference = config;
    reference.variant = LiftVariant::New;
    reference.exponent_s = 0;
    reference.out.clear();
    reference.dump_mesh = reference.dump_matrix = false;
    RunConfig lowered = reference;
    lowered.exponent_s = 2;
    const bool reuse = baseline && config.variant == LiftVariant::New && config.exponent_s == 0;
    for (int r : config.orders) {
        for (int k : config.degrees) {
            const StudyEntry* base = reuse ? baseline->find(r, k, LiftVariant::New, r + 2) : nullptr;
            const StudyEntry computed = base ? StudyEntry{} : run_entry(cache, reference, r, k);
            if (!base) base = &computed;
            const StudyEntry other = run_entry(cache, lowered, r, k);
            double worst = 0.0;
            for (auto kind : all_norms) {
                const double a = base->slope(kind), b = other.slope(kind);
                worst = std::max(worst, std::isfinite(a) && std::isfinite(b) ? std::abs(a - b) : HUGE_VAL);
            }
            checks.push_back({"exponent_robustness r=" + std::to_string(r) + " k=" + std::to_string(k),
                              worst <= 0.05, format("max |EOC(s=2) - EOC(s=r+2)| = %.4f", worst)});
        }
    }
    return checks;
}

bool all_passed(const std::vector<CheckResult>& checks)
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.gated || c.pass; });
}

void write_checks(std::ostream& out, const std::vector<CheckResult>& checks)
{
    for (const auto& c : checks) {
        out << (c.gated ? (c.pass ? "PASS" : "FAIL") : "INFO") << ' ' << c.name << ": " << c.detail << '\n';
    }
}

} // namespace liftfem
