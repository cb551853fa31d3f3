// SPDX-License-Identifier: Apache-2.0
#include <liftfem/ventcel.hpp>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <ostream>
#include <sstream>
#include <vector>

namespace liftfem {

void ProblemSpec::validate() const
{
    if (!(alpha > 0.0) || !(beta > 0.0) || !(kappa >= 0.0)) {
        std::ostringstream msg;
        msg << "Ventcel problem needs alpha > 0, beta > 0, kappa >= 0 (got alpha=" << alpha << ", beta=" << beta
            << ", kappa=" << kappa << ")";
        throw std::invalid_argument(msg.str());
    }
    if (!f || !g) {
        throw std::invalid_argument("Ventcel problem needs both source terms f and g");
    }
}

ManufacturedSolution manufactured_y_exp_x()
{
    return {
        "y_exp_x",
        [](const Vec2& x) { return x.y() * std::exp(x.x()); },
        [](const Vec2& x) {
            const double e = std::exp(x.x());
            return Vec2(x.y() * e, e);
        },
        [](const Vec2& x) {
            const double e = std::exp(x.x());
            Mat2 h;
            h << x.y() * e, e, e, 0.0;
            return h;
        }};
}

ManufacturedSolution manufactured_constant(double c)
{
    return {
        "constant",
        [c](const Vec2&) { return c; },
        [](const Vec2&) { return Vec2(0.0, 0.0); },
        [](const Vec2&) { return Mat2::Zero().eval(); }};
}

ManufacturedSolution manufactured_linear()
{
    return {
        "linear",
        [](const Vec2& x) { return 1.0 + 2.0 * x.x() - x.y(); },
        [](const Vec2&) { return Vec2(2.0, -1.0); },
        [](const Vec2&) { return Mat2::Zero().eval(); }};
}

ManufacturedSolution manufactured_by_name(const std::string& name)
{
    if (name == "y_exp_x") return manufactured_y_exp_x();
    if (name == "constant") return manufactured_constant(1.0);
    if (name == "linear") return manufactured_linear();
    throw std::invalid_argument("unknown manufactured solution '" + name + "'");
}

ProblemSpec derive_manufactured(
    const ManufacturedSolution& solution,
    double kappa,
    double alpha,
    double beta,
    const SmoothBoundary& boundary)
{
    ProblemSpec spec;
    spec.kappa = kappa;
    spec.alpha = alpha;
    spec.beta = beta;
    spec.f = [solution, kappa](const Vec2& x) { return -solution.laplacian(x) + kappa * solution.u(x); };
    spec.g = [solution, alpha, beta, &boundary](const Vec2& p) {
        const Vec2 n = boundary.normal(p);
        const Vec2 tau(-n.y(), n.x());
        const double dn = solution.grad(p).dot(n);
        const double laplace_beltrami =
            tau.dot(solution.hessian(p) * tau) - boundary.weingarten(p).trace() * dn;
        return -beta * laplace_beltrami + dn + alpha * solution.u(p);
    };
    spec.validate();
    return spec;
}

namespace {

int checked_degree(int k)
{
    if (k < 1 || k > max_lagrange_degree) {
        throw UnsupportedDegree("finite element degree " + std::to_string(k) + " unsupported (1..4)");
    }
    return k;
}

} // namespace

DofMap::DofMap(const CurvedMesh& mesh, int k)
    : m_numbering(number_lattice(
          mesh.affine.triangles,
          static_cast<int>(mesh.affine.vertices.size()),
          checked_degree(k)))
    , m_num_edges(EdgeTable(mesh.affine.triangles).size())
{}

int DofMap::expected_size(int k, int vertices, int edges, int triangles)
{
    return vertices + (k - 1) * edges + (k - 1) * (k - 2) / 2 * triangles;
}

namespace {

QuadratureDegrees resolve(QuadratureDegrees degrees, int k, int r)
{
    const auto standard = QuadratureDegrees::assembly(k, r);
    if (degrees.volume <= 0) degrees.volume = standard.volume;
    if (degrees.boundary <= 0) degrees.boundary = standard.boundary;
    return degrees;
}

/// Element and boundary-edge contributions of one bilinear form, with the
/// geometry taken from either the mesh map F_T^(r) or the lifted map.
template <typename Volume, typename Boundary>
void for_each_contribution(
    const LiftMap& lift,
    const DofMap& dofs,
    QuadratureDegrees degrees,
    bool need_exact_jacobian,
    Volume&& volume,
    Boundary&& boundary)
{
    const auto& mesh = lift.mesh();
    const LagrangeBasis<double> basis(dofs.degree());
    degrees = resolve(degrees, dofs.degree(), mesh.order);
    const auto triangle = triangle_quadrature<double>(degrees.volume);
    const auto segment = segment_quadrature<double>(degrees.boundary);

    LagrangeBasis<double>::Values phi;
    LagrangeBasis<double>::Gradients dphi;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        for (int q = 0; q < triangle.size(); ++q) {
            basis.eval(triangle.points[q], phi, dphi);
            const auto p = lift.at_reference(e, triangle.points[q], need_exact_jacobian);
            volume(e, triangle.weights[q], p, phi, dphi);
        }
    }
    for (const auto& edge : mesh.boundary_edges) {
        const auto [a, b] = reference_edge(edge.local_edge);
        for (int q = 0; q < segment.size(); ++q) {
            const auto tp = lift.trace(edge, segment.points[q][0]);
            basis.eval(tp.xhat, phi, dphi);
            const Eigen::VectorXd dphi_dt = dphi * (b - a);
            boundary(edge.element, segment.weights[q], tp, phi, dphi_dt);
        }
    }
}

double evaluate_form(
    const LiftMap& lift,
    const DofMap& dofs,
    const FormCoefficients& c,
    const Eigen::VectorXd& v,
    const Eigen::VectorXd& w,
    QuadratureDegrees degrees,
    bool exact)
{
    auto local = [&](const Eigen::VectorXd& global, int e) {
        const auto& ids = dofs.element_dofs(e);
        Eigen::VectorXd values(ids.size());
        for (std::size_t i = 0; i < ids.size(); ++i) {
            values[i] = global[ids[i]];
        }
        return values;
    };
    double total = 0.0;
    for_each_contribution(
        lift,
        dofs,
        degrees,
        exact,
        [&](int e, double weight, const LiftedPoint& p, const auto& phi, const auto& dphi) {
            const Mat2& jacobian = exact ? p.exact_jacobian : p.mesh_jacobian;
            const double det = jacobian.determinant();
            const Mat2 inverse = jacobian.inverse();
            const Eigen::VectorXd ve = local(v, e), we = local(w, e);
            const Eigen::RowVector2d gv = ve.transpose() * dphi * inverse;
            const Eigen::RowVector2d gw = we.transpose() * dphi * inverse;
            total += weight * det * (gv.dot(gw) + c.kappa * phi.dot(ve) * phi.dot(we));
        },
        [&](int e, double weight, const TracePoint& tp, const auto& phi, const Eigen::VectorXd& dphi_dt) {
            const double speed = exact ? tp.lifted_tangent.norm() : tp.mesh_tangent.norm();
            const Eigen::VectorXd ve = local(v, e), we = local(w, e);
            total += weight * (c.beta * dphi_dt.dot(ve) * dphi_dt.dot(we) / speed +
                               c.alpha * phi.dot(ve) * phi.dot(we) * speed);
        });
    return total;
}

} // namespace

DiscreteSystem assemble(
    const LiftMap& lift,
    const ProblemSpec& spec,
    const DofMap& dofs,
    QuadratureDegrees degrees)
{
    spec.validate();
    const int n = dofs.size();
    const int nb = lattice_size(dofs.degree());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(lift.mesh().num_elements()) * nb * nb);
    DiscreteSystem system;
    system.rhs = Eigen::VectorXd::Zero(n);

    // Local matrices are accumulated per element and flushed when the
    // element changes; boundary edges reuse the same buffers.
    int current = -1;
    Eigen::MatrixXd ke = Eigen::MatrixXd::Zero(nb, nb);
    Eigen::VectorXd fe = Eigen::VectorXd::Zero(nb);
    auto flush = [&]() {
        if (current < 0) return;
        const auto& ids = dofs.element_dofs(current);
        for (int i = 0; i < nb; ++i) {
            system.rhs[ids[i]] += fe[i];
            for (int j = 0; j < nb; ++j) {
                if (ke(i, j) != 0.0) {
                    triplets.emplace_back(ids[i], ids[j], ke(i, j));
                }
            }
        }
        ke.setZero();
        fe.setZero();
    };
    auto select = [&](int e) {
        if (e != current) {
            flush();
            current = e;
        }
    };

    for_each_contribution(
        lift,
        dofs,
        degrees,
        true,
        [&](int e, double weight, const LiftedPoint& p, const auto& phi, const auto& dphi) {
            select(e);
            const double det = p.mesh_jacobian.determinant();
            const Eigen::MatrixXd grad = dphi * p.mesh_jacobian.inverse();
            const double w = weight * det;
            ke.noalias() += w * (grad * grad.transpose() + spec.kappa * phi * phi.transpose());
            fe.noalias() += (weight * spec.f(p.lifted_point) * p.exact_jacobian.determinant()) * phi;
        },
        [&](int e, double weight, const TracePoint& tp, const auto& phi, const Eigen::VectorXd& dphi_dt) {
            select(e);
            const double speed = tp.mesh_tangent.norm();
            ke.noalias() += weight * (spec.beta / speed * dphi_dt * dphi_dt.transpose() +
                                      spec.alpha * speed * phi * phi.transpose());
            fe.noalias() += (weight * spec.g(tp.lifted_point) * tp.lifted_tangent.norm()) * phi;
        });
    flush();

    system.matrix.resize(n, n);
    system.matrix.setFromTriplets(triplets.begin(), triplets.end());
    system.matrix.makeCompressed();
    return system;
}

Eigen::VectorXd solve(const DiscreteSystem& system, const SolveOptions& options)
{
    const auto& a = system.matrix;
    const auto& b = system.rhs;
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        return Eigen::VectorXd::Zero(b.size());
    }
    // Residuals are accumulated in extended precision so that iterative
    // refinement is not limited by cancellation in b - Ax.
    auto residual_of = [&](const Eigen::VectorXd& x) {
        std::vector<long double> acc(b.data(), b.data() + b.size());
        for (int col = 0; col < a.outerSize(); ++col) {
            const long double xc = x[col];
            for (Eigen::SparseMatrix<double>::InnerIterator it(a, col); it; ++it) {
                acc[it.row()] -= static_cast<long double>(it.value()) * xc;
            }
        }
        Eigen::VectorXd res(b.size());
        for (Eigen::Index i = 0; i < b.size(); ++i) {
            res[i] = static_cast<double>(acc[i]);
        }
        return res;
    };
    auto relative_residual = [&](const Eigen::VectorXd& x) { return residual_of(x).norm() / bnorm; };

    if (a.rows() <= options.direct_limit) {
        Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> cholesky(a);
        if (cholesky.info() != Eigen::Success) {
            throw SolverError("sparse Cholesky factorisation failed: matrix not positive definite");
        }
        Eigen::VectorXd x = cholesky.solve(b);
        double residual = relative_residual(x);
        for (int step = 0; step < 3 && residual > options.rel_tol; ++step) {
            x += cholesky.solve(residual_of(x));
            residual = relative_residual(x);
        }
        if (!(residual <= options.rel_tol)) {
            std::ostringstream msg;
            msg << "direct solve relative residual " << residual << " above tolerance " << options.rel_tol;
            throw SolverError(msg.str());
        }
        return x;
    }

    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(options.rel_tol);
    cg.setMaxIterations(options.max_iterations > 0 ? options.max_iterations : 10 * static_cast<int>(a.rows()));
    cg.compute(a);
    Eigen::VectorXd x = cg.solve(b);
    const double residual = relative_residual(x);
    if (cg.info() != Eigen::Success || !(residual <= options.rel_tol)) {
        throw SolverError(
            "conjugate gradients stopped after " + std::to_string(cg.iterations()) +
            " iterations with relative residual " + std::to_string(residual));
    }
    return x;
}

double discrete_form(
    const LiftMap& lift,
    const DofMap& dofs,
    const FormCoefficients& c,
    const Eigen::VectorXd& v,
    const Eigen::VectorXd& w,
    QuadratureDegrees degrees)
{
    return evaluate_form(lift, dofs, c, v, w, degrees, false);
}

double exact_form(
    const LiftMap& lift,
    const DofMap& dofs,
    const FormCoefficients& c,
    const Eigen::VectorXd& v,
    const Eigen::VectorXd& w,
    QuadratureDegrees degrees)
{
    return evaluate_form(lift, dofs, c, v, w, degrees, true);
}

double geometric_defect(
    const LiftMap& lift,
    const DofMap& dofs,
    const FormCoefficients& c,
    const Eigen::VectorXd& v,
    const Eigen::VectorXd& w,
    QuadratureDegrees degrees)
{
    return std::abs(exact_form(lift, dofs, c, v, w, degrees) - discrete_form(lift, dofs, c, v, w, degrees));
}

void write_matrix_coordinates(std::ostream& out, const Eigen::SparseMatrix<double>& matrix)
{
    const auto precision = out.precision(17);
    for (int col = 0; col < matrix.outerSize(); ++col) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, col); it; ++it) {
            out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
        }
    }
    out.precision(precision);
}

} // namespace liftfem
