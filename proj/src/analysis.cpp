// SPDX-License-Identifier: Apache-2.0
#include <liftfem/analysis.hpp>

#include <cmath>

namespace liftfem {

double FunctionNorms::l2_omega_gamma() const
{
    return std::hypot(l2_omega, l2_gamma);
}

double FunctionNorms::h1_omega_gamma() const
{
    return std::sqrt(l2_omega * l2_omega + h1s_omega * h1s_omega + l2_gamma * l2_gamma + h1s_gamma * h1s_gamma);
}

namespace {

FunctionNorms compute_norms(
    const LiftMap& lift,
    const DofMap& dofs,
    const ManufacturedSolution* exact,
    const Eigen::VectorXd& v,
    int quadrature_degree,
    bool lifted)
{
    const auto& mesh = lift.mesh();
    const int k = dofs.degree();
    const int degree = quadrature_degree > 0 ? quadrature_degree : error_quadrature_degree(k, mesh.order);
    const LagrangeBasis<double> basis(k);
    const auto triangle = triangle_quadrature<double>(degree);
    const auto segment = segment_quadrature<double>(degree);

    LagrangeBasis<double>::Values phi;
    LagrangeBasis<double>::Gradients dphi;
    auto local = [&](int e) {
        const auto& ids = dofs.element_dofs(e);
        Eigen::VectorXd values(ids.size());
        for (std::size_t i = 0; i < ids.size(); ++i) {
            values[i] = v[ids[i]];
        }
        return values;
    };

    double l2_omega = 0, h1_omega = 0, l2_gamma = 0, h1_gamma = 0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const Eigen::VectorXd ve = local(e);
        for (int q = 0; q < triangle.size(); ++q) {
            basis.eval(triangle.points[q], phi, dphi);
            const auto p = lift.at_reference(e, triangle.points[q], lifted);
            const Mat2& jacobian = lifted ? p.exact_jacobian : p.mesh_jacobian;
            const Vec2& point = lifted ? p.lifted_point : p.mesh_point;
            const Eigen::RowVector2d grad = ve.transpose() * dphi * jacobian.inverse();
            double value_error = phi.dot(ve);
            Eigen::RowVector2d grad_error = grad;
            if (exact) {
                value_error = exact->u(point) - value_error;
                grad_error = exact->grad(point).transpose() - grad;
            }
            const double w = triangle.weights[q] * std::abs(jacobian.determinant());
            l2_omega += w * value_error * value_error;
            h1_omega += w * grad_error.squaredNorm();
        }
    }
    for (const auto& edge : mesh.boundary_edges) {
        const auto [a, b] = reference_edge(edge.local_edge);
        const Eigen::VectorXd ve = local(edge.element);
        for (int q = 0; q < segment.size(); ++q) {
            const auto tp = lift.trace(edge, segment.points[q][0]);
            basis.eval(tp.xhat, phi, dphi);
            const Vec2& tangent = lifted ? tp.lifted_tangent : tp.mesh_tangent;
            const Vec2& point = lifted ? tp.lifted_point : tp.mesh_point;
            const double speed = tangent.norm();
            const double dv_ds = (dphi * (b - a)).dot(ve) / speed;
            double value_error = phi.dot(ve);
            double slope_error = dv_ds;
            if (exact) {
                value_error = exact->u(point) - value_error;
                slope_error = exact->grad(point).dot(tangent / speed) - dv_ds;
            }
            const double w = segment.weights[q] * speed;
            l2_gamma += w * value_error * value_error;
            h1_gamma += w * slope_error * slope_error;
        }
    }
    return {std::sqrt(l2_omega), std::sqrt(h1_omega), std::sqrt(l2_gamma), std::sqrt(h1_gamma)};
}

} // namespace

ErrorReport lifted_errors(
    const LiftMap& lift,
    const DofMap& dofs,
    const ManufacturedSolution& exact,
    const Eigen::VectorXd& uh,
    int quadrature_degree)
{
    ErrorReport report;
    report.h = lift.mesh().h;
    report.ndof = dofs.size();
    report.error = compute_norms(lift, dofs, &exact, uh, quadrature_degree, true);
    return report;
}

FunctionNorms lifted_norms(const LiftMap& lift, const DofMap& dofs, const Eigen::VectorXd& v, int quadrature_degree)
{
    return compute_norms(lift, dofs, nullptr, v, quadrature_degree, true);
}

FunctionNorms mesh_norms(const LiftMap& lift, const DofMap& dofs, const Eigen::VectorXd& v, int quadrature_degree)
{
    return compute_norms(lift, dofs, nullptr, v, quadrature_degree, false);
}

Eigen::VectorXd interpolate(const LiftMap& lift, const DofMap& dofs, const ScalarField& u)
{
    const auto& mesh = lift.mesh();
    const auto nodes = lattice_points<double>(dofs.degree());
    Eigen::VectorXd coefficients(dofs.size());
    std::vector<bool> done(dofs.size(), false);
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& ids = dofs.element_dofs(e);
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (!done[ids[i]]) {
                coefficients[ids[i]] = u(lift.lift_reference(e, nodes[i]));
                done[ids[i]] = true;
            }
        }
    }
    return coefficients;
}

} // namespace liftfem
