// SPDX-License-Identifier: Apache-2.0
#include <liftfem/eoc.hpp>
#include <liftfem/lift.hpp>

#include <Eigen/SVD>

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace liftfem {

std::string to_string(LiftVariant variant)
{
    return variant == LiftVariant::New ? "new" : "former";
}

LiftVariant parse_lift_variant(const std::string& name)
{
    if (name == "new") return LiftVariant::New;
    if (name == "former") return LiftVariant::Former;
    throw std::invalid_argument("unknown lift variant '" + name + "' (expected new|former)");
}

LiftMap::LiftMap(const CurvedMesh& mesh, const SmoothBoundary& boundary, LiftConfig config)
    : m_mesh(&mesh)
    , m_boundary(&boundary)
    , m_config(config)
    , m_exponent(config.resolved_exponent(mesh.order))
{
    if (config.exponent_s < 0) {
        throw std::invalid_argument("lift exponent s must be at least 1 (0 selects r + 2)");
    }
}

LiftedPoint LiftMap::at_reference(int element, const Vec2& xhat, bool with_jacobians) const
{
    const auto& geometry = m_mesh->elements[element];
    const auto map = m_mesh->element_map(element);
    LiftedPoint p;
    map.eval(xhat, p.mesh_point, p.mesh_jacobian);
    if (geometry.internal) {
        p.lifted_point = p.mesh_point;
        p.exact_jacobian = p.mesh_jacobian;
        return p;
    }
    Mat2* jacobian = with_jacobians ? &p.exact_jacobian : nullptr;
    if (m_config.variant == LiftVariant::New) {
        exact_map_eval(map, geometry.epsilon, *m_boundary, xhat, m_exponent, &p.lifted_point, jacobian);
    } else {
        exact_map_eval(
            m_mesh->affine_map(element), geometry.epsilon, *m_boundary, xhat, m_exponent, &p.lifted_point, jacobian);
    }
    return p;
}

Vec2 LiftMap::lift_reference(int element, const Vec2& xhat) const
{
    return at_reference(element, xhat, false).lifted_point;
}

LiftDifferential LiftMap::differential_reference(int element, const Vec2& xhat) const
{
    LiftDifferential d;
    if (m_mesh->elements[element].internal) {
        return d;
    }
    const auto p = at_reference(element, xhat);
    d.dg = p.exact_jacobian * p.mesh_jacobian.inverse();
    d.jh = d.dg.determinant();
    if (!(d.jh > 0.0)) {
        throw LiftError("degenerate lift: J_h = " + std::to_string(d.jh) + " in element " + std::to_string(element));
    }
    return d;
}

Vec2 LiftMap::to_reference(int element, const Vec2& x) const
{
    const auto map = m_mesh->element_map(element);
    Vec2 xhat(1.0 / 3.0, 1.0 / 3.0);
    for (int iter = 0; iter < 50; ++iter) {
        Vec2 value;
        Mat2 jacobian;
        map.eval(xhat, value, jacobian);
        const Vec2 step = jacobian.inverse() * (value - x);
        xhat -= step;
        if (step.norm() < 1e-14 || (value - x).norm() < 1e-15) {
            return xhat;
        }
    }
    throw LiftError("Newton inversion of the element map failed in element " + std::to_string(element));
}

Vec2 LiftMap::eval(int element, const Vec2& x) const
{
    if (m_mesh->elements[element].internal) {
        return x;
    }
    return lift_reference(element, to_reference(element, x));
}

LiftDifferential LiftMap::differential(int element, const Vec2& x) const
{
    if (m_mesh->elements[element].internal) {
        return {};
    }
    return differential_reference(element, to_reference(element, x));
}

Vec2 LiftMap::inverse(int element, const Vec2& z) const
{
    if (m_mesh->elements[element].internal) {
        return z;
    }
    Vec2 xhat = to_reference(element, z);
    for (int iter = 0; iter < 50; ++iter) {
        const auto p = at_reference(element, xhat);
        const Vec2 step = p.exact_jacobian.inverse() * (p.lifted_point - z);
        xhat -= step;
        if (step.norm() < 1e-14 || (p.lifted_point - z).norm() < 1e-15) {
            return m_mesh->element_map(element).value(xhat);
        }
    }
    throw LiftError("Newton inversion of the lift failed in element " + std::to_string(element));
}

TracePoint LiftMap::trace(const BoundaryEdge& edge, double t) const
{
    const auto [a, b] = reference_edge(edge.local_edge);
    const Vec2 direction = b - a;
    TracePoint tp;
    tp.xhat = a + t * direction;
    const auto p = at_reference(edge.element, tp.xhat, false);
    tp.mesh_point = p.mesh_point;
    tp.mesh_tangent = p.mesh_jacobian * direction;
    tp.lifted_point = m_boundary->project(p.mesh_point);
    tp.lifted_tangent = m_boundary->projection_differential(p.mesh_point) * tp.mesh_tangent;
    tp.volume_lift_point = p.lifted_point;
    return tp;
}

BoundaryJacobian boundary_jacobian(
    const CurvedMesh& mesh,
    const SmoothBoundary& boundary,
    const BoundaryEdge& edge,
    double t)
{
    const auto [a, b] = reference_edge(edge.local_edge);
    const auto map = mesh.element_map(edge.element);
    Vec2 gamma;
    Mat2 jacobian;
    map.eval(a + t * (b - a), gamma, jacobian);
    const Vec2 tangent = jacobian * (b - a);
    const double speed = tangent.norm();
    if (speed < 1e-14) {
        throw GeometryError("degenerate boundary edge parametrisation in element " + std::to_string(edge.element));
    }
    BoundaryJacobian result;
    result.lifted_point = boundary.project(gamma);
    result.jb = (boundary.projection_differential(gamma) * tangent).norm() / speed;
    return result;
}

SlopeLevel sample_lift_deviation(const LiftMap& map, int quadrature_degree)
{
    const auto& mesh = map.mesh();
    std::vector<Vec2> samples = triangle_quadrature<double>(quadrature_degree).points;
    for (const auto& p : lattice_points<double>(mesh.order + 3)) {
        samples.push_back(p);
    }
    SlopeLevel level;
    level.h = mesh.h;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& element = mesh.elements[e];
        if (element.internal) {
            continue;
        }
        for (const auto& xhat : samples) {
            if (map.exponent() < 2 && lambda_star(barycentric(xhat), element.epsilon) <= 0.0) {
                continue;
            }
            const auto d = map.differential_reference(e, xhat);
            const Eigen::JacobiSVD<Mat2> svd(d.dg - Mat2::Identity());
            level.sup_dg_minus_id = std::max(level.sup_dg_minus_id, svd.singularValues()[0]);
            level.sup_jh_minus_1 = std::max(level.sup_jh_minus_1, std::abs(d.jh - 1.0));
        }
    }
    return level;
}

SlopeReport certify_prop44(
    const std::vector<const CurvedMesh*>& series,
    const std::vector<int>& levels,
    const SmoothBoundary& boundary,
    LiftConfig config)
{
    if (series.size() < 3 || series.size() != levels.size()) {
        throw std::invalid_argument("slope certification needs at least three refinement levels");
    }
    SlopeReport report;
    report.r = series.front()->order;
    report.config = config;
    const int s = config.resolved_exponent(report.r);
    std::vector<double> h, dg, jh;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const LiftMap map(*series[i], boundary, config);
        auto level = sample_lift_deviation(map, 2 * max_lagrange_degree + 2 * report.r + 2);
        level.level = levels[i];
        report.levels.push_back(level);
        h.push_back(level.h);
        dg.push_back(level.sup_dg_minus_id);
        jh.push_back(level.sup_jh_minus_1);
    }
    report.slope_dg = eoc_fit(h, dg).slope;
    report.slope_jh = eoc_fit(h, jh).slope;
    report.gated = config.variant == LiftVariant::New && (s == 2 || s == report.r + 2);
    if (s == 1) {
        report.note = "s=1: differential singular near the internal face, not gated";
    } else if (!report.gated) {
        report.note = "not gated";
    }
    const double threshold = report.r - 0.3;
    report.pass = report.gated && report.slope_dg >= threshold && report.slope_jh >= threshold;
    return report;
}

void write_slope_csv(std::ostream& out, const SlopeReport& report)
{
    const auto precision = out.precision(17);
    out << "level,h,sup_dg_minus_id,sup_jh_minus_1\n";
    for (const auto& l : report.levels) {
        out << l.level << ',' << l.h << ',' << l.sup_dg_minus_id << ',' << l.sup_jh_minus_1 << '\n';
    }
    out.precision(6);
    out << "# r=" << report.r << " lift=" << to_string(report.config.variant)
        << " s=" << report.config.resolved_exponent(report.r) << " slope_dg=" << report.slope_dg
        << " slope_jh=" << report.slope_jh << " gated=" << (report.gated ? "yes" : "no")
        << " pass=" << (report.pass ? "yes" : "no");
    if (!report.note.empty()) {
        out << " note=\"" << report.note << '"';
    }
    out << '\n';
    out.precision(precision);
}

} // namespace liftfem
