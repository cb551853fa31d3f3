// SPDX-License-Identifier: Apache-2.0
#include <liftfem/geometry.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace liftfem {

SmoothBoundary::SmoothBoundary(double tubular_width)
    : m_tubular_width(tubular_width)
{
    if (!(tubular_width > 0.0)) {
        throw std::invalid_argument("tubular width must be positive");
    }
}

Mat2 SmoothBoundary::weingarten(const Vec2& x) const
{
    const double step = 1e-6;
    Mat2 hessian;
    for (int j = 0; j < 2; ++j) {
        Vec2 e = Vec2::Zero();
        e[j] = step;
        hessian.col(j) = (distance_gradient(x + e) - distance_gradient(x - e)) / (2 * step);
    }
    return 0.5 * (hessian + hessian.transpose());
}

bool SmoothBoundary::in_tubular_neighborhood(const Vec2& x) const
{
    return std::abs(signed_distance(x)) < m_tubular_width;
}

void SmoothBoundary::require_tubular(const Vec2& x) const
{
    const double d = signed_distance(x);
    if (!(std::abs(d) < m_tubular_width)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "point (" << x.x() << ", " << x.y() << ") at signed distance " << d
            << " lies outside the tubular neighbourhood of width " << m_tubular_width;
        throw GeometryError(msg.str());
    }
}

Vec2 SmoothBoundary::project(const Vec2& x) const
{
    require_tubular(x);
    return x - signed_distance(x) * distance_gradient(x);
}

Mat2 SmoothBoundary::projection_differential(const Vec2& x) const
{
    require_tubular(x);
    const Vec2 g = distance_gradient(x);
    return Mat2::Identity() - g * g.transpose() - signed_distance(x) * weingarten(x);
}

UnitDisk::UnitDisk()
    : SmoothBoundary(0.5)
{}

double UnitDisk::signed_distance(const Vec2& x) const
{
    return x.norm() - 1.0;
}

Vec2 UnitDisk::distance_gradient(const Vec2& x) const
{
    const double r = x.norm();
    if (r == 0.0) {
        throw GeometryError("distance gradient undefined at the disk centre");
    }
    return x / r;
}

Mat2 UnitDisk::weingarten(const Vec2& x) const
{
    const double r = x.norm();
    if (r == 0.0) {
        throw GeometryError("curvature undefined at the disk centre");
    }
    const Vec2 n = x / r;
    return (Mat2::Identity() - n * n.transpose()) / r;
}

HalfPlane::HalfPlane(const Vec2& normal, double offset)
    : SmoothBoundary(std::numeric_limits<double>::infinity())
    , m_normal(normal.normalized())
    , m_offset(offset)
{}

double HalfPlane::signed_distance(const Vec2& x) const
{
    return m_normal.dot(x) - m_offset;
}

Vec2 HalfPlane::distance_gradient(const Vec2&) const
{
    return m_normal;
}

Mat2 HalfPlane::weingarten(const Vec2&) const
{
    return Mat2::Zero();
}

} // namespace liftfem
