// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <liftfem/errors.hpp>

#include <Eigen/Core>

namespace liftfem {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

///
/// Analytic description of a smooth closed curve Γ through its signed
/// distance function d (negative inside the domain).
///
/// The orthogonal projection b(x) = x - d(x) ∇d(x) and its differential
/// Db = I - ∇d ∇dᵀ - d D²d are derived from d, so any subclass that supplies
/// an exact distance gets exact projections. D²d defaults to central
/// differences of ∇d; override it when a closed form is known.
///
class SmoothBoundary
{
public:
    explicit SmoothBoundary(double tubular_width);
    virtual ~SmoothBoundary() = default;

    virtual double signed_distance(const Vec2& x) const = 0;
    virtual Vec2 distance_gradient(const Vec2& x) const = 0;
    virtual Mat2 weingarten(const Vec2& x) const;

    double tubular_width() const { return m_tubular_width; }
    bool in_tubular_neighborhood(const Vec2& x) const;

    /// Unit outward normal at (or near) the boundary.
    Vec2 normal(const Vec2& x) const { return distance_gradient(x).normalized(); }

    /// Throws GeometryError outside the tubular neighbourhood.
    Vec2 project(const Vec2& x) const;
    Mat2 projection_differential(const Vec2& x) const;

private:
    void require_tubular(const Vec2& x) const;

    double m_tubular_width;
};

/// Unit circle bounding the unit disk. d(x) = |x| - 1, b(x) = x/|x|.
class UnitDisk final : public SmoothBoundary
{
public:
    UnitDisk();
    double signed_distance(const Vec2& x) const override;
    Vec2 distance_gradient(const Vec2& x) const override;
    Mat2 weingarten(const Vec2& x) const override;
};

/// Straight line n·x = offset, domain on the side n·x < offset.
class HalfPlane final : public SmoothBoundary
{
public:
    HalfPlane(const Vec2& normal, double offset);
    double signed_distance(const Vec2& x) const override;
    Vec2 distance_gradient(const Vec2& x) const override;
    Mat2 weingarten(const Vec2& x) const override;

private:
    Vec2 m_normal;
    double m_offset;
};

inline double signed_distance(const SmoothBoundary& boundary, const Vec2& x)
{
    return boundary.signed_distance(x);
}

inline Vec2 project(const SmoothBoundary& boundary, const Vec2& x)
{
    return boundary.project(x);
}

} // namespace liftfem
