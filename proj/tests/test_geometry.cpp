// SPDX-License-Identifier: Apache-2.0
#include <liftfem/geometry.hpp>

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace liftfem;

namespace {

/// Disk without an analytic Weingarten map, so the base class differentiates
/// the distance gradient numerically.
class NumericDisk final : public SmoothBoundary
{
public:
    NumericDisk()
        : SmoothBoundary(0.5)
    {}
    double signed_distance(const Vec2& x) const override { return m_disk.signed_distance(x); }
    Vec2 distance_gradient(const Vec2& x) const override { return m_disk.distance_gradient(x); }

private:
    UnitDisk m_disk;
};

} // namespace

TEST_SUITE("geometry")
{
    TEST_CASE("boundary points of the unit disk")
    {
        const UnitDisk disk;
        for (int i = 0; i < 64; ++i) {
            const double theta = 2.0 * std::numbers::pi * i / 64.0;
            const Vec2 p(std::cos(theta), std::sin(theta));
            CHECK(std::abs(disk.signed_distance(p)) <= 1e-12);
            CHECK(std::abs(disk.normal(p).norm() - 1.0) <= 1e-12);
            CHECK((disk.normal(p) - p).norm() <= 1e-12);
        }
    }

    TEST_CASE("projection formula, zero distance and idempotence")
    {
        const UnitDisk disk;
        for (double radius : {0.55, 0.8, 1.0, 1.2, 1.45}) {
            for (int i = 0; i < 16; ++i) {
                const double theta = 0.3 + 2.0 * std::numbers::pi * i / 16.0;
                const Vec2 x = radius * Vec2(std::cos(theta), std::sin(theta));
                const Vec2 p = disk.project(x);
                const Vec2 formula = x - disk.signed_distance(x) * disk.distance_gradient(x);
                CHECK((p - formula).norm() <= 1e-12);
                CHECK(std::abs(disk.signed_distance(p)) <= 1e-12);
                CHECK((disk.project(p) - p).norm() <= 1e-12);
                CHECK((project(disk, x) - p).norm() == 0.0);
            }
        }
    }

    TEST_CASE("projection outside the tubular neighbourhood is rejected")
    {
        const UnitDisk disk;
        CHECK(disk.tubular_width() == 0.5);
        CHECK_FALSE(disk.in_tubular_neighborhood(Vec2(0.3, 0.0)));
        CHECK_THROWS_AS(disk.project(Vec2(0.3, 0.0)), GeometryError);
        CHECK_THROWS_AS(disk.project(Vec2(2.0, 0.0)), GeometryError);
        CHECK_THROWS_AS(disk.distance_gradient(Vec2(0.0, 0.0)), GeometryError);
    }

    TEST_CASE("distance gradient matches central differences")
    {
        const UnitDisk disk;
        const double step = 1e-6;
        for (const Vec2& x : {Vec2(0.7, 0.2), Vec2(-0.4, 0.9), Vec2(1.1, -0.3)}) {
            Vec2 fd;
            for (int j = 0; j < 2; ++j) {
                const Vec2 e = step * Vec2::Unit(j);
                fd[j] = (disk.signed_distance(x + e) - disk.signed_distance(x - e)) / (2.0 * step);
            }
            CHECK((fd - disk.distance_gradient(x)).norm() <= 1e-8);
        }
    }

    TEST_CASE("analytic Weingarten map agrees with the numerical fallback")
    {
        const UnitDisk disk;
        const NumericDisk numeric;
        for (const Vec2& x : {Vec2(0.7, 0.2), Vec2(-0.4, 0.9), Vec2(1.1, -0.3)}) {
            CHECK((disk.weingarten(x) - numeric.weingarten(x)).cwiseAbs().maxCoeff() <= 1e-6);
            // trace of D²d is the curvature 1/|x| of the level set through x
            CHECK(std::abs(disk.weingarten(x).trace() - 1.0 / x.norm()) <= 1e-12);
        }
    }

    TEST_CASE("projection differential of the disk")
    {
        const UnitDisk disk;
        for (const Vec2& x : {Vec2(0.7, 0.2), Vec2(-0.4, 0.9), Vec2(1.1, -0.3)}) {
            const Vec2 n = x.normalized();
            const Mat2 expected = (Mat2::Identity() - n * n.transpose()) / x.norm();
            CHECK((disk.projection_differential(x) - expected).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }

    TEST_CASE("half plane")
    {
        const HalfPlane plane(Vec2(0.0, -2.0), 0.5); // d = -y - 0.5
        const Vec2 x(0.3, 0.7);
        CHECK(plane.signed_distance(x) == doctest::Approx(-1.2));
        CHECK((plane.project(x) - Vec2(0.3, -0.5)).norm() <= 1e-15);
        CHECK(plane.weingarten(x).isZero());
        CHECK(plane.in_tubular_neighborhood(Vec2(1e6, 1e6)));
        CHECK((plane.projection_differential(x) - Mat2(Eigen::Vector2d(1.0, 0.0).asDiagonal())).norm() <= 1e-15);
    }
}
