// SPDX-License-Identifier: Apache-2.0
#include <liftfem/reference.hpp>

#include <doctest.h>

#include <random>

using namespace liftfem;

namespace {

double factorial(int n)
{
    double result = 1.0;
    for (int i = 2; i <= n; ++i) result *= i;
    return result;
}

std::vector<Eigen::Vector2d> sample_points(int count, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Eigen::Vector2d> points;
    while (static_cast<int>(points.size()) < count) {
        const Eigen::Vector2d p(unit(rng), unit(rng));
        if (p.sum() <= 1.0) points.push_back(p);
    }
    return points;
}

} // namespace

TEST_SUITE("reference")
{
    TEST_CASE("lattice ordering: vertices, edges, interior")
    {
        const auto points = lattice_points<double>(3);
        REQUIRE(points.size() == 10);
        CHECK(points[0] == Eigen::Vector2d(0, 0));
        CHECK(points[1] == Eigen::Vector2d(1, 0));
        CHECK(points[2] == Eigen::Vector2d(0, 1));
        // edge 0 walks from v0 to v1, edge 1 from v1 to v2, edge 2 from v2 to v0
        CHECK((points[3] - Eigen::Vector2d(1.0 / 3, 0)).norm() < 1e-15);
        CHECK((points[4] - Eigen::Vector2d(2.0 / 3, 0)).norm() < 1e-15);
        CHECK((points[5] - Eigen::Vector2d(2.0 / 3, 1.0 / 3)).norm() < 1e-15);
        CHECK((points[7] - Eigen::Vector2d(0, 2.0 / 3)).norm() < 1e-15);
        CHECK((points[9] - Eigen::Vector2d(1.0 / 3, 1.0 / 3)).norm() < 1e-15);
        CHECK(lattice_size(4) == 15);
    }

    TEST_CASE("Kronecker property at the nodes")
    {
        for (int k = 1; k <= max_lagrange_degree; ++k) {
            const LagrangeBasis<double> basis(k);
            CHECK(basis.size() == lattice_size(k));
            for (int j = 0; j < basis.size(); ++j) {
                const auto values = basis.values(basis.node_point(j));
                for (int i = 0; i < basis.size(); ++i) {
                    CHECK(std::abs(values[i] - (i == j ? 1.0 : 0.0)) <= 1e-12);
                }
            }
        }
    }

    TEST_CASE("partition of unity")
    {
        for (int k = 1; k <= max_lagrange_degree; ++k) {
            const LagrangeBasis<double> basis(k);
            LagrangeBasis<double>::Values phi;
            LagrangeBasis<double>::Gradients dphi;
            for (const auto& p : sample_points(40, 11 + k)) {
                basis.eval(p, phi, dphi);
                CHECK(std::abs(phi.sum() - 1.0) <= 1e-12);
                CHECK(dphi.colwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
            }
        }
    }

    TEST_CASE("gradients match central differences")
    {
        const double step = 1e-6;
        for (int k = 1; k <= max_lagrange_degree; ++k) {
            const LagrangeBasis<double> basis(k);
            LagrangeBasis<double>::Values phi;
            LagrangeBasis<double>::Gradients dphi;
            for (const auto& p : sample_points(10, 3 + k)) {
                basis.eval(p, phi, dphi);
                for (int j = 0; j < 2; ++j) {
                    const Eigen::Vector2d e = step * Eigen::Vector2d::Unit(j);
                    const auto fd = ((basis.values(p + e) - basis.values(p - e)) / (2.0 * step)).eval();
                    CHECK((fd - dphi.col(j)).cwiseAbs().maxCoeff() <= 1e-7);
                }
            }
        }
    }

    TEST_CASE("basis in extended precision agrees with double")
    {
        const LagrangeBasis<long double> wide(4);
        const LagrangeBasis<double> narrow(4);
        const Eigen::Matrix<long double, 2, 1> p(0.2L, 0.3L);
        const auto a = wide.values(p);
        const auto b = narrow.values(Eigen::Vector2d(0.2, 0.3));
        for (int i = 0; i < a.size(); ++i) CHECK(std::abs(double(a[i]) - b[i]) <= 1e-14);
    }

    TEST_CASE("unsupported degrees")
    {
        CHECK_THROWS_AS(LagrangeBasis<double>(0), UnsupportedDegree);
        CHECK_THROWS_AS(LagrangeBasis<double>(5), UnsupportedDegree);
        CHECK_THROWS_AS(triangle_quadrature<double>(max_quadrature_degree + 1), UnsupportedDegree);
        CHECK_THROWS_AS(segment_quadrature<double>(-1), UnsupportedDegree);
    }

    TEST_CASE("triangle rules integrate random polynomials of their degree exactly")
    {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> coefficient(-1.0, 1.0);
        for (int p = 0; p <= max_quadrature_degree; ++p) {
            const auto rule = triangle_quadrature<double>(p);
            CHECK(rule.exactness_degree >= p);
            for (double w : rule.weights) CHECK(w > 0.0);
            // ∫ ξ^a η^b = a! b! / (a + b + 2)!
            double exact = 0.0, quad = 0.0;
            for (int a = 0; a <= p; ++a) {
                for (int b = 0; a + b <= p; ++b) {
                    const double c = coefficient(rng);
                    exact += c * factorial(a) * factorial(b) / factorial(a + b + 2);
                    for (int q = 0; q < rule.size(); ++q) {
                        quad += c * rule.weights[q] * std::pow(rule.points[q].x(), a) * std::pow(rule.points[q].y(), b);
                    }
                }
            }
            CHECK(std::abs(quad - exact) <= 1e-12 * std::max(1.0, std::abs(exact)));
        }
    }

    TEST_CASE("segment rules")
    {
        const auto rule = segment_quadrature<double>(5);
        double sum = 0.0;
        for (int q = 0; q < rule.size(); ++q) sum += rule.weights[q] * std::pow(rule.points[q][0], 5);
        CHECK(std::abs(sum - 1.0 / 6.0) <= 1e-15);
        for (int p = 0; p <= max_quadrature_degree; ++p) {
            const auto r = segment_quadrature<double>(p);
            double s = 0.0;
            for (int q = 0; q < r.size(); ++q) s += r.weights[q] * std::pow(r.points[q][0], p);
            CHECK(std::abs(s - 1.0 / (p + 1)) <= 1e-14);
        }
    }

    TEST_CASE("Gauss-Legendre nodes on [0, 1] are symmetric about 1/2")
    {
        const auto rule = gauss_legendre<double>(7);
        double total = 0.0;
        for (int q = 0; q < rule.size(); ++q) {
            total += rule.weights[q];
            CHECK(std::abs(rule.points[q][0] + rule.points[rule.size() - 1 - q][0] - 1.0) <= 1e-14);
        }
        CHECK(std::abs(total - 1.0) <= 1e-14);
    }
}
