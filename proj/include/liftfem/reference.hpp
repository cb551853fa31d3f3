// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reference triangle T̂ = {(ξ, η) : ξ, η ≥ 0, ξ + η ≤ 1} with vertices
// v̂0 = (0,0), v̂1 = (1,0), v̂2 = (0,1) and barycentric coordinates
// λ0 = 1 - ξ - η, λ1 = ξ, λ2 = η. Local edge j runs from v̂j to v̂(j+1 mod 3).

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace liftfem {

class UnsupportedDegree : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

constexpr int max_lagrange_degree = 4;
constexpr int max_quadrature_degree = 20;

/// Integer barycentric indices (a0, a1, a2), a0 + a1 + a2 = n, of the uniform
/// principal lattice: vertices, then edge nodes (edge by edge, walking from
/// the edge's first vertex), then interior nodes. Valid for any n ≥ 1.
std::vector<std::array<int, 3>> lattice_indices(int n);

/// Number of nodes of the degree-n lattice.
constexpr int lattice_size(int n)
{
    return (n + 1) * (n + 2) / 2;
}

/// Lattice node positions in reference coordinates (ξ, η), same ordering as
/// lattice_indices.
template <typename Scalar = double>
std::vector<Eigen::Matrix<Scalar, 2, 1>> lattice_points(int n)
{
    std::vector<Eigen::Matrix<Scalar, 2, 1>> points;
    for (const auto& a : lattice_indices(n)) {
        points.emplace_back(Scalar(a[1]) / Scalar(n), Scalar(a[2]) / Scalar(n));
    }
    return points;
}

/// Barycentric triples of the P^k Lagrange nodes, 1 ≤ k ≤ 4.
template <typename Scalar = double>
std::vector<Eigen::Matrix<Scalar, 3, 1>> lagrange_nodes(int k)
{
    if (k < 1 || k > max_lagrange_degree) {
        throw UnsupportedDegree(
            "Lagrange degree " + std::to_string(k) + " unsupported (1.." +
            std::to_string(max_lagrange_degree) + ")");
    }
    std::vector<Eigen::Matrix<Scalar, 3, 1>> nodes;
    for (const auto& a : lattice_indices(k)) {
        nodes.emplace_back(Scalar(a[0]) / Scalar(k), Scalar(a[1]) / Scalar(k), Scalar(a[2]) / Scalar(k));
    }
    return nodes;
}

template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> barycentric(const Eigen::Matrix<Scalar, 2, 1>& xhat)
{
    return {Scalar(1) - xhat.x() - xhat.y(), xhat.x(), xhat.y()};
}

/// Gradients of the barycentric coordinates with respect to (ξ, η), one per row.
template <typename Scalar = double>
Eigen::Matrix<Scalar, 3, 2> barycentric_gradients()
{
    Eigen::Matrix<Scalar, 3, 2> g;
    g << -1, -1, 1, 0, 0, 1;
    return g;
}

///
/// Nodal P^k Lagrange basis on T̂ built from the product formula
/// φ_a(λ) = Π_i Π_{m<a_i} (kλ_i - m)/(m + 1), which gives exact values and
/// gradients.
///
template <typename Scalar = double>
class LagrangeBasis
{
public:
    using Point = Eigen::Matrix<Scalar, 2, 1>;
    using Values = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Gradients = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

    explicit LagrangeBasis(int degree)
        : m_degree(degree)
        , m_nodes(lagrange_nodes<Scalar>(degree))
        , m_indices(lattice_indices(degree))
    {}

    int degree() const { return m_degree; }
    int size() const { return static_cast<int>(m_indices.size()); }
    const std::vector<Eigen::Matrix<Scalar, 3, 1>>& nodes() const { return m_nodes; }

    Point node_point(int i) const { return {m_nodes[i][1], m_nodes[i][2]}; }

    void eval(const Point& xhat, Values& values, Gradients& gradients) const
    {
        const auto lambda = barycentric(xhat);
        const auto dlambda = barycentric_gradients<Scalar>();
        // factor[i][a] = P_a(λ_i) and its derivative, a = 0..k
        std::array<std::array<Scalar, max_lagrange_degree + 1>, 3> p{}, dp{};
        for (int i = 0; i < 3; ++i) {
            p[i][0] = Scalar(1);
            dp[i][0] = Scalar(0);
            for (int a = 1; a <= m_degree; ++a) {
                const Scalar factor = (Scalar(m_degree) * lambda[i] - Scalar(a - 1)) / Scalar(a);
                p[i][a] = p[i][a - 1] * factor;
                dp[i][a] = dp[i][a - 1] * factor + p[i][a - 1] * Scalar(m_degree) / Scalar(a);
            }
        }
        values.resize(size());
        gradients.resize(size(), 2);
        for (int n = 0; n < size(); ++n) {
            const auto& a = m_indices[n];
            const Scalar f0 = p[0][a[0]], f1 = p[1][a[1]], f2 = p[2][a[2]];
            values[n] = f0 * f1 * f2;
            const Scalar d0 = dp[0][a[0]] * f1 * f2;
            const Scalar d1 = f0 * dp[1][a[1]] * f2;
            const Scalar d2 = f0 * f1 * dp[2][a[2]];
            gradients.row(n) = d0 * dlambda.row(0) + d1 * dlambda.row(1) + d2 * dlambda.row(2);
        }
    }

    Values values(const Point& xhat) const
    {
        Values v;
        Gradients g;
        eval(xhat, v, g);
        return v;
    }

private:
    int m_degree;
    std::vector<Eigen::Matrix<Scalar, 3, 1>> m_nodes;
    std::vector<std::array<int, 3>> m_indices;
};

/// Points and positive weights; Dim = 2 on T̂ (measure 1/2), Dim = 1 on [0, 1].
template <typename Scalar, int Dim>
struct QuadratureRule
{
    using Point = Eigen::Matrix<Scalar, Dim, 1>;

    std::vector<Point> points;
    std::vector<Scalar> weights;
    int exactness_degree = 0;

    int size() const { return static_cast<int>(points.size()); }
};

using TriangleRule = QuadratureRule<double, 2>;
using SegmentRule = QuadratureRule<double, 1>;

/// n-point Gauss-Legendre rule on [0, 1]: Golub-Welsch eigenvalues polished
/// by Newton steps on the Legendre recurrence.
template <typename Scalar = double>
QuadratureRule<Scalar, 1> gauss_legendre(int n)
{
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Matrix jacobi = Matrix::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        const Scalar b = Scalar(i) / std::sqrt(Scalar(4 * i * i - 1));
        jacobi(i, i - 1) = b;
        jacobi(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(jacobi, Eigen::EigenvaluesOnly);

    QuadratureRule<Scalar, 1> rule;
    rule.exactness_degree = 2 * n - 1;
    for (int i = 0; i < n; ++i) {
        Scalar x = solver.eigenvalues()[i];
        Scalar dp = Scalar(1);
        for (int iter = 0; iter < 3; ++iter) {
            Scalar p0 = Scalar(1), p1 = x;
            for (int m = 2; m <= n; ++m) {
                const Scalar p2 = (Scalar(2 * m - 1) * x * p1 - Scalar(m - 1) * p0) / Scalar(m);
                p0 = p1;
                p1 = p2;
            }
            // P_n = p1, P_{n-1} = p0
            dp = Scalar(n) * (x * p1 - p0) / (x * x - Scalar(1));
            x -= p1 / dp;
        }
        const Scalar w = Scalar(2) / ((Scalar(1) - x * x) * dp * dp);
        rule.points.emplace_back(Eigen::Matrix<Scalar, 1, 1>((x + Scalar(1)) / Scalar(2)));
        rule.weights.push_back(w / Scalar(2));
    }
    return rule;
}

inline void require_quadrature_degree(int degree)
{
    if (degree < 0 || degree > max_quadrature_degree) {
        throw UnsupportedDegree(
            "quadrature degree " + std::to_string(degree) + " unavailable; maximum available is " +
            std::to_string(max_quadrature_degree));
    }
}

template <typename Scalar = double>
QuadratureRule<Scalar, 1> segment_quadrature(int degree)
{
    require_quadrature_degree(degree);
    auto rule = gauss_legendre<Scalar>(std::max(1, (degree + 2) / 2));
    return rule;
}

/// Conical-product rule: ∫_T̂ f = ∫∫_[0,1]² f(u, (1-u)v) (1-u) du dv with
/// Gauss-Legendre in both directions. All weights are positive.
template <typename Scalar = double>
QuadratureRule<Scalar, 2> triangle_quadrature(int degree)
{
    require_quadrature_degree(degree);
    const auto outer = gauss_legendre<Scalar>(std::max(1, (degree + 3) / 2));
    const auto inner = gauss_legendre<Scalar>(std::max(1, (degree + 2) / 2));
    QuadratureRule<Scalar, 2> rule;
    rule.exactness_degree = std::min(outer.exactness_degree - 1, inner.exactness_degree);
    for (int i = 0; i < outer.size(); ++i) {
        const Scalar u = outer.points[i][0];
        for (int j = 0; j < inner.size(); ++j) {
            const Scalar v = inner.points[j][0];
            rule.points.emplace_back(u, (Scalar(1) - u) * v);
            rule.weights.push_back(outer.weights[i] * inner.weights[j] * (Scalar(1) - u));
        }
    }
    return rule;
}

enum class QuadratureDomain
{
    Triangle,
    Segment
};

} // namespace liftfem
