// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <liftfem/geometry.hpp>
#include <liftfem/reference.hpp>

#include <Eigen/Core>
#include <Eigen/LU>

#include <array>
#include <map>
#include <utility>
#include <vector>

namespace liftfem {

using Triangle = std::array<int, 3>;

/// Per-vertex boundary flags ε_i of one element.
using Epsilon = std::array<bool, 3>;

struct AffineMesh
{
    std::vector<Vec2> vertices;
    std::vector<Triangle> triangles; // counterclockwise
    std::vector<bool> boundary_vertex;
    double h = 0.0; // max element diameter
};

/// Sorted vertex pair → global edge id, plus the number of incident triangles.
class EdgeTable
{
public:
    explicit EdgeTable(const std::vector<Triangle>& triangles);

    int size() const { return static_cast<int>(m_edges.size()); }
    int id(int a, int b) const;
    const std::pair<int, int>& vertices(int edge) const { return m_edges[edge]; }
    bool is_boundary(int edge) const { return m_incidence[edge] == 1; }

private:
    std::map<std::pair<int, int>, int> m_index;
    std::vector<std::pair<int, int>> m_edges;
    std::vector<int> m_incidence;
};

///
/// Global numbering of the degree-n lattice nodes of a conforming
/// triangulation: vertices keep their ids, then n-1 nodes per edge ordered
/// from the lower to the higher vertex id, then interior nodes per triangle.
///
struct LatticeNumbering
{
    int degree = 1;
    int size = 0;
    std::vector<std::vector<int>> element_nodes; // local lattice order
};

LatticeNumbering number_lattice(const std::vector<Triangle>& triangles, int num_vertices, int degree);

double triangle_diameter(const Vec2& a, const Vec2& b, const Vec2& c);
double signed_area(const Vec2& a, const Vec2& b, const Vec2& c);

/// Uniformly refined hexagonal fan triangulation of the domain bounded by
/// `boundary`; boundary midpoints are projected onto Γ after every level.
AffineMesh generate_disk_mesh(const SmoothBoundary& boundary, int level);

/// Flip the interior edge of every triangle with three boundary vertices.
/// Returns the number of flips performed.
int repair_boundary_triangles(AffineMesh& mesh);

/// Rotate non-internal triangles so that ε = (0, 1, 1); orientation is kept.
void normalize_boundary_orientation(AffineMesh& mesh);

void update_mesh_size(AffineMesh& mesh);

Epsilon element_epsilon(const AffineMesh& mesh, int element);
bool is_internal(const Epsilon& epsilon);

/// λ* = Σ ε_i λ_i.
double lambda_star(const Eigen::Vector3d& barycentric, const Epsilon& epsilon);

/// ŷ = (1/λ*) Σ ε_i λ_i v̂_i. Throws GeometryError when λ* = 0.
Vec2 y_hat(const Eigen::Vector3d& barycentric, const Epsilon& epsilon);

/// Affine map F_T(x̂) = v0 + [v1 - v0, v2 - v0] x̂.
class AffineElementMap
{
public:
    AffineElementMap(const Vec2& v0, const Vec2& v1, const Vec2& v2);

    Vec2 value(const Vec2& xhat) const { return m_origin + m_jacobian * xhat; }
    const Mat2& jacobian(const Vec2&) const { return m_jacobian; }

private:
    Vec2 m_origin;
    Mat2 m_jacobian;
};

/// P^r map through the geometric nodes of one element.
class PolynomialElementMap
{
public:
    PolynomialElementMap(const LagrangeBasis<double>& basis, const std::vector<Vec2>& nodes);

    Vec2 value(const Vec2& xhat) const;
    Mat2 jacobian(const Vec2& xhat) const;
    void eval(const Vec2& xhat, Vec2& value, Mat2& jacobian) const;

private:
    const LagrangeBasis<double>* m_basis;
    const std::vector<Vec2>* m_nodes;
};

///
/// Exact transformation built on a reference-to-physical map X:
///   F(x̂) = X(x̂)                                   if λ*(x̂) = 0 or T internal,
///   F(x̂) = X(x̂) + (λ*)^s (b(X(ŷ)) - X(ŷ))          otherwise.
/// With X = F_T (affine) this is the classical exact element map; with
/// X = F_T^(r) it is the map used by the trace-preserving lift.
///
/// The jacobian is the analytic chain rule
///   DX(x̂) + (b(Y) - Y) ⊗ ∇(λ*)^s + (λ*)^s (Db(Y) - I) DX(ŷ) Dŷ,
/// whose limit on σ̂ is DX(x̂) for s ≥ 2 and which is undefined there for s = 1.
///
template <typename Map>
void exact_map_eval(
    const Map& map,
    const Epsilon& epsilon,
    const SmoothBoundary& boundary,
    const Vec2& xhat,
    int s,
    Vec2* value,
    Mat2* jacobian)
{
    const Eigen::Vector3d lambda = barycentric(xhat);
    const double ls = lambda_star(lambda, epsilon);
    if (is_internal(epsilon) || ls <= 0.0) {
        if (value) *value = map.value(xhat);
        if (jacobian) {
            if (!is_internal(epsilon) && s < 2) {
                throw LiftError("exact map differential is undefined on the internal face for s = 1");
            }
            *jacobian = map.jacobian(xhat);
        }
        return;
    }

    const Vec2 yhat = y_hat(lambda, epsilon);
    Vec2 y;
    Mat2 dy_map;
    if constexpr (requires { map.eval(yhat, y, dy_map); }) {
        map.eval(yhat, y, dy_map);
    } else {
        y = map.value(yhat);
        dy_map = map.jacobian(yhat);
    }
    const Vec2 displacement = boundary.project(y) - y;
    const double mu = std::pow(ls, s);
    if (value) *value = map.value(xhat) + mu * displacement;
    if (jacobian) {
        const auto dlambda = barycentric_gradients<double>();
        Eigen::RowVector2d dls = Eigen::RowVector2d::Zero();
        Mat2 numerator = Mat2::Zero(); // Σ ε_i v̂_i ∇λ_iᵀ
        const std::array<Vec2, 3> vhat = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
        for (int i = 0; i < 3; ++i) {
            if (epsilon[i]) {
                dls += dlambda.row(i);
                numerator += vhat[i] * dlambda.row(i);
            }
        }
        const Mat2 dyhat = (numerator - yhat * dls) / ls;
        const Eigen::RowVector2d dmu = s * std::pow(ls, s - 1) * dls;
        const Mat2 db = boundary.projection_differential(y) - Mat2::Identity();
        *jacobian = map.jacobian(xhat) + displacement * dmu + mu * db * dy_map * dyhat;
    }
}

struct ElementGeometry
{
    Triangle vertices{};
    Epsilon epsilon{};
    bool internal = true;
    std::vector<Vec2> nodes; // images of the P^r lattice, lattice order
};

struct BoundaryEdge
{
    int element = -1;
    int local_edge = -1; // edge j joins local vertices j and (j+1) mod 3
};

/// Reference endpoints of local edge j.
std::pair<Vec2, Vec2> reference_edge(int local_edge);

class CurvedMesh
{
public:
    AffineMesh affine;
    int order = 1;
    std::vector<ElementGeometry> elements;
    std::vector<BoundaryEdge> boundary_edges;
    double h = 0.0;

    /// Shared geometric node table (global lattice numbering of degree r).
    std::vector<Vec2> geometric_nodes;
    LatticeNumbering node_numbering;

    int num_elements() const { return static_cast<int>(elements.size()); }
    const LagrangeBasis<double>& geometry_basis() const { return m_basis; }

    PolynomialElementMap element_map(int element) const { return {m_basis, elements[element].nodes}; }
    AffineElementMap affine_map(int element) const;

    CurvedMesh() = default;
    explicit CurvedMesh(int r)
        : order(r)
        , m_basis(r)
    {}

private:
    LagrangeBasis<double> m_basis{1};
};

/// x = F_T(x̂) + (λ*)^s (b(y) - y) for one element of the affine mesh.
Vec2 exact_map(const AffineMesh& mesh, int element, const SmoothBoundary& boundary, const Vec2& xhat, int s);

/// Elevate an affine mesh to geometric order r ∈ [1, 3]: nodes are the images
/// of the P^r lattice under the exact map with s = r + 2.
CurvedMesh build_curved_mesh(const AffineMesh& affine, const SmoothBoundary& boundary, int r);

/// Reconstruct the mesh bookkeeping (classification, boundary edges) from an
/// affine skeleton and an explicit node table, e.g. after ingesting a dump.
CurvedMesh assemble_curved_mesh(
    const AffineMesh& affine,
    int r,
    std::vector<Vec2> geometric_nodes,
    LatticeNumbering numbering);

} // namespace liftfem
