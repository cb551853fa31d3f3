// SPDX-License-Identifier: Apache-2.0
#include <liftfem/mesh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace liftfem {

EdgeTable::EdgeTable(const std::vector<Triangle>& triangles)
{
    for (const auto& t : triangles) {
        for (int j = 0; j < 3; ++j) {
            auto key = std::minmax(t[j], t[(j + 1) % 3]);
            auto [it, inserted] = m_index.try_emplace({key.first, key.second}, size());
            if (inserted) {
                m_edges.emplace_back(key.first, key.second);
                m_incidence.push_back(0);
            }
            ++m_incidence[it->second];
        }
    }
}

int EdgeTable::id(int a, int b) const
{
    auto key = std::minmax(a, b);
    auto it = m_index.find({key.first, key.second});
    return it == m_index.end() ? -1 : it->second;
}

LatticeNumbering number_lattice(const std::vector<Triangle>& triangles, int num_vertices, int degree)
{
    const EdgeTable edges(triangles);
    const int per_edge = degree - 1;
    const int per_interior = (degree - 1) * (degree - 2) / 2;

    LatticeNumbering numbering;
    numbering.degree = degree;
    numbering.size = num_vertices + per_edge * edges.size() +
                     per_interior * static_cast<int>(triangles.size());
    numbering.element_nodes.reserve(triangles.size());

    const int interior_base = num_vertices + per_edge * edges.size();
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const auto& tri = triangles[t];
        std::vector<int> ids(tri.begin(), tri.end());
        for (int j = 0; j < 3; ++j) {
            const int a = tri[j];
            const int b = tri[(j + 1) % 3];
            const int base = num_vertices + per_edge * edges.id(a, b);
            for (int m = 0; m < per_edge; ++m) {
                ids.push_back(base + (a < b ? m : per_edge - 1 - m));
            }
        }
        for (int m = 0; m < per_interior; ++m) {
            ids.push_back(interior_base + per_interior * static_cast<int>(t) + m);
        }
        numbering.element_nodes.push_back(std::move(ids));
    }
    return numbering;
}

double triangle_diameter(const Vec2& a, const Vec2& b, const Vec2& c)
{
    return std::max({(a - b).norm(), (b - c).norm(), (c - a).norm()});
}

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c)
{
    const Vec2 u = b - a;
    const Vec2 v = c - a;
    return 0.5 * (u.x() * v.y() - u.y() * v.x());
}

void update_mesh_size(AffineMesh& mesh)
{
    mesh.h = 0.0;
    for (const auto& t : mesh.triangles) {
        mesh.h = std::max(mesh.h, triangle_diameter(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]));
    }
}

namespace {

void refine(AffineMesh& mesh, const SmoothBoundary& boundary)
{
    const EdgeTable edges(mesh.triangles);
    const int nv = static_cast<int>(mesh.vertices.size());
    for (int e = 0; e < edges.size(); ++e) {
        const auto [a, b] = edges.vertices(e);
        Vec2 mid = 0.5 * (mesh.vertices[a] + mesh.vertices[b]);
        const bool on_boundary = edges.is_boundary(e);
        if (on_boundary) {
            mid = boundary.project(mid);
        }
        mesh.vertices.push_back(mid);
        mesh.boundary_vertex.push_back(on_boundary);
    }
    std::vector<Triangle> children;
    children.reserve(4 * mesh.triangles.size());
    for (const auto& t : mesh.triangles) {
        const int m01 = nv + edges.id(t[0], t[1]);
        const int m12 = nv + edges.id(t[1], t[2]);
        const int m20 = nv + edges.id(t[2], t[0]);
        children.push_back({t[0], m01, m20});
        children.push_back({m01, t[1], m12});
        children.push_back({m20, m12, t[2]});
        children.push_back({m01, m12, m20});
    }
    mesh.triangles = std::move(children);
}

int count_boundary(const AffineMesh& mesh, const Triangle& t)
{
    return int(mesh.boundary_vertex[t[0]]) + int(mesh.boundary_vertex[t[1]]) + int(mesh.boundary_vertex[t[2]]);
}

} // namespace

AffineMesh generate_disk_mesh(const SmoothBoundary& boundary, int level)
{
    if (level < 0) {
        throw std::invalid_argument("mesh level must be non-negative");
    }
    AffineMesh mesh;
    mesh.vertices.emplace_back(0.0, 0.0);
    mesh.boundary_vertex.push_back(false);
    for (int i = 0; i < 6; ++i) {
        const double theta = i * std::numbers::pi / 3.0;
        mesh.vertices.push_back(boundary.project(Vec2(std::cos(theta), std::sin(theta))));
        mesh.boundary_vertex.push_back(true);
    }
    for (int i = 0; i < 6; ++i) {
        mesh.triangles.push_back({0, 1 + i, 1 + (i + 1) % 6});
    }
    for (int l = 0; l < level; ++l) {
        refine(mesh, boundary);
    }
    repair_boundary_triangles(mesh);
    normalize_boundary_orientation(mesh);
    update_mesh_size(mesh);
    return mesh;
}

int repair_boundary_triangles(AffineMesh& mesh)
{
    int flips = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        const EdgeTable edges(mesh.triangles);
        for (std::size_t t = 0; t < mesh.triangles.size() && !changed; ++t) {
            if (count_boundary(mesh, mesh.triangles[t]) < 3) {
                continue;
            }
            for (int j = 0; j < 3 && !changed; ++j) {
                const int a = mesh.triangles[t][j];
                const int b = mesh.triangles[t][(j + 1) % 3];
                const int c = mesh.triangles[t][(j + 2) % 3];
                if (edges.is_boundary(edges.id(a, b))) {
                    continue;
                }
                // neighbour holds the edge as b -> a with opposite vertex d
                for (std::size_t u = 0; u < mesh.triangles.size(); ++u) {
                    if (u == t) {
                        continue;
                    }
                    const auto& n = mesh.triangles[u];
                    for (int i = 0; i < 3; ++i) {
                        if (n[i] == b && n[(i + 1) % 3] == a) {
                            const int d = n[(i + 2) % 3];
                            const auto& p = mesh.vertices;
                            if (signed_area(p[a], p[d], p[c]) > 0 && signed_area(p[d], p[b], p[c]) > 0) {
                                mesh.triangles[t] = {a, d, c};
                                mesh.triangles[u] = {d, b, c};
                                ++flips;
                                changed = true;
                            }
                            break;
                        }
                    }
                    if (changed) {
                        break;
                    }
                }
            }
        }
    }
    return flips;
}

void normalize_boundary_orientation(AffineMesh& mesh)
{
    for (auto& t : mesh.triangles) {
        if (count_boundary(mesh, t) != 2) {
            continue;
        }
        while (mesh.boundary_vertex[t[0]]) {
            std::rotate(t.begin(), t.begin() + 1, t.end());
        }
    }
}

Epsilon element_epsilon(const AffineMesh& mesh, int element)
{
    const auto& t = mesh.triangles[element];
    return {mesh.boundary_vertex[t[0]], mesh.boundary_vertex[t[1]], mesh.boundary_vertex[t[2]]};
}

bool is_internal(const Epsilon& epsilon)
{
    return int(epsilon[0]) + int(epsilon[1]) + int(epsilon[2]) <= 1;
}

double lambda_star(const Eigen::Vector3d& barycentric, const Epsilon& epsilon)
{
    double value = 0.0;
    for (int i = 0; i < 3; ++i) {
        if (epsilon[i]) {
            value += barycentric[i];
        }
    }
    return value;
}

Vec2 y_hat(const Eigen::Vector3d& barycentric, const Epsilon& epsilon)
{
    const double ls = lambda_star(barycentric, epsilon);
    if (!(ls > 0.0)) {
        throw GeometryError("y_hat is singular on the internal face (lambda* = 0)");
    }
    // Σ ε_i λ_i v̂_i with v̂0 = 0, v̂1 = (1,0), v̂2 = (0,1)
    Vec2 sum(epsilon[1] ? barycentric[1] : 0.0, epsilon[2] ? barycentric[2] : 0.0);
    return sum / ls;
}

AffineElementMap::AffineElementMap(const Vec2& v0, const Vec2& v1, const Vec2& v2)
    : m_origin(v0)
{
    m_jacobian.col(0) = v1 - v0;
    m_jacobian.col(1) = v2 - v0;
}

PolynomialElementMap::PolynomialElementMap(const LagrangeBasis<double>& basis, const std::vector<Vec2>& nodes)
    : m_basis(&basis)
    , m_nodes(&nodes)
{}

void PolynomialElementMap::eval(const Vec2& xhat, Vec2& value, Mat2& jacobian) const
{
    LagrangeBasis<double>::Values phi;
    LagrangeBasis<double>::Gradients dphi;
    m_basis->eval(xhat, phi, dphi);
    value.setZero();
    jacobian.setZero();
    for (int i = 0; i < m_basis->size(); ++i) {
        value += phi[i] * (*m_nodes)[i];
        jacobian += (*m_nodes)[i] * dphi.row(i);
    }
}

Vec2 PolynomialElementMap::value(const Vec2& xhat) const
{
    Vec2 v;
    Mat2 j;
    eval(xhat, v, j);
    return v;
}

Mat2 PolynomialElementMap::jacobian(const Vec2& xhat) const
{
    Vec2 v;
    Mat2 j;
    eval(xhat, v, j);
    return j;
}

std::pair<Vec2, Vec2> reference_edge(int local_edge)
{
    static const std::array<Vec2, 3> vhat = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
    return {vhat[local_edge], vhat[(local_edge + 1) % 3]};
}

AffineElementMap CurvedMesh::affine_map(int element) const
{
    const auto& t = affine.triangles[element];
    return {affine.vertices[t[0]], affine.vertices[t[1]], affine.vertices[t[2]]};
}

Vec2 exact_map(const AffineMesh& mesh, int element, const SmoothBoundary& boundary, const Vec2& xhat, int s)
{
    const auto& t = mesh.triangles[element];
    const AffineElementMap map(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    Vec2 x;
    exact_map_eval(map, element_epsilon(mesh, element), boundary, xhat, s, &x, nullptr);
    return x;
}

namespace {

void validate_against_boundary(const AffineMesh& affine, const SmoothBoundary& boundary)
{
    for (std::size_t v = 0; v < affine.vertices.size(); ++v) {
        if (affine.boundary_vertex[v] && std::abs(boundary.signed_distance(affine.vertices[v])) > 1e-12) {
            throw GeometryError("boundary vertex " + std::to_string(v) + " does not lie on the boundary");
        }
    }
    const EdgeTable edges(affine.triangles);
    for (std::size_t t = 0; t < affine.triangles.size(); ++t) {
        const auto& tri = affine.triangles[t];
        const auto& p = affine.vertices;
        if (signed_area(p[tri[0]], p[tri[1]], p[tri[2]]) <= 0.0) {
            throw GeometryError("element " + std::to_string(t) + " has non-positive orientation");
        }
        const Epsilon eps = element_epsilon(affine, static_cast<int>(t));
        const int count = int(eps[0]) + int(eps[1]) + int(eps[2]);
        if (count == 3) {
            throw GeometryError("element " + std::to_string(t) + " has three boundary vertices");
        }
        if (count == 2) {
            for (int j = 0; j < 3; ++j) {
                if (eps[j] && eps[(j + 1) % 3]) {
                    const int a = tri[j], b = tri[(j + 1) % 3];
                    if (!edges.is_boundary(edges.id(a, b))) {
                        throw GeometryError(
                            "element " + std::to_string(t) +
                            " joins two boundary vertices through an interior edge");
                    }
                    if (!boundary.in_tubular_neighborhood(0.5 * (p[a] + p[b]))) {
                        throw GeometryError(
                            "boundary edge of element " + std::to_string(t) +
                            " leaves the tubular neighbourhood; mesh too coarse");
                    }
                }
            }
        }
    }
}

} // namespace

CurvedMesh assemble_curved_mesh(
    const AffineMesh& affine,
    int r,
    std::vector<Vec2> geometric_nodes,
    LatticeNumbering numbering)
{
    CurvedMesh mesh(r);
    mesh.affine = affine;
    mesh.h = affine.h;
    mesh.geometric_nodes = std::move(geometric_nodes);
    mesh.node_numbering = std::move(numbering);

    const EdgeTable edges(affine.triangles);
    const int nt = static_cast<int>(affine.triangles.size());
    mesh.elements.resize(nt);
    const auto rule = triangle_quadrature<double>(2 * r);
    for (int t = 0; t < nt; ++t) {
        auto& element = mesh.elements[t];
        element.vertices = affine.triangles[t];
        element.epsilon = element_epsilon(affine, t);
        element.internal = is_internal(element.epsilon);
        for (int id : mesh.node_numbering.element_nodes[t]) {
            element.nodes.push_back(mesh.geometric_nodes[id]);
        }
        for (int j = 0; j < 3; ++j) {
            if (edges.is_boundary(edges.id(element.vertices[j], element.vertices[(j + 1) % 3]))) {
                mesh.boundary_edges.push_back({t, j});
            }
        }
        const auto map = mesh.element_map(t);
        for (const auto& q : rule.points) {
            if (map.jacobian(q).determinant() <= 0.0) {
                throw GeometryError("element " + std::to_string(t) + " has a non-positive Jacobian");
            }
        }
    }
    return mesh;
}

CurvedMesh build_curved_mesh(const AffineMesh& affine, const SmoothBoundary& boundary, int r)
{
    if (r < 1 || r > 3) {
        throw UnsupportedDegree("geometric order " + std::to_string(r) + " unsupported (1..3)");
    }
    validate_against_boundary(affine, boundary);

    auto numbering = number_lattice(affine.triangles, static_cast<int>(affine.vertices.size()), r);
    std::vector<Vec2> nodes(numbering.size);
    std::vector<bool> placed(numbering.size, false);
    const auto lattice = lattice_points<double>(r);
    for (std::size_t t = 0; t < affine.triangles.size(); ++t) {
        const auto& ids = numbering.element_nodes[t];
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (!placed[ids[i]]) {
                nodes[ids[i]] = exact_map(affine, static_cast<int>(t), boundary, lattice[i], r + 2);
                placed[ids[i]] = true;
            }
        }
    }
    return assemble_curved_mesh(affine, r, std::move(nodes), std::move(numbering));
}

} // namespace liftfem
