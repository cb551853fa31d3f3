// SPDX-License-Identifier: Apache-2.0
#include <liftfem/eoc.hpp>
#include <liftfem/mesh.hpp>
#include <liftfem/mesh_io.hpp>

#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

using namespace liftfem;

namespace {

int count_boundary(const AffineMesh& mesh, const Triangle& t)
{
    return int(mesh.boundary_vertex[t[0]]) + int(mesh.boundary_vertex[t[1]]) + int(mesh.boundary_vertex[t[2]]);
}

/// Every interior edge as (element, local edge) on both sides.
std::vector<std::pair<BoundaryEdge, BoundaryEdge>> shared_edges(const AffineMesh& mesh)
{
    std::map<std::pair<int, int>, BoundaryEdge> seen;
    std::vector<std::pair<BoundaryEdge, BoundaryEdge>> pairs;
    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
        for (int j = 0; j < 3; ++j) {
            const int a = mesh.triangles[t][j], b = mesh.triangles[t][(j + 1) % 3];
            const auto key = std::minmax(a, b);
            if (auto it = seen.find(key); it != seen.end()) {
                pairs.push_back({it->second, {t, j}});
            } else {
                seen[key] = {t, j};
            }
        }
    }
    return pairs;
}

double element_diameter(const AffineMesh& mesh, int t)
{
    const auto& tri = mesh.triangles[t];
    return triangle_diameter(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
}

} // namespace

TEST_SUITE("mesh")
{
    TEST_CASE("coarse mesh")
    {
        const UnitDisk disk;
        const auto mesh = generate_disk_mesh(disk, 0);
        CHECK(mesh.vertices.size() == 7);
        CHECK(mesh.triangles.size() == 6);
        for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
            if (mesh.boundary_vertex[v]) CHECK(std::abs(mesh.vertices[v].norm() - 1.0) <= 1e-12);
        }
        CHECK(mesh.h == doctest::Approx(1.0));
        CHECK_THROWS_AS(generate_disk_mesh(disk, -1), std::invalid_argument);
    }

    TEST_CASE("refinement series: Euler, boundary flags, orientation, mesh size")
    {
        const UnitDisk disk;
        double previous_h = 0.0;
        for (int level = 0; level <= 4; ++level) {
            CAPTURE(level);
            const auto mesh = generate_disk_mesh(disk, level);
            const int v = static_cast<int>(mesh.vertices.size());
            const int t = static_cast<int>(mesh.triangles.size());
            const EdgeTable edges(mesh.triangles);
            CHECK(v - edges.size() + t == 1);
            double hmin = 1e300, hmax = 0.0;
            for (int e = 0; e < t; ++e) {
                const auto& tri = mesh.triangles[e];
                CHECK(signed_area(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]) > 0.0);
                CHECK(count_boundary(mesh, tri) < 3);
                if (count_boundary(mesh, tri) == 2) CHECK_FALSE(mesh.boundary_vertex[tri[0]]);
                hmin = std::min(hmin, element_diameter(mesh, e));
                hmax = std::max(hmax, element_diameter(mesh, e));
            }
            CHECK(hmax == doctest::Approx(mesh.h));
            CHECK(hmax / hmin <= 4.0);
            for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
                if (mesh.boundary_vertex[i]) CHECK(std::abs(disk.signed_distance(mesh.vertices[i])) < 1e-12);
            }
            for (int e = 0; e < edges.size(); ++e) {
                const auto [a, b] = edges.vertices(e);
                CHECK(edges.is_boundary(e) == (mesh.boundary_vertex[a] && mesh.boundary_vertex[b]));
            }
            if (level > 0) {
                const double ratio = mesh.h / previous_h;
                // the first refinement pushes six new midpoints out onto Γ
                CHECK(ratio >= 0.45);
                CHECK(ratio <= (level == 1 ? 0.65 : 0.55));
            }
            previous_h = mesh.h;
        }
    }

    TEST_CASE("triangles with three boundary vertices are flipped away")
    {
        // Hexagon with one ear (0, 1, 2) cut off the fan around the centre.
        AffineMesh mesh;
        for (int i = 0; i < 6; ++i) {
            const double theta = i * std::numbers::pi / 3.0;
            mesh.vertices.emplace_back(std::cos(theta), std::sin(theta));
            mesh.boundary_vertex.push_back(true);
        }
        mesh.vertices.emplace_back(0.0, 0.0);
        mesh.boundary_vertex.push_back(false);
        mesh.triangles = {{0, 1, 2}, {0, 2, 6}, {2, 3, 6}, {3, 4, 6}, {4, 5, 6}, {5, 0, 6}};
        CHECK(repair_boundary_triangles(mesh) == 1);
        for (const auto& t : mesh.triangles) {
            CHECK(count_boundary(mesh, t) == 2);
            CHECK(signed_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]) > 0.0);
        }
        const EdgeTable edges(mesh.triangles);
        CHECK(7 - edges.size() + 6 == 1);
        normalize_boundary_orientation(mesh);
        update_mesh_size(mesh);
        const UnitDisk disk;
        CHECK_NOTHROW(build_curved_mesh(mesh, disk, 2));
    }

    TEST_CASE("lambda star and y hat")
    {
        const Epsilon eps{false, true, true};
        CHECK(lambda_star(Eigen::Vector3d(1, 1, 1) / 3.0, eps) == doctest::Approx(2.0 / 3.0));
        CHECK(lambda_star(Eigen::Vector3d(1, 0, 0), eps) == 0.0);
        CHECK(lambda_star(Eigen::Vector3d(0, 0.3, 0.7), eps) == doctest::Approx(1.0));
        CHECK((y_hat(Eigen::Vector3d(0, 0.5, 0.5), eps) - Vec2(0.5, 0.5)).norm() < 1e-15);
        CHECK((y_hat(Eigen::Vector3d(1, 1, 1) / 3.0, eps) - Vec2(0.5, 0.5)).norm() < 1e-15);
        CHECK_THROWS_AS(y_hat(Eigen::Vector3d(1, 0, 0), eps), GeometryError);
        CHECK(is_internal({true, false, false}));
        CHECK_FALSE(is_internal(eps));
    }

    TEST_CASE("exact element map")
    {
        const UnitDisk disk;
        const auto mesh = generate_disk_mesh(disk, 1);
        for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
            const auto eps = element_epsilon(mesh, t);
            const auto affine = AffineElementMap(
                mesh.vertices[mesh.triangles[t][0]], mesh.vertices[mesh.triangles[t][1]],
                mesh.vertices[mesh.triangles[t][2]]);
            if (is_internal(eps)) {
                CHECK((exact_map(mesh, t, disk, Vec2(0.2, 0.3), 3) - affine.value(Vec2(0.2, 0.3))).norm() == 0.0);
                continue;
            }
            // λ* = 1 on the boundary edge v̂1 v̂2: the map lands on the circle
            CHECK(std::abs(exact_map(mesh, t, disk, Vec2(0.4, 0.6), 3).norm() - 1.0) <= 1e-12);
            // λ* = 0 at v̂0: the affine image
            CHECK((exact_map(mesh, t, disk, Vec2(0.0, 0.0), 3) - affine.value(Vec2(0, 0))).norm() == 0.0);
            // near the internal face the displacement decays like (λ*)^s
            const double small = 1e-3;
            const Vec2 xhat(small / 2, small / 2);
            const double displacement = (exact_map(mesh, t, disk, xhat, 3) - affine.value(xhat)).norm();
            CHECK(displacement <= std::pow(small, 3) * 0.5);
        }
    }

    TEST_CASE("r = 1 reproduces the affine mesh")
    {
        const UnitDisk disk;
        const auto affine = generate_disk_mesh(disk, 2);
        const auto mesh = build_curved_mesh(affine, disk, 1);
        CHECK(mesh.geometric_nodes.size() == affine.vertices.size());
        for (std::size_t i = 0; i < affine.vertices.size(); ++i) {
            CHECK((mesh.geometric_nodes[i] - affine.vertices[i]).norm() <= 1e-15);
        }
        CHECK(mesh.h == affine.h);
    }

    TEST_CASE("curved meshes: boundary nodes, internal elements, continuity, Jacobians")
    {
        const UnitDisk disk;
        const auto affine = generate_disk_mesh(disk, 2);
        for (int r = 1; r <= 3; ++r) {
            CAPTURE(r);
            const auto mesh = build_curved_mesh(affine, disk, r);
            const auto lattice = lattice_points<double>(r);
            for (const auto& edge : mesh.boundary_edges) {
                const auto [a, b] = reference_edge(edge.local_edge);
                for (int j = 0; j <= r; ++j) {
                    const Vec2 x = mesh.element_map(edge.element).value(a + (double(j) / r) * (b - a));
                    CHECK(std::abs(x.norm() - 1.0) <= 1e-10);
                }
            }
            int internal = 0;
            for (int e = 0; e < mesh.num_elements(); ++e) {
                const auto& element = mesh.elements[e];
                if (!element.internal) continue;
                ++internal;
                const auto affine_map = mesh.affine_map(e);
                for (std::size_t i = 0; i < lattice.size(); ++i) {
                    CHECK((element.nodes[i] - affine_map.value(lattice[i])).norm() <= 1e-14);
                }
            }
            CHECK(internal > 0);
            for (const auto& [left, right] : shared_edges(mesh.affine)) {
                const auto [a, b] = reference_edge(left.local_edge);
                const auto [c, d] = reference_edge(right.local_edge);
                for (double t : {0.0, 0.17, 0.5, 0.71, 1.0}) {
                    const Vec2 x = mesh.element_map(left.element).value(a + t * (b - a));
                    const Vec2 y = mesh.element_map(right.element).value(c + (1.0 - t) * (d - c));
                    CHECK((x - y).norm() <= 1e-12);
                }
            }
            const auto rule = triangle_quadrature<double>(2 * r);
            for (int e = 0; e < mesh.num_elements(); ++e) {
                for (const auto& p : rule.points) CHECK(mesh.element_map(e).jacobian(p).determinant() > 0.0);
            }
        }
        CHECK_THROWS_AS(build_curved_mesh(affine, disk, 4), UnsupportedDegree);
        CHECK_THROWS_AS(build_curved_mesh(affine, disk, 0), UnsupportedDegree);
    }

    TEST_CASE("invalid affine meshes are rejected")
    {
        const UnitDisk disk;
        auto mesh = generate_disk_mesh(disk, 1);
        auto moved = mesh;
        for (std::size_t v = 0; v < moved.vertices.size(); ++v) {
            if (moved.boundary_vertex[v]) {
                moved.vertices[v] *= 0.99;
                break;
            }
        }
        CHECK_THROWS_AS(build_curved_mesh(moved, disk, 2), GeometryError);
        auto flipped = mesh;
        std::swap(flipped.triangles[0][1], flipped.triangles[0][2]);
        CHECK_THROWS_AS(build_curved_mesh(flipped, disk, 2), GeometryError);
    }

    TEST_CASE("distance of the discrete boundary to the circle")
    {
        const UnitDisk disk;
        const auto rule = segment_quadrature<double>(12);
        for (int r = 1; r <= 3; ++r) {
            std::vector<double> h, distance;
            for (int level = 1; level <= 4; ++level) {
                const auto mesh = build_curved_mesh(generate_disk_mesh(disk, level), disk, r);
                double worst = 0.0;
                for (const auto& edge : mesh.boundary_edges) {
                    const auto [a, b] = reference_edge(edge.local_edge);
                    for (const auto& t : rule.points) {
                        const Vec2 x = mesh.element_map(edge.element).value(a + t[0] * (b - a));
                        worst = std::max(worst, std::abs(disk.signed_distance(x)));
                    }
                }
                h.push_back(mesh.h);
                distance.push_back(worst);
            }
            // quadratic arcs through symmetric nodes gain one order on a circle
            const int expected = r == 2 ? 4 : r + 1;
            CAPTURE(r);
            CHECK(std::abs(eoc_fit(h, distance).slope - expected) <= 0.4);
        }
    }

    TEST_CASE("cubic element maps bend across the boundary layer like h^2")
    {
        // Third derivative of F_T^(r) along (1, 1), i.e. across the boundary
        // edge, exact for r <= 3 by a third difference. It vanishes for r = 2
        // and decays only like h^2 for r = 3.
        const UnitDisk disk;
        const Vec2 c(1.0 / 3.0, 1.0 / 3.0), dir(1.0, 1.0);
        const double t = 0.1;
        for (int r = 2; r <= 3; ++r) {
            std::vector<double> h, d3;
            for (int level = 1; level <= 4; ++level) {
                const auto mesh = build_curved_mesh(generate_disk_mesh(disk, level), disk, r);
                double worst = 0.0;
                for (int e = 0; e < mesh.num_elements(); ++e) {
                    if (mesh.elements[e].internal) continue;
                    const auto map = mesh.element_map(e);
                    const auto f = [&](double x) { return map.value(c + x * dir); };
                    worst = std::max(worst, ((f(2 * t) - 2.0 * f(t) + 2.0 * f(-t) - f(-2 * t)) / (2.0 * t * t * t)).norm());
                }
                h.push_back(mesh.h);
                d3.push_back(worst);
            }
            CAPTURE(r);
            if (r == 2) {
                CHECK(d3.back() <= 1e-9);
            } else {
                CHECK(eoc_fit(h, d3).slope == doctest::Approx(2.0).epsilon(0.1));
            }
        }
    }

    TEST_CASE("dump and ingest round trip")
    {
        const UnitDisk disk;
        for (int r = 1; r <= 3; ++r) {
            const auto mesh = build_curved_mesh(generate_disk_mesh(disk, 1), disk, r);
            std::stringstream first;
            write_mesh(first, mesh);
            std::istringstream in(first.str());
            const auto loaded = read_mesh(in);
            CHECK(loaded.order == r);
            CHECK(loaded.num_elements() == mesh.num_elements());
            CHECK(loaded.boundary_edges.size() == mesh.boundary_edges.size());
            for (int e = 0; e < mesh.num_elements(); ++e) {
                CHECK(loaded.elements[e].internal == mesh.elements[e].internal);
                for (std::size_t i = 0; i < mesh.elements[e].nodes.size(); ++i) {
                    CHECK((loaded.elements[e].nodes[i] - mesh.elements[e].nodes[i]).norm() == 0.0);
                }
            }
            CHECK(loaded.h == doctest::Approx(mesh.h));
            std::stringstream second;
            write_mesh(second, loaded);
            CHECK(first.str() == second.str());
        }
    }

    TEST_CASE("malformed mesh files")
    {
        std::istringstream empty("");
        CHECK_THROWS_AS(read_mesh(empty), std::runtime_error);
        std::istringstream truncated("order 1  nv 3  nt 1\n0 0\n1 0\n");
        CHECK_THROWS_AS(read_mesh(truncated), std::runtime_error);
        std::istringstream bad_index("order 1  nv 3  nt 1\n0 0\n1 0\n0 1\n0 1 7\nboundary 0\n");
        CHECK_THROWS_AS(read_mesh(bad_index), std::runtime_error);
    }
}
