// SPDX-License-Identifier: Apache-2.0
#include <liftfem/mesh_io.hpp>

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace liftfem {

void write_mesh(std::ostream& out, const CurvedMesh& mesh)
{
    const auto precision = out.precision(17);
    out << "order " << mesh.order << "  nv " << mesh.geometric_nodes.size() << "  nt " << mesh.num_elements()
        << '\n';
    for (const auto& p : mesh.geometric_nodes) {
        out << p.x() << ' ' << p.y() << '\n';
    }
    for (const auto& ids : mesh.node_numbering.element_nodes) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
            out << (i ? " " : "") << ids[i];
        }
        out << '\n';
    }
    out << "boundary " << mesh.boundary_edges.size() << '\n';
    for (const auto& e : mesh.boundary_edges) {
        out << e.element << ' ' << e.local_edge << '\n';
    }
    out.precision(precision);
}

namespace {

void expect(std::istream& in, const std::string& keyword)
{
    std::string token;
    if (!(in >> token) || token != keyword) {
        throw std::runtime_error("mesh file: expected '" + keyword + "', found '" + token + "'");
    }
}

template <typename T>
T read_value(std::istream& in, const char* what)
{
    T value;
    if (!(in >> value)) {
        throw std::runtime_error(std::string("mesh file: cannot read ") + what);
    }
    return value;
}

} // namespace

CurvedMesh read_mesh(std::istream& in)
{
    expect(in, "order");
    const int r = read_value<int>(in, "order");
    expect(in, "nv");
    const int nv = read_value<int>(in, "node count");
    expect(in, "nt");
    const int nt = read_value<int>(in, "element count");
    if (r < 1 || r > 3 || nv < 3 || nt < 1) {
        throw std::runtime_error("mesh file: invalid header");
    }

    std::vector<Vec2> nodes(nv);
    for (auto& p : nodes) {
        p.x() = read_value<double>(in, "node x");
        p.y() = read_value<double>(in, "node y");
    }

    LatticeNumbering numbering;
    numbering.degree = r;
    numbering.size = nv;
    const int per_element = lattice_size(r);
    AffineMesh affine;
    std::unordered_map<int, int> vertex_of_node;
    for (int t = 0; t < nt; ++t) {
        std::vector<int> ids(per_element);
        for (auto& id : ids) {
            id = read_value<int>(in, "element node index");
            if (id < 0 || id >= nv) {
                throw std::runtime_error("mesh file: node index out of range in element " + std::to_string(t));
            }
        }
        Triangle tri{};
        for (int j = 0; j < 3; ++j) {
            auto [it, inserted] = vertex_of_node.try_emplace(ids[j], static_cast<int>(affine.vertices.size()));
            if (inserted) {
                affine.vertices.push_back(nodes[ids[j]]);
            }
            tri[j] = it->second;
        }
        affine.triangles.push_back(tri);
        numbering.element_nodes.push_back(std::move(ids));
    }

    expect(in, "boundary");
    const int nb = read_value<int>(in, "boundary edge count");
    affine.boundary_vertex.assign(affine.vertices.size(), false);
    for (int b = 0; b < nb; ++b) {
        const int element = read_value<int>(in, "boundary element");
        const int edge = read_value<int>(in, "boundary local edge");
        if (element < 0 || element >= nt || edge < 0 || edge > 2) {
            throw std::runtime_error("mesh file: invalid boundary edge entry " + std::to_string(b));
        }
        affine.boundary_vertex[affine.triangles[element][edge]] = true;
        affine.boundary_vertex[affine.triangles[element][(edge + 1) % 3]] = true;
    }
    update_mesh_size(affine);
    return assemble_curved_mesh(affine, r, std::move(nodes), std::move(numbering));
}

} // namespace liftfem
