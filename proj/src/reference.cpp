// SPDX-License-Identifier: Apache-2.0
#include <liftfem/reference.hpp>

namespace liftfem {

std::vector<std::array<int, 3>> lattice_indices(int n)
{
    if (n < 1) {
        throw UnsupportedDegree("lattice degree must be at least 1");
    }
    std::vector<std::array<int, 3>> indices;
    indices.reserve(lattice_size(n));
    indices.push_back({n, 0, 0});
    indices.push_back({0, n, 0});
    indices.push_back({0, 0, n});
    for (int j = 1; j < n; ++j) {
        indices.push_back({n - j, j, 0});
    }
    for (int j = 1; j < n; ++j) {
        indices.push_back({0, n - j, j});
    }
    for (int j = 1; j < n; ++j) {
        indices.push_back({j, 0, n - j});
    }
    for (int a2 = 1; a2 < n; ++a2) {
        for (int a1 = 1; a1 + a2 < n; ++a1) {
            indices.push_back({n - a1 - a2, a1, a2});
        }
    }
    return indices;
}

} // namespace liftfem
