#include "anisomhd/grid.hpp"

#include "anisomhd/errors.hpp"

#include <string>

namespace anisomhd {

Grid::Grid(int n1, int n2, int n3) : n{n1, n2, n3} { validate(); }

Grid::Grid(std::array<int, 3> modes, std::array<double, 3> lengths)
    : n(modes), length(lengths) {
    validate();
}

void Grid::validate() const {
    for (int a = 0; a < 3; ++a) {
        if (n[a] < 4 || n[a] % 2 != 0) {
            throw ConfigError("grid: axis " + std::to_string(a + 1) +
                              " needs an even mode count >= 4, got " +
                              std::to_string(n[a]));
        }
        if (!(length[a] > 0)) {
            throw ConfigError("grid: axis " + std::to_string(a + 1) +
                              " length must be positive");
        }
    }
}

std::size_t Grid::index_of_mode(std::array<int, 3> m) const {
    for (int a = 0; a < 3; ++a) {
        if (2 * m[a] < -n[a] || 2 * m[a] >= n[a]) {
            throw ConfigError("grid: mode " + std::to_string(m[a]) +
                              " out of range on axis " + std::to_string(a + 1));
        }
    }
    return index(storage(0, m[0]), storage(1, m[1]), storage(2, m[2]));
}

}  // namespace anisomhd
