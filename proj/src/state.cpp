#include "anisomhd/state.hpp"

#include "anisomhd/errors.hpp"
#include "anisomhd/spectral.hpp"

#include <algorithm>

namespace anisomhd {

State::State(VectorField velocity, VectorField magnetic, double time)
    : u(std::move(velocity)), b(std::move(magnetic)), t(time) {
    require_consistent(*this);
}

State State::zero(const Grid& g) {
    State s;
    s.u = VectorField(g);
    s.b = VectorField(g);
    s.u.divergence_free = s.b.divergence_free = true;
    return s;
}

void require_consistent(const State& s) {
    if (!(s.u.grid() == s.b.grid())) {
        throw ConfigError("state: velocity and magnetic fields are on different grids");
    }
}

double max_relative_divergence(const State& s) {
    return std::max(max_relative_divergence(s.u), max_relative_divergence(s.b));
}

}  // namespace anisomhd
