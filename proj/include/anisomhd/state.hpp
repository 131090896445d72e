#pragma once

#include "anisomhd/fields.hpp"

namespace anisomhd {

/// Velocity and magnetic perturbation at simulation time t.
struct State {
    VectorField u;
    VectorField b;
    double t = 0.0;

    State() = default;
    State(VectorField velocity, VectorField magnetic, double time = 0.0);

    const Grid& grid() const { return u.grid(); }

    static State zero(const Grid& g);
};

/// Throws ConfigError when u and b live on different grids.
void require_consistent(const State& s);

/// Largest of the two relative divergences.
double max_relative_divergence(const State& s);

}  // namespace anisomhd
