#pragma once

#include "anisomhd/harness/config.hpp"
#include "anisomhd/state.hpp"

#include <cstdint>

namespace anisomhd {

struct GeneratedInitial {
    State state;
    std::uint64_t seed_used = 0;  ///< differs from the requested seed after a retry
};

/// Solenoidal initial data with ||u0||_{H^4} + ||b0||_{H^4} = epsilon.
///
/// random-band-limited: i.i.d. complex Gaussian coefficients for every
/// non-zero wavevector with max|m_a| <= band, drawn in a grid-independent
/// order (so the same seed gives the same field on any grid that holds the
/// band), Leray-projected, then u and b scaled separately to carry
/// (1 - b_fraction) and b_fraction of epsilon. An all-zero draw is retried
/// with seed + 1.
///
/// named-mode-list: each entry contributes amplitude * p * cos(k.x) with p
/// the projected polarisation; the sum is scaled by one factor.
GeneratedInitial generate_initial(const InitSpec& init, const Grid& g);

/// ||u||_{H^4} + ||b||_{H^4} (multiplier form).
double h4_size(const State& s);

}  // namespace anisomhd
