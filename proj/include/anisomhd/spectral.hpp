#pragma once

#include "anisomhd/fields.hpp"

namespace anisomhd {

/// Visits every storage slot with its per-axis storage indices.
template <class Fn>
void for_each_mode(const Grid& g, Fn&& fn) {
    std::size_t idx = 0;
    for (int i0 = 0; i0 < g.n[0]; ++i0)
        for (int i1 = 0; i1 < g.n[1]; ++i1)
            for (int i2 = 0; i2 < g.n[2]; ++i2, ++idx) fn(idx, i0, i1, i2);
}

/// Multiplies by (i k_axis)^order; `axis` is 0-based. Odd orders annihilate
/// the Nyquist plane of that axis.
ScalarField derivative(const ScalarField& f, int axis, int order = 1);

VectorField derivative(const VectorField& v, int axis, int order = 1);

/// Divergence-free part: v(k) - k (k.v(k)) / |k|^2, zero mode untouched.
VectorField leray_project(const VectorField& v);

/// Spectral divergence (a scalar field).
ScalarField divergence(const VectorField& v);

/// max_k |k.v(k)| / (|k| max_k |v(k)|), the scale-free divergence measure
/// used for the solenoidal invariants. Zero for the zero field.
double max_relative_divergence(const VectorField& v);

/// Pseudo-spectral product with 2/3-rule truncation of the result.
ScalarField dealiased_product(const ScalarField& f, const ScalarField& g);

/// Zeroes every mode outside the 2/3-rule retained set.
ScalarField dealias(const ScalarField& f);
VectorField dealias(const VectorField& v);

/// Inverse transform followed by forward transform.
ScalarField transform_roundtrip(const ScalarField& f);

/// Spectral interpolation onto another grid with the same box: modes present
/// in both grids are copied, the rest are zero. Target must be at least as
/// fine along every axis.
ScalarField resample(const ScalarField& f, const Grid& target);

/// L^2 norm squared over the box from the coefficients (Parseval).
double l2_norm_sq(const ScalarField& f);
double l2_norm_sq(const VectorField& v);

/// L^2 norm squared from physical samples (rectangle rule).
double l2_norm_sq(const PhysicalField& p);

/// Mean over the box of the product of two fields, computed spectrally:
/// sum_k f(k) conj(g(k)).
double inner_mean(const ScalarField& f, const ScalarField& g);

}  // namespace anisomhd
