#pragma once

#include <array>
#include <cstddef>
#include <numbers>

namespace anisomhd {

/// Periodic box discretisation with `n[a]` Fourier modes along axis `a`.
///
/// Coefficients and physical samples share one row-major layout: axis 0 is
/// the slowest index. Along an axis, storage index `i` carries the integer
/// mode `m = i` for `i < n/2` and `m = i - n` otherwise (FFT order), so the
/// single Nyquist mode is `m = -n/2`.
struct Grid {
    std::array<int, 3> n{32, 32, 32};
    std::array<double, 3> length{2 * std::numbers::pi, 2 * std::numbers::pi,
                                 2 * std::numbers::pi};

    Grid() = default;
    Grid(int n1, int n2, int n3);
    Grid(std::array<int, 3> modes, std::array<double, 3> lengths);

    /// Throws ConfigError unless every axis has an even mode count >= 4 and a
    /// positive length.
    void validate() const;

    std::size_t size() const {
        return static_cast<std::size_t>(n[0]) * n[1] * n[2];
    }
    double volume() const { return length[0] * length[1] * length[2]; }
    double spacing(int axis) const { return length[axis] / n[axis]; }

    std::size_t index(int i0, int i1, int i2) const {
        return (static_cast<std::size_t>(i0) * n[1] + i1) * n[2] + i2;
    }
    /// Storage index of the integer wavevector `m` (each component may be
    /// any integer in [-n/2, n/2)).
    std::size_t index_of_mode(std::array<int, 3> m) const;

    int mode(int axis, int i) const { return i < n[axis] / 2 ? i : i - n[axis]; }
    int storage(int axis, int m) const { return m >= 0 ? m : m + n[axis]; }
    /// Storage index of -m along one axis.
    int mirror(int axis, int i) const { return i == 0 ? 0 : n[axis] - i; }

    double wavenumber(int axis, int i) const {
        return 2 * std::numbers::pi * mode(axis, i) / length[axis];
    }
    /// Wavenumber used by odd-order symbols: the Nyquist mode has no
    /// Hermitian partner, so it is assigned zero.
    double odd_wavenumber(int axis, int i) const {
        return is_nyquist(axis, i) ? 0.0 : wavenumber(axis, i);
    }
    bool is_nyquist(int axis, int i) const { return 2 * i == n[axis]; }

    /// 2/3-rule retained set: 3|m| < n along every axis.
    bool retained(int axis, int i) const {
        const int m = mode(axis, i);
        return 3 * (m < 0 ? -m : m) < n[axis];
    }

    friend bool operator==(const Grid&, const Grid&) = default;
};

}  // namespace anisomhd
