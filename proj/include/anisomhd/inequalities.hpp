#pragma once

#include "anisomhd/fields.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace anisomhd {

/// The four anisotropic product bounds, in the order they are usually stated:
///   triple_111:   int|fgh| vs |f|^½|d_i f|^½ |g|^½|d_j g|^½ |h|^½|d_k h|^½
///   triple_mixed: int|fgh| vs (|f||d_i f||d_j f||d_i d_j f|)^¼ |g|^½|d_k g|^½ |h|
///   product_l2:   |fg|_{L2} vs (|f||d_i f||d_j f||d_i d_j f|)^¼ |g|^½|d_k g|^½
///   quadruple:    int|fghv| vs the f-type factor for f and g, and
///                 |h|^½|d_k h|^½ |v|^½|d_k v|^½
/// All norms are L^2 over the box.
enum class InequalityVariant { triple_111, triple_mixed, product_l2, quadruple };

std::string to_string(InequalityVariant v);
InequalityVariant parse_inequality_variant(const std::string& name);
int field_count(InequalityVariant v);

struct InequalityCase {
    InequalityVariant variant = InequalityVariant::triple_111;
    std::array<int, 3> axes{1, 2, 3};  ///< (i, j, k), 1-based, pairwise distinct
    std::vector<ScalarField> fields;   ///< field_count(variant) entries, shared grid
    int oversample = 2;                ///< quadrature grid = oversample * n per axis
};

struct InequalityResult {
    double lhs = 0.0;
    double rhs_factor = 0.0;
    double ratio = 0.0;
};

/// lhs by physical-space quadrature on the oversampled grid, rhs_factor from
/// the exact directional norms. Throws ConfigError on a malformed case and
/// std::domain_error when rhs_factor vanishes but lhs does not (on the torus
/// this happens for fields independent of one of the named directions).
InequalityResult check_inequality(const InequalityCase& c);

struct Interp1dResult {
    double lhs = 0.0;    ///< max |f|
    double rhs = 0.0;    ///< sqrt(2) |f|^½ |f'|^½
    double ratio = 0.0;
};

/// One-dimensional sup-norm interpolation bound for samples of f on the
/// periodic interval [a, a + length). f' is spectral. Throws UsageError when
/// the end samples exceed 1e-10 of max|f| (f must look compactly supported).
Interp1dResult check_interp_1d(const std::vector<double>& samples, double length);

/// Band-limited random field: i.i.d. complex Gaussian coefficients for
/// 0 < max|m_a| with |m_a| <= band, zero mean, Hermitian-symmetrised.
ScalarField random_band_limited(const Grid& g, int band, std::uint64_t seed);

struct SweepSample {
    int index = 0;
    std::uint64_t seed = 0;
    InequalityResult result;
};

struct SweepResult {
    std::vector<SweepSample> samples;
    double max_ratio = 0.0;
    std::vector<std::size_t> histogram;  ///< counts over [0, max_ratio] in equal bins
};

/// Draws `n_samples` cases of `variant` (axes (1,2,3)) from
/// random_band_limited with seeds derived from base_seed + index. The band
/// does not depend on the grid, so a given seed yields the same functions on
/// every grid that holds the band. With `zero_fields` every input is the zero
/// field. Samples run on up to `workers` threads; results are reduced in
/// index order.
SweepResult constant_sweep(InequalityVariant variant, int n_samples, const Grid& g,
                           std::uint64_t base_seed, int workers = 1, bool zero_fields = false,
                           int histogram_bins = 10, int band = 4);

std::string sweep_csv_header();
std::string to_csv_row(const SweepSample& s);

}  // namespace anisomhd
