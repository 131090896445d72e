#include "anisomhd/inequalities.hpp"

#include "anisomhd/errors.hpp"
#include "anisomhd/fft.hpp"
#include "anisomhd/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace anisomhd {

std::string to_string(InequalityVariant v) {
    switch (v) {
        case InequalityVariant::triple_111: return "triple-111";
        case InequalityVariant::triple_mixed: return "triple-mixed";
        case InequalityVariant::product_l2: return "product-L2";
        case InequalityVariant::quadruple: return "quadruple";
    }
    return "unknown";
}

InequalityVariant parse_inequality_variant(const std::string& name) {
    if (name == "triple-111") return InequalityVariant::triple_111;
    if (name == "triple-mixed") return InequalityVariant::triple_mixed;
    if (name == "product-L2" || name == "product-l2") return InequalityVariant::product_l2;
    if (name == "quadruple") return InequalityVariant::quadruple;
    throw ConfigError("unknown inequality variant '" + name + "'");
}

int field_count(InequalityVariant v) {
    switch (v) {
        case InequalityVariant::triple_111:
        case InequalityVariant::triple_mixed: return 3;
        case InequalityVariant::product_l2: return 2;
        case InequalityVariant::quadruple: return 4;
    }
    return 0;
}

namespace {

double norm(const ScalarField& f) { return std::sqrt(l2_norm_sq(f)); }

double dnorm(const ScalarField& f, int axis) { return norm(derivative(f, axis)); }

/// (|f| |d_i f|)^½
double half_factor(const ScalarField& f, int i) { return std::sqrt(norm(f) * dnorm(f, i)); }

/// (|f| |d_i f| |d_j f| |d_i d_j f|)^¼
double quarter_factor(const ScalarField& f, int i, int j) {
    const double dij = norm(derivative(derivative(f, i), j));
    return std::pow(norm(f) * dnorm(f, i) * dnorm(f, j) * dij, 0.25);
}

void validate_case(const InequalityCase& c) {
    if (static_cast<int>(c.fields.size()) != field_count(c.variant)) {
        throw ConfigError("inequality " + to_string(c.variant) + " needs " +
                          std::to_string(field_count(c.variant)) + " fields");
    }
    for (const auto& f : c.fields) {
        if (!(f.grid() == c.fields.front().grid())) {
            throw ConfigError("inequality: fields on different grids");
        }
    }
    const auto& ax = c.axes;
    for (int a : ax) {
        if (a < 1 || a > 3) throw ConfigError("inequality: axes are 1..3");
    }
    if (ax[0] == ax[1] || ax[1] == ax[2] || ax[0] == ax[2]) {
        throw ConfigError("inequality: axes i, j, k must be pairwise distinct");
    }
    if (c.oversample < 1) throw ConfigError("inequality: oversample must be >= 1");
}

}  // namespace

InequalityResult check_inequality(const InequalityCase& c) {
    validate_case(c);
    const Grid& g = c.fields.front().grid();
    Grid fine = g;
    for (int a = 0; a < 3; ++a) fine.n[a] = c.oversample * g.n[a];

    std::vector<PhysicalField> phys;
    phys.reserve(c.fields.size());
    for (const auto& f : c.fields) phys.push_back(to_physical(resample(f, fine)));

    double acc = 0.0;
    const bool squared = c.variant == InequalityVariant::product_l2;
    for (std::size_t p = 0; p < fine.size(); ++p) {
        double prod = 1.0;
        for (const auto& f : phys) prod *= f.values[p];
        acc += squared ? prod * prod : std::abs(prod);
    }
    acc *= fine.volume() / static_cast<double>(fine.size());

    InequalityResult r;
    r.lhs = squared ? std::sqrt(acc) : acc;

    const int i = c.axes[0] - 1, j = c.axes[1] - 1, k = c.axes[2] - 1;
    const auto& f = c.fields;
    switch (c.variant) {
        case InequalityVariant::triple_111:
            r.rhs_factor = half_factor(f[0], i) * half_factor(f[1], j) * half_factor(f[2], k);
            break;
        case InequalityVariant::triple_mixed:
            r.rhs_factor = quarter_factor(f[0], i, j) * half_factor(f[1], k) * norm(f[2]);
            break;
        case InequalityVariant::product_l2:
            r.rhs_factor = quarter_factor(f[0], i, j) * half_factor(f[1], k);
            break;
        case InequalityVariant::quadruple:
            r.rhs_factor = quarter_factor(f[0], i, j) * quarter_factor(f[1], i, j) *
                           half_factor(f[2], k) * half_factor(f[3], k);
            break;
    }
    if (r.rhs_factor == 0.0) {
        if (r.lhs != 0.0) {
            throw std::domain_error("inequality " + to_string(c.variant) +
                                    ": rhs factor vanishes while lhs = " + std::to_string(r.lhs));
        }
        r.ratio = 0.0;
    } else {
        r.ratio = r.lhs / r.rhs_factor;
    }
    return r;
}

Interp1dResult check_interp_1d(const std::vector<double>& samples, double length) {
    const std::size_t n = samples.size();
    if (n < 4 || n % 2 != 0) throw UsageError("check_interp_1d: need an even sample count >= 4");
    if (!(length > 0)) throw UsageError("check_interp_1d: length must be positive");
    double peak = 0.0;
    for (double v : samples) peak = std::max(peak, std::abs(v));
    Interp1dResult r;
    if (peak == 0.0) return r;
    const double edge = std::max(std::abs(samples.front()), std::abs(samples.back()));
    if (edge > 1e-10 * peak) {
        throw UsageError("check_interp_1d: field is not small at the interval ends (" +
                         std::to_string(edge / peak) + " of max)");
    }

    const std::size_t nh = n / 2 + 1;
    double* in = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * nh));
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
    }
    std::copy(samples.begin(), samples.end(), in);
    fftw_execute(plan);

    const double dx = length / static_cast<double>(n);
    double f_sq = 0.0;
    for (double v : samples) f_sq += v * v;
    f_sq *= dx;
    // Parseval on the half spectrum; the Nyquist term has no derivative.
    double d_sq = 0.0;
    for (std::size_t m = 1; m + 1 < nh; ++m) {
        const double k = 2 * std::numbers::pi * static_cast<double>(m) / length;
        const double c2 = (out[m][0] * out[m][0] + out[m][1] * out[m][1]) /
                          (static_cast<double>(n) * static_cast<double>(n));
        d_sq += 2.0 * k * k * c2;
    }
    d_sq *= length;
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);

    r.lhs = peak;
    r.rhs = std::sqrt(2.0) * std::sqrt(std::sqrt(f_sq) * std::sqrt(d_sq));
    r.ratio = r.rhs > 0 ? r.lhs / r.rhs : 0.0;
    return r;
}

ScalarField random_band_limited(const Grid& g, int band, std::uint64_t seed) {
    if (band < 1) throw ConfigError("random field: band must be >= 1");
    for (int a = 0; a < 3; ++a) {
        if (2 * band >= g.n[a]) throw ConfigError("random field: band does not fit the grid");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ScalarField f(g);
    for (int m0 = -band; m0 <= band; ++m0)
        for (int m1 = -band; m1 <= band; ++m1)
            for (int m2 = -band; m2 <= band; ++m2) {
                // One draw per conjugate pair: the first non-zero index is positive.
                const int lead = m0 != 0 ? m0 : (m1 != 0 ? m1 : m2);
                if (lead <= 0) continue;
                const double re = normal(rng);
                const double im = normal(rng);
                f.set_mode_pair({m0, m1, m2}, Complex(re, im));
            }
    return f;
}

SweepResult constant_sweep(InequalityVariant variant, int n_samples, const Grid& g,
                           std::uint64_t base_seed, int workers, bool zero_fields,
                           int histogram_bins, int band) {
    if (n_samples < 0) throw ConfigError("constant_sweep: n_samples must be non-negative");
    const int nf = field_count(variant);
    SweepResult out;
    out.samples.resize(static_cast<std::size_t>(n_samples));

    auto work = [&](int idx) {
        const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(idx);
        InequalityCase c;
        c.variant = variant;
        for (int f = 0; f < nf; ++f) {
            // Each field gets its own stream derived from the sample seed.
            c.fields.push_back(zero_fields ? ScalarField(g)
                                           : random_band_limited(g, band, seed * 16 + f));
        }
        out.samples[idx] = SweepSample{idx, seed, check_inequality(c)};
    };

    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (int idx = next++; idx < n_samples; idx = next++) {
            try {
                work(idx);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    const int nthreads = std::max(1, std::min(workers, n_samples));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);

    for (const auto& s : out.samples) out.max_ratio = std::max(out.max_ratio, s.result.ratio);
    out.histogram.assign(static_cast<std::size_t>(std::max(1, histogram_bins)), 0);
    for (const auto& s : out.samples) {
        std::size_t bin = 0;
        if (out.max_ratio > 0) {
            bin = static_cast<std::size_t>(s.result.ratio / out.max_ratio *
                                           static_cast<double>(out.histogram.size()));
            bin = std::min(bin, out.histogram.size() - 1);
        }
        ++out.histogram[bin];
    }
    return out;
}

std::string sweep_csv_header() { return "sample_index,seed,lhs,rhs_factor,ratio"; }

std::string to_csv_row(const SweepSample& s) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d,%llu,%.17g,%.17g,%.17g", s.index,
                  static_cast<unsigned long long>(s.seed), s.result.lhs, s.result.rhs_factor,
                  s.result.ratio);
    return buf;
}

}  // namespace anisomhd
