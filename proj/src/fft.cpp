#include "anisomhd/fft.hpp"

#include "anisomhd/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>

namespace anisomhd {

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

void* fftw_aligned_alloc(std::size_t bytes) { return fftw_malloc(bytes); }
void fftw_aligned_free(void* p) noexcept { fftw_free(p); }

struct FftEngine::Plans {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
};

FftEngine::FftEngine(const Grid& g)
    : grid_(g),
      half_size_(static_cast<std::size_t>(g.n[0]) * g.n[1] * (g.n[2] / 2 + 1)),
      plans_(std::make_unique<Plans>()) {
    g.validate();
    real_ = static_cast<double*>(fftw_malloc(sizeof(double) * g.size()));
    half_ = static_cast<Complex*>(fftw_malloc(sizeof(fftw_complex) * half_size_));
    if (real_ == nullptr || half_ == nullptr) throw std::bad_alloc();
    for (int a = 0; a < 3; ++a) {
        keep_[a].resize(static_cast<std::size_t>(g.n[a]));
        for (int i = 0; i < g.n[a]; ++i) keep_[a][i] = g.retained(a, i) ? 1 : 0;
    }
    auto* half = reinterpret_cast<fftw_complex*>(half_);
    std::lock_guard lock(fftw_planner_mutex());
    // ESTIMATE keeps plan selection, and therefore rounding, reproducible.
    plans_->forward = fftw_plan_dft_r2c_3d(g.n[0], g.n[1], g.n[2], real_, half, FFTW_ESTIMATE);
    plans_->inverse = fftw_plan_dft_c2r_3d(g.n[0], g.n[1], g.n[2], half, real_, FFTW_ESTIMATE);
    if (plans_->forward == nullptr || plans_->inverse == nullptr) {
        throw ConfigError("fftw: could not create plans");
    }
}

FftEngine::~FftEngine() {
    {
        std::lock_guard lock(fftw_planner_mutex());
        if (plans_->forward) fftw_destroy_plan(plans_->forward);
        if (plans_->inverse) fftw_destroy_plan(plans_->inverse);
    }
    fftw_free(real_);
    fftw_free(half_);
}

void FftEngine::to_physical(std::span<const Complex> coeffs, std::span<double> values) {
    const int n0 = grid_.n[0], n1 = grid_.n[1], n2 = grid_.n[2];
    const int nh = n2 / 2 + 1;
    for (int i0 = 0; i0 < n0; ++i0)
        for (int i1 = 0; i1 < n1; ++i1) {
            const Complex* src = coeffs.data() + grid_.index(i0, i1, 0);
            Complex* dst = half_ + (static_cast<std::size_t>(i0) * n1 + i1) * nh;
            std::copy(src, src + nh, dst);
        }
    auto* half = reinterpret_cast<fftw_complex*>(half_);
    if (fftw_alignment_of(values.data()) == fftw_alignment_of(real_)) {
        fftw_execute_dft_c2r(plans_->inverse, half, values.data());
        return;
    }
    fftw_execute(plans_->inverse);
    std::copy(real_, real_ + grid_.size(), values.begin());
}

void FftEngine::to_spectral(std::span<const double> values, std::span<Complex> coeffs,
                            bool dealias) {
    auto* half = reinterpret_cast<fftw_complex*>(half_);
    // out-of-place r2c leaves its input untouched
    double* in = const_cast<double*>(values.data());
    if (fftw_alignment_of(in) == fftw_alignment_of(real_)) {
        fftw_execute_dft_r2c(plans_->forward, in, half);
    } else {
        std::copy(values.begin(), values.end(), real_);
        fftw_execute(plans_->forward);
    }
    const int n0 = grid_.n[0], n1 = grid_.n[1], n2 = grid_.n[2];
    const int nh = n2 / 2 + 1;
    const double scale = 1.0 / static_cast<double>(grid_.size());
    const unsigned char* keep2 = keep_[2].data();
    for (int i0 = 0; i0 < n0; ++i0) {
        const bool keep0 = !dealias || keep_[0][i0];
        const int j0 = grid_.mirror(0, i0);
        for (int i1 = 0; i1 < n1; ++i1) {
            const bool keep01 = keep0 && (!dealias || keep_[1][i1]);
            const int j1 = grid_.mirror(1, i1);
            Complex* dst = coeffs.data() + grid_.index(i0, i1, 0);
            const Complex* src = half_ + (static_cast<std::size_t>(i0) * n1 + i1) * nh;
            const Complex* msrc = half_ + (static_cast<std::size_t>(j0) * n1 + j1) * nh;
            if (!keep01) {
                std::fill(dst, dst + n2, Complex{});
                continue;
            }
            if (dealias) {
                for (int i2 = 0; i2 < nh; ++i2) dst[i2] = keep2[i2] ? scale * src[i2] : Complex{};
                for (int i2 = nh; i2 < n2; ++i2)
                    dst[i2] = keep2[i2] ? scale * std::conj(msrc[n2 - i2]) : Complex{};
            } else {
                for (int i2 = 0; i2 < nh; ++i2) dst[i2] = scale * src[i2];
                for (int i2 = nh; i2 < n2; ++i2) dst[i2] = scale * std::conj(msrc[n2 - i2]);
            }
        }
    }
}

FftEngine& fft_for(const Grid& g) {
    thread_local std::map<std::array<int, 3>, std::unique_ptr<FftEngine>> cache;
    auto& slot = cache[g.n];
    if (!slot) slot = std::make_unique<FftEngine>(g);
    return *slot;
}

PhysicalField to_physical(const ScalarField& f) {
    PhysicalField p(f.grid());
    fft_for(f.grid()).to_physical(f.coeffs(), p.values);
    return p;
}

ScalarField to_spectral(const PhysicalField& p, bool dealias) {
    ScalarField f(p.grid);
    fft_for(p.grid).to_spectral(p.values, f.coeffs(), dealias);
    return f;
}

}  // namespace anisomhd
