#pragma once

#include "anisomhd/fields.hpp"

#include <cstddef>
#include <memory>
#include <mutex>
#include <new>
#include <span>
#include <vector>

namespace anisomhd {

void* fftw_aligned_alloc(std::size_t bytes);
void fftw_aligned_free(void* p) noexcept;

/// Allocator with FFTW's SIMD alignment. Buffers built with it are transformed
/// in place of the engine's scratch arrays, skipping a copy per transform.
template <class T>
struct FftwAllocator {
    using value_type = T;
    FftwAllocator() = default;
    template <class U>
    FftwAllocator(const FftwAllocator<U>&) noexcept {}
    T* allocate(std::size_t n) {
        void* p = fftw_aligned_alloc(n * sizeof(T));
        if (p == nullptr) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) noexcept { fftw_aligned_free(p); }
    template <class U>
    bool operator==(const FftwAllocator<U>&) const noexcept { return true; }
};

using AlignedReal = std::vector<double, FftwAllocator<double>>;

/// Real-to-complex 3D transform pair for one grid shape, backed by FFTW.
///
/// The spectral side is the full-spectrum layout of ScalarField; internally
/// only the Hermitian half is handed to FFTW. An engine owns its scratch
/// buffers, so one instance must not be used from two threads at once; use
/// fft_for() to get a thread-local instance.
class FftEngine {
public:
    explicit FftEngine(const Grid& g);
    ~FftEngine();
    FftEngine(const FftEngine&) = delete;
    FftEngine& operator=(const FftEngine&) = delete;

    const Grid& grid() const { return grid_; }

    /// Physical samples from full-spectrum coefficients (assumed Hermitian).
    void to_physical(std::span<const Complex> coeffs, std::span<double> values);

    /// Normalised coefficients (forward DFT / N). With `dealias` set, modes
    /// outside the 2/3-rule retained set are written as zero.
    void to_spectral(std::span<const double> values, std::span<Complex> coeffs,
                     bool dealias = false);

private:
    struct Plans;
    Grid grid_;
    std::size_t half_size_;
    double* real_ = nullptr;
    Complex* half_ = nullptr;
    std::vector<unsigned char> keep_[3];
    std::unique_ptr<Plans> plans_;
};

/// FFTW's planner is not re-entrant; hold this while creating or destroying
/// any plan.
std::mutex& fftw_planner_mutex();

/// Thread-local engine for `g`, created on first use.
FftEngine& fft_for(const Grid& g);

PhysicalField to_physical(const ScalarField& f);
ScalarField to_spectral(const PhysicalField& p, bool dealias = false);

}  // namespace anisomhd
