#include "anisomhd/harness/initial.hpp"

#include "anisomhd/energy.hpp"
#include "anisomhd/errors.hpp"
#include "anisomhd/spectral.hpp"

#include <cmath>
#include <random>

namespace anisomhd {

double h4_size(const State& s) {
    const SobolevSpec h4{4, SobolevForm::multiplier};
    return std::sqrt(sobolev_norm_sq(s.u, h4)) + std::sqrt(sobolev_norm_sq(s.b, h4));
}

namespace {

State draw_random(const InitSpec& init, const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    State s = State::zero(g);
    const int band = init.band;
    for (int m0 = -band; m0 <= band; ++m0)
        for (int m1 = -band; m1 <= band; ++m1)
            for (int m2 = -band; m2 <= band; ++m2) {
                const int lead = m0 != 0 ? m0 : (m1 != 0 ? m1 : m2);
                if (lead <= 0) continue;
                for (VectorField* v : {&s.u, &s.b}) {
                    for (int a = 0; a < 3; ++a) {
                        const double re = normal(rng);
                        const double im = normal(rng);
                        (*v)[a].set_mode_pair({m0, m1, m2}, Complex(re, im));
                    }
                }
            }
    s.u = leray_project(s.u);
    s.b = leray_project(s.b);
    return s;
}

}  // namespace

GeneratedInitial generate_initial(const InitSpec& init, const Grid& g) {
    if (!(init.epsilon > 0.0)) throw ConfigError("initial data: epsilon must be positive");
    const SobolevSpec h4{4, SobolevForm::multiplier};
    GeneratedInitial out;

    if (init.kind == InitKind::random_band_limited) {
        for (int a = 0; a < 3; ++a) {
            if (3 * init.band >= g.n[a] || init.band < 1) {
                throw ConfigError("initial data: band " + std::to_string(init.band) +
                                  " does not fit the dealiased set");
            }
        }
        std::uint64_t seed = init.seed;
        for (int attempt = 0; attempt < 16; ++attempt, ++seed) {
            State s = draw_random(init, g, seed);
            const double nu = std::sqrt(sobolev_norm_sq(s.u, h4));
            const double nb = std::sqrt(sobolev_norm_sq(s.b, h4));
            const double bf = init.b_fraction;
            if ((bf < 1.0 && nu == 0.0) || (bf > 0.0 && nb == 0.0)) continue;
            s.u *= bf < 1.0 ? (1.0 - bf) * init.epsilon / nu : 0.0;
            s.b *= bf > 0.0 ? bf * init.epsilon / nb : 0.0;
            s.u.divergence_free = s.b.divergence_free = true;
            out.state = std::move(s);
            out.seed_used = seed;
            return out;
        }
        throw ConfigError("initial data: repeated all-zero draws");
    }

    State s = State::zero(g);
    for (const auto& m : init.modes) {
        VectorField& v = m.field == 'u' ? s.u : s.b;
        VectorField single(g);
        for (int a = 0; a < 3; ++a) {
            single[a].set_mode_pair(m.m, Complex(0.5 * m.amplitude * m.polarisation[a], 0.0));
        }
        v += leray_project(single);
    }
    s.u = leray_project(s.u);
    s.b = leray_project(s.b);
    const double size = h4_size(s);
    if (size == 0.0) {
        throw ConfigError("initial data: named modes vanish after projection");
    }
    s.u *= init.epsilon / size;
    s.b *= init.epsilon / size;
    out.state = std::move(s);
    out.seed_used = init.seed;
    return out;
}

}  // namespace anisomhd
