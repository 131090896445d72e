#include "anisomhd/harness/checkpoint.hpp"

#include "anisomhd/errors.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace anisomhd {

namespace {

constexpr char kMagic[4] = {'A', 'M', 'H', 'D'};

template <class U>
U to_little(U v) {
    if constexpr (std::endian::native == std::endian::big) {
        U r = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) {
            r = static_cast<U>((r << 8) | ((v >> (8 * i)) & 0xff));
        }
        return r;
    } else {
        return v;
    }
}

void put_u32(std::ostream& out, std::uint32_t v) {
    v = to_little(v);
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_f64(std::ostream& out, double x) {
    const auto v = to_little(std::bit_cast<std::uint64_t>(x));
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& in) {
    std::uint32_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw IoError("checkpoint: truncated header");
    return to_little(v);
}

double get_f64(std::istream& in) {
    std::uint64_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw IoError("checkpoint: truncated data");
    return std::bit_cast<double>(to_little(v));
}

}  // namespace

void write_checkpoint(std::ostream& out, const State& s) {
    require_consistent(s);
    const Grid& g = s.grid();
    out.write(kMagic, 4);
    put_u32(out, kCheckpointVersion);
    for (int a = 0; a < 3; ++a) put_u32(out, static_cast<std::uint32_t>(g.n[a]));
    for (int a = 0; a < 3; ++a) put_f64(out, g.length[a]);
    put_f64(out, s.t);
    for (const VectorField* v : {&s.u, &s.b}) {
        for (int a = 0; a < 3; ++a) {
            for (const Complex& c : (*v)[a].coeffs()) {
                put_f64(out, c.real());
                put_f64(out, c.imag());
            }
        }
    }
    if (!out) throw IoError("checkpoint: write failed");
}

State read_checkpoint(std::istream& in) {
    char magic[4] = {};
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
        throw IoError("checkpoint: bad magic (not an AMHD file)");
    }
    const std::uint32_t version = get_u32(in);
    if (version != kCheckpointVersion) {
        throw IoError("checkpoint: unsupported format version " + std::to_string(version));
    }
    std::array<int, 3> n{};
    std::array<double, 3> len{};
    for (int a = 0; a < 3; ++a) n[a] = static_cast<int>(get_u32(in));
    for (int a = 0; a < 3; ++a) len[a] = get_f64(in);
    const Grid g(n, len);
    State s = State::zero(g);
    s.t = get_f64(in);
    for (VectorField* v : {&s.u, &s.b}) {
        for (int a = 0; a < 3; ++a) {
            for (Complex& c : (*v)[a].coeffs()) {
                const double re = get_f64(in);
                const double im = get_f64(in);
                c = Complex(re, im);
            }
        }
    }
    return s;
}

void write_checkpoint(const std::filesystem::path& path, const State& s) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open checkpoint for writing: " + tmp.string());
        write_checkpoint(out, s);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move checkpoint into place at " + path.string() + ": " + ec.message());
}

State read_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint " + path.string());
    try {
        return read_checkpoint(in);
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

}  // namespace anisomhd
