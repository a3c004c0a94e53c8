#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "qpsh/matrix.hpp"

namespace qpsh {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Seed of the named substream `stream`/`index` under a root seed.  All
/// randomness in the library and CLI is drawn from such substreams.
inline constexpr std::uint64_t derive_seed(std::uint64_t root, std::string_view stream, std::uint64_t index = 0) {
    return splitmix64(splitmix64(root ^ fnv1a(stream)) + splitmix64(index + 0x632be59bd9b4e019ULL));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t root, std::string_view stream, std::uint64_t index = 0)
        : engine_(derive_seed(root, stream, index)) {}

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
    bool coin() { return uniform() < 0.5; }

    Quaternion quaternion() { return {normal(), normal(), normal(), normal()}; }

    Quaternion unit_quaternion() {
        Quaternion q = quaternion();
        while (norm2(q) < 1e-12) q = quaternion();
        return q / abs(q);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// iid standard Gaussian components in every entry.
inline QMatrix random_qmatrix(Rng& rng, std::size_t n) {
    QMatrix m(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m(r, c) = rng.quaternion();
    return m;
}

inline QVector random_qvector(Rng& rng, std::size_t n) {
    QVector v(n);
    for (auto& e : v) e = rng.quaternion();
    return v;
}

/// Gaussian entries, symmetrized.
inline HHMatrix random_hh(Rng& rng, std::size_t n) { return HHMatrix::symmetrized(random_qmatrix(rng, n)); }

/// C* C with C an n x rank Gaussian block padded by zero columns.
inline HHMatrix random_psd(Rng& rng, std::size_t n, std::size_t rank) {
    QMatrix c(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < std::min(rank, n); ++k) c(r, k) = rng.quaternion();
    return HHMatrix::symmetrized(c * conj_transpose(c));
}

inline HHMatrix random_psd(Rng& rng, std::size_t n) { return random_psd(rng, n, n); }

inline constexpr double kPdShift = 1e-3;

/// C* C + 1e-3 Id
inline HHMatrix random_pd(Rng& rng, std::size_t n) {
    const QMatrix c = random_qmatrix(rng, n);
    return HHMatrix::symmetrized(conj_transpose(c) * c + QMatrix::identity(n) * kPdShift);
}

/// Complex hermitian matrix with Gaussian entries, as a quaternionic matrix.
inline HHMatrix random_complex_hermitian(Rng& rng, std::size_t n) {
    QMatrix m(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m(r, c) = Quaternion(rng.normal(), rng.normal());
    return HHMatrix::symmetrized(m);
}

}  // namespace qpsh
