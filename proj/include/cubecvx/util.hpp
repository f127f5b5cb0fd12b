#pragma once

#include <boost/rational.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace cubecvx {

/// Exact coordinate type used by all combinatorial operations. Floats appear
/// only inside the numerical oracle.
using Rational = boost::rational<long long>;

inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

struct RationalHash {
    std::size_t operator()(const Rational& r) const {
        std::size_t h = std::hash<long long>()(r.numerator());
        return hash_combine(h, std::hash<long long>()(r.denominator()));
    }
};

struct RationalVecHash {
    std::size_t operator()(const std::vector<Rational>& v) const {
        std::size_t h = v.size();
        RationalHash rh;
        for (const auto& r : v) h = hash_combine(h, rh(r));
        return h;
    }
};

struct IntVecHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = v.size();
        for (int x : v) h = hash_combine(h, std::hash<int>()(x));
        return h;
    }
};

/// Number of worker threads to use: CUBECVX_THREADS env var when set,
/// otherwise hardware concurrency.
int thread_budget();

/// Runs f(i) for i in [0, n). Indices are distributed over the thread budget;
/// results must be written to per-index slots so reductions stay deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

/// SHA-256 of a byte string, as lowercase hex. Used for input digests in
/// certificates.
std::string sha256_hex(const std::string& data);

/// Deterministic xorshift-style mix for deriving per-task seeds.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a + 0x9e3779b97f4a7c15ull * (b + 1);
    x ^= x >> 30; x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27; x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

} // namespace cubecvx
