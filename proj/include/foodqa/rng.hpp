#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace foodqa {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_label(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Splittable seeding: every (seed, stream, index, attempt) tuple gets an
// independent generator, so parallel generation is thread-count invariant.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream,
                                 std::uint64_t index = 0,
                                 std::uint64_t attempt = 0) {
  std::uint64_t h = splitmix64(seed ^ hash_label(stream));
  h = splitmix64(h ^ index);
  return splitmix64(h ^ (attempt * 0x632be59bd9b4e019ULL));
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::string_view stream,
                    std::uint64_t index = 0, std::uint64_t attempt = 0) {
  return Rng(derive_seed(seed, stream, index, attempt));
}

// Uniform integer in [0, n). Avoids std::uniform_int_distribution so that
// generated files are identical across standard library implementations.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % n);
}

inline double uniform_real(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_real(rng);
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[uniform_index(rng, i)]);
  }
}

}  // namespace foodqa
