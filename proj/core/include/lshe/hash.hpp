#pragma once

#include <cstdint>
#include <string_view>

namespace lshe {

// Seed used for k-gram token ids. Part of the on-disk signature format.
inline constexpr std::uint64_t kTokenSeed = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

// Combines two words into one; not symmetric.
constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) noexcept {
  return mix64(seed ^ (value + 0x9E3779B97F4A7C15ull + (seed << 6) + (seed >> 2)));
}

// MurmurHash64A over raw bytes. Endianness-independent: input is read byte by
// byte in little-endian order.
std::uint64_t hash_bytes(std::string_view bytes, std::uint64_t seed) noexcept;

// Maps a 64-bit hash uniformly onto [0, n) using the high bits.
inline std::uint64_t fast_range(std::uint64_t hash, std::uint64_t n) noexcept {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(hash) * n) >> 64);
}

}  // namespace lshe
