#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <vector>

#include "lshe/minhash.hpp"

namespace lshe {

// Binary signature cache, all integers little-endian:
//
//   offset  size  field
//   0       8     magic "LSHESIG\0"
//   8       8     version (1)
//   16      8     record count M
//   24      8     K
//   32      8     L
//   40      8     seed
//   48      8*M*K*L  values, record-major, then (table, row)
//
// Sentinel signatures are stored as-is (all slots 0xFFFF'FFFF'FFFF'FFFF).
inline constexpr char kSignatureMagic[8] = {'L', 'S', 'H', 'E', 'S', 'I', 'G', '\0'};
inline constexpr std::uint64_t kSignatureCacheVersion = 1;

struct SignatureCache {
  LshShape shape;
  std::uint64_t seed = 0;
  std::vector<MinHashSignature> signatures;
};

class SignatureCacheWriter {
 public:
  SignatureCacheWriter(const std::filesystem::path& path, std::uint64_t record_count, LshShape shape,
                       std::uint64_t seed);

  void append(const MinHashSignature& signature);
  // Throws if fewer than record_count signatures were appended.
  void close();

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::uint64_t expected_;
  std::uint64_t written_ = 0;
  LshShape shape_;
};

void write_signature_cache(const std::filesystem::path& path, std::span<const MinHashSignature> signatures,
                           std::uint64_t seed);

SignatureCache read_signature_cache(const std::filesystem::path& path);

}  // namespace lshe
