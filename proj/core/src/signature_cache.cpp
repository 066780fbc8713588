#include "lshe/signature_cache.hpp"

#include <array>
#include <cstring>
#include <stdexcept>

namespace lshe {

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes;
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64(std::istream& in, const std::filesystem::path& path) {
  std::array<unsigned char, 8> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw std::runtime_error(path.string() + ": truncated signature cache");
  }
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

}  // namespace

SignatureCacheWriter::SignatureCacheWriter(const std::filesystem::path& path, std::uint64_t record_count,
                                           LshShape shape, std::uint64_t seed)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path), expected_(record_count), shape_(shape) {
  if (!out_) throw std::runtime_error("cannot write " + path.string());
  out_.write(kSignatureMagic, sizeof kSignatureMagic);
  put_u64(out_, kSignatureCacheVersion);
  put_u64(out_, record_count);
  put_u64(out_, shape.rows);
  put_u64(out_, shape.tables);
  put_u64(out_, seed);
}

void SignatureCacheWriter::append(const MinHashSignature& signature) {
  if (signature.shape() != shape_) throw std::invalid_argument("signature shape mismatch");
  if (written_ == expected_) throw std::logic_error("signature cache already holds every record");
  for (std::uint64_t v : signature.values()) put_u64(out_, v);
  ++written_;
}

void SignatureCacheWriter::close() {
  if (written_ != expected_) {
    throw std::logic_error("signature cache expects " + std::to_string(expected_) + " records, got " +
                           std::to_string(written_));
  }
  out_.close();
  if (!out_) throw std::runtime_error("failed writing " + path_.string());
}

void write_signature_cache(const std::filesystem::path& path, std::span<const MinHashSignature> signatures,
                           std::uint64_t seed) {
  if (signatures.empty()) throw std::invalid_argument("no signatures to write");
  SignatureCacheWriter writer(path, signatures.size(), signatures.front().shape(), seed);
  for (const auto& s : signatures) writer.append(s);
  writer.close();
}

SignatureCache read_signature_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kSignatureMagic, sizeof magic) != 0) {
    throw std::runtime_error(path.string() + ": not a signature cache");
  }
  const std::uint64_t version = get_u64(in, path);
  if (version != kSignatureCacheVersion) {
    throw std::runtime_error(path.string() + ": unsupported version " + std::to_string(version));
  }
  SignatureCache cache;
  const std::uint64_t count = get_u64(in, path);
  cache.shape.rows = get_u64(in, path);
  cache.shape.tables = get_u64(in, path);
  cache.seed = get_u64(in, path);
  if (cache.shape.rows == 0 || cache.shape.tables == 0) {
    throw std::runtime_error(path.string() + ": K and L must be >= 1");
  }
  cache.signatures.reserve(count);
  const std::size_t n = cache.shape.hash_count();
  for (std::uint64_t r = 0; r < count; ++r) {
    std::vector<std::uint64_t> values(n);
    for (auto& v : values) v = get_u64(in, path);
    cache.signatures.emplace_back(cache.shape, std::move(values));
  }
  return cache;
}

}  // namespace lshe
