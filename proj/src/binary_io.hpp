#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "ksg/common.hpp"

namespace ksg::detail {

template <typename T>
T to_little(T value) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    std::memcpy(&value, bytes, sizeof(T));
  }
  return value;
}

template <typename T>
void write_le(std::ostream& out, T value) {
  value = to_little(value);
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_le(std::istream& in, const std::string& what) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(T)))
    throw FormatError("truncated file while reading " + what);
  return to_little(value);
}

inline void expect_magic(std::istream& in, const char (&magic)[6], const std::string& kind) {
  char buf[5] = {};
  in.read(buf, 5);
  if (in.gcount() != 5) throw FormatError("truncated " + kind + " file (missing magic)");
  if (std::memcmp(buf, magic, 5) != 0) throw FormatError("not a " + kind + " file (bad magic)");
}

/// FNV-1a over raw bytes.
class Fnv1a {
 public:
  template <typename T>
  void add(T value) {
    value = to_little(value);
    const auto* p = reinterpret_cast<const unsigned char*>(&value);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001b3ULL;
    }
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace ksg::detail
