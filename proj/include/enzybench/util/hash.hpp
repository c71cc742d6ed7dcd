#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace enzybench {

// 64-bit FNV-1a. Used for fingerprint path hashing, template selection and
// stable content ids; must stay byte-stable across platforms.
constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

constexpr std::uint64_t fnv1a(std::string_view bytes,
                              std::uint64_t seed = kFnvOffset) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

constexpr std::uint64_t fnv1a_u64(std::uint64_t value,
                                  std::uint64_t seed = kFnvOffset) {
  std::uint64_t h = seed;
  for (int i = 0; i < 8; ++i) {
    h ^= value & 0xffu;
    h *= kFnvPrime;
    value >>= 8;
  }
  return h;
}

std::string hex64(std::uint64_t value);

}  // namespace enzybench
