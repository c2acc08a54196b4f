#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace floodda {

using Rng = std::mt19937_64;

/// Derives an independent 64-bit seed from a master seed, a purpose label and
/// an index. Streams for different labels never shift each other's draws.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::uint64_t index = 0) noexcept;

inline Rng make_rng(std::uint64_t master, std::string_view label,
                    std::uint64_t index = 0) {
  return Rng(derive_seed(master, label, index));
}

}  // namespace floodda
