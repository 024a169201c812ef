#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "smagg/core.hpp"

namespace smagg {

/// SHA-2 output, up to 64 bytes; `size` is the algorithm's output length.
struct Digest {
  std::array<std::uint8_t, 64> bytes{};
  std::size_t size = 0;

  std::span<const std::uint8_t> view() const { return {bytes.data(), size}; }
};

std::size_t digest_size(HashAlg alg);

Digest sha2(HashAlg alg, std::span<const std::uint8_t> data);

}  // namespace smagg
