#include "smagg/hash.hpp"

#include <openssl/sha.h>

namespace smagg {

std::size_t digest_size(HashAlg alg) {
  switch (alg) {
    case HashAlg::Sha224: return SHA224_DIGEST_LENGTH;
    case HashAlg::Sha256: return SHA256_DIGEST_LENGTH;
    case HashAlg::Sha512: return SHA512_DIGEST_LENGTH;
  }
  return 0;
}

Digest sha2(HashAlg alg, std::span<const std::uint8_t> data) {
  Digest out;
  out.size = digest_size(alg);
  switch (alg) {
    case HashAlg::Sha224: SHA224(data.data(), data.size(), out.bytes.data()); break;
    case HashAlg::Sha256: SHA256(data.data(), data.size(), out.bytes.data()); break;
    case HashAlg::Sha512: SHA512(data.data(), data.size(), out.bytes.data()); break;
  }
  return out;
}

}  // namespace smagg
