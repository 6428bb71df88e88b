#ifndef NBDLT_CRYPTO_DIGEST_HPP
#define NBDLT_CRYPTO_DIGEST_HPP

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <cstring>
#include <functional>
#include <string>
#include <string_view>

#include "nbdlt/bytes.hpp"
#include "nbdlt/error.hpp"

namespace nbdlt::crypto {

inline constexpr std::size_t kDigestSize = 32;

struct Digest {
  std::array<std::uint8_t, kDigestSize> bytes{};

  bool operator==(const Digest&) const = default;
  auto operator<=>(const Digest&) const = default;

  std::string hex() const { return to_hex(bytes.data(), bytes.size()); }

  // Short prefix for log lines and trace details.
  std::string short_hex() const { return hex().substr(0, 12); }
};

inline Digest sha256(const std::uint8_t* data, std::size_t len) {
  Digest d;
  unsigned int out_len = 0;
  if (EVP_Digest(data, len, d.bytes.data(), &out_len, EVP_sha256(), nullptr) != 1 ||
      out_len != kDigestSize)
    throw InvariantError("sha256 failed");
  return d;
}

inline Digest sha256(const Bytes& b) { return sha256(b.data(), b.size()); }

inline Digest sha256(std::string_view s) {
  return sha256(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
}

struct DigestHash {
  std::size_t operator()(const Digest& d) const {
    std::size_t h;
    std::memcpy(&h, d.bytes.data(), sizeof(h));
    return h;
  }
};

}  // namespace nbdlt::crypto

#endif
