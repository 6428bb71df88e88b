#ifndef NBDLT_CRYPTO_ECDSA_HPP
#define NBDLT_CRYPTO_ECDSA_HPP

#include <openssl/bn.h>
#include <openssl/core_names.h>
#include <openssl/ec.h>
#include <openssl/evp.h>
#include <openssl/obj_mac.h>
#include <openssl/params.h>

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>

#include "nbdlt/bytes.hpp"
#include "nbdlt/crypto/digest.hpp"
#include "nbdlt/error.hpp"

namespace nbdlt::crypto {

// ECDSA over P-256 with the deterministic nonce construction from RFC 6979,
// so a (key, message) pair always yields the same signature and simulation
// runs replay exactly.  Signatures use a fixed-width variant of the DER
// layout: both integers are padded to 33 bytes, making every signature
// exactly 72 bytes on the wire.
inline constexpr std::size_t kSignatureSize = 72;
inline constexpr std::size_t kPublicKeySize = 65;   // uncompressed SEC1 point
inline constexpr std::size_t kSecretKeySize = 32;

struct Signature {
  std::array<std::uint8_t, kSignatureSize> bytes{};
  bool operator==(const Signature&) const = default;
};

struct KeyPair {
  Bytes secret;      // 32-byte big-endian scalar
  Bytes public_key;  // 65-byte uncompressed point
};

namespace detail {

struct BnDeleter { void operator()(BIGNUM* p) const { BN_free(p); } };
struct BnCtxDeleter { void operator()(BN_CTX* p) const { BN_CTX_free(p); } };
struct PointDeleter { void operator()(EC_POINT* p) const { EC_POINT_free(p); } };
struct MacDeleter { void operator()(EVP_MAC* p) const { EVP_MAC_free(p); } };
struct MacCtxDeleter { void operator()(EVP_MAC_CTX* p) const { EVP_MAC_CTX_free(p); } };

using BnPtr = std::unique_ptr<BIGNUM, BnDeleter>;
using BnCtxPtr = std::unique_ptr<BN_CTX, BnCtxDeleter>;
using PointPtr = std::unique_ptr<EC_POINT, PointDeleter>;

inline BnPtr make_bn() {
  BnPtr p(BN_new());
  if (!p) throw InvariantError("BN_new failed");
  return p;
}

// Process-wide P-256 group and order; building the group is expensive, the
// simulator signs thousands of times.
inline const EC_GROUP* group() {
  static EC_GROUP* g = [] {
    EC_GROUP* grp = EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1);
    if (!grp) throw InvariantError("failed to construct P-256 group");
    return grp;
  }();
  return g;
}

inline const BIGNUM* order() {
  static BIGNUM* n = [] {
    BIGNUM* o = BN_new();
    if (!o || !EC_GROUP_get_order(group(), o, nullptr))
      throw InvariantError("failed to read P-256 order");
    return o;
  }();
  return n;
}

inline void hmac_sha256(const std::uint8_t* key, std::size_t key_len,
                        const Bytes& data, std::uint8_t out[32]) {
  static EVP_MAC* mac = [] {
    EVP_MAC* m = EVP_MAC_fetch(nullptr, "HMAC", nullptr);
    if (!m) throw InvariantError("EVP_MAC_fetch(HMAC) failed");
    return m;
  }();
  std::unique_ptr<EVP_MAC_CTX, MacCtxDeleter> ctx(EVP_MAC_CTX_new(mac));
  if (!ctx) throw InvariantError("EVP_MAC_CTX_new failed");
  char digest_name[] = "SHA256";
  OSSL_PARAM params[] = {
      OSSL_PARAM_construct_utf8_string(OSSL_MAC_PARAM_DIGEST, digest_name, 0),
      OSSL_PARAM_construct_end()};
  std::size_t out_len = 0;
  if (EVP_MAC_init(ctx.get(), key, key_len, params) != 1 ||
      EVP_MAC_update(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_MAC_final(ctx.get(), out, &out_len, 32) != 1 || out_len != 32)
    throw InvariantError("HMAC-SHA256 failed");
}

inline void int2octets(const BIGNUM* v, std::uint8_t out[32]) {
  if (BN_bn2binpad(v, out, 32) != 32)
    throw InvariantError("int2octets: scalar does not fit 32 bytes");
}

// RFC 6979 HMAC_DRBG.  For P-256 with SHA-256 the hash and order are both
// 256 bits, so bits2int is a plain big-endian read.
class NonceDrbg {
 public:
  NonceDrbg(const BIGNUM* d, const Digest& h1) {
    std::uint8_t d_oct[32];
    int2octets(d, d_oct);

    // bits2octets(h1) = int2octets(bits2int(h1) mod n)
    BnPtr z = make_bn();
    if (!BN_bin2bn(h1.bytes.data(), 32, z.get()))
      throw InvariantError("bits2int failed");
    BnCtxPtr ctx(BN_CTX_new());
    BnPtr zn = make_bn();
    if (!BN_nnmod(zn.get(), z.get(), order(), ctx.get()))
      throw InvariantError("bits2octets failed");
    std::uint8_t h_oct[32];
    int2octets(zn.get(), h_oct);

    v_.assign(32, 0x01);
    k_.assign(32, 0x00);
    step(0x00, d_oct, h_oct);
    step(0x01, d_oct, h_oct);
  }

  // Next candidate nonce in [1, n-1]; out-of-range candidates are handled by
  // the caller via reseed().
  BnPtr next() {
    Bytes v_in(v_.begin(), v_.end());
    std::uint8_t t[32];
    hmac_sha256(k_.data(), k_.size(), v_in, t);
    v_.assign(t, t + 32);
    BnPtr k = make_bn();
    if (!BN_bin2bn(v_.data(), 32, k.get())) throw InvariantError("bits2int failed");
    return k;
  }

  void reseed() {
    Bytes data(v_.begin(), v_.end());
    data.push_back(0x00);
    std::uint8_t t[32];
    hmac_sha256(k_.data(), k_.size(), data, t);
    k_.assign(t, t + 32);
    Bytes v_in(v_.begin(), v_.end());
    hmac_sha256(k_.data(), k_.size(), v_in, t);
    v_.assign(t, t + 32);
  }

 private:
  void step(std::uint8_t tag, const std::uint8_t d_oct[32],
            const std::uint8_t h_oct[32]) {
    Bytes data(v_.begin(), v_.end());
    data.push_back(tag);
    data.insert(data.end(), d_oct, d_oct + 32);
    data.insert(data.end(), h_oct, h_oct + 32);
    std::uint8_t t[32];
    hmac_sha256(k_.data(), k_.size(), data, t);
    k_.assign(t, t + 32);
    Bytes v_in(v_.begin(), v_.end());
    hmac_sha256(k_.data(), k_.size(), v_in, t);
    v_.assign(t, t + 32);
  }

  Bytes v_;
  Bytes k_;
};

inline Bytes point_to_bytes(const EC_POINT* p, BN_CTX* ctx) {
  Bytes out(kPublicKeySize);
  if (EC_POINT_point2oct(group(), p, POINT_CONVERSION_UNCOMPRESSED, out.data(),
                         out.size(), ctx) != kPublicKeySize)
    throw InvariantError("point serialization failed");
  return out;
}

}  // namespace detail

// Deterministically derives a keypair from the run seed and an actor name.
// Candidate scalars are hashed until one lands in [1, n-1]; the first try
// virtually always does.
inline KeyPair derive_keypair(std::uint64_t master_seed, std::string_view name) {
  using namespace detail;
  ByteWriter w;
  w.u64(master_seed);
  w.var_str(name);
  const Bytes base = w.take();

  BnCtxPtr ctx(BN_CTX_new());
  BnPtr d = make_bn();
  for (std::uint32_t counter = 0;; ++counter) {
    ByteWriter cand;
    cand.raw(base);
    cand.u32(counter);
    Digest h = sha256(cand.bytes());
    if (!BN_bin2bn(h.bytes.data(), 32, d.get()))
      throw InvariantError("key derivation failed");
    if (!BN_is_zero(d.get()) && BN_cmp(d.get(), order()) < 0) break;
  }

  PointPtr q(EC_POINT_new(group()));
  if (!q || !EC_POINT_mul(group(), q.get(), d.get(), nullptr, nullptr, ctx.get()))
    throw InvariantError("public key derivation failed");

  KeyPair kp;
  kp.secret.resize(kSecretKeySize);
  int2octets(d.get(), kp.secret.data());
  kp.public_key = point_to_bytes(q.get(), ctx.get());
  return kp;
}

inline KeyPair keypair_from_secret(const Bytes& secret) {
  using namespace detail;
  require(secret.size() == kSecretKeySize, "secret key must be 32 bytes");
  BnCtxPtr ctx(BN_CTX_new());
  BnPtr d = make_bn();
  if (!BN_bin2bn(secret.data(), 32, d.get()))
    throw InvariantError("bad secret scalar");
  require(!BN_is_zero(d.get()) && BN_cmp(d.get(), order()) < 0,
          "secret scalar out of range");
  PointPtr q(EC_POINT_new(group()));
  if (!q || !EC_POINT_mul(group(), q.get(), d.get(), nullptr, nullptr, ctx.get()))
    throw InvariantError("public key derivation failed");
  return KeyPair{secret, point_to_bytes(q.get(), ctx.get())};
}

inline Signature sign(const Bytes& secret, const std::uint8_t* msg,
                      std::size_t msg_len) {
  using namespace detail;
  require(secret.size() == kSecretKeySize, "secret key must be 32 bytes");

  BnCtxPtr ctx(BN_CTX_new());
  BnPtr d = make_bn();
  if (!BN_bin2bn(secret.data(), 32, d.get()) || BN_is_zero(d.get()) ||
      BN_cmp(d.get(), order()) >= 0)
    throw InvariantError("secret scalar out of range");

  const Digest h1 = sha256(msg, msg_len);
  BnPtr z = make_bn();
  if (!BN_bin2bn(h1.bytes.data(), 32, z.get())) throw InvariantError("bits2int failed");

  NonceDrbg drbg(d.get(), h1);
  BnPtr r = make_bn(), s = make_bn();
  PointPtr point(EC_POINT_new(group()));
  if (!point) throw InvariantError("EC_POINT_new failed");

  for (;;) {
    BnPtr k = drbg.next();
    if (BN_is_zero(k.get()) || BN_cmp(k.get(), order()) >= 0) {
      drbg.reseed();
      continue;
    }
    if (!EC_POINT_mul(group(), point.get(), k.get(), nullptr, nullptr, ctx.get()))
      throw InvariantError("EC_POINT_mul failed");
    BnPtr x = make_bn();
    if (!EC_POINT_get_affine_coordinates(group(), point.get(), x.get(), nullptr,
                                         ctx.get()))
      throw InvariantError("affine conversion failed");
    if (!BN_nnmod(r.get(), x.get(), order(), ctx.get()))
      throw InvariantError("mod failed");
    if (BN_is_zero(r.get())) {
      drbg.reseed();
      continue;
    }

    // s = k^-1 (z + r d) mod n
    BnPtr kinv(BN_mod_inverse(nullptr, k.get(), order(), ctx.get()));
    if (!kinv) throw InvariantError("nonce inversion failed");
    BnPtr t = make_bn();
    if (!BN_mod_mul(t.get(), r.get(), d.get(), order(), ctx.get()) ||
        !BN_mod_add(t.get(), t.get(), z.get(), order(), ctx.get()) ||
        !BN_mod_mul(s.get(), t.get(), kinv.get(), order(), ctx.get()))
      throw InvariantError("signature arithmetic failed");
    if (BN_is_zero(s.get())) {
      drbg.reseed();
      continue;
    }
    break;
  }

  // Layout: 30 46 | 02 21 00 r[32] | 02 21 00 s[32]  (4 + 33 + 2 + 33 = 72)
  Signature sig;
  sig.bytes[0] = 0x30;  // sequence
  sig.bytes[1] = 0x46;  // 70 content bytes
  sig.bytes[2] = 0x02;  // integer
  sig.bytes[3] = 0x21;  // 33 bytes, zero-padded
  sig.bytes[4] = 0x00;
  int2octets(r.get(), sig.bytes.data() + 5);
  sig.bytes[37] = 0x02;
  sig.bytes[38] = 0x21;
  sig.bytes[39] = 0x00;
  int2octets(s.get(), sig.bytes.data() + 40);
  return sig;
}

inline Signature sign(const Bytes& secret, const Bytes& msg) {
  return sign(secret, msg.data(), msg.size());
}

inline Signature sign(const Bytes& secret, const Digest& msg) {
  return sign(secret, msg.bytes.data(), msg.bytes.size());
}

// Strict verifier: anything malformed (wrong length, bad framing, off-curve
// point, out-of-range scalars) verifies false rather than throwing.
inline bool verify(const Bytes& public_key, const std::uint8_t* msg,
                   std::size_t msg_len, const Signature& sig) {
  using namespace detail;
  if (public_key.size() != kPublicKeySize || public_key[0] != 0x04) return false;
  if (sig.bytes[0] != 0x30 || sig.bytes[1] != 0x46 || sig.bytes[2] != 0x02 ||
      sig.bytes[3] != 0x21 || sig.bytes[4] != 0x00 || sig.bytes[37] != 0x02 ||
      sig.bytes[38] != 0x21 || sig.bytes[39] != 0x00)
    return false;

  BnCtxPtr ctx(BN_CTX_new());
  BnPtr r = make_bn(), s = make_bn();
  if (!BN_bin2bn(sig.bytes.data() + 5, 32, r.get()) ||
      !BN_bin2bn(sig.bytes.data() + 40, 32, s.get()))
    return false;
  if (BN_is_zero(r.get()) || BN_cmp(r.get(), order()) >= 0) return false;
  if (BN_is_zero(s.get()) || BN_cmp(s.get(), order()) >= 0) return false;

  PointPtr q(EC_POINT_new(group()));
  if (!q || EC_POINT_oct2point(group(), q.get(), public_key.data(),
                               public_key.size(), ctx.get()) != 1)
    return false;
  if (EC_POINT_is_at_infinity(group(), q.get())) return false;

  const Digest h1 = sha256(msg, msg_len);
  BnPtr z = make_bn();
  if (!BN_bin2bn(h1.bytes.data(), 32, z.get())) return false;

  BnPtr w(BN_mod_inverse(nullptr, s.get(), order(), ctx.get()));
  if (!w) return false;
  BnPtr u1 = make_bn(), u2 = make_bn();
  if (!BN_mod_mul(u1.get(), z.get(), w.get(), order(), ctx.get()) ||
      !BN_mod_mul(u2.get(), r.get(), w.get(), order(), ctx.get()))
    return false;

  PointPtr point(EC_POINT_new(group()));
  if (!point ||
      !EC_POINT_mul(group(), point.get(), u1.get(), q.get(), u2.get(), ctx.get()))
    return false;
  if (EC_POINT_is_at_infinity(group(), point.get())) return false;

  BnPtr x = make_bn(), v = make_bn();
  if (!EC_POINT_get_affine_coordinates(group(), point.get(), x.get(), nullptr,
                                       ctx.get()))
    return false;
  if (!BN_nnmod(v.get(), x.get(), order(), ctx.get())) return false;
  return BN_cmp(v.get(), r.get()) == 0;
}

inline bool verify(const Bytes& public_key, const Bytes& msg, const Signature& sig) {
  return verify(public_key, msg.data(), msg.size(), sig);
}

inline bool verify(const Bytes& public_key, const Digest& msg, const Signature& sig) {
  return verify(public_key, msg.bytes.data(), msg.bytes.size(), sig);
}

// Verification wrapper with a memo on (public key, message, signature).
// Peers, the orderer and commit-time revalidation all check the same
// signatures; identical inputs give identical answers, so caching is safe and
// saves the bulk of the EC work in long runs.
class SignatureVerifier {
 public:
  bool verify(const Bytes& public_key, const Digest& msg, const Signature& sig) {
    ByteWriter w;
    w.var_bytes(public_key);
    w.raw(msg.bytes);
    w.raw(sig.bytes.data(), sig.bytes.size());
    const Digest key = sha256(w.bytes());
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    bool ok = crypto::verify(public_key, msg, sig);
    cache_.emplace(key, ok);
    return ok;
  }

  std::size_t cache_size() const { return cache_.size(); }

 private:
  std::unordered_map<Digest, bool, DigestHash> cache_;
};

}  // namespace nbdlt::crypto

#endif
