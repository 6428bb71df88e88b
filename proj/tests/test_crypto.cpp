#include <catch2/catch_amalgamated.hpp>

#include <unordered_set>

#include "nbdlt/crypto/digest.hpp"
#include "nbdlt/crypto/ecdsa.hpp"
#include "nbdlt/sim/random.hpp"

using namespace nbdlt;
using namespace nbdlt::crypto;

namespace {

Bytes hex_bytes(std::string_view s) {
  auto b = from_hex(s);
  REQUIRE(b.has_value());
  return *b;
}

std::string sig_r_hex(const Signature& sig) {
  return to_hex(sig.bytes.data() + 5, 32);  // after framing + pad byte
}

std::string sig_s_hex(const Signature& sig) {
  return to_hex(sig.bytes.data() + 40, 32);
}

// RFC 6979 appendix A.2.5, curve P-256 with SHA-256.
const char* kTvSecret =
    "c9afa9d845ba75166b5c215767b1d6934e50c3db36e89b127b8a622b120f6721";
const char* kTvPubX =
    "60fed4ba255a9d31c961eb74c6356d68c049b8923b61fa6ce669622e60f29fb6";
const char* kTvPubY =
    "7903fe1008b8bc99a41ae9e95628bc64f2f1b20c2d7e9f5177a3c294d4462299";

}  // namespace

TEST_CASE("sha256 known answers", "[crypto]") {
  REQUIRE(sha256(std::string_view{}).hex() ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  REQUIRE(sha256(std::string_view{"abc"}).hex() ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("sha256 is deterministic and collision-free over distinct inputs", "[crypto]") {
  std::unordered_set<std::string> seen;
  sim::RandomStreams rng(31337);
  rng.register_stream("msg");
  for (int i = 0; i < 100000; ++i) {
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(i));  // distinct by construction
    w.u64(rng.uniform_int("msg", UINT64_MAX));
    const Digest d = sha256(w.bytes());
    REQUIRE(d == sha256(w.bytes()));
    REQUIRE(seen.insert(d.hex()).second);
  }
}

TEST_CASE("public key derivation matches the reference vector", "[crypto]") {
  KeyPair kp = keypair_from_secret(hex_bytes(kTvSecret));
  REQUIRE(kp.public_key.size() == kPublicKeySize);
  REQUIRE(kp.public_key[0] == 0x04);
  REQUIRE(to_hex(kp.public_key.data() + 1, 32) == kTvPubX);
  REQUIRE(to_hex(kp.public_key.data() + 33, 32) == kTvPubY);
}

TEST_CASE("deterministic signatures match the reference vectors", "[crypto]") {
  KeyPair kp = keypair_from_secret(hex_bytes(kTvSecret));

  const Bytes sample{'s', 'a', 'm', 'p', 'l', 'e'};
  Signature sig = sign(kp.secret, sample);
  REQUIRE(sig_r_hex(sig) ==
          "efd48b2aacb6a8fd1140dd9cd45e81d69d2c877b56aaf991c34d0ea84eaf3716");
  REQUIRE(sig_s_hex(sig) ==
          "f7cb1c942d657c41d436c7a1b6e29f65f3e900dbb9aff4064dc4ab2f843acda8");
  REQUIRE(verify(kp.public_key, sample, sig));

  const Bytes test{'t', 'e', 's', 't'};
  Signature sig2 = sign(kp.secret, test);
  REQUIRE(sig_r_hex(sig2) ==
          "f1abb023518351cd71d881567b1ea663ed3efcf6c5132b354f28d3b0b7d38367");
  REQUIRE(sig_s_hex(sig2) ==
          "019f4113742a2b14bd25926b49c649155f267e60d3814b4c0cc84250e46f0083");
  REQUIRE(verify(kp.public_key, test, sig2));
}

TEST_CASE("signing twice yields the identical signature", "[crypto]") {
  KeyPair kp = derive_keypair(77, "ue0");
  const Bytes msg{1, 2, 3, 4, 5};
  REQUIRE(sign(kp.secret, msg) == sign(kp.secret, msg));
}

TEST_CASE("signatures are always exactly 72 bytes with fixed framing", "[crypto]") {
  sim::RandomStreams rng(5150);
  rng.register_stream("len");
  rng.register_stream("byte");
  KeyPair kp = derive_keypair(9, "framing");
  std::vector<std::size_t> sizes{0, 1, 2, 31, 32, 33, 100, 1000, 10000};
  for (int i = 0; i < 40; ++i)
    sizes.push_back(rng.uniform_int("len", 10000));
  for (std::size_t n : sizes) {
    Bytes msg(n);
    for (auto& b : msg) b = static_cast<std::uint8_t>(rng.uniform_int("byte", 256));
    Signature sig = sign(kp.secret, msg);
    REQUIRE(sig.bytes.size() == kSignatureSize);
    REQUIRE(sig.bytes[0] == 0x30);
    REQUIRE(sig.bytes[1] == 0x46);
    REQUIRE(sig.bytes[2] == 0x02);
    REQUIRE(sig.bytes[3] == 0x21);
    REQUIRE(sig.bytes[4] == 0x00);
    REQUIRE(sig.bytes[37] == 0x02);
    REQUIRE(sig.bytes[38] == 0x21);
    REQUIRE(sig.bytes[39] == 0x00);
    REQUIRE(verify(kp.public_key, msg, sig));
  }
}

TEST_CASE("any single tampered bit breaks verification", "[crypto]") {
  KeyPair kp = derive_keypair(123, "tamper");
  KeyPair other = derive_keypair(123, "other");
  Bytes msg{10, 20, 30, 40, 50, 60};
  Signature sig = sign(kp.secret, msg);
  REQUIRE(verify(kp.public_key, msg, sig));

  SECTION("message bit") {
    Bytes bad = msg;
    bad[3] ^= 0x01;
    REQUIRE_FALSE(verify(kp.public_key, bad, sig));
  }
  SECTION("signature r bits") {
    for (std::size_t i : {5u, 20u, 36u}) {
      Signature bad = sig;
      bad.bytes[i] ^= 0x80;
      REQUIRE_FALSE(verify(kp.public_key, msg, bad));
    }
  }
  SECTION("signature s bits") {
    for (std::size_t i : {41u, 55u, 71u}) {
      Signature bad = sig;
      bad.bytes[i] ^= 0x01;
      REQUIRE_FALSE(verify(kp.public_key, msg, bad));
    }
  }
  SECTION("wrong key") {
    REQUIRE_FALSE(verify(other.public_key, msg, sig));
  }
  SECTION("corrupted public key point") {
    Bytes bad = kp.public_key;
    bad[10] ^= 0x01;  // almost surely off-curve
    REQUIRE_FALSE(verify(bad, msg, sig));
  }
}

TEST_CASE("malformed signature framing is rejected, not parsed", "[crypto]") {
  KeyPair kp = derive_keypair(5, "frames");
  Bytes msg{9, 9, 9};
  Signature sig = sign(kp.secret, msg);

  Signature short_len = sig;
  short_len.bytes[1] = 0x45;  // claims 71 total bytes
  REQUIRE_FALSE(verify(kp.public_key, msg, short_len));

  Signature bad_int = sig;
  bad_int.bytes[3] = 0x20;  // 32-byte integer, not our fixed 33
  REQUIRE_FALSE(verify(kp.public_key, msg, bad_int));

  Signature bad_tag = sig;
  bad_tag.bytes[0] = 0x31;
  REQUIRE_FALSE(verify(kp.public_key, msg, bad_tag));

  Signature bad_pad = sig;
  bad_pad.bytes[4] = 0x01;
  REQUIRE_FALSE(verify(kp.public_key, msg, bad_pad));

  Bytes truncated_key(kp.public_key.begin(), kp.public_key.end() - 1);
  REQUIRE_FALSE(verify(truncated_key, msg, sig));
}

TEST_CASE("keypair derivation is deterministic per (seed, name)", "[crypto]") {
  KeyPair a1 = derive_keypair(42, "peer1");
  KeyPair a2 = derive_keypair(42, "peer1");
  KeyPair b = derive_keypair(42, "peer2");
  KeyPair c = derive_keypair(43, "peer1");
  REQUIRE(a1.secret == a2.secret);
  REQUIRE(a1.public_key == a2.public_key);
  REQUIRE(a1.secret != b.secret);
  REQUIRE(a1.secret != c.secret);
}

TEST_CASE("verifier memo returns stable answers", "[crypto]") {
  SignatureVerifier verifier;
  KeyPair kp = derive_keypair(8, "memo");
  Digest d = sha256(std::string_view{"payload"});
  Signature sig = sign(kp.secret, d);

  REQUIRE(verifier.verify(kp.public_key, d, sig));
  REQUIRE(verifier.verify(kp.public_key, d, sig));
  REQUIRE(verifier.cache_size() == 1);

  Signature bad = sig;
  bad.bytes[50] ^= 0x04;
  REQUIRE_FALSE(verifier.verify(kp.public_key, d, bad));
  REQUIRE_FALSE(verifier.verify(kp.public_key, d, bad));
  REQUIRE(verifier.cache_size() == 2);
}
