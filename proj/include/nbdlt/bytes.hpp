#ifndef NBDLT_BYTES_HPP
#define NBDLT_BYTES_HPP

#include <cstdint>
#include <cstring>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nbdlt {

using Bytes = std::vector<std::uint8_t>;

// Canonical big-endian encoder used for every hashed or serialized structure.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }

  void u32(std::uint32_t v) {
    for (int i = 3; i >= 0; --i) out_.push_back((v >> (8 * i)) & 0xff);
  }

  void u64(std::uint64_t v) {
    for (int i = 7; i >= 0; --i) out_.push_back((v >> (8 * i)) & 0xff);
  }

  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }

  void raw(const std::uint8_t* p, std::size_t n) { out_.insert(out_.end(), p, p + n); }
  void raw(const Bytes& b) { raw(b.data(), b.size()); }

  template <std::size_t N>
  void raw(const std::array<std::uint8_t, N>& a) { raw(a.data(), N); }

  void var_bytes(const Bytes& b) {
    u32(static_cast<std::uint32_t>(b.size()));
    raw(b);
  }

  void var_str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    raw(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
  }

  const Bytes& bytes() const { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

// Bounds-checked decoder.  Every accessor reports failure instead of reading
// past the end, so arbitrarily corrupted input degrades to a parse error.
class ByteReader {
 public:
  explicit ByteReader(const Bytes& b) : p_(b.data()), n_(b.size()) {}
  ByteReader(const std::uint8_t* p, std::size_t n) : p_(p), n_(n) {}

  bool ok() const { return ok_; }
  std::size_t remaining() const { return n_ - pos_; }
  bool at_end() const { return pos_ == n_; }

  std::uint8_t u8() {
    if (!need(1)) return 0;
    return p_[pos_++];
  }

  std::uint32_t u32() {
    if (!need(4)) return 0;
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | p_[pos_++];
    return v;
  }

  std::uint64_t u64() {
    if (!need(8)) return 0;
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | p_[pos_++];
    return v;
  }

  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }

  Bytes raw(std::size_t n) {
    if (!need(n)) return {};
    Bytes b(p_ + pos_, p_ + pos_ + n);
    pos_ += n;
    return b;
  }

  template <std::size_t N>
  bool raw_into(std::array<std::uint8_t, N>& a) {
    if (!need(N)) return false;
    std::memcpy(a.data(), p_ + pos_, N);
    pos_ += N;
    return true;
  }

  Bytes var_bytes() {
    std::uint32_t len = u32();
    if (!ok_ || len > remaining()) {
      ok_ = false;
      return {};
    }
    return raw(len);
  }

  std::string var_str() {
    Bytes b = var_bytes();
    return std::string(b.begin(), b.end());
  }

 private:
  bool need(std::size_t n) {
    if (!ok_ || n > n_ - pos_) {
      ok_ = false;
      return false;
    }
    return true;
  }

  const std::uint8_t* p_;
  std::size_t n_;
  std::size_t pos_ = 0;
  bool ok_ = true;
};

inline std::string to_hex(const std::uint8_t* p, std::size_t n) {
  static const char* k = "0123456789abcdef";
  std::string s;
  s.reserve(n * 2);
  for (std::size_t i = 0; i < n; ++i) {
    s.push_back(k[p[i] >> 4]);
    s.push_back(k[p[i] & 0xf]);
  }
  return s;
}

inline std::optional<Bytes> from_hex(std::string_view s) {
  auto nib = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (s.size() % 2 != 0) return std::nullopt;
  Bytes out;
  out.reserve(s.size() / 2);
  for (std::size_t i = 0; i < s.size(); i += 2) {
    int hi = nib(s[i]), lo = nib(s[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
  }
  return out;
}

}  // namespace nbdlt

#endif
