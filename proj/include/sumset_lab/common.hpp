#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace sumset_lab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

enum class ErrorKind {
  invalid_group,
  invalid_element,
  invalid_input,
  invalid_subgroup,
  shape,
  overflow,
  invariant_violation,
  invalid_construction,
  invalid_conditioning,
  hypothesis,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_group: return "invalid-group";
    case ErrorKind::invalid_element: return "invalid-element";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::invalid_subgroup: return "invalid-subgroup";
    case ErrorKind::shape: return "shape";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::invariant_violation: return "internal-invariant-violation";
    case ErrorKind::invalid_construction: return "invalid-construction";
    case ErrorKind::invalid_conditioning: return "invalid-conditioning";
    case ErrorKind::hypothesis: return "hypothesis";
  }
  return "unknown";
}

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

// ---------------------------------------------------------------------------
// Rationals

/// "num/den" with the denominator always present, e.g. "0/1", "1/1", "3/8".
inline std::string format_rational(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

/// Parses "3/4", "7", "0.125", "-1.5" exactly.
inline Rational parse_rational(std::string_view text) {
  auto bad = [&] { fail(ErrorKind::invalid_input, "not a rational number: '" + std::string(text) + "'"); };
  if (text.empty()) bad();
  auto digits_only = [](std::string_view s, bool allow_empty) {
    if (s.empty()) return allow_empty;
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  // cpp_int reads a leading 0 as an octal prefix
  auto strip_zeros = [](std::string_view s) {
    s.remove_prefix(std::min(s.find_first_not_of('0'), s.size()));
    return s.empty() ? std::string("0") : std::string(s);
  };
  bool negative = false;
  std::string_view body = text;
  if (body.front() == '-' || body.front() == '+') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!digits_only(num, false) || !digits_only(den, false)) bad();
    BigInt d{strip_zeros(den)};
    if (d == 0) bad();
    value = Rational(BigInt{strip_zeros(num)}, d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if (!digits_only(whole, true) || !digits_only(frac, true) || (whole.empty() && frac.empty())) bad();
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
    BigInt num{strip_zeros(std::string(whole) + std::string(frac))};
    value = Rational(num, scale);
  } else {
    if (!digits_only(body, false)) bad();
    value = Rational(BigInt{strip_zeros(body)});
  }
  return negative ? Rational(-value) : value;
}

inline Rational rational_pow(const Rational& base, unsigned exponent) {
  Rational result = 1;
  for (unsigned i = 0; i < exponent; ++i) result *= base;
  return result;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// ---------------------------------------------------------------------------
// Bitset

/// Fixed-length bitset over 64-bit words; bits past size() are always zero.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const noexcept { return size_; }
  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void assign(std::size_t i, bool value) { value ? set(i) : reset(i); }

  void set_all() {
    std::fill(words_.begin(), words_.end(), ~std::uint64_t{0});
    trim();
  }

  std::uint64_t count() const noexcept {
    std::uint64_t total = 0;
    for (auto w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
    return total;
  }

  bool none() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }

  bool all() const noexcept { return count() == size_; }

  Bitset& operator|=(const Bitset& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }
  Bitset& operator&=(const Bitset& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
  }

  /// this & ~other
  Bitset minus(const Bitset& other) const {
    Bitset out = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] &= ~other.words_[i];
    return out;
  }

  bool is_subset_of(const Bitset& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~other.words_[i]) return false;
    return true;
  }

  template <typename F>
  void for_each_set(F&& visit) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        const int tz = std::countr_zero(bits);
        visit(w * 64 + static_cast<std::size_t>(tz));
        bits &= bits - 1;
      }
    }
  }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for_each_set([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  friend bool operator==(const Bitset&, const Bitset&) = default;

 private:
  void trim() {
    if (size_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace sumset_lab
