#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vosa {

/// Exact rational coefficient. gmpxx keeps arithmetic results canonical
/// (lowest terms, positive denominator, zero as 0/1).
using Scalar = mpq_class;
using Integer = mpz_class;

inline Scalar make_scalar(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("make_scalar: zero denominator");
  Scalar s(num, den);
  s.canonicalize();
  return s;
}

/// Parses "p", "-p" or "p/q".
inline Scalar parse_scalar(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Scalar(Integer(s));
    Integer num(s.substr(0, slash)), den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    Scalar r(num, den);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("cannot parse rational '" + s + "'");
  }
}

inline std::string to_string(const Scalar& s) { return s.get_str(); }

/// alpha (alpha-1) ... (alpha-s+1) / s!
inline Scalar gen_binomial(const Scalar& alpha, long s) {
  if (s < 0) throw std::invalid_argument("gen_binomial: negative s");
  Scalar r = 1;
  for (long j = 0; j < s; ++j) {
    r *= (alpha - j);
    r /= (j + 1);
  }
  return r;
}

/// A point of (1/D)Z stored as a reduced fraction of machine integers.
/// Mode indices, weights and degrees all live here.
class FracIndex {
 public:
  constexpr FracIndex() = default;
  FracIndex(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
    if (den_ == 0) throw std::invalid_argument("FracIndex: zero denominator");
    reduce();
  }

  static FracIndex parse(std::string_view text) {
    std::string s(text);
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return FracIndex(std::stoll(s));
      return FracIndex(std::stoll(s.substr(0, slash)),
                       std::stoll(s.substr(slash + 1)));
    } catch (const std::logic_error&) {
      throw std::invalid_argument("cannot parse fractional index '" + s + "'");
    }
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }

  std::int64_t floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }
  /// Representative in [0, 1).
  FracIndex frac() const { return *this - FracIndex(floor()); }

  /// Integer value; throws when not integral.
  std::int64_t as_integer() const {
    if (den_ != 1) throw std::domain_error("FracIndex " + str() + " is not integral");
    return num_;
  }

  Scalar scalar() const { return make_scalar(num_, den_); }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_)
                     : std::to_string(num_) + "/" + std::to_string(den_);
  }

  FracIndex operator-() const { return FracIndex(-num_, den_); }
  friend FracIndex operator+(const FracIndex& a, const FracIndex& b) {
    auto g = std::gcd(a.den_, b.den_);
    return FracIndex(a.num_ * (b.den_ / g) + b.num_ * (a.den_ / g),
                     a.den_ / g * b.den_);
  }
  friend FracIndex operator-(const FracIndex& a, const FracIndex& b) { return a + (-b); }
  friend FracIndex operator*(const FracIndex& a, std::int64_t k) {
    return FracIndex(a.num_ * k, a.den_);
  }
  FracIndex& operator+=(const FracIndex& o) { return *this = *this + o; }
  FracIndex& operator-=(const FracIndex& o) { return *this = *this - o; }

  friend bool operator==(const FracIndex& a, const FracIndex& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const FracIndex& a, const FracIndex& b) {
    // denominators are small; the cross products fit comfortably
    return (a.num_ * b.den_) <=> (b.num_ * a.den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const FracIndex& f) {
    return os << f.str();
  }

 private:
  void reduce() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    auto g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline const FracIndex kHalf{1, 2};

inline Scalar gen_binomial(const FracIndex& alpha, long s) {
  return gen_binomial(alpha.scalar(), s);
}

/// Context-wide lattice (1/D)Z, D = lcm(2, T0, T, N).
struct IndexLattice {
  std::int64_t denominator = 2;

  static IndexLattice from_orders(std::int64_t t0, std::int64_t t, std::int64_t n = 1) {
    IndexLattice l;
    l.denominator = std::lcm(std::lcm(std::int64_t{2}, t0), std::lcm(t, n));
    return l;
  }
  bool contains(const FracIndex& f) const { return denominator % f.den() == 0; }
};

}  // namespace vosa

template <>
struct std::hash<vosa::FracIndex> {
  std::size_t operator()(const vosa::FracIndex& f) const noexcept {
    return std::hash<std::int64_t>{}(f.num()) * 1000003u ^
           std::hash<std::int64_t>{}(f.den());
  }
};
