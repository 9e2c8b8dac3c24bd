#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <stdexcept>
#include <string>

namespace renyi {

/// Extended real number: a finite double or one of the two tagged infinities.
/// Infinity is never represented by a large sentinel value.
class ExtReal {
 public:
  enum class Kind { Finite, PosInf, NegInf };

  constexpr ExtReal() = default;

  /// IEEE infinities are mapped onto the tags; NaN is rejected.
  ExtReal(double v) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(v)) throw std::domain_error("ExtReal: NaN is not an extended real");
    if (std::isinf(v)) {
      kind_ = v > 0 ? Kind::PosInf : Kind::NegInf;
    } else {
      value_ = v;
    }
  }

  static ExtReal pos_inf() { return ExtReal(Kind::PosInf); }
  static ExtReal neg_inf() { return ExtReal(Kind::NegInf); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }

  double value() const {
    if (!is_finite()) throw std::domain_error("ExtReal: value() called on an infinite value");
    return value_;
  }

  /// Lossless view as an IEEE double (infinities become +-inf).
  double to_double() const {
    switch (kind_) {
      case Kind::PosInf: return std::numeric_limits<double>::infinity();
      case Kind::NegInf: return -std::numeric_limits<double>::infinity();
      case Kind::Finite: break;
    }
    return value_;
  }

  friend std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
    return a.to_double() <=> b.to_double();
  }
  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || a.value_ == b.value_);
  }

  std::string to_string() const;

 private:
  explicit ExtReal(Kind k) : kind_(k) {}

  Kind kind_ = Kind::Finite;
  double value_ = 0.0;
};

/// Shortest round-trip decimal representation; "inf" / "-inf" for the tags.
std::string format_double(double v);

inline std::string ExtReal::to_string() const {
  if (is_pos_inf()) return "inf";
  if (is_neg_inf()) return "-inf";
  return format_double(value_);
}

}  // namespace renyi
