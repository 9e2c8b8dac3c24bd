#pragma once

#include <limits>
#include <string>
#include <string_view>

namespace renyi {

/// Order alpha of a Renyi quantity. alpha = 1 and alpha = infinity carry exact
/// tags so that limits are evaluated through their closed forms.
class RenyiOrder {
 public:
  enum class Kind { One, Infinity, Finite };

  static RenyiOrder one() { return RenyiOrder(Kind::One, 1.0); }
  static RenyiOrder infinity() {
    return RenyiOrder(Kind::Infinity, std::numeric_limits<double>::infinity());
  }
  /// Requires alpha > 0 and alpha != 1.
  static RenyiOrder finite(double alpha);
  /// Accepts any alpha > 0, including 1 and +inf.
  static RenyiOrder from_value(double alpha);
  /// Parses "inf", "infinity" or a positive decimal.
  static RenyiOrder parse(std::string_view text);

  Kind kind() const { return kind_; }
  bool is_one() const { return kind_ == Kind::One; }
  bool is_infinity() const { return kind_ == Kind::Infinity; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  /// alpha > 1, including infinity.
  bool above_one() const { return is_infinity() || (is_finite() && value_ > 1.0); }
  /// alpha in (0, 1).
  bool below_one() const { return is_finite() && value_ < 1.0; }

  double value() const { return value_; }
  /// Hoelder conjugate alpha / (alpha - 1); +inf at alpha = 1, 1 at alpha = inf.
  double conjugate() const;
  /// (alpha - 1) / alpha; 0 at alpha = 1, 1 at alpha = inf.
  double ratio() const;

  std::string to_string() const;

  friend bool operator==(const RenyiOrder& a, const RenyiOrder& b) {
    return a.kind_ == b.kind_ && a.value_ == b.value_;
  }

 private:
  RenyiOrder(Kind k, double v) : kind_(k), value_(v) {}

  Kind kind_;
  double value_;
};

}  // namespace renyi
