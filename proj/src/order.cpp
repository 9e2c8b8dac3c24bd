#include "renyi/order.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

#include "renyi/ext_real.hpp"

namespace renyi {

RenyiOrder RenyiOrder::finite(double alpha) {
  if (!(alpha > 0.0) || alpha == 1.0 || std::isinf(alpha)) {
    throw std::invalid_argument("RenyiOrder::finite requires alpha in (0,1) or (1,inf), got " +
                                format_double(alpha));
  }
  return RenyiOrder(Kind::Finite, alpha);
}

RenyiOrder RenyiOrder::from_value(double alpha) {
  if (alpha == 1.0) return one();
  if (std::isinf(alpha) && alpha > 0) return infinity();
  return finite(alpha);
}

RenyiOrder RenyiOrder::parse(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "Inf" || text == "+inf") return infinity();
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("cannot parse Renyi order '" + std::string(text) + "'");
  }
  return from_value(v);
}

double RenyiOrder::conjugate() const {
  switch (kind_) {
    case Kind::One: return std::numeric_limits<double>::infinity();
    case Kind::Infinity: return 1.0;
    case Kind::Finite: break;
  }
  return value_ / (value_ - 1.0);
}

double RenyiOrder::ratio() const {
  switch (kind_) {
    case Kind::One: return 0.0;
    case Kind::Infinity: return 1.0;
    case Kind::Finite: break;
  }
  return (value_ - 1.0) / value_;
}

std::string RenyiOrder::to_string() const {
  if (is_infinity()) return "inf";
  if (is_one()) return "1";
  return format_double(value_);
}

}  // namespace renyi
