#include "assocfam/jet.hpp"

#include <cmath>
#include <sstream>

namespace assocfam {

namespace {

bool is_integer(double p) { return std::isfinite(p) && std::floor(p) == p; }

[[noreturn]] void domain(const char* fn, double x) {
  std::ostringstream os;
  os << fn << " is not analytic at " << x;
  throw DomainError(os.str());
}

}  // namespace

namespace jet_detail {

std::array<double, 4> taylor_coefficients(ElementaryFunction fn, double x, double exponent) {
  // d[k] = f^(k)(x); divided by k! at the end.
  std::array<double, 4> d{};
  switch (fn) {
    case ElementaryFunction::Sin:
    case ElementaryFunction::Cos: {
      const double s = std::sin(x), c = std::cos(x);
      // The derivatives of sin cycle through sin, cos, -sin, -cos.
      const std::array<double, 4> cycle{s, c, -s, -c};
      const int offset = fn == ElementaryFunction::Sin ? 0 : 1;
      for (int k = 0; k < 4; ++k) d[k] = cycle[(k + offset) % 4];
      break;
    }
    case ElementaryFunction::Sinh:
    case ElementaryFunction::Cosh: {
      const double s = std::sinh(x), c = std::cosh(x);
      const bool odd_first = fn == ElementaryFunction::Sinh;
      for (int k = 0; k < 4; ++k) d[k] = ((k % 2 == 0) == odd_first) ? s : c;
      break;
    }
    case ElementaryFunction::Exp: {
      const double e = std::exp(x);
      d = {e, e, e, e};
      break;
    }
    case ElementaryFunction::Log: {
      if (!(x > 0.0)) domain("log", x);
      d[0] = std::log(x);
      // f^(k) = (-1)^(k-1) (k-1)! / x^k
      double r = 1.0 / x;
      d[1] = r;
      for (int k = 2; k < 4; ++k) {
        r *= -(k - 1) / x;
        d[k] = r;
      }
      break;
    }
    case ElementaryFunction::Recip:
      if (x == 0.0) domain("recip", x);
      exponent = -1.0;
      [[fallthrough]];
    case ElementaryFunction::Sqrt:
      if (fn == ElementaryFunction::Sqrt) {
        if (!(x > 0.0)) domain("sqrt", x);
        exponent = 0.5;
      }
      [[fallthrough]];
    case ElementaryFunction::Pow: {
      const double p = exponent;
      if (!is_integer(p) && !(x > 0.0)) domain("pow", x);
      if (is_integer(p) && p < 0.0 && x == 0.0) domain("pow", x);
      // Falling-factorial recurrence: f^(k+1) = f^(k) * (p - k) / x, written
      // with explicit powers so x = 0 works for non-negative integer p.
      double falling = 1.0;
      for (int k = 0; k < 4; ++k) {
        d[k] = (falling == 0.0) ? 0.0 : falling * std::pow(x, p - k);
        falling *= (p - k);
      }
      break;
    }
  }
  for (int k = 2; k < 4; ++k) d[k] /= factorial(k);
  return d;
}

}  // namespace jet_detail

double lift(ElementaryFunction fn, double x, double exponent) {
  return jet_detail::taylor_coefficients(fn, x, exponent)[0];
}

}  // namespace assocfam
