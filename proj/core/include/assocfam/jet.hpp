#pragma once

// Truncated multivariate Taylor polynomials ("jets") of total degree <= 3.
//
// A Jet<N> represents the Taylor expansion of a smooth function of N variables
// around an implicit base point. Arithmetic is closed at the jet's degree:
// products and compositions drop every monomial above it. Derivatives read
// off the coefficients are exact up to rounding, which is what lets the
// structure-equation residuals sit at machine precision.
//
// Coefficients are stored densely in graded order: all monomials of degree 0,
// then degree 1, and so on. For N = 2 that is
//   1, u, v, u^2, uv, v^2, u^3, u^2 v, u v^2, v^3.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "assocfam/errors.hpp"

namespace assocfam {

namespace jet_detail {

constexpr int binomial(int n, int k) {
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Number of monomials in N variables of total degree <= d.
constexpr int monomial_count(int n_vars, int d) { return binomial(n_vars + d, n_vars); }

template <int N>
struct Tables {
  static constexpr int kMaxDegree = 3;
  static constexpr int kSize = monomial_count(N, kMaxDegree);

  std::array<std::array<int, N>, kSize> exps{};
  std::array<int, kSize> total{};
  // product[i][j] = index of exps[i] + exps[j], or -1 above the max degree.
  std::array<std::array<int, kSize>, kSize> product{};
  // shift[v][i] = index of exps[i] + e_v, or -1.
  std::array<std::array<int, kSize>, N> shift{};

  constexpr int find(const std::array<int, N>& e) const {
    for (int i = 0; i < kSize; ++i) {
      bool same = true;
      for (int k = 0; k < N; ++k) same = same && exps[i][k] == e[k];
      if (same) return i;
    }
    return -1;
  }

  constexpr Tables() {
    int idx = 0;
    for (int d = 0; d <= kMaxDegree; ++d) {
      // Enumerate exponent tuples of total degree d in reverse-lex order so
      // that the first variable leads (u^2, uv, v^2 for N = 2).
      std::array<int, N> e{};
      e[0] = d;
      while (true) {
        exps[idx] = e;
        total[idx] = d;
        ++idx;
        // Next composition of d into N parts in reverse-lex order.
        int k = N - 2;
        while (k >= 0 && e[k] == 0) --k;
        if (k < 0) break;
        --e[k];
        int rest = 0;
        for (int j = k + 1; j < N; ++j) rest += e[j];
        for (int j = k + 1; j < N; ++j) e[j] = 0;
        e[k + 1] = rest + 1;
      }
    }
    for (int i = 0; i < kSize; ++i) {
      for (int j = 0; j < kSize; ++j) {
        if (total[i] + total[j] > kMaxDegree) {
          product[i][j] = -1;
          continue;
        }
        std::array<int, N> s{};
        for (int k = 0; k < N; ++k) s[k] = exps[i][k] + exps[j][k];
        product[i][j] = find(s);
      }
    }
    for (int v = 0; v < N; ++v) {
      for (int i = 0; i < kSize; ++i) {
        if (total[i] + 1 > kMaxDegree) {
          shift[v][i] = -1;
          continue;
        }
        std::array<int, N> s = exps[i];
        ++s[v];
        shift[v][i] = find(s);
      }
    }
  }
};

template <int N>
inline constexpr Tables<N> kTables{};

constexpr double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace jet_detail

template <int N>
class Jet {
  static_assert(N >= 1 && N <= 3, "jets are provided for 1 to 3 variables");
  using Tables = jet_detail::Tables<N>;

 public:
  static constexpr int kMaxDegree = Tables::kMaxDegree;
  static constexpr int kSize = Tables::kSize;
  using Exponents = std::array<int, N>;

  /// Zero jet of maximal degree.
  Jet() = default;

  /// Constant jet.
  explicit Jet(double c, int degree = kMaxDegree) : deg_(checked_degree(degree)) {
    coeffs_[0] = c;
  }

  /// The coordinate function x_index expanded around `at`.
  static Jet variable(int index, double at, int degree = kMaxDegree) {
    if (index < 0 || index >= N) throw ContractViolation("jet variable index out of range");
    Jet j(at, degree);
    if (degree >= 1) j.coeffs_[1 + index] = 1.0;
    return j;
  }

  /// Number of stored coefficients for this degree: (d+1)(d+2)/2 when N = 2.
  static constexpr int coefficient_count(int degree) {
    return jet_detail::monomial_count(N, degree);
  }
  static const Exponents& exponents(int index) { return kT().exps[index]; }
  static int index_of(const Exponents& e) {
    const int i = kT().find(e);
    if (i < 0) throw ContractViolation("multi-index beyond maximal jet degree");
    return i;
  }

  int degree() const { return deg_; }
  int size() const { return coefficient_count(deg_); }
  double value() const { return coeffs_[0]; }

  double coeff(int index) const { return coeffs_[index]; }
  double coeff(const Exponents& e) const {
    const int i = index_of(e);
    return kT().total[i] <= deg_ ? coeffs_[i] : 0.0;
  }
  void set_coeff(const Exponents& e, double c) {
    const int i = index_of(e);
    if (kT().total[i] > deg_) throw ContractViolation("coefficient beyond jet degree");
    coeffs_[i] = c;
  }

  /// Exact mixed partial derivative at the base point: prod(e_k!) * coeff(e).
  double partial(const Exponents& e) const {
    int total = 0;
    double fact = 1.0;
    for (int k = 0; k < N; ++k) {
      if (e[k] < 0) throw ContractViolation("negative multi-index");
      total += e[k];
      fact *= jet_detail::factorial(e[k]);
    }
    if (total > deg_) throw ContractViolation("partial derivative order exceeds jet degree");
    return fact * coeff(e);
  }

  /// d/dx_var as a jet of degree deg - 1.
  Jet derivative(int var) const {
    if (deg_ == 0) throw ContractViolation("derivative of a degree-0 jet");
    Jet out;
    out.deg_ = deg_ - 1;
    out.coeffs_.fill(0.0);
    const auto& t = kT();
    for (int i = 0; i < coefficient_count(deg_ - 1); ++i) {
      const int src = t.shift[var][i];
      out.coeffs_[i] = (t.exps[i][var] + 1) * coeffs_[src];
    }
    return out;
  }

  Jet truncated(int degree) const {
    if (degree > deg_) throw ContractViolation("cannot raise jet degree by truncation");
    Jet out = *this;
    out.deg_ = checked_degree(degree);
    for (int i = coefficient_count(degree); i < kSize; ++i) out.coeffs_[i] = 0.0;
    return out;
  }

  /// Same polynomial with the constant term removed.
  Jet displacement() const {
    Jet out = *this;
    out.coeffs_[0] = 0.0;
    return out;
  }

  Jet& operator+=(const Jet& o) {
    require_same_degree(o);
    for (int i = 0; i < size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    require_same_degree(o);
    for (int i = 0; i < size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator+=(double c) {
    coeffs_[0] += c;
    return *this;
  }
  Jet& operator-=(double c) {
    coeffs_[0] -= c;
    return *this;
  }
  Jet& operator*=(double c) {
    for (int i = 0; i < size(); ++i) coeffs_[i] *= c;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double c) { return a += c; }
  friend Jet operator+(double c, Jet a) { return a += c; }
  friend Jet operator-(Jet a, double c) { return a -= c; }
  friend Jet operator-(double c, const Jet& a) { return (-a) += c; }
  friend Jet operator*(Jet a, double c) { return a *= c; }
  friend Jet operator*(double c, Jet a) { return a *= c; }
  friend Jet operator/(Jet a, double c) { return a *= (1.0 / c); }
  friend Jet operator-(Jet a) {
    for (int i = 0; i < a.size(); ++i) a.coeffs_[i] = -a.coeffs_[i];
    return a;
  }

  /// Truncated Cauchy product. Both operands must share the same degree.
  friend Jet operator*(const Jet& a, const Jet& b) {
    a.require_same_degree(b);
    Jet out;
    out.deg_ = a.deg_;
    out.coeffs_.fill(0.0);
    const auto& t = kT();
    const int n = a.size();
    for (int i = 0; i < n; ++i) {
      const double ai = a.coeffs_[i];
      if (ai == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        if (t.total[i] + t.total[j] > a.deg_) continue;
        out.coeffs_[t.product[i][j]] += ai * b.coeffs_[j];
      }
    }
    return out;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * recip(b); }
  friend Jet operator/(double c, const Jet& b) { return recip(b) * c; }

  friend bool operator==(const Jet& a, const Jet& b) {
    return a.deg_ == b.deg_ && a.coeffs_ == b.coeffs_;
  }

  /// Composition with a univariate Taylor expansion: sum_k taylor[k] * h^k,
  /// h = (*this - value()). taylor[k] is f^(k)(x0) / k!.
  Jet compose_univariate(const std::array<double, 4>& taylor) const {
    const Jet h = displacement();
    Jet out(taylor[static_cast<std::size_t>(deg_)], deg_);
    for (int k = deg_ - 1; k >= 0; --k) {
      out = out * h;
      out += taylor[static_cast<std::size_t>(k)];
    }
    return out;
  }

 private:
  static const Tables& kT() { return jet_detail::kTables<N>; }

  static int checked_degree(int d) {
    if (d < 0 || d > kMaxDegree) throw ContractViolation("jet degree must be in [0, 3]");
    return d;
  }

  void require_same_degree(const Jet& o) const {
    if (deg_ != o.deg_) {
      throw ContractViolation("jet degree mismatch: " + std::to_string(deg_) + " vs " +
                              std::to_string(o.deg_));
    }
  }

  int deg_ = kMaxDegree;
  std::array<double, kSize> coeffs_{};
};

using Jet1 = Jet<1>;
using Jet2 = Jet<2>;
using Jet3 = Jet<3>;

// ---------------------------------------------------------------------------
// Elementary functions. Each builds the univariate Taylor coefficients of the
// function at the jet's value by a derivative recurrence and composes.

enum class ElementaryFunction { Sin, Cos, Sinh, Cosh, Exp, Log, Pow, Sqrt, Recip };

namespace jet_detail {

/// Taylor coefficients f^(k)(x)/k!, k = 0..3.
std::array<double, 4> taylor_coefficients(ElementaryFunction fn, double x, double exponent);

}  // namespace jet_detail

/// Lifts an elementary function to jets. `exponent` is only read for Pow.
template <int N>
Jet<N> lift(ElementaryFunction fn, const Jet<N>& a, double exponent = 0.0) {
  return a.compose_univariate(jet_detail::taylor_coefficients(fn, a.value(), exponent));
}

/// Scalar counterpart of lift with identical domain checks.
double lift(ElementaryFunction fn, double x, double exponent = 0.0);

template <int N>
Jet<N> sin(const Jet<N>& a) { return lift(ElementaryFunction::Sin, a); }
template <int N>
Jet<N> cos(const Jet<N>& a) { return lift(ElementaryFunction::Cos, a); }
template <int N>
Jet<N> sinh(const Jet<N>& a) { return lift(ElementaryFunction::Sinh, a); }
template <int N>
Jet<N> cosh(const Jet<N>& a) { return lift(ElementaryFunction::Cosh, a); }
template <int N>
Jet<N> exp(const Jet<N>& a) { return lift(ElementaryFunction::Exp, a); }
template <int N>
Jet<N> log(const Jet<N>& a) { return lift(ElementaryFunction::Log, a); }
template <int N>
Jet<N> sqrt(const Jet<N>& a) { return lift(ElementaryFunction::Sqrt, a); }
template <int N>
Jet<N> recip(const Jet<N>& a) { return lift(ElementaryFunction::Recip, a); }
template <int N>
Jet<N> pow(const Jet<N>& a, double p) { return lift(ElementaryFunction::Pow, a, p); }
template <int N>
Jet<N> tan(const Jet<N>& a) { return sin(a) * recip(cos(a)); }
template <int N>
Jet<N> tanh(const Jet<N>& a) { return sinh(a) * recip(cosh(a)); }

/// Composition F(p + d): `outer` is the expansion of F at p in M variables and
/// `displacement` holds jets with zero constant term (the deviations of the M
/// arguments from p). The result degree is min(outer, displacement) degree.
template <std::size_t M, int N>
Jet<N> compose(const Jet<static_cast<int>(M)>& outer, const std::array<Jet<N>, M>& displacement) {
  const int d = std::min(outer.degree(), displacement[0].degree());
  for (const auto& x : displacement) {
    if (x.degree() != displacement[0].degree())
      throw ContractViolation("composition displacements differ in degree");
    if (x.value() != 0.0) throw ContractViolation("composition displacement has a constant term");
  }
  // powers[k][e] = displacement[k]^e truncated to d.
  std::array<std::array<Jet<N>, 4>, M> powers;
  for (std::size_t k = 0; k < M; ++k) {
    const Jet<N> x = displacement[k].truncated(d);
    powers[k][0] = Jet<N>(1.0, d);
    for (int e = 1; e <= d; ++e) {
      const auto ue = static_cast<std::size_t>(e);
      powers[k][ue] = powers[k][ue - 1] * x;
    }
  }
  Jet<N> out(outer.value(), d);
  using Outer = Jet<static_cast<int>(M)>;
  for (int i = 1; i < Outer::coefficient_count(d); ++i) {
    const double c = outer.coeff(i);
    if (c == 0.0) continue;
    const auto& e = Outer::exponents(i);
    Jet<N> term = powers[0][static_cast<std::size_t>(e[0])];
    for (std::size_t k = 1; k < M; ++k) term = term * powers[k][static_cast<std::size_t>(e[k])];
    out += term * c;
  }
  return out;
}

}  // namespace assocfam
