#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace conespectra {

/// Real polynomial, coefficients in ascending degree order (index k holds the
/// coefficient of t^k). Trailing exact zeros are trimmed, so the last stored
/// coefficient is nonzero unless the polynomial is zero, which is stored as {0}.
class Polynomial {
 public:
  Polynomial() : c_{0.0} {}
  Polynomial(std::initializer_list<double> coeffs);
  explicit Polynomial(std::vector<double> coeffs);

  static Polynomial monomial(std::size_t degree, double coeff = 1.0);
  /// Monic polynomial with the given real roots.
  static Polynomial from_roots(std::span<const double> roots);

  std::size_t degree() const noexcept { return c_.size() - 1; }
  bool is_zero() const noexcept { return c_.size() == 1 && c_[0] == 0.0; }
  const std::vector<double>& coefficients() const noexcept { return c_; }
  double operator[](std::size_t k) const noexcept { return k < c_.size() ? c_[k] : 0.0; }
  double leading() const noexcept { return c_.back(); }

  double operator()(double t) const;
  long double eval_long(long double t) const;

  Polynomial derivative() const;
  Polynomial monic() const;
  Polynomial operator*(const Polynomial& rhs) const;
  Polynomial operator+(const Polynomial& rhs) const;
  Polynomial operator-(const Polynomial& rhs) const;
  Polynomial operator*(double s) const;
  Polynomial pow(unsigned k) const;
  /// p(t + s), by repeated synthetic division.
  Polynomial taylor_shift(double s) const;

  /// Euclidean division; throws ZeroPolynomial for a zero divisor.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& divisor) const;
  Polynomial quotient(const Polynomial& divisor) const { return divmod(divisor).first; }
  Polynomial remainder(const Polynomial& divisor) const { return divmod(divisor).second; }

  double norm2() const;
  double norm_inf() const;

  /// Drop leading coefficients with |c| <= tol*norm_inf.
  Polynomial trimmed(double rel_tol) const;

  /// "t^2 + 1.000000t + 1.000000" style rendering with `digits` significant digits.
  std::string to_string(int digits = 12) const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim();
  std::vector<double> c_;
};

}  // namespace conespectra
