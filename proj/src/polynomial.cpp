#include "conespectra/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "conespectra/error.hpp"

namespace conespectra {

Polynomial::Polynomial(std::initializer_list<double> coeffs) : c_(coeffs) { trim(); }

Polynomial::Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

void Polynomial::trim() {
  while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
  if (c_.empty()) c_.push_back(0.0);
}

Polynomial Polynomial::monomial(std::size_t degree, double coeff) {
  std::vector<double> c(degree + 1, 0.0);
  c[degree] = coeff;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::from_roots(std::span<const double> roots) {
  Polynomial p{1.0};
  for (double r : roots) p = p * Polynomial{-r, 1.0};
  return p;
}

Polynomial Polynomial::taylor_shift(double s) const {
  std::vector<double> a = c_;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t k = n - 1; k-- > i;) a[k] += s * a[k + 1];
  return Polynomial(std::move(a));
}

double Polynomial::operator()(double t) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

long double Polynomial::eval_long(long double t) const {
  long double acc = 0.0L;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + static_cast<long double>(*it);
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() == 1) return Polynomial{0.0};
  std::vector<double> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::monic() const {
  if (is_zero()) raise(ErrorCode::ZeroPolynomial, "cannot normalize the zero polynomial");
  return *this * (1.0 / leading());
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
  std::vector<double> r(c_.size() + rhs.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < rhs.c_.size(); ++j) r[i + j] += c_[i] * rhs.c_[j];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
  std::vector<double> r(std::max(c_.size(), rhs.c_.size()), 0.0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = (*this)[i] + rhs[i];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const { return *this + rhs * -1.0; }

Polynomial Polynomial::operator*(double s) const {
  std::vector<double> r = c_;
  for (double& x : r) x *= s;
  return Polynomial(std::move(r));
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial r{1.0};
  for (unsigned i = 0; i < k; ++i) r = r * *this;
  return r;
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& divisor) const {
  if (divisor.is_zero()) raise(ErrorCode::ZeroPolynomial, "division by the zero polynomial");
  const std::size_t n = degree();
  const std::size_t m = divisor.degree();
  if (n < m) return {Polynomial{0.0}, *this};
  std::vector<double> rem = c_;
  std::vector<double> q(n - m + 1, 0.0);
  const double lead = divisor.leading();
  for (std::size_t k = n - m + 1; k-- > 0;) {
    const double f = rem[k + m] / lead;
    q[k] = f;
    for (std::size_t j = 0; j <= m; ++j) rem[k + j] -= f * divisor.c_[j];
    rem[k + m] = 0.0;
  }
  rem.resize(m == 0 ? 1 : m);
  return {Polynomial(std::move(q)), Polynomial(std::move(rem))};
}

double Polynomial::norm2() const {
  double s = 0.0;
  for (double x : c_) s += x * x;
  return std::sqrt(s);
}

double Polynomial::norm_inf() const {
  double s = 0.0;
  for (double x : c_) s = std::max(s, std::abs(x));
  return s;
}

Polynomial Polynomial::trimmed(double rel_tol) const {
  const double bound = rel_tol * norm_inf();
  std::vector<double> c = c_;
  while (c.size() > 1 && std::abs(c.back()) <= bound) c.pop_back();
  return Polynomial(std::move(c));
}

namespace {

std::string format_number(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

}  // namespace

std::string Polynomial::to_string(int digits) const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t k = c_.size(); k-- > 0;) {
    const double a = c_[k];
    if (a == 0.0) continue;
    const double mag = std::abs(a);
    if (first) {
      if (a < 0) out << "-";
    } else {
      out << (a < 0 ? " - " : " + ");
    }
    const bool unit = (mag == 1.0 && k > 0);
    if (!unit) out << format_number(mag, digits);
    if (k >= 1) out << "t";
    if (k >= 2) out << "^" << k;
    first = false;
  }
  return out.str();
}

}  // namespace conespectra
