#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>

namespace resdet {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// Neumaier-compensated complex accumulator in long double.
class CompensatedSum {
 public:
  void add(cplx x) {
    add_part(re_, cre_, x.real());
    add_part(im_, cim_, x.imag());
  }
  CompensatedSum& operator+=(cplx x) {
    add(x);
    return *this;
  }
  cplx value() const {
    return {static_cast<double>(re_ + cre_), static_cast<double>(im_ + cim_)};
  }

 private:
  static void add_part(long double& s, long double& c, long double x) {
    long double t = s + x;
    if (std::fabs(s) >= std::fabs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  long double re_ = 0, im_ = 0, cre_ = 0, cim_ = 0;
};

// e^z - 1 without cancellation near z = 0.
cplx expm1(cplx z);
// log(1 + z) without cancellation near z = 0.
cplx log1p(cplx z);
// Upper incomplete gamma Gamma(a, x) for a > 0, x >= 0.
double upper_gamma(double a, double x);

// Truncated Taylor jet: c[k] is the k-th Taylor coefficient at the
// expansion point. Used to get exact derivatives of summands for the
// Euler-Maclaurin tail.
template <int K>
struct Jet {
  std::array<cplx, K + 1> c{};

  Jet() = default;
  Jet(cplx v) { c[0] = v; }
  Jet(double v) { c[0] = v; }
  static Jet variable(double x) {
    Jet j(x);
    if constexpr (K >= 1) j.c[1] = 1.0;
    return j;
  }
  // k-th derivative at the expansion point.
  cplx derivative(int k) const {
    double f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return c[k] * f;
  }

  Jet& operator+=(const Jet& o) {
    for (int i = 0; i <= K; ++i) c[i] += o.c[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int i = 0; i <= K; ++i) c[i] -= o.c[i];
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(const Jet& a) {
    Jet r;
    for (int i = 0; i <= K; ++i) r.c[i] = -a.c[i];
    return r;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i <= K; ++i)
      for (int j = 0; i + j <= K; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k <= K; ++k) {
      cplx s = a.c[k];
      for (int j = 1; j <= k; ++j) s -= b.c[j] * r.c[k - j];
      r.c[k] = s / b.c[0];
    }
    return r;
  }
  friend Jet exp(const Jet& a) {
    Jet r;
    r.c[0] = std::exp(a.c[0]);
    for (int k = 1; k <= K; ++k) {
      cplx s = 0;
      for (int j = 1; j <= k; ++j) s += double(j) * a.c[j] * r.c[k - j];
      r.c[k] = s / double(k);
    }
    return r;
  }
  friend Jet sqrt(const Jet& a) {
    Jet r;
    r.c[0] = std::sqrt(a.c[0]);
    for (int k = 1; k <= K; ++k) {
      cplx s = a.c[k];
      for (int j = 1; j < k; ++j) s -= r.c[j] * r.c[k - j];
      r.c[k] = s / (2.0 * r.c[0]);
    }
    return r;
  }
};

template <class T>
T ipow(const T& x, int n) {
  if (n < 0) return T(1.0) / ipow(x, -n);
  T r(1.0), b = x;
  while (n) {
    if (n & 1) r = r * b;
    b = b * b;
    n >>= 1;
  }
  return r;
}

// exp for both cplx and Jet arguments inside generic summands.
inline cplx exp(const cplx& z) { return std::exp(z); }
inline cplx sqrt(const cplx& z) { return std::sqrt(z); }

struct IntegralEstimate {
  cplx value;
  double error = 0;
  int evaluations = 0;
  int panels = 0;
  bool converged = true;
};

using RealToComplex = std::function<cplx(double)>;

// Tanh-sinh rule on [a, b]. f receives the abscissa; the left endpoint a
// is resolved to full relative precision so t^alpha singularities at a
// (alpha > -1) are integrated without special handling.
IntegralEstimate tanh_sinh(const RealToComplex& f, double a, double b,
                           double tol, int max_level = 8);

// Globally adaptive 7/15-point Gauss-Kronrod on [a, b], starting from
// `initial_panels` equal panels and bisecting the worst one.
IntegralEstimate gauss_kronrod(const RealToComplex& f, double a, double b,
                               double tol, int initial_panels = 1,
                               int max_panels = 4000);

struct TailSum {
  cplx value;
  double bound = 0;
};

// Sum_{j>=J} g(j) by Euler-Maclaurin with three Bernoulli corrections.
// g must accept Jet<5>. The integral over [J, inf) is taken from
// `integral` when given, else computed by tanh-sinh after x = J/u.
// bound is the usual remainder estimate 2 zeta(6)/(2 pi)^6 |g^(5)(J)|
// plus the quadrature error.
template <class G>
TailSum euler_maclaurin_tail(const G& g, double J,
                             std::optional<cplx> integral = std::nullopt) {
  using J5 = Jet<5>;
  J5 v = g(J5::variable(J));
  IntegralEstimate in;
  if (integral) {
    in.value = *integral;
  } else {
    in = tanh_sinh(
        [&](double u) -> cplx {
          if (u <= 0) return 0.0;
          double x = J / u;
          if (!std::isfinite(x)) return 0.0;
          return g(cplx(x)) * (J / (u * u));
        },
        0.0, 1.0, 1e-17 + 1e-15 * std::abs(v.c[0]) * J, 9);
  }
  constexpr double b2 = 1.0 / 6, b4 = -1.0 / 30, b6 = 1.0 / 42;
  cplx s = in.value + 0.5 * v.c[0] - b2 / 2 * v.derivative(1) -
           b4 / 24 * v.derivative(3) - b6 / 720 * v.derivative(5);
  double zeta6 = std::pow(pi, 6) / 945;
  double rem = 2 * zeta6 / std::pow(2 * pi, 6) * std::abs(v.derivative(5));
  return {s, rem + in.error};
}

}  // namespace resdet
