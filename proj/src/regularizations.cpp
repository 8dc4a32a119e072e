#include "resdet/regularizations.hpp"

#include <limits>

#include "resdet/errors.hpp"

namespace resdet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double factorial(int k) { return std::tgamma(k + 1.0); }

// Throws PoleHit when z_eff + a^p vanishes (relative to max(1, a^p)) for a
// root a of the spectrum, stored or from its law.
void guard_poles(const Spectrum& sp, cplx z_eff, int p) {
  auto hit = [&](double a) {
    double ap = std::pow(a, p);
    return std::abs(z_eff + ap) < kPoleHitThreshold * std::max(1.0, ap);
  };
  for (double a : sp.roots())
    if (hit(a)) throw PoleHit("pole: argument hits a negated eigenvalue (root " + std::to_string(a) + ")");
  if (sp.law()) {
    cplx a_star = std::pow(-z_eff, 1.0 / p);
    const RootLaw& law = *sp.law();
    double j0 = std::round((a_star.real() - law.offset) / law.slope);
    for (double j = j0 - 2; j <= j0 + 2; ++j)
      if (j >= law.first_level && hit(law.root(j)))
        throw PoleHit("pole: argument hits a negated eigenvalue (root " +
                      std::to_string(law.root(j)) + ")");
  }
}

// sum_{n>S} n^{-q} <= S^{1-q}/(q-1)
double power_tail(double S, double q) {
  if (!(q > 1) || S <= 0) return kInf;
  return std::pow(S, 1 - q) / (q - 1);
}

struct LambdaLogTerm {
  cplx z;
  int m;
  double coef;  // (-1)^{m-1}(m-1)!
  template <class T>
  T term(const T& a) const {
    return coef * ipow(T(z) + a * a, -m);
  }
  double weyl_tail(double b, double S, int d) const {
    double c = b * b, lam = c * std::pow(S, 2.0 / d);
    if (!(lam >= 2 * std::abs(z))) return kInf;
    return std::abs(coef) * std::pow(2 / c, m) * power_tail(S, 2.0 * m / d);
  }
};

struct RhoLogTerm {
  cplx z;
  int m;
  double coef;
  template <class T>
  T term(const T& a) const {
    return coef * ipow(T(z) + a, -m);
  }
  double weyl_tail(double b, double S, int d) const {
    if (!(b * std::pow(S, 1.0 / d) >= 2 * std::abs(z))) return kInf;
    return std::abs(coef) * std::pow(2 / b, m) * power_tail(S, double(m) / d);
  }
};

// d^k/drho^k [2 rho/(rho^2 + a^2)] = (-1)^k k! [(rho+ia)^{-k-1} + (rho-ia)^{-k-1}]
// times an optional weight e^{s0 w(a)}.
struct CompositeTerm {
  cplx rho;
  int k;
  double s0 = 0;         // 0: no weight
  bool weight_lambda = false;
  template <class T>
  T term(const T& a) const {
    double c = (k % 2 ? -1.0 : 1.0) * factorial(k);
    T v = c * (ipow(T(rho) + I * a, -k - 1) + ipow(T(rho) - I * a, -k - 1));
    if (s0 != 0) v = v * exp(s0 * (weight_lambda ? a * a : a));
    return v;
  }
  double weyl_tail(double b, double S, int d) const {
    double amin = b * std::pow(S, 1.0 / d);
    if (!(amin >= 2 * std::abs(rho))) return kInf;
    double pref = 2 * factorial(k) * std::pow(2 / b, k + 1);
    if (s0 == 0) return pref * power_tail(S, double(k + 1) / d);
    double bound = pref * std::pow(S, -double(k + 1) / d);
    return bound * weight_tail(b, S, d);
  }
  // sum_{n>S} e^{s0 w_n}
  double weight_tail(double b, double S, int d) const {
    double q = -s0;
    if (weight_lambda) {
      double c = b * b;
      return 0.5 * d * std::pow(q * c, -0.5 * d) * upper_gamma(0.5 * d, q * c * std::pow(S, 2.0 / d));
    }
    return d * std::pow(q * b, -double(d)) * upper_gamma(d, q * b * std::pow(S, 1.0 / d));
  }
};

// d^k/dz^k of the exp-deformed summand: (-1)^k k! e^{s0 w}/(z + v)^{k+1}
struct ExpTerm {
  cplx z;
  double s0;
  ExpVariant v;
  int k = 0;
  template <class T>
  T term(const T& a) const {
    T lam = a * a;
    double c = (k % 2 ? -1.0 : 1.0) * factorial(k);
    switch (v) {
      case ExpVariant::sharp1_lambda: return c * exp(s0 * lam) * ipow(T(z) + lam, -k - 1);
      case ExpVariant::sharp1_rho: return c * exp(s0 * a) * ipow(T(z) + a, -k - 1);
      default: return c * exp(s0 * a) * ipow(T(z) + lam, -k - 1);
    }
  }
  double weyl_tail(double b, double S, int d) const {
    double amin = b * std::pow(S, 1.0 / d), q = -s0;
    double fk = factorial(k);
    if (v == ExpVariant::sharp1_rho) {
      if (!(amin >= 2 * std::abs(z))) return kInf;
      return fk * std::pow(2 / amin, k + 1) * d * std::pow(q * b, -double(d)) *
             upper_gamma(d, q * amin);
    }
    double lmin = amin * amin;
    if (!(lmin >= 2 * std::abs(z))) return kInf;
    double pref = fk * std::pow(2 / lmin, k + 1);
    if (v == ExpVariant::sharp1_lambda) {
      double c = b * b;
      return pref * 0.5 * d * std::pow(q * c, -0.5 * d) * upper_gamma(0.5 * d, q * lmin);
    }
    return pref * d * std::pow(q * b, -double(d)) * upper_gamma(d, q * amin);
  }
};

RegResult finish(const SpectralSumResult& r, double tol, const char* what) {
  if (!(r.tail.bound <= tol))
    throw InsufficientSpectrum(std::string(what) + ": tail bound " +
                                   std::to_string(r.tail.bound) + " exceeds tolerance",
                               r.tail.bound, tol);
  return {r.value, r.tail};
}

void check_request(const ExpDeformRequest& req) {
  if (!req.spectrum) throw ValidationError("spectrum", "request needs a spectrum");
  if (!(req.s0 < 0)) throw ValidationError("s0", "s0 must be negative");
}

}  // namespace

RegResult log_deriv_det(const LogDerivRequest& req, cplx z, double tol) {
  if (!req.spectrum) throw ValidationError("spectrum", "request needs a spectrum");
  const Spectrum& sp = *req.spectrum;
  int d = sp.dimension();
  if (req.m < 1) throw ValidationError("m", "derivative order must be positive");
  if (req.variable == Variable::lambda) {
    if (req.composite) throw ValidationError("composite", "composite form is a rho-variable form");
    if (req.m < d / 2 + 1)
      throw ValidationError("m", "lambda variable needs m >= floor(d/2)+1");
  } else if (req.m < d + 1) {
    throw ValidationError("m", "rho variable needs m >= d+1");
  }
  double coef = (req.m % 2 ? 1.0 : -1.0) * factorial(req.m - 1);
  if (req.composite) {
    guard_poles(sp, z * z, 2);
    return finish(spectral_sum(sp, CompositeTerm{z, req.m - 1}), tol, "log_deriv_det");
  }
  if (req.variable == Variable::lambda) {
    guard_poles(sp, z, 2);
    return finish(spectral_sum(sp, LambdaLogTerm{z, req.m, coef}), tol, "log_deriv_det");
  }
  guard_poles(sp, z, 1);
  return finish(spectral_sum(sp, RhoLogTerm{z, req.m, coef}), tol, "log_deriv_det");
}

RegResult exp_deformed_det(const ExpDeformRequest& req, cplx z, double tol) {
  check_request(req);
  const Spectrum& sp = *req.spectrum;
  guard_poles(sp, z, req.variant == ExpVariant::sharp1_rho ? 1 : 2);
  return finish(spectral_sum(sp, ExpTerm{z, req.s0, req.variant}), tol, "exp_deformed_det");
}

RegResult exp_deformed_det_derivative(const ExpDeformRequest& req, int order, cplx z,
                                      double tol) {
  check_request(req);
  if (order < 0 || order > kMaxDeformedOrder)
    throw ValidationError("order", "derivative order must lie in [0, 12]");
  const Spectrum& sp = *req.spectrum;
  guard_poles(sp, z, req.variant == ExpVariant::sharp1_rho ? 1 : 2);
  return finish(spectral_sum(sp, ExpTerm{z, req.s0, req.variant, order}), tol,
                "exp_deformed_det_derivative");
}

RegResult derivative_of_exp_deformed(const ExpDeformRequest& req, int order, cplx rho,
                                     double tol) {
  check_request(req);
  if (order < 0 || order > kMaxDeformedOrder)
    throw ValidationError("order", "derivative order must lie in [0, 12]");
  const Spectrum& sp = *req.spectrum;
  guard_poles(sp, rho * rho, 2);
  CompositeTerm t{rho, order, req.s0, req.variant == ExpVariant::sharp1_lambda};
  return finish(spectral_sum(sp, t), tol, "derivative_of_exp_deformed");
}

}  // namespace resdet
