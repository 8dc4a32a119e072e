#include "resdet/theta.hpp"

#include <limits>

#include "resdet/errors.hpp"

namespace resdet {

const char* to_string(TailBound::Method m) {
  switch (m) {
    case TailBound::Method::exact: return "exact";
    case TailBound::Method::geometric_from_last_term: return "geometric_from_last_term";
    case TailBound::Method::weyl_integral: return "weyl_integral";
    case TailBound::Method::euler_maclaurin: return "euler_maclaurin";
  }
  return "?";
}

ThetaEvaluator ThetaEvaluator::spectral_rho(std::shared_ptr<const Spectrum> sp) {
  if (!sp) throw ValidationError("spectrum", "spectral theta needs a spectrum");
  return {ThetaKind::spectral_rho, std::move(sp), 0};
}
ThetaEvaluator ThetaEvaluator::spectral_lambda(std::shared_ptr<const Spectrum> sp) {
  if (!sp) throw ValidationError("spectrum", "spectral theta needs a spectrum");
  return {ThetaKind::spectral_lambda, std::move(sp), 0};
}
ThetaEvaluator ThetaEvaluator::closed_s1() { return {ThetaKind::closed_s1, nullptr, 0}; }
ThetaEvaluator ThetaEvaluator::closed_s2() { return {ThetaKind::closed_s2, nullptr, 0}; }
ThetaEvaluator ThetaEvaluator::shifted(const ThetaEvaluator& base, double s0) {
  if (!(s0 < 0)) throw ValidationError("s0", "shift s0 must be negative");
  return {base.kind_, base.sp_, base.s0_ + s0};
}

int ThetaEvaluator::dimension() const {
  switch (kind_) {
    case ThetaKind::closed_s1: return 1;
    case ThetaKind::closed_s2: return 2;
    default: return sp_->dimension();
  }
}

cplx theta_s1(cplx t) { return 2.0 / expm1(t); }

cplx theta_s2(cplx t) {
  cplx sh = std::sinh(0.5 * t);
  return std::cosh(0.5 * t) / (2.0 * sh * sh);
}

namespace {

// w / sinh(w), exact limit at 0
cplx w_over_sinh(cplx w) {
  if (std::abs(w) < 1e-4) return 1.0 - w * w / 6.0;
  return w / std::sinh(w);
}

// t / (e^t - 1)
cplx t_over_expm1(cplx t) {
  if (std::abs(t) < 1e-8) return 1.0 - 0.5 * t;
  return t / expm1(t);
}

}  // namespace

cplx t_pow_theta_closed(ThetaKind kind, cplx t, int k) {
  if (kind == ThetaKind::closed_s1) {
    if (k >= 1) return 2.0 * t_over_expm1(t) * ipow(t, k - 1);
    return theta_s1(t);
  }
  if (kind == ThetaKind::closed_s2) {
    if (k >= 2) {
      cplx r = w_over_sinh(0.5 * t);
      return 2.0 * std::cosh(0.5 * t) * r * r * ipow(t, k - 2);
    }
    return ipow(t, k) * theta_s2(t);
  }
  throw DomainError("t_pow_theta_closed: not a closed kind");
}

double closed_pole_distance(cplx t) {
  double k = std::round(t.imag() / (2 * pi));
  return std::abs(t - cplx(0, 2 * pi * k));
}

namespace {

struct RhoTerm {
  cplx t;
  int i;
  template <class T>
  T term(const T& a) const {
    return ipow(-a, i) * exp(-a * t);
  }
  double weyl_tail(double b, double S, int d) const {
    double x = t.real();
    double u = b * std::pow(S, 1.0 / d) * x;
    if (!(u > i)) return std::numeric_limits<double>::infinity();
    return d / (std::pow(b, d) * std::pow(x, i + d)) * upper_gamma(i + d, u);
  }
};

struct LambdaTerm {
  cplx t;
  int i;
  template <class T>
  T term(const T& a) const {
    T l = a * a;
    return ipow(-l, i) * exp(-l * t);
  }
  double weyl_tail(double b, double S, int d) const {
    double x = t.real(), c = b * b;
    double u = c * std::pow(S, 2.0 / d) * x;
    if (!(u > i)) return std::numeric_limits<double>::infinity();
    double h = 0.5 * d;
    return h / (std::pow(c, h) * std::pow(x, i + h)) * upper_gamma(i + h, u);
  }
};

ThetaValue spectral(const ThetaEvaluator& ev, cplx t, int order, long use_first) {
  const Spectrum& sp = *ev.spectrum();
  SpectralSumResult r =
      ev.kind() == ThetaKind::spectral_rho
          ? spectral_sum(sp, RhoTerm{t, order}, use_first)
          : spectral_sum(sp, LambdaTerm{t, order}, use_first);
  return {r.value, r.tail};
}

cplx closed_value(ThetaKind kind, cplx t) {
  return kind == ThetaKind::closed_s1 ? theta_s1(t) : theta_s2(t);
}

void check_domain(const ThetaEvaluator& ev, cplx t) {
  cplx u = t - ev.s0();
  if (ev.closed()) {
    if (closed_pole_distance(u) < 1e-12)
      throw DomainError("theta: argument on the pole lattice of the closed form");
    return;
  }
  if (!(u.real() > 0))
    throw DomainError("theta: Re(t) must exceed " + std::to_string(ev.s0()));
}

}  // namespace

ThetaValue theta_eval(const ThetaEvaluator& ev, cplx t, double tol) {
  if (!(tol > 0)) throw DomainError("theta: tol must be positive");
  check_domain(ev, t);
  cplx u = t - ev.s0();
  if (ev.closed()) return {closed_value(ev.kind(), u), {0, 0, TailBound::Method::exact}};
  ThetaValue v = spectral(ev, u, 0, -1);
  if (!(v.tail.bound <= tol))
    throw InsufficientSpectrum("theta: tail bound " + std::to_string(v.tail.bound) +
                                   " exceeds tolerance",
                               v.tail.bound, tol);
  return v;
}

ThetaValue theta_eval_truncated(const ThetaEvaluator& ev, cplx t, long N) {
  if (ev.closed()) throw DomainError("theta: truncation needs a spectral kind");
  check_domain(ev, t);
  return spectral(ev, t - ev.s0(), 0, N);
}

ThetaValue theta_derivative_full(const ThetaEvaluator& ev, int order, double s,
                                 double rel_tol) {
  if (order < 0 || order > kMaxThetaOrder)
    throw DomainError("theta_derivative: order outside [0, " +
                      std::to_string(kMaxThetaOrder) + "]");
  cplx u = cplx(s) - ev.s0();
  if (!(u.real() > 0)) throw DomainError("theta_derivative: s outside the domain");
  if (ev.closed()) {
    // Cauchy integral on |z - u| = r, r = 3/4 of the distance to the nearest
    // pole; the trapezoid error is O(0.75^K).
    double r = 0.75 * closed_pole_distance(u);
    const int K = 128;
    CompensatedSum acc;
    for (int k = 0; k < K; ++k) {
      cplx e = std::polar(1.0, 2 * pi * k / K);
      acc += closed_value(ev.kind(), u + r * e) * std::pow(e, -order);
    }
    double fact = std::tgamma(order + 1.0);
    return {acc.value() * (fact / (K * std::pow(r, order))),
            {0, 0, TailBound::Method::exact}};
  }
  ThetaValue v = spectral(ev, u, order, -1);
  if (!(v.tail.bound <= rel_tol * std::max(1.0, std::abs(v.value))))
    throw InsufficientSpectrum("theta_derivative: tail bound " +
                                   std::to_string(v.tail.bound) + " too large",
                               v.tail.bound, rel_tol);
  return v;
}

double theta_derivative(const ThetaEvaluator& ev, int order, double s, double rel_tol) {
  return theta_derivative_full(ev, order, s, rel_tol).value.real();
}

}  // namespace resdet
