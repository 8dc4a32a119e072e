#pragma once

#include <memory>

#include "resdet/spectral_sum.hpp"
#include "resdet/spectrum.hpp"

namespace resdet {

enum class ThetaKind { spectral_rho, spectral_lambda, closed_s1, closed_s2 };

// Theta series sum_n exp(-w_n t) with w_n = rho_n or lambda_n, or one of the
// two closed forms, optionally shifted to t -> Theta(t - s0).
class ThetaEvaluator {
 public:
  static ThetaEvaluator spectral_rho(std::shared_ptr<const Spectrum> sp);
  static ThetaEvaluator spectral_lambda(std::shared_ptr<const Spectrum> sp);
  static ThetaEvaluator closed_s1();
  static ThetaEvaluator closed_s2();
  static ThetaEvaluator shifted(const ThetaEvaluator& base, double s0);

  ThetaKind kind() const { return kind_; }
  bool closed() const { return kind_ == ThetaKind::closed_s1 || kind_ == ThetaKind::closed_s2; }
  bool is_shifted() const { return s0_ != 0; }
  double s0() const { return s0_; }
  const Spectrum* spectrum() const { return sp_.get(); }
  std::shared_ptr<const Spectrum> spectrum_ptr() const { return sp_; }
  // manifold dimension: 1 for the circle, 2 for the sphere
  int dimension() const;

 private:
  ThetaEvaluator(ThetaKind k, std::shared_ptr<const Spectrum> sp, double s0)
      : kind_(k), sp_(std::move(sp)), s0_(s0) {}
  ThetaKind kind_;
  std::shared_ptr<const Spectrum> sp_;
  double s0_ = 0;
};

struct ThetaValue {
  cplx value;
  TailBound tail;
};

// 2/(e^t - 1)
cplx theta_s1(cplx t);
// cosh(t/2) / (2 sinh^2(t/2))
cplx theta_s2(cplx t);
// t^k Theta(t) for the closed forms, accurate down to t -> 0
cplx t_pow_theta_closed(ThetaKind kind, cplx t, int k);
// distance from t to the pole lattice 2 pi i Z of the closed forms
double closed_pole_distance(cplx t);

ThetaValue theta_eval(const ThetaEvaluator& ev, cplx t, double tol);
// Spectral kinds only: uses the first N stored eigenvalues and certifies
// the rest.
ThetaValue theta_eval_truncated(const ThetaEvaluator& ev, cplx t, long N);

inline constexpr int kMaxThetaOrder = 30;

// d^i/ds^i Theta(s). Spectral kinds sum (-w_n)^i e^{-w_n s} with a
// certified tail; `rel_tol` bounds tail/|value|. Closed kinds use a Cauchy
// integral on a circle inside the pole-free disc.
ThetaValue theta_derivative_full(const ThetaEvaluator& ev, int order, double s,
                                 double rel_tol = 1e-13);
double theta_derivative(const ThetaEvaluator& ev, int order, double s,
                        double rel_tol = 1e-13);

}  // namespace resdet
