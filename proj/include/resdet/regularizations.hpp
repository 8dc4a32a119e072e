#pragma once

#include <memory>

#include "resdet/spectral_sum.hpp"
#include "resdet/spectrum.hpp"

namespace resdet {

enum class Variable { lambda, rho };

struct LogDerivRequest {
  std::shared_ptr<const Spectrum> spectrum;
  int m = 1;
  Variable variable = Variable::lambda;
  // variable=rho only: sum_n d^{m-1}/drho^{m-1} [2 rho / (rho^2 + rho_n^2)]
  bool composite = false;
};

enum class ExpVariant { sharp1_lambda, sharp1_rho, sharp2 };

struct ExpDeformRequest {
  std::shared_ptr<const Spectrum> spectrum;
  double s0 = -1;
  ExpVariant variant = ExpVariant::sharp2;
};

struct RegResult {
  cplx value;
  TailBound tail;
};

inline constexpr double kPoleHitThreshold = 1e-12;
inline constexpr int kMaxDeformedOrder = 12;

// variable=lambda: sum (-1)^{m-1}(m-1)!/(z+lambda_n)^m, m >= floor(d/2)+1
// variable=rho:    sum (-1)^{m-1}(m-1)!/(z+rho_n)^m,    m >= d+1
// composite:       z plays the role of rho, m = m0 >= d+1
RegResult log_deriv_det(const LogDerivRequest& req, cplx z, double tol);

// sharp1_lambda: sum e^{s0 lambda_n}/(z+lambda_n)
// sharp1_rho:    sum e^{s0 rho_n}/(z+rho_n)
// sharp2:        sum e^{s0 rho_n}/(z+lambda_n)
RegResult exp_deformed_det(const ExpDeformRequest& req, cplx z, double tol);

// d^k/dz^k of exp_deformed_det
RegResult exp_deformed_det_derivative(const ExpDeformRequest& req, int order, cplx z,
                                      double tol);

// sum_n d^k/drho^k [2 rho e^{s0 w_n}/(rho^2 + lambda_n)], w_n = lambda_n for
// sharp1_lambda and rho_n otherwise. k = 0 is 2 rho exp_deformed_det(rho^2)
// for sharp2.
RegResult derivative_of_exp_deformed(const ExpDeformRequest& req, int order, cplx rho,
                                     double tol);

}  // namespace resdet
