#pragma once

#include <functional>
#include <string>
#include <vector>

#include "resdet/regularizations.hpp"
#include "resdet/report.hpp"
#include "resdet/resurgence.hpp"

namespace resdet {

// ---- circle: Poisson summation -------------------------------------------

struct PsfEvaluation {
  cplx partial;     // sum_{|n|<=N} rho/(n^2+rho^2)
  cplx tail;        // Euler-Maclaurin estimate of |n| > N
  double tail_bound = 0;
  cplx closed;      // pi / tanh(pi rho)
  double residual = 0;
};

// Throws PoleHit for rho within 1e-12 of i Z.
PsfEvaluation psf_identity(cplx rho, long N);
double psf_identity_residual(cplx rho, long N);
CheckRecord psf_check(cplx rho, long N, double tol);

// Stokes data and asymmetry part of t Theta_S1 (polynomial case, m0 = 2)
// and of Theta_S1(t - s0) (exp-deformed case).
StokesSum circle_stokes_a(int count);
AsymmetryPart circle_asymmetry_a();
StokesSum circle_stokes_b(double s0, int count);
AsymmetryPart circle_asymmetry_b(double s0);

// Polynomial case on the circle against the direct composite sum (m0 = 2).
CheckRecord circle_theorem_a_check(const std::shared_ptr<const Spectrum>& circle, cplx rho,
                                   double eps, double tol);
// Exp-deformed case on the circle against the direct sharp2 series.
CheckRecord circle_theorem_b_check(const std::shared_ptr<const Spectrum>& circle, double s0,
                                   cplx rho, double eps, double tol);

// ---- deformed Poisson summation and K_{s0} --------------------------------

// Largest usable eps is atan(2 pi / |s0|); throws AngleConstraint otherwise.
void check_deformed_angle(double s0, double eps);

// sinh s0 / (cosh t - cosh s0) with its poles +-s0 + 2 pi i k, |k| <= 6
Integrand k_integrand(double s0);

struct DeformedValue {
  cplx value;
  double error = 0;
};

// e^{i s0 rho} pi/tanh(pi rho) - 1/rho - i L^{pi-eps}(k_integrand)(-i rho) - pi e^{i s0 rho}
DeformedValue deformed_psf_rhs(cplx rho, double s0, double eps, double tol);
// sum_{n>=1} 2 rho e^{s0 n}/(n^2+rho^2) with a geometric tail bound
DeformedValue deformed_psf_lhs(cplx rho, double s0, double tol);
CheckRecord deformed_psf_check(cplx rho, double s0, double eps, double tol);

// |d/drho rhs(s0) - d/drho (pi coth(pi rho) - 1/rho)| by central differences
std::vector<double> deformed_psf_derivative_gaps(cplx rho, const std::vector<double>& s0s,
                                                 double eps, double tol);

inline constexpr double kSingularLatticeDistance = 1e-6;

// Holomorphic extension of K for eps < arg rho < pi + eps.
DeformedValue k_extension(cplx rho, double s0, double eps, double tol = 1e-12);
// L^{pi-eps}(k_integrand)(-i rho) for -pi + eps < arg rho < eps.
DeformedValue k_direct(cplx rho, double s0, double eps, double tol = 1e-12);

struct KResidue {
  cplx contour_integral;  // closed contour integral of K around i n
  cplx residue;           // contour_integral / (2 pi i)
  double expected_integral = 0;  // 2 pi (e^{-s0 n} - e^{s0 n})
};
KResidue k_residue(int n, double s0, double eps = 0.3, double radius = 1e-2, int K = 64);

// ---- deformed Poisson summation for test functions ------------------------

struct TestFunction {
  std::string name;
  std::function<cplx(cplx)> h;
  std::function<cplx(cplx)> fourier;  // (1/2 pi) int h(x) e^{i tau x} dx
  double eta = 0;          // holomorphic in |Im| < 2 eta
  double delta = 0;        // |h| = O(|x|^{-1-delta}) at -infinity
  double delta_prime = 0;  // |h| = O(e^{delta' |x|}) at +infinity

  // e^{-a x^2}, hat h(tau) = e^{-tau^2/(4a)} / (2 sqrt(pi a)); parameters
  // chosen to satisfy the hypotheses for this s0.
  static TestFunction gaussian(double a, double s0);
  TestFunction scaled(cplx c) const;
};

// Throws HypothesisViolation naming the failed bound.
void check_hypotheses(const TestFunction& h, double s0);

struct DeformedPsfReport {
  cplx lhs, rhs;
  double lhs_tail = 0, rhs_tail = 0;
  CheckRecord record;
};

// sum_{|n|<=N} h(n) e^{-s0 n} versus 2 pi sum_{|m|<=M} hat h(2 pi m + i s0)
DeformedPsfReport deformed_psf_theorem(const TestFunction& h, double s0, int M_terms,
                                       int N_terms, double tol = 1e-10);
// sum_n h(n) (classical Poisson summation, both sides must agree)
cplx classical_psf_lhs(const TestFunction& h, int N_terms);
cplx classical_psf_rhs(const TestFunction& h, int M_terms);

// ---- surfaces of higher genus ---------------------------------------------

struct SelbergContext {
  LengthSpectrum lengths;
  int k_max = 100000;
};

struct SelbergValue {
  cplx value;
  double tail_bound = 0;
  int windings = 0;
};

// sum_k sum_m mu_m k^2 tau_m^3 e^{-k tau_m rho} / (2 sinh(k tau_m / 2)), Re rho > 1/2
SelbergValue selberg_log_deriv3(const SelbergContext& ctx, cplx rho, double tol);
// log Z(s) = sum_m mu_m sum_{n>=0} log(1 - e^{-tau_m (s+n)})
cplx selberg_log_zeta(const SelbergContext& ctx, cplx s);
// third derivative of log Z(1/2 + rho): five-point differences, h = 1e-2,
// one Richardson step
cplx selberg_log_zeta_d3(const SelbergContext& ctx, cplx rho);
inline constexpr double kSelbergFdBudget = 1e-7;

StokesSum selberg_stokes_sum(const SelbergContext& ctx, int windings);
AsymmetryPart selberg_asymmetry(int genus);
// L^{eps}(t^2 Theta_S2)(rho)
QuadratureResult sphere_counterterm(cplx rho, double eps, double tol);

struct SurfaceReport {
  RhsValue theorem;
  SelbergValue series;
  QuadratureResult counterterm;
  CheckRecord record;
};

SurfaceReport surface_identity_check(const SelbergContext& ctx, cplx rho, double eps,
                                     double tol);
CheckRecord selberg_fd_check(const SelbergContext& ctx, cplx rho, double tol);

// ---- the two regularizations as s0 -> 0- ----------------------------------

struct LimitReport {
  std::vector<double> s0s;
  std::vector<double> gaps;
  bool strictly_decreasing = false;
  CheckRecord record;
};

// gap(s0) = |d^m/drho^m sharp2 composite(s0) - composite log-derivative (m+1)|.
// The record passes when the table decreases strictly and the last gap is
// below `ratio` times the first.
LimitReport regularization_limit_check(const std::shared_ptr<const Spectrum>& sp, int m,
                                       cplx rho, const std::vector<double>& s0s,
                                       double ratio = 0.05, double tol = 1e-12);

// |d^m/drho^m [2 rho (e^{s0 rho_1} - 1)/(rho^2 + rho_1^2)]|
double single_eigenvalue_gap(double lambda1, int m, cplx rho, double s0);

}  // namespace resdet
