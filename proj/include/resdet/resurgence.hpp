#pragma once

#include <functional>
#include <string>
#include <vector>

#include "resdet/laplace.hpp"
#include "resdet/report.hpp"
#include "resdet/theta.hpp"

namespace resdet {

enum class SingularityKind { simple_pole, simple_singularity };

// Singularity at omega reached by circumventing earlier ones on the left.
// The alien derivative is delta_coeff * delta + germ, with
// delta_coeff = -2 pi i * residue for a simple pole.
struct SingularityDatum {
  cplx omega;
  SingularityKind kind = SingularityKind::simple_pole;
  cplx residue = 0;
  cplx delta_coeff = 0;
  std::function<cplx(cplx)> germ;  // optional, transformed along theta+
};

SingularityDatum alien_simple_pole(cplx residue, cplx omega);
SingularityDatum alien_simple_singularity(cplx omega, cplx delta_coeff,
                                          std::function<cplx(cplx)> germ = {});

// Laplace transform of c * delta along any direction.
inline cplx laplace_delta(cplx c, double /*theta*/) { return c; }

struct StokesSum {
  std::vector<SingularityDatum> singularities;  // Im(omega) nondecreasing
  double theta_plus = 0;

  void validate() const;
};

struct StokesValue {
  cplx value;
  int terms = 0;          // singularities summed
  double tail_estimate = 0;
  double quad_error = 0;  // from germ transforms
  bool converged = true;
};

// sum_k e^{-omega_k rho} (delta_k + L^{theta+}(germ_k)(rho)), stopping at the
// first k whose term bound is below tol/10; the remainder is estimated from
// the ratio of the last two bounds.
StokesValue evaluate_stokes(const StokesSum& s, cplx rho, double tol,
                            const LaplaceOptions& opt = {});

std::string to_json_string(const StokesSum& s);
StokesSum stokes_from_json(const std::string& text, double theta_plus);

struct StokesReport {
  QuadratureResult minus, plus;
  StokesValue stokes;
  CheckRecord record;
};

// L^{theta-} phi(rho) - L^{theta+} phi(rho) versus the Stokes sum.
// Throws MissingSingularity when the residual exceeds 10x the combined error.
StokesReport stokes_difference(const Integrand& phi, const RayDirection& plus,
                               const RayDirection& minus, const StokesSum& sing, cplx rho,
                               double tol, const LaplaceOptions& opt = {});

// f(t) = phi(t e^{-i pi}) + phi(t) with its ray. `weighted`, when set,
// evaluates t^{m0-1} f(t) (polynomial case) in a numerically stable form.
struct AsymmetryPart {
  Integrand f;
  std::function<cplx(cplx)> weighted;
  RayDirection direction;
};

struct RhsValue {
  cplx value;
  double error = 0;
  StokesValue stokes;
  QuadratureResult asymmetry;
};

// i^{m0} sum_k e^{-tau_k rho} L(Delta_{i tau_k}(t^{m0-1} Theta))(-i rho)
//   - i^{m0} L^{pi/2+eps}(t^{m0-1} f)(-i rho)
RhsValue theorem_a_rhs(const ThetaEvaluator& ev, int m0, const StokesSum& sing,
                       const AsymmetryPart& asym, double eps, cplx rho, double tol,
                       const LaplaceOptions& opt = {});

// i sum_k e^{i(s0 + i tau_k) rho} L(Delta(Theta(t-s0)))(-i rho)
//   - i L^{pi-eps}(f_{s0})(-i rho)
RhsValue theorem_b_rhs(const ThetaEvaluator& ev, double s0, const StokesSum& sing,
                       const AsymmetryPart& asym, double eps, cplx rho, double tol,
                       const LaplaceOptions& opt = {});

// (1/2 pi i) times the K-point trapezoid contour integral of f around omega.
cplx extract_residue(const std::function<cplx(cplx)>& f, cplx omega, double radius = 1e-2,
                     int K = 64);

}  // namespace resdet
