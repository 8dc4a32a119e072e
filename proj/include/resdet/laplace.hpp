#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "resdet/numerics.hpp"
#include "resdet/report.hpp"

namespace resdet {

// Ray arg t = theta with growth |phi(r e^{i theta})| <= alpha e^{(gamma+eps) r}.
// alpha is estimated by sampling when absent.
struct RayDirection {
  double theta = 0;
  double gamma = 0;
  std::optional<double> alpha;
};

struct Integrand {
  std::function<cplx(cplx)> f;
  double endpoint_power = 0;  // f(t) ~ c t^a at 0 along the ray, a > -1
  std::vector<cplx> poles;    // the ray must keep its distance from these
};

struct LaplaceOptions {
  double margin = 1e-6;
  double pole_clearance = 1e-3;
  double eps = 1e-9;
  std::optional<double> radius;  // force the truncation radius
  bool strict = false;           // throw ToleranceNotMet instead of flagging
};

struct QuadratureResult {
  cplx value;
  double abs_error_estimate = 0;
  double truncation_radius = 0;
  int panels = 0;
  double tail_bound = 0;
  bool converged = true;
};

// Distance from the open ray arg t = theta to p.
double ray_distance(double theta, cplx p);

// int_0^{e^{i theta} inf} f(t) e^{-rho t} dt.
QuadratureResult laplace_ray(const Integrand& g, const RayDirection& dir, cplx rho,
                             double tol, const LaplaceOptions& opt = {});

struct InvarianceReport {
  QuadratureResult first, second;
  CheckRecord record;
};

// Transforms along two directions with no pole in between must coincide.
InvarianceReport direction_invariance_check(const Integrand& g, const RayDirection& d1,
                                            const RayDirection& d2, cplx rho, double tol,
                                            const LaplaceOptions& opt = {});

struct DerivativeReport {
  QuadratureResult moment;  // transform of -t f
  cplx finite_difference;
  double difference_error = 0;
  CheckRecord record;
};

// Transform of -t f versus the five-point central difference in rho of the
// transform of f.
DerivativeReport laplace_derivative_check(const Integrand& g, const RayDirection& dir,
                                          cplx rho, double tol,
                                          const LaplaceOptions& opt = {});

}  // namespace resdet
