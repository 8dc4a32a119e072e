#include "resdet/laplace.hpp"

#include <algorithm>
#include <cmath>

#include "resdet/errors.hpp"

namespace resdet {

double ray_distance(double theta, cplx p) {
  cplx q = p * std::polar(1.0, -theta);
  if (q.real() <= 0) return std::abs(p);
  return std::abs(q.imag());
}

namespace {

void check_poles(const Integrand& g, double theta, double clearance) {
  for (cplx p : g.poles) {
    double d = ray_distance(theta, p);
    if (d < clearance) throw PoleTooClose(p, d, clearance);
  }
}

double estimate_alpha(const Integrand& g, const RayDirection& dir, double growth,
                      double t0, double kappa) {
  cplx e = std::polar(1.0, dir.theta);
  double rmax = std::max(400.0, 40.0 / kappa);
  const int n = 800;
  double best = 0;
  for (int k = 0; k <= n; ++k) {
    // denser near t0, reaching rmax
    double r = t0 * std::pow(rmax / t0, double(k) / n);
    double v = std::abs(g.f(r * e)) * std::exp(-growth * r);
    if (!std::isfinite(v))
      throw DomainError("laplace_ray: integrand not finite at r = " + std::to_string(r));
    best = std::max(best, v);
  }
  return 2 * best + 1e-300;
}

}  // namespace

QuadratureResult laplace_ray(const Integrand& g, const RayDirection& dir, cplx rho,
                             double tol, const LaplaceOptions& opt) {
  if (!(g.endpoint_power > -1))
    throw ValidationError("endpoint_power", "must exceed -1 for integrability");
  if (!(tol > 0)) throw DomainError("laplace_ray: tol must be positive");
  const cplx e = std::polar(1.0, dir.theta);
  const cplx w = rho * e;  // the integrand decays like exp(-Re(w) r)
  const double growth = dir.gamma + opt.eps;
  const double kappa = w.real() - growth;
  if (!(w.real() > dir.gamma + opt.margin))
    throw OutsideHalfPlane("laplace_ray: Re(rho e^{i theta}) = " + std::to_string(w.real()) +
                           " not above gamma + margin = " +
                           std::to_string(dir.gamma + opt.margin));
  check_poles(g, dir.theta, opt.pole_clearance);

  double t0 = 1.0;
  for (cplx p : g.poles) t0 = std::min(t0, 0.5 * std::abs(p));
  t0 = std::max(t0, 1e-6);

  double alpha = dir.alpha ? *dir.alpha : estimate_alpha(g, dir, growth, t0, kappa);
  double R;
  if (opt.radius) {
    R = *opt.radius;
  } else {
    R = std::log(2 * alpha / (tol * kappa)) / kappa;
    R = std::max(R, 2 * t0);
  }
  QuadratureResult out;
  out.truncation_radius = R;
  out.tail_bound = alpha * std::exp(-kappa * R) / kappa;

  auto h = [&](double r) -> cplx {
    cplx t = r * e;
    return g.f(t) * std::exp(-rho * t);
  };
  IntegralEstimate head = tanh_sinh(h, 0.0, std::min(t0, R), tol / 4);
  IntegralEstimate body;
  body.value = 0;
  body.error = 0;
  body.panels = 0;
  if (R > t0) {
    double omega = std::abs(w.imag());
    double width = std::min(2.0, pi / std::max(omega, 1e-9));
    int initial = static_cast<int>(std::clamp(std::ceil((R - t0) / width), 1.0, 4000.0));
    body = gauss_kronrod(h, t0, R, tol / 4, initial, initial + 20000);
  }
  out.value = (head.value + body.value) * e;
  out.abs_error_estimate = head.error + body.error + out.tail_bound;
  out.panels = head.panels + body.panels;
  out.converged = head.converged && body.converged;
  if (opt.strict && !(out.abs_error_estimate <= tol))
    throw ToleranceNotMet("laplace_ray: error estimate above tolerance",
                          out.abs_error_estimate);
  return out;
}

namespace {

double wrap(double a) {
  a = std::remainder(a, 2 * pi);
  return a;
}

}  // namespace

InvarianceReport direction_invariance_check(const Integrand& g, const RayDirection& d1,
                                            const RayDirection& d2, cplx rho, double tol,
                                            const LaplaceOptions& opt) {
  double span = wrap(d2.theta - d1.theta);
  if (!(std::abs(span) < pi)) throw DomainError("direction_invariance: rays must differ by < pi");
  for (cplx p : g.poles) {
    double a = wrap(std::arg(p) - d1.theta);
    if (a * span > 0 && std::abs(a) < std::abs(span))
      throw PoleTooClose(p, std::min(ray_distance(d1.theta, p), ray_distance(d2.theta, p)),
                         opt.pole_clearance);
  }
  InvarianceReport rep;
  rep.first = laplace_ray(g, d1, rho, tol * 0.1, opt);
  rep.second = laplace_ray(g, d2, rho, tol * 0.1, opt);
  rep.record = make_record(
      "direction_invariance",
      {{"theta1", d1.theta}, {"theta2", d2.theta}, {"rho", to_json(rho)}},
      rep.first.value, rep.second.value,
      tol + rep.first.abs_error_estimate + rep.second.abs_error_estimate);
  return rep;
}

DerivativeReport laplace_derivative_check(const Integrand& g, const RayDirection& dir,
                                          cplx rho, double tol, const LaplaceOptions& opt) {
  Integrand tg{[f = g.f](cplx t) { return -t * f(t); }, g.endpoint_power + 1, g.poles};
  DerivativeReport rep;
  double qtol = std::max(1e-14, tol * 1e-3);
  rep.moment = laplace_ray(tg, dir, rho, qtol, opt);
  double max_err = 0;
  auto F = [&](cplx r) {
    auto q = laplace_ray(g, dir, r, qtol, opt);
    max_err = std::max(max_err, q.abs_error_estimate);
    return q.value;
  };
  auto d5 = [&](double h) {
    return (-F(rho + 2 * h) + 8.0 * F(rho + h) - 8.0 * F(rho - h) + F(rho - 2 * h)) / (12 * h);
  };
  const double h = 0.01;
  cplx coarse = d5(h), fine = d5(h / 2);
  rep.finite_difference = (16.0 * fine - coarse) / 15.0;
  rep.difference_error = std::abs(fine - coarse) / 15 + 3 * max_err / h;
  rep.record = make_record(
      "laplace_derivative", {{"theta", dir.theta}, {"rho", to_json(rho)}}, rep.moment.value,
      rep.finite_difference, tol + rep.difference_error + rep.moment.abs_error_estimate);
  rep.record.extra = {{"difference_error", rep.difference_error}};
  return rep;
}

}  // namespace resdet
