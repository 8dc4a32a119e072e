#include "resdet/resurgence.hpp"

#include <limits>

#include <nlohmann/json.hpp>

#include "resdet/errors.hpp"

namespace resdet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool arg_between(double a, double lo, double hi) { return a > lo && a < hi; }

// Growth rate to use for a polynomially growing integrand on a ray where
// Re(rho e^{i theta}) = s > 0.
double polynomial_gamma(double s) { return 0.3 * s; }

}  // namespace

SingularityDatum alien_simple_pole(cplx residue, cplx omega) {
  SingularityDatum d;
  d.omega = omega;
  d.kind = SingularityKind::simple_pole;
  d.residue = residue;
  d.delta_coeff = -2.0 * pi * I * residue;
  return d;
}

SingularityDatum alien_simple_singularity(cplx omega, cplx delta_coeff,
                                          std::function<cplx(cplx)> germ) {
  SingularityDatum d;
  d.omega = omega;
  d.kind = SingularityKind::simple_singularity;
  d.delta_coeff = delta_coeff;
  d.germ = std::move(germ);
  return d;
}

void StokesSum::validate() const {
  for (size_t k = 1; k < singularities.size(); ++k)
    if (singularities[k].omega.imag() < singularities[k - 1].omega.imag())
      throw ValidationError("ordering", "singularities must be sorted by Im(omega)");
  for (const auto& s : singularities)
    if (!std::isfinite(s.omega.real()) || !std::isfinite(s.omega.imag()))
      throw ValidationError("omega", "singularity location must be finite");
}

StokesValue evaluate_stokes(const StokesSum& s, cplx rho, double tol, const LaplaceOptions& opt) {
  s.validate();
  StokesValue out;
  CompensatedSum acc;
  double prev = -1;
  bool stopped = false;
  for (const auto& d : s.singularities) {
    cplx c = d.delta_coeff;
    if (d.germ) {
      Integrand g{d.germ, 0, {}};
      QuadratureResult q = laplace_ray(g, RayDirection{s.theta_plus, 0, std::nullopt}, rho,
                                       tol / 20, opt);
      c += q.value;
      out.quad_error += q.abs_error_estimate;
      if (!q.converged) out.converged = false;
    }
    cplx term = exp(-d.omega * rho) * c;
    acc.add(term);
    ++out.terms;
    double bound = std::abs(term);
    if (prev >= 0 && bound < tol / 10) {
      double q = prev > 0 ? bound / prev : 0;
      out.tail_estimate = q < 1 ? bound * q / (1 - q) : kInf;
      stopped = true;
      break;
    }
    prev = bound;
  }
  if (!stopped && !s.singularities.empty()) {
    // list exhausted before the terms became negligible
    out.tail_estimate = kInf;
    out.converged = false;
  }
  if (!(out.tail_estimate <= tol)) out.converged = false;
  out.value = acc.value();
  return out;
}

std::string to_json_string(const StokesSum& s) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& d : s.singularities) {
    nlohmann::json j;
    j["omega"] = to_json(d.omega);
    j["kind"] = d.kind == SingularityKind::simple_pole ? "simple_pole" : "simple_singularity";
    j["residue"] = to_json(d.residue);
    j["delta"] = to_json(d.delta_coeff);
    j["has_germ"] = static_cast<bool>(d.germ);
    arr.push_back(j);
  }
  return arr.dump();
}

StokesSum stokes_from_json(const std::string& text, double theta_plus) {
  StokesSum s;
  s.theta_plus = theta_plus;
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("<singularities>", 0, e.what());
  }
  auto c = [](const nlohmann::json& j) {
    return cplx(j.at("re").get<double>(), j.at("im").get<double>());
  };
  try {
    for (const auto& j : arr) {
      cplx omega = c(j.at("omega"));
      std::string kind = j.at("kind").get<std::string>();
      if (kind == "simple_pole")
        s.singularities.push_back(alien_simple_pole(c(j.at("residue")), omega));
      else if (kind == "simple_singularity")
        s.singularities.push_back(alien_simple_singularity(omega, c(j.at("delta"))));
      else
        throw ParseError("<singularities>", 0, "unknown singularity kind " + kind);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("<singularities>", 0, e.what());
  }
  s.validate();
  return s;
}

StokesReport stokes_difference(const Integrand& phi, const RayDirection& plus,
                               const RayDirection& minus, const StokesSum& sing, cplx rho,
                               double tol, const LaplaceOptions& opt) {
  if (!(plus.theta < minus.theta))
    throw ValidationError("rays", "theta+ must be below theta-");
  // every declared pole between the rays that matters at this rho must be listed
  for (cplx p : phi.poles) {
    if (std::abs(p) == 0 || !arg_between(std::arg(p), plus.theta, minus.theta)) continue;
    if (std::abs(exp(-p * rho)) < tol / 10) continue;
    bool listed = false;
    for (const auto& d : sing.singularities)
      if (std::abs(d.omega - p) < 1e-9 * std::max(1.0, std::abs(p))) listed = true;
    if (!listed)
      throw MissingSingularity("declared singularity between the rays is not in the Stokes data",
                               kInf);
  }
  StokesReport r;
  StokesSum s = sing;
  s.theta_plus = plus.theta;
  r.minus = laplace_ray(phi, minus, rho, tol / 4, opt);
  r.plus = laplace_ray(phi, plus, rho, tol / 4, opt);
  r.stokes = evaluate_stokes(s, rho, tol / 2, opt);
  cplx lhs = r.minus.value - r.plus.value;
  double err = r.minus.abs_error_estimate + r.plus.abs_error_estimate +
               r.stokes.tail_estimate + r.stokes.quad_error;
  double residual = std::abs(lhs - r.stokes.value);
  if (residual > 10 * (err + tol))
    throw MissingSingularity("Stokes residual " + std::to_string(residual) +
                                 " exceeds ten times the combined error",
                             residual);
  nlohmann::json inputs{{"rho", to_json(rho)},
                        {"theta_plus", plus.theta},
                        {"theta_minus", minus.theta},
                        {"singularities", int(sing.singularities.size())}};
  r.record = make_record("stokes_difference", inputs, lhs, r.stokes.value, tol + err);
  return r;
}

namespace {

RhsValue combine(cplx prefactor, const StokesValue& st, const QuadratureResult& q) {
  RhsValue out;
  out.stokes = st;
  out.asymmetry = q;
  out.value = prefactor * (st.value - q.value);
  out.error = st.tail_estimate + st.quad_error + q.abs_error_estimate;
  return out;
}

QuadratureResult asymmetry_transform(const AsymmetryPart& asym, int extra_power, double theta,
                                     cplx sigma, double tol, const LaplaceOptions& opt) {
  Integrand g = asym.f;
  if (extra_power > 0) {
    if (asym.weighted) {
      g.f = asym.weighted;
    } else {
      auto f = asym.f.f;
      g.f = [f, extra_power](cplx t) { return ipow(t, extra_power) * f(t); };
    }
    g.endpoint_power += extra_power;
  }
  RayDirection dir = asym.direction;
  dir.theta = theta;
  double s = (sigma * std::polar(1.0, theta)).real();
  if (!(s > 0)) throw OutsideHalfPlane("asymmetry transform: rho outside the half-plane");
  dir.gamma = std::max(dir.gamma, polynomial_gamma(s));
  return laplace_ray(g, dir, sigma, tol, opt);
}

}  // namespace

RhsValue theorem_a_rhs(const ThetaEvaluator& ev, int m0, const StokesSum& sing,
                       const AsymmetryPart& asym, double eps, cplx rho, double tol,
                       const LaplaceOptions& opt) {
  if (m0 < ev.dimension() + 1) throw ValidationError("m0", "m0 must be at least d+1");
  if (!(eps > 0 && eps < pi / 2)) throw AngleConstraint("eps must lie in (0, pi/2)");
  double a = std::arg(rho);
  if (!(std::abs(rho) > 0) || !(a > -pi / 2 + eps && a < pi / 2 - eps))
    throw OutsideHalfPlane("theorem_a_rhs needs |arg rho| < pi/2 - eps");
  cplx sigma = -I * rho;
  StokesSum s = sing;
  s.theta_plus = pi / 2 - eps;
  StokesValue st = evaluate_stokes(s, sigma, tol / 2, opt);
  QuadratureResult q = asymmetry_transform(asym, m0 - 1, pi / 2 + eps, sigma, tol / 2, opt);
  return combine(ipow(I, m0), st, q);
}

RhsValue theorem_b_rhs(const ThetaEvaluator& ev, double s0, const StokesSum& sing,
                       const AsymmetryPart& asym, double eps, cplx rho, double tol,
                       const LaplaceOptions& opt) {
  if (!ev.is_shifted() || std::abs(ev.s0() - s0) > 1e-15 * std::abs(s0))
    throw ValidationError("s0", "theta evaluator must be shifted by s0");
  if (!(s0 < 0)) throw ValidationError("s0", "s0 must be negative");
  if (!(eps > 0 && eps < pi / 2)) throw AngleConstraint("eps must lie in (0, pi/2)");
  if (!sing.singularities.empty() && std::arg(sing.singularities.front().omega) >= pi - eps)
    throw AngleConstraint("eps too large: arg(s0 + i tau_1) must stay below pi - eps");
  double a = std::arg(rho);
  if (!(rho.real() > 0) || !(a < eps))
    throw OutsideHalfPlane("theorem_b_rhs needs Re rho > 0 and arg rho < eps");
  cplx sigma = -I * rho;
  StokesSum s = sing;
  s.theta_plus = pi / 2;
  StokesValue st = evaluate_stokes(s, sigma, tol / 2, opt);
  QuadratureResult q = asymmetry_transform(asym, 0, pi - eps, sigma, tol / 2, opt);
  return combine(I, st, q);
}

cplx extract_residue(const std::function<cplx(cplx)>& f, cplx omega, double radius, int K) {
  if (!(radius > 0) || K < 4) throw ValidationError("contour", "bad residue contour");
  CompensatedSum acc;
  for (int j = 0; j < K; ++j) {
    cplx w = std::polar(radius, 2 * pi * (j + 0.5) / K);
    cplx v = f(omega + w) * w;
    acc.add(v);
  }
  return acc.value() / double(K);
}

}  // namespace resdet
