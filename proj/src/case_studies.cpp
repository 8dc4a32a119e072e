#include "resdet/case_studies.hpp"

#include <algorithm>
#include <limits>

#include "resdet/errors.hpp"

namespace resdet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

nlohmann::json rho_json(cplx rho) { return to_json(rho); }

void guard_imaginary_lattice(cplx rho, double thr, const char* what) {
  double n = std::round(rho.imag());
  if (std::abs(rho - cplx(0, n)) < thr) throw PoleHit(std::string(what) + ": rho on i Z");
}

}  // namespace

// ---- circle ----------------------------------------------------------------

PsfEvaluation psf_identity(cplx rho, long N) {
  if (N < 1) throw ValidationError("N", "N must be positive");
  guard_imaginary_lattice(rho, 1e-12, "psf_identity");
  PsfEvaluation r;
  CompensatedSum acc;
  acc.add(1.0 / rho);
  for (long n = N; n >= 1; --n) acc.add(2.0 * rho / (double(n) * double(n) + rho * rho));
  r.partial = acc.value();
  double J = double(N + 1);
  auto g = [rho](auto x) {
    using T = decltype(x);
    return T(2.0 * rho) / (x * x + T(rho * rho));
  };
  // int_J^inf 2 rho/(x^2+rho^2) dx = 2 atan(rho/J)
  TailSum tail = euler_maclaurin_tail(g, J, 2.0 * std::atan(rho / J));
  r.tail = tail.value;
  r.tail_bound = tail.bound;
  r.closed = pi / std::tanh(pi * rho);
  r.residual = std::abs(r.partial + r.tail - r.closed);
  return r;
}

double psf_identity_residual(cplx rho, long N) { return psf_identity(rho, N).residual; }

CheckRecord psf_check(cplx rho, long N, double tol) {
  PsfEvaluation e = psf_identity(rho, N);
  auto rec = make_record("psf", {{"rho", rho_json(rho)}, {"N", N}}, e.partial + e.tail, e.closed,
                         tol);
  rec.extra["tail_bound"] = e.tail_bound;
  // certified tail must itself fit inside the tolerance
  if (!(e.tail_bound <= tol)) rec.pass = false;
  return rec;
}

StokesSum circle_stokes_a(int count) {
  StokesSum s;
  for (int m = 1; m <= count; ++m)
    s.singularities.push_back(alien_simple_pole(4.0 * pi * I * double(m), 2.0 * pi * I * double(m)));
  return s;
}

AsymmetryPart circle_asymmetry_a() {
  AsymmetryPart a;
  a.f = Integrand{[](cplx) { return cplx(-2.0); }, 0, {}};
  a.weighted = [](cplx t) { return -2.0 * t; };
  return a;
}

StokesSum circle_stokes_b(double s0, int count) {
  StokesSum s;
  for (int k = 1; k <= count; ++k)
    s.singularities.push_back(alien_simple_pole(2.0, s0 + 2.0 * pi * I * double(k)));
  return s;
}

AsymmetryPart circle_asymmetry_b(double s0) {
  AsymmetryPart a;
  Integrand k = k_integrand(s0);
  a.f.f = [s0](cplx t) { return -2.0 + 2.0 * std::sinh(s0) / (std::cosh(t) - std::cosh(s0)); };
  a.f.poles = k.poles;
  return a;
}

CheckRecord circle_theorem_a_check(const std::shared_ptr<const Spectrum>& circle, cplx rho,
                                   double eps, double tol) {
  double inner = tol * 1e-2;
  RhsValue rhs = theorem_a_rhs(ThetaEvaluator::closed_s1(), 2, circle_stokes_a(400),
                               circle_asymmetry_a(), eps, rho, inner);
  RegResult lhs = log_deriv_det({circle, 2, Variable::rho, true}, rho, inner);
  auto rec = make_record("theorem_a_circle", {{"rho", rho_json(rho)}, {"eps", eps}, {"m0", 2}},
                         lhs.value, rhs.value, tol);
  rec.extra["rhs_error"] = rhs.error;
  rec.extra["lhs_tail"] = lhs.tail.bound;
  return rec;
}

CheckRecord circle_theorem_b_check(const std::shared_ptr<const Spectrum>& circle, double s0,
                                   cplx rho, double eps, double tol) {
  check_deformed_angle(s0, eps);
  double inner = tol * 1e-2;
  auto ev = ThetaEvaluator::shifted(ThetaEvaluator::closed_s1(), s0);
  RhsValue rhs = theorem_b_rhs(ev, s0, circle_stokes_b(s0, 400), circle_asymmetry_b(s0), eps, rho,
                               inner);
  RegResult lhs = derivative_of_exp_deformed({circle, s0, ExpVariant::sharp2}, 0, rho, inner);
  auto rec = make_record("theorem_b_circle", {{"rho", rho_json(rho)}, {"eps", eps}, {"s0", s0}},
                         lhs.value, rhs.value, tol);
  rec.extra["rhs_error"] = rhs.error;
  rec.extra["lhs_tail"] = lhs.tail.bound;
  return rec;
}

// ---- deformed Poisson summation and K --------------------------------------

void check_deformed_angle(double s0, double eps) {
  if (!(s0 < 0)) throw ValidationError("s0", "s0 must be negative");
  if (!(eps > 0) || !(std::arg(cplx(s0, 2 * pi)) < pi - eps))
    throw AngleConstraint("eps must satisfy 0 < eps < atan(2 pi/|s0|) = " +
                          std::to_string(std::atan(2 * pi / -s0)));
}

Integrand k_integrand(double s0) {
  Integrand g;
  double sh = std::sinh(s0), ch = std::cosh(s0);
  g.f = [sh, ch](cplx t) { return sh / (std::cosh(t) - ch); };
  for (int k = -6; k <= 6; ++k) {
    g.poles.push_back(s0 + 2.0 * pi * I * double(k));
    g.poles.push_back(-s0 + 2.0 * pi * I * double(k));
  }
  return g;
}

DeformedValue deformed_psf_rhs(cplx rho, double s0, double eps, double tol) {
  check_deformed_angle(s0, eps);
  double a = std::arg(rho);
  if (!(std::abs(rho) > 0) || !(a > -pi / 2 + eps && a < eps))
    throw OutsideHalfPlane("deformed PSF needs -pi/2 + eps < arg rho < eps");
  QuadratureResult L =
      laplace_ray(k_integrand(s0), RayDirection{pi - eps, 0, std::nullopt}, -I * rho, tol / 2);
  cplx e = std::exp(I * s0 * rho);
  DeformedValue v;
  v.value = e * pi / std::tanh(pi * rho) - 1.0 / rho - I * L.value - pi * e;
  v.error = L.abs_error_estimate;
  return v;
}

DeformedValue deformed_psf_lhs(cplx rho, double s0, double tol) {
  if (!(s0 < 0)) throw ValidationError("s0", "s0 must be negative");
  guard_imaginary_lattice(rho, 1e-12, "deformed_psf_lhs");
  CompensatedSum acc;
  double q = std::exp(s0), r = std::abs(rho);
  const long cap = 100000000;
  DeformedValue v;
  v.error = kInf;
  for (long n = 1; n <= cap; ++n) {
    double dn = double(n);
    acc.add(2.0 * rho * std::exp(s0 * dn) / (dn * dn + rho * rho));
    if (dn > 2 * r) {
      // |term_j| <= 2|rho| e^{s0 j}/(j^2 - |rho|^2), ratio <= e^{s0} beyond n
      double next = 2 * r * std::exp(s0 * (dn + 1)) / ((dn + 1) * (dn + 1) - r * r);
      double tail = next / (1 - q);
      if (tail <= tol * 1e-3) {
        v.error = tail;
        break;
      }
    }
  }
  v.value = acc.value();
  return v;
}

CheckRecord deformed_psf_check(cplx rho, double s0, double eps, double tol) {
  DeformedValue l = deformed_psf_lhs(rho, s0, tol);
  DeformedValue r = deformed_psf_rhs(rho, s0, eps, tol * 1e-2);
  auto rec = make_record("deformed_psf", {{"rho", rho_json(rho)}, {"s0", s0}, {"eps", eps}},
                         l.value, r.value, tol);
  rec.extra["lhs_tail"] = l.error;
  rec.extra["rhs_error"] = r.error;
  return rec;
}

std::vector<double> deformed_psf_derivative_gaps(cplx rho, const std::vector<double>& s0s,
                                                 double eps, double tol) {
  cplx s = std::sinh(pi * rho);
  cplx target = -pi * pi / (s * s) + 1.0 / (rho * rho);
  const double h = 1e-3;
  std::vector<double> gaps;
  for (double s0 : s0s) {
    auto f = [&](cplx x) { return deformed_psf_rhs(x, s0, eps, tol).value; };
    cplx d = (f(rho - 2 * h) - 8.0 * f(rho - h) + 8.0 * f(rho + h) - f(rho + 2 * h)) / (12 * h);
    gaps.push_back(std::abs(d - target));
  }
  return gaps;
}

namespace {

void guard_k_lattice(cplx rho) {
  double n = std::round(rho.imag());
  if (n >= 0 && std::abs(rho - cplx(0, n)) < kSingularLatticeDistance)
    throw OnSingularLattice("K is singular at rho = " + std::to_string(long(n)) + "i");
}

}  // namespace

DeformedValue k_extension(cplx rho, double s0, double eps, double tol) {
  if (!(s0 < 0)) throw ValidationError("s0", "s0 must be negative");
  guard_k_lattice(rho);
  double a = std::arg(rho);
  if (!(a > eps || a < -pi + eps))
    throw OutsideHalfPlane("K extension needs eps < arg rho < pi + eps");
  QuadratureResult L =
      laplace_ray(k_integrand(s0), RayDirection{-eps, 0, std::nullopt}, -I * rho, tol);
  cplx ep = std::exp(I * s0 * rho), em = std::exp(-I * s0 * rho);
  DeformedValue v;
  v.value = L.value - 2.0 * pi * I * (ep - em) / expm1(2.0 * pi * rho) + 2.0 * pi * I * em;
  v.error = L.abs_error_estimate;
  return v;
}

DeformedValue k_direct(cplx rho, double s0, double eps, double tol) {
  if (!(s0 < 0)) throw ValidationError("s0", "s0 must be negative");
  double a = std::arg(rho);
  if (!(a > -pi + eps && a < eps))
    throw OutsideHalfPlane("direct K needs -pi + eps < arg rho < eps");
  QuadratureResult L =
      laplace_ray(k_integrand(s0), RayDirection{pi - eps, 0, std::nullopt}, -I * rho, tol);
  return {L.value, L.abs_error_estimate};
}

KResidue k_residue(int n, double s0, double eps, double radius, int K) {
  if (n < 1) throw ValidationError("n", "residues sit at i n, n >= 1");
  cplx c(0, double(n));
  KResidue r;
  r.residue = extract_residue([&](cplx x) { return k_extension(x, s0, eps).value; }, c, radius, K);
  r.contour_integral = 2.0 * pi * I * r.residue;
  r.expected_integral = 2 * pi * (std::exp(-s0 * n) - std::exp(s0 * n));
  return r;
}

// ---- test functions ----------------------------------------------------------

TestFunction TestFunction::gaussian(double a, double s0) {
  if (!(a > 0)) throw ValidationError("a", "Gaussian width must be positive");
  TestFunction t;
  t.name = "gaussian";
  t.h = [a](cplx x) { return std::exp(-a * x * x); };
  double norm = 1 / (2 * std::sqrt(pi * a));
  t.fourier = [a, norm](cplx tau) { return norm * std::exp(-tau * tau / (4 * a)); };
  t.eta = 0.5 * std::abs(s0);
  t.delta = 1;
  t.delta_prime = 2 * s0 - 1;
  return t;
}

TestFunction TestFunction::scaled(cplx c) const {
  TestFunction t = *this;
  auto h0 = h;
  auto f0 = fourier;
  t.h = [h0, c](cplx x) { return c * h0(x); };
  t.fourier = [f0, c](cplx x) { return c * f0(x); };
  return t;
}

void check_hypotheses(const TestFunction& h, double s0) {
  if (!(s0 < 0)) throw HypothesisViolation("s0", "s0 must be negative");
  if (!(h.eta > 0 && h.eta < -s0))
    throw HypothesisViolation("strip", "need 0 < eta < |s0|");
  if (!(h.delta > 0)) throw HypothesisViolation("decay_left", "need delta > 0");
  if (!(h.delta_prime < s0)) throw HypothesisViolation("growth_right", "need delta' < s0");
  const int K = 32;
  const double X = 40;
  for (double s : {-2 * h.eta * 0.999, 0.0, 2 * h.eta * 0.999}) {
    // weighted magnitudes on the two half-lines; the far samples must not
    // exceed the inner ones
    std::vector<double> left, right;
    for (int j = 0; j < K; ++j) {
      double x = -X + 2 * X * j / (K - 1);
      cplx v = h.h(cplx(x, s));
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw HypothesisViolation("strip", "h not finite at " + std::to_string(x));
      if (x < -1) left.push_back(std::abs(v) * std::pow(-x, 1 + h.delta));
      if (x > 1) right.push_back(std::abs(v) * std::exp(-h.delta_prime * x));
    }
    auto growing = [](const std::vector<double>& w, bool outer_first) {
      size_t n = w.size(), half = n / 2;
      double inner = 0, outer = outer_first ? w.front() : w.back();
      for (size_t i = 0; i < n; ++i) {
        bool in = outer_first ? i >= half : i < half;
        if (in) inner = std::max(inner, w[i]);
      }
      return outer > inner * (1 + 1e-9) + 1e-300;
    };
    if (growing(left, true))
      throw HypothesisViolation("decay_left", "|h| |x|^{1+delta} grows toward -infinity");
    if (growing(right, false))
      throw HypothesisViolation("growth_right", "|h| e^{-delta' x} grows toward +infinity");
  }
}

DeformedPsfReport deformed_psf_theorem(const TestFunction& h, double s0, int M_terms,
                                       int N_terms, double tol) {
  check_hypotheses(h, s0);
  if (M_terms < 0 || N_terms < 0) throw ValidationError("terms", "term counts must be >= 0");
  DeformedPsfReport r;
  CompensatedSum l, rr;
  for (int n = -N_terms; n <= N_terms; ++n) l.add(h.h(double(n)) * std::exp(-s0 * n));
  for (int m = -M_terms; m <= M_terms; ++m) rr.add(h.fourier(cplx(2 * pi * m, s0)));
  r.lhs = l.value();
  r.rhs = 2 * pi * rr.value();
  // first omitted terms as tail estimates
  double N1 = N_terms + 1, M1 = M_terms + 1;
  r.lhs_tail = std::abs(h.h(N1) * std::exp(-s0 * N1)) + std::abs(h.h(-N1) * std::exp(s0 * N1));
  r.rhs_tail = 2 * pi * (std::abs(h.fourier(cplx(2 * pi * M1, s0))) +
                         std::abs(h.fourier(cplx(-2 * pi * M1, s0))));
  r.record = make_record("deformed_psf_theorem",
                         {{"h", h.name}, {"s0", s0}, {"M", M_terms}, {"N", N_terms}}, r.lhs, r.rhs,
                         tol + r.lhs_tail + r.rhs_tail);
  return r;
}

cplx classical_psf_lhs(const TestFunction& h, int N_terms) {
  CompensatedSum l;
  for (int n = -N_terms; n <= N_terms; ++n) l.add(h.h(double(n)));
  return l.value();
}

cplx classical_psf_rhs(const TestFunction& h, int M_terms) {
  CompensatedSum r;
  for (int m = -M_terms; m <= M_terms; ++m) r.add(h.fourier(2 * pi * m));
  return 2 * pi * r.value();
}

// ---- surfaces ------------------------------------------------------------------

SelbergValue selberg_log_deriv3(const SelbergContext& ctx, cplx rho, double tol) {
  if (!(rho.real() > 0.5)) throw DomainError("selberg_log_deriv3 needs Re rho > 1/2");
  SelbergValue out;
  const auto& tau = ctx.lengths.lengths();
  const auto& mu = ctx.lengths.multiplicities();
  if (tau.empty()) return out;
  double tmin = *std::min_element(tau.begin(), tau.end());
  CompensatedSum acc;
  for (int k = 1; k <= ctx.k_max; ++k) {
    double B = 0;
    for (size_t m = 0; m < tau.size(); ++m) {
      double kt = k * tau[m];
      // e^{-kt rho}/(2 sinh(kt/2)) = e^{-kt(rho+1/2)}/(1 - e^{-kt})
      cplx w = double(mu[m]) * double(k) * double(k) * tau[m] * tau[m] * tau[m] *
               std::exp(-kt * (rho + 0.5)) / -std::expm1(-kt);
      acc.add(w);
      B += std::abs(w);
    }
    out.windings = k;
    double q = std::pow((k + 1.0) / k, 2) * std::exp(-tmin * (rho.real() + 0.5));
    if (q < 1) {
      double tail = B * q / (1 - q);
      if (tail <= tol / 2) {
        out.tail_bound = tail;
        out.value = acc.value();
        return out;
      }
    }
  }
  throw ToleranceNotMet("selberg_log_deriv3: winding cap reached", kInf);
}

cplx selberg_log_zeta(const SelbergContext& ctx, cplx s) {
  const auto& tau = ctx.lengths.lengths();
  const auto& mu = ctx.lengths.multiplicities();
  CompensatedSum acc;
  for (size_t m = 0; m < tau.size(); ++m) {
    double t = tau[m];
    for (long n = 0;; ++n) {
      acc.add(double(mu[m]) * log1p(-std::exp(-t * (s + double(n)))));
      double x = std::exp(-t * (s.real() + n + 1));
      double tail = double(mu[m]) * x / ((1 - std::exp(-t)) * (1 - x));
      if (tail <= 1e-18 * std::max(1.0, std::abs(acc.value()))) break;
    }
  }
  return acc.value();
}

cplx selberg_log_zeta_d3(const SelbergContext& ctx, cplx rho) {
  auto f = [&](cplx x) { return selberg_log_zeta(ctx, 0.5 + x); };
  auto D = [&](double h) {
    return (f(rho + 2 * h) - 2.0 * f(rho + h) + 2.0 * f(rho - h) - f(rho - 2 * h)) /
           (2 * h * h * h);
  };
  const double h = 1e-2;
  return (4.0 * D(h / 2) - D(h)) / 3.0;
}

StokesSum selberg_stokes_sum(const SelbergContext& ctx, int windings) {
  StokesSum s;
  const auto& tau = ctx.lengths.lengths();
  const auto& mu = ctx.lengths.multiplicities();
  if (tau.empty()) return s;
  double tmax = windings * *std::min_element(tau.begin(), tau.end());
  for (size_t m = 0; m < tau.size(); ++m)
    for (int k = 1; k * tau[m] <= tmax; ++k) {
      double kt = k * tau[m];
      // i k^2 tau^3 mu / (2 sinh(kt/2))
      double c = double(mu[m]) * k * k * tau[m] * tau[m] * tau[m] * std::exp(-kt / 2) /
                 -std::expm1(-kt);
      s.singularities.push_back(alien_simple_singularity(cplx(0, kt), I * c));
    }
  std::stable_sort(s.singularities.begin(), s.singularities.end(),
                   [](const SingularityDatum& a, const SingularityDatum& b) {
                     return a.omega.imag() < b.omega.imag();
                   });
  return s;
}

AsymmetryPart selberg_asymmetry(int genus) {
  double chi = 2.0 - 2.0 * genus;
  AsymmetryPart a;
  a.f.f = [chi](cplx t) { return chi * theta_s2(I * t); };
  a.f.endpoint_power = -2;
  // t^2 (2-2g) Theta_S2(i t) = -(2-2g) (it)^2 Theta_S2(it)
  a.weighted = [chi](cplx t) { return -chi * t_pow_theta_closed(ThetaKind::closed_s2, I * t, 2); };
  for (int k = -6; k <= 6; ++k)
    if (k != 0) a.f.poles.push_back(2.0 * pi * double(k));
  return a;
}

QuadratureResult sphere_counterterm(cplx rho, double eps, double tol) {
  Integrand g{[](cplx t) { return t_pow_theta_closed(ThetaKind::closed_s2, t, 2); }, 0, {}};
  for (int k = -6; k <= 6; ++k)
    if (k != 0) g.poles.push_back(2.0 * pi * I * double(k));
  return laplace_ray(g, RayDirection{eps, 0, std::nullopt}, rho, tol);
}

SurfaceReport surface_identity_check(const SelbergContext& ctx, cplx rho, double eps,
                                     double tol) {
  if (!(rho.real() > 0.5)) throw DomainError("surface identity needs Re rho > 1/2");
  if (!(eps > 0 && eps < pi / 2)) throw AngleConstraint("eps must lie in (0, pi/2)");
  double inner = tol * 1e-3;
  SurfaceReport r;
  const auto& tau = ctx.lengths.lengths();
  int windings = 1;
  if (!tau.empty()) {
    double tmin = *std::min_element(tau.begin(), tau.end());
    windings = int(std::ceil(45 / (tmin * rho.real()))) + 2;
  }
  double chi = 2.0 - 2.0 * ctx.lengths.genus();
  r.theorem = theorem_a_rhs(ThetaEvaluator::closed_s2(), 3, selberg_stokes_sum(ctx, windings),
                            selberg_asymmetry(ctx.lengths.genus()), eps, rho, inner);
  r.series = selberg_log_deriv3(ctx, rho, inner);
  cplx rhs = r.series.value;
  double err = r.theorem.error + r.series.tail_bound;
  if (chi != 0) {
    r.counterterm = sphere_counterterm(rho, eps, inner);
    rhs += chi * r.counterterm.value;
    err += std::abs(chi) * r.counterterm.abs_error_estimate;
  }
  r.record = make_record("selberg_identity",
                         {{"rho", rho_json(rho)},
                          {"eps", eps},
                          {"genus", ctx.lengths.genus()},
                          {"lengths", ctx.lengths.lengths().size()}},
                         r.theorem.value, rhs, tol + err);
  r.record.extra["windings"] = r.series.windings;
  return r;
}

CheckRecord selberg_fd_check(const SelbergContext& ctx, cplx rho, double tol) {
  SelbergValue s = selberg_log_deriv3(ctx, rho, tol * 1e-3);
  cplx fd = selberg_log_zeta_d3(ctx, rho);
  auto rec = make_record("selberg_fd", {{"rho", rho_json(rho)}}, s.value, fd,
                         tol + kSelbergFdBudget + s.tail_bound);
  return rec;
}

// ---- limit -------------------------------------------------------------------------

LimitReport regularization_limit_check(const std::shared_ptr<const Spectrum>& sp, int m,
                                       cplx rho, const std::vector<double>& s0s, double ratio,
                                       double tol) {
  if (!sp) throw ValidationError("spectrum", "missing spectrum");
  if (m < sp->dimension()) throw ValidationError("m", "m must be at least the dimension");
  if (s0s.empty()) throw ValidationError("s0", "empty s0 sequence");
  LimitReport r;
  r.s0s = s0s;
  std::stable_sort(r.s0s.begin(), r.s0s.end(),
                   [](double a, double b) { return std::abs(a) > std::abs(b); });
  cplx composite = log_deriv_det({sp, m + 1, Variable::rho, true}, rho, tol).value;
  for (double s0 : r.s0s) {
    cplx d = derivative_of_exp_deformed({sp, s0, ExpVariant::sharp2}, m, rho, tol).value;
    r.gaps.push_back(std::abs(d - composite));
  }
  r.strictly_decreasing = true;
  for (size_t i = 1; i < r.gaps.size(); ++i)
    if (!(r.gaps[i] < r.gaps[i - 1])) r.strictly_decreasing = false;
  double first = r.gaps.front(), last = r.gaps.back();
  r.record = make_record("regularization_limit",
                         {{"rho", rho_json(rho)}, {"m", m}, {"s0", r.s0s}}, last, 0.0,
                         ratio * first);
  r.record.pass = r.record.pass && r.strictly_decreasing;
  r.record.extra["gaps"] = r.gaps;
  r.record.extra["strictly_decreasing"] = r.strictly_decreasing;
  r.record.extra["final_over_initial"] = last / first;
  return r;
}

double single_eigenvalue_gap(double lambda1, int m, cplx rho, double s0) {
  double a = std::sqrt(lambda1);
  double c = (m % 2 ? -1.0 : 1.0) * std::tgamma(m + 1.0);
  cplx v = c * (ipow(rho + I * a, -m - 1) + ipow(rho - I * a, -m - 1));
  return std::abs(std::expm1(s0 * a) * v);
}

}  // namespace resdet
