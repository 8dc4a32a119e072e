#include "resdet/suite.hpp"

#include <atomic>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <thread>

#include "resdet/case_studies.hpp"
#include "resdet/errors.hpp"
#include "resdet/gevrey.hpp"
#include "resdet/laplace.hpp"
#include "resdet/regularizations.hpp"
#include "resdet/theta.hpp"

namespace resdet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// uniform in [0, 1) from the top 53 bits; identical on every standard library
double unit(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

CheckRecord failed(const std::string& check, nlohmann::json inputs, const std::string& what) {
  CheckRecord r = make_record(check, std::move(inputs), kNaN, kNaN, 0);
  r.extra["error"] = what;
  return r;
}

class Collector {
 public:
  explicit Collector(CriterionResult& out) : out_(out) {}

  void run(const std::string& check, const nlohmann::json& inputs,
           const std::function<CheckRecord()>& f) {
    try {
      out_.records.push_back(f());
    } catch (const std::exception& e) {
      out_.records.push_back(failed(check, inputs, e.what()));
    }
  }
  void add(CheckRecord r) { out_.records.push_back(std::move(r)); }

 private:
  CriterionResult& out_;
};

std::shared_ptr<const Spectrum> circle() {
  static const auto sp = std::make_shared<const Spectrum>(Spectrum::circle(200));
  return sp;
}

nlohmann::json rj(cplx z) { return to_json(z); }

void psf_grid(Collector& c, const SuiteOptions& opt) {
  std::vector<cplx> pts;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) pts.emplace_back(0.3 + 2.7 * i / 4, -0.4 + 0.8 * j / 4);
  std::mt19937_64 rng(opt.seed);
  for (int k = 0; k < 5; ++k) {
    double re = 0.3 + 2.7 * unit(rng);
    double im = -0.4 + 0.8 * unit(rng);
    pts.emplace_back(re, im);
  }
  for (cplx rho : pts)
    c.run("psf", {{"rho", rj(rho)}}, [&] { return psf_check(rho, 10000, 1e-10); });
}

void theorem_a(Collector& c, const SuiteOptions&) {
  for (cplx rho : {cplx(1, 0), cplx(0.5, 0.3), cplx(2, -1), cplx(0.8, -0.6), cplx(1.5, 1.2)})
    c.run("theorem_a_circle", {{"rho", rj(rho)}},
          [&] { return circle_theorem_a_check(circle(), rho, 0.3, 1e-8); });
}

void theorem_b(Collector& c, const SuiteOptions&) {
  for (double s0 : {-0.5, -1.0, -2.0})
    for (cplx rho : {cplx(1, 0), cplx(2, 0), 1.0 + 0.2 * std::polar(1.0, -pi / 8)})
      c.run("theorem_b_circle", {{"rho", rj(rho)}, {"s0", s0}},
            [&] { return circle_theorem_b_check(circle(), s0, rho, 0.3, 1e-8); });
}

void k_extension_checks(Collector& c, const SuiteOptions&) {
  const double s0 = -1.0, eps = 0.3;
  for (cplx rho : {std::polar(1.0, pi / 3), std::polar(0.7, 1.2)}) {
    nlohmann::json in{{"rho", rj(rho)}, {"s0", s0}, {"eps", eps}};
    c.run("k_overlap", in, [&] {
      double eps_d = 0.5 * (std::arg(rho) + std::atan(2 * pi / std::abs(s0)));
      auto ext = k_extension(rho, s0, eps);
      auto dir = k_direct(rho, s0, eps_d);
      auto in2 = in;
      in2["eps_direct"] = eps_d;
      return make_record("k_overlap", in2, ext.value, dir.value, 1e-8);
    });
  }
  for (int n = 1; n <= 3; ++n) {
    nlohmann::json in{{"n", n}, {"s0", s0}};
    c.run("k_residue", in, [&] {
      auto r = k_residue(n, s0);
      auto rec = make_record("k_residue", in, r.contour_integral, r.expected_integral,
                             1e-6 * r.expected_integral);
      rec.extra["residue"] = rj(r.residue);
      return rec;
    });
  }
}

void deformed_theorem(Collector& c, const SuiteOptions&) {
  c.run("deformed_psf_theorem", {{"s0", -1.0}}, [&] {
    return deformed_psf_theorem(TestFunction::gaussian(1.0, -1.0), -1.0, 8, 8, 1e-10).record;
  });
  auto h0 = TestFunction::gaussian(1.0, -1.0);
  cplx cl = classical_psf_lhs(h0, 8);
  c.add(make_record("classical_psf", {{"M", 8}, {"N", 8}}, cl, classical_psf_rhs(h0, 8), 1e-10));
  const double s0 = -1e-9;
  c.run("deformed_psf_limit", {{"s0", s0}}, [&] {
    auto r = deformed_psf_theorem(TestFunction::gaussian(1.0, s0), s0, 8, 8);
    auto rec = make_record("deformed_psf_limit", {{"s0", s0}, {"side", "both"}}, r.lhs, cl, 1e-8);
    double d = std::abs(r.rhs - cl);
    rec.residual = std::max(rec.residual, d);
    rec.pass = rec.pass && d <= 1e-8;
    rec.extra["rhs_residual"] = d;
    return rec;
  });
}

CheckRecord fit_record(const std::string& name, const nlohmann::json& in, const GevreyFit& fit) {
  double slack = 1;
  for (double s : fit.residuals) slack = std::min(slack, s);
  CheckRecord r;
  r.check = name;
  r.inputs = in;
  r.lhs = slack;
  r.rhs = 0;
  r.residual = std::max(0.0, -slack);
  r.tolerance = 0;
  r.pass = std::isfinite(slack) && slack >= 0;
  r.extra = to_json(fit);
  return r;
}

std::function<cplx(cplx)> exp_det(ExpVariant v, double s0, int order) {
  ExpDeformRequest req{circle(), s0, v};
  return [req, order](cplx z) { return exp_deformed_det_derivative(req, order, z, 1e-15).value; };
}

void gevrey(Collector& c, const SuiteOptions&) {
  const double s0 = -1.0;
  const int N = 12;
  auto grid = sector_grid(2, 20, 8, pi / 4, 5);
  auto lam = ThetaEvaluator::spectral_lambda(circle());
  auto rho = ThetaEvaluator::spectral_rho(circle());
  struct Fit {
    const char* name;
    ThetaEvaluator ev;
    ExpVariant v;
    int m;
  };
  for (const auto& f : {Fit{"gevrey_lambda", lam, ExpVariant::sharp1_lambda, 1},
                        Fit{"gevrey_rho", rho, ExpVariant::sharp1_rho, 1},
                        Fit{"gevrey_derivative_lambda", lam, ExpVariant::sharp1_lambda, 2}}) {
    nlohmann::json in{{"s0", s0}, {"N_max", N}, {"m", f.m}, {"grid", "|rho| in [2,20], |arg| <= pi/4"}};
    c.run(f.name, in, [&] {
      auto series = f.m == 1 ? gevrey_coefficients(f.ev, s0, N)
                             : gevrey_derivative_coefficients(f.ev, s0, f.m, N);
      return fit_record(f.name, in, gevrey_validate(exp_det(f.v, s0, f.m - 1), series, grid, N));
    });
  }
  for (const auto& f : {Fit{"borel_closure_rho", rho, ExpVariant::sharp1_rho, 1},
                        Fit{"borel_closure_lambda", lam, ExpVariant::sharp1_lambda, 1}}) {
    auto series = gevrey_coefficients(f.ev, s0, kMaxGevreyOrder);
    for (cplx z : {cplx(3, 0), cplx(5, 2), cplx(4, -3)}) {
      nlohmann::json in{{"rho", rj(z)}, {"variant", f.name}};
      c.run(f.name, in, [&] {
        auto r = borel_closure_check(f.ev, s0, series, exp_det(f.v, s0, 0), 0.25, z, 1e-10);
        c.add(r.inside_disc);
        return r.laplace;
      });
    }
  }
}

SelbergContext synthetic_a() { return {LengthSpectrum({2.0, 2.5, 3.1}, {1, 1, 2}, 2)}; }
SelbergContext synthetic_b() { return {LengthSpectrum({1.5, 2.2, 2.9, 3.7}, {1, 3, 1, 2}, 3)}; }

void selberg(Collector& c, const SuiteOptions&) {
  struct Named {
    const char* name;
    SelbergContext ctx;
  };
  for (const auto& s : {Named{"A", synthetic_a()}, Named{"B", synthetic_b()}})
    for (double r : {0.8, 1.0, 1.5}) {
      nlohmann::json in{{"lengths", s.name}, {"rho", r}};
      c.run("selberg_identity", in, [&] {
        auto rec = surface_identity_check(s.ctx, r, 0.3, 1e-6).record;
        rec.inputs["lengths"] = s.name;
        return rec;
      });
      c.run("selberg_fd", in, [&] {
        auto rec = selberg_fd_check(s.ctx, r, 1e-6);
        rec.inputs["lengths"] = s.name;
        return rec;
      });
    }
  const cplx rho = 3.0;
  c.run("sphere_counterterm", {{"rho", rj(rho)}}, [&] {
    auto q = sphere_counterterm(rho, 0.3, 1e-12);
    auto sp = std::make_shared<const Spectrum>(Spectrum::sphere(400));
    auto s = log_deriv_det({sp, 3, Variable::rho, false}, rho, 1e-12);
    auto rec = make_record("sphere_counterterm", {{"rho", rj(rho)}, {"m", 3}}, q.value, s.value,
                           1e-8);
    rec.extra["quadrature_error"] = q.abs_error_estimate;
    rec.extra["tail_bound"] = s.tail.bound;
    return rec;
  });
}

void limit(Collector& c, const SuiteOptions&) {
  c.run("regularization_limit", {{"m", 1}}, [&] {
    return regularization_limit_check(circle(), 1, 1.0, {-0.4, -0.2, -0.1, -0.05}).record;
  });
  auto single = std::make_shared<const Spectrum>(std::vector<double>{2.0}, 1);
  const cplx rho(1.0, 0.2);
  for (double s0 : {-0.4, -0.1, -0.01}) {
    nlohmann::json in{{"lambda1", 2.0}, {"m", 1}, {"rho", rj(rho)}, {"s0", s0}};
    c.run("single_eigenvalue_gap", in, [&] {
      auto r = regularization_limit_check(single, 1, rho, {s0});
      return make_record("single_eigenvalue_gap", in, r.gaps.at(0),
                         single_eigenvalue_gap(2.0, 1, rho, s0), 1e-10);
    });
  }
}

Integrand exp_minus_t() { return {[](cplx t) { return std::exp(-t); }, 0, {}}; }
Integrand t_theta_s1() {
  return {[](cplx t) { return t_pow_theta_closed(ThetaKind::closed_s1, t, 1); }, 0,
          {cplx(0, 2 * pi), cplx(0, -2 * pi)}};
}
Integrand t2_theta_s2() {
  return {[](cplx t) { return t_pow_theta_closed(ThetaKind::closed_s2, t, 2); }, 0,
          {cplx(0, 2 * pi), cplx(0, -2 * pi)}};
}

void quadrature(Collector& c, const SuiteOptions&) {
  for (double a : {-0.9, -0.5, 0.0, 1.0}) {
    nlohmann::json in{{"alpha", a}};
    c.run("gamma_endpoint", in, [&] {
      Integrand g{[a](cplx t) { return std::pow(t, a) * std::exp(-t); }, a, {}};
      auto r = laplace_ray(g, {0, -0.5, std::nullopt}, 0.0, 1e-11);
      return make_record("gamma_endpoint", in, r.value, std::tgamma(a + 1), 1e-9);
    });
  }
  struct Case {
    const char* name;
    Integrand g;
    double theta1, theta2;
    cplx rho;
  };
  std::vector<Case> corpus = {{"exp(-t)", exp_minus_t(), 0, pi / 6, 2.0},
                              {"t Theta_S1", t_theta_s1(), -0.3, 0.3, cplx(1, 0.2)},
                              {"t^2 Theta_S2", t2_theta_s2(), -0.2, 0.2, 3.0}};
  for (const auto& k : corpus) {
    nlohmann::json in{{"integrand", k.name}, {"rho", rj(k.rho)}};
    c.run("direction_invariance", in, [&] {
      auto rec = direction_invariance_check(k.g, {k.theta1, 0, std::nullopt}, {k.theta2, 0, std::nullopt}, k.rho, 1e-9).record;
      rec.inputs["integrand"] = k.name;
      return rec;
    });
  }
  std::vector<std::pair<Case, cplx>> deriv = {{corpus[0], 1.0}, {corpus[1], 2.0}, {corpus[2], 3.0}};
  for (const auto& [k, rho] : deriv) {
    nlohmann::json in{{"integrand", k.name}, {"rho", rj(rho)}};
    c.run("laplace_derivative", in, [&] {
      auto rec = laplace_derivative_check(k.g, {0, 0, std::nullopt}, rho, 1e-7).record;
      rec.inputs["integrand"] = k.name;
      return rec;
    });
  }
}

struct Entry {
  const char* name;
  void (*run)(Collector&, const SuiteOptions&);
};

const Entry kEntries[kSuiteCriteria] = {
    {"poisson_summation", psf_grid},
    {"theorem_a_circle", theorem_a},
    {"theorem_b_circle", theorem_b},
    {"k_extension", k_extension_checks},
    {"deformed_psf_gaussian", deformed_theorem},
    {"gevrey_validation", gevrey},
    {"selberg_identity", selberg},
    {"regularization_limit", limit},
    {"quadrature", quadrature},
};

}  // namespace

int default_threads() {
  if (const char* env = std::getenv("RESDET_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return int(std::min(v, 256L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

CriterionResult run_criterion(int id, const SuiteOptions& opt) {
  if (id < 1 || id > kSuiteCriteria)
    throw ValidationError("criterion", "criterion id must lie in [1, 9]");
  const Entry& e = kEntries[id - 1];
  CriterionResult out;
  out.id = id;
  out.name = e.name;
  Collector c(out);
  try {
    e.run(c, opt);
  } catch (const std::exception& ex) {
    c.add(failed(e.name, nlohmann::json::object(), ex.what()));
  }
  out.pass = !out.records.empty();
  for (const auto& r : out.records) out.pass = out.pass && r.pass;
  return out;
}

std::vector<CriterionResult> run_suite(const SuiteOptions& opt, std::vector<int> ids) {
  if (ids.empty())
    for (int i = 1; i <= kSuiteCriteria; ++i) ids.push_back(i);
  std::vector<CriterionResult> out(ids.size());
  int threads = opt.threads > 0 ? opt.threads : default_threads();
  threads = std::min<int>(threads, int(ids.size()));
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i; (i = next++) < ids.size();) out[i] = run_criterion(ids[i], opt);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

std::string serialize(const std::vector<CriterionResult>& results) {
  std::string s;
  for (const auto& c : results)
    for (const auto& r : c.records) {
      auto j = to_json(r);
      j["criterion"] = c.id;
      s += j.dump() + "\n";
    }
  return s;
}

CriterionResult determinism_criterion(const std::string& first, const std::string& second,
                                      double seconds) {
  CriterionResult out;
  out.id = 10;
  out.name = "determinism";
  bool same = first == second;
  auto r = make_record("byte_identical", {{"bytes", first.size()}}, same ? 0.0 : 1.0, 0.0, 0.0);
  out.records.push_back(r);
  bool fast = seconds < kSuiteTimeBudget;
  // elapsed time stays out of the record so that reports remain reproducible
  auto t = make_record("runtime_budget", {{"budget_seconds", kSuiteTimeBudget}}, fast ? 0.0 : 1.0,
                       0.0, 0.0);
  out.records.push_back(t);
  out.pass = same && fast;
  return out;
}

}  // namespace resdet
