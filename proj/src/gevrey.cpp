#include "resdet/gevrey.hpp"

#include <limits>

#include "resdet/errors.hpp"

namespace resdet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxL = 1e6;
constexpr double kMinM = 1e-3, kMaxM = 1e3;
constexpr int kMGrid = 60;

double log_factorial(double n) { return std::lgamma(n + 1); }

void check_order(int N) {
  if (N < 0 || N > kMaxGevreyOrder)
    throw ValidationError("N", "series order must lie in [0, 30]");
}

}  // namespace

cplx AsymptoticSeries::partial_sum(cplx z, size_t N) const {
  N = std::min(N, a.size());
  cplx acc = 0;
  for (size_t i = N; i-- > 0;) acc = acc / z + a[i];
  return N ? acc / z : cplx(0);
}

cplx AsymptoticSeries::borel_coefficient(size_t i) const {
  double m = std::abs(a[i]);
  if (m == 0) return 0;
  return a[i] / m * std::exp(std::log(m) - log_factorial(double(i)));
}

AsymptoticSeries gevrey_coefficients(const ThetaEvaluator& ev, double s0, int N) {
  check_order(N);
  if (!(s0 < 0)) throw ValidationError("s0", "s0 must be negative");
  if (ev.is_shifted()) throw ValidationError("ev", "coefficients need the unshifted theta series");
  AsymptoticSeries s;
  for (int i = 0; i <= N; ++i) s.a.emplace_back(theta_derivative(ev, i, -s0));
  return s;
}

AsymptoticSeries gevrey_derivative_coefficients(const ThetaEvaluator& ev, double s0, int m,
                                                int N) {
  if (m < 1) throw ValidationError("m", "m must be positive");
  check_order(N);
  AsymptoticSeries base = gevrey_coefficients(ev, s0, std::max(0, N - (m - 1)));
  AsymptoticSeries s;
  s.a.assign(size_t(std::min(N + 1, m - 1)), cplx(0));
  double sign = (m - 1) % 2 ? -1.0 : 1.0;
  for (size_t i = 0; int(s.a.size()) <= N; ++i) {
    double lf = log_factorial(double(m + i - 1)) - log_factorial(double(i));
    s.a.push_back(sign * std::exp(lf) * base[i]);
  }
  return s;
}

double borel_radius(const AsymptoticSeries& s) {
  double r = kInf;
  size_t n = s.size();
  for (size_t i = std::max<size_t>(1, n / 2); i < n; ++i) {
    double b = std::abs(s.borel_coefficient(i));
    if (b > 0) r = std::min(r, std::pow(b, -1.0 / double(i)));
  }
  return r;
}

BorelValue borel_eval(const AsymptoticSeries& s, cplx t) {
  BorelValue out;
  out.radius = borel_radius(s);
  size_t n = s.size();
  if (n == 0) return out;
  std::vector<double> mags(n);
  double lt = std::log(std::abs(t));
  for (size_t i = 0; i < n; ++i) {
    double b = std::abs(s.borel_coefficient(i));
    mags[i] = b == 0 ? 0 : (std::abs(t) == 0 ? (i ? 0 : b) : std::exp(std::log(b) + double(i) * lt));
  }
  if (n >= 3 && mags[n - 1] > mags[n - 2] && mags[n - 2] > mags[n - 3] && mags[n - 1] > 0)
    throw RadiusExceeded("Borel sum: terms grow at |t| = " + std::to_string(std::abs(t)),
                         out.radius);
  cplx acc = 0;
  for (size_t i = n; i-- > 0;) acc = acc * t + s.borel_coefficient(i);
  out.value = acc;
  out.truncation_estimate = mags[n - 1];
  return out;
}

cplx borel_of(const AsymptoticSeries& s, cplx t) { return borel_eval(s, t).value; }

nlohmann::json to_json(const GevreyFit& f) {
  return {{"L", f.L},
          {"M", f.M},
          {"max_order", f.max_order},
          {"residuals", f.residuals},
          {"alternation_ratio", f.alternation_ratio}};
}

GevreyFit gevrey_validate(const std::function<cplx(cplx)>& F, const AsymptoticSeries& series,
                          const std::vector<cplx>& rho_grid, int N_max) {
  if (N_max < 1 || size_t(N_max) > series.size())
    throw ValidationError("N_max", "N_max must lie in [1, series length]");
  if (rho_grid.empty()) throw ValidationError("rho_grid", "empty grid");
  // log r(N, rho) = log|F - S_N| + (N+1) log|rho| - log N!
  std::vector<std::vector<double>> logr(size_t(N_max) + 1);
  double alternation = 0;
  for (cplx rho : rho_grid) {
    cplx f = F(rho);
    for (int N = 1; N <= N_max; ++N) {
      double rem = std::abs(f - series.partial_sum(rho, size_t(N)));
      double lr = rem > 0 ? std::log(rem) + (N + 1) * std::log(std::abs(rho)) - log_factorial(N)
                          : -kInf;
      logr[size_t(N)].push_back(lr);
      if (size_t(N) < series.size()) {
        double first = std::abs(series[size_t(N)]) * std::pow(std::abs(rho), -N - 1.0);
        if (first > 0) alternation = std::max(alternation, rem / first);
      }
    }
  }
  double best_obj = kInf, best_M = 0, best_logL = 0;
  for (int j = 0; j < kMGrid; ++j) {
    double logM = std::log(kMinM) + (std::log(kMaxM) - std::log(kMinM)) * j / (kMGrid - 1);
    double logL = -kInf;
    for (int N = 1; N <= N_max; ++N)
      for (double lr : logr[size_t(N)]) logL = std::max(logL, lr - N * logM);
    if (logL > std::log(kMaxL)) continue;
    double obj = logL + N_max * logM;
    if (obj < best_obj) {
      best_obj = obj;
      best_M = std::exp(logM);
      best_logL = logL;
    }
  }
  if (!(best_M > 0))
    throw NoFit("no (L, M) within (1e6, 1e3) bounds the remainders on the grid");
  GevreyFit fit;
  fit.M = best_M;
  fit.L = std::max(std::exp(best_logL), std::numeric_limits<double>::min());
  fit.max_order = N_max;
  fit.alternation_ratio = alternation;
  double logM = std::log(fit.M), logL = std::log(fit.L);
  for (int N = 1; N <= N_max; ++N) {
    double slack = 1;
    for (double lr : logr[size_t(N)]) slack = std::min(slack, 1 - std::exp(lr - logL - N * logM));
    fit.residuals.push_back(slack);
  }
  return fit;
}

std::vector<cplx> sector_grid(double rmin, double rmax, int nr, double amax, int na) {
  std::vector<cplx> g;
  for (int i = 0; i < nr; ++i) {
    double r = nr == 1 ? rmin : rmin * std::pow(rmax / rmin, double(i) / (nr - 1));
    for (int j = 0; j < na; ++j) {
      double a = na == 1 ? 0 : -amax + 2 * amax * j / (na - 1);
      g.push_back(std::polar(r, a));
    }
  }
  return g;
}

BorelClosureReport borel_closure_check(const ThetaEvaluator& ev, double s0,
                                       const AsymptoticSeries& series,
                                       const std::function<cplx(cplx)>& F, cplx t, cplx rho,
                                       double tol) {
  ThetaEvaluator sh = ThetaEvaluator::shifted(ev, s0);
  BorelClosureReport r;
  BorelValue b = borel_eval(series, t);
  if (!(std::abs(t) < b.radius))
    throw RadiusExceeded("Borel sum: |t| beyond the empirical radius", b.radius);
  cplx direct = theta_eval(sh, t, 1e-15).value;
  // geometric remainder beyond the last term
  double q = std::abs(t) / b.radius;
  double trunc = b.truncation_estimate * q / (1 - q);
  nlohmann::json in{{"s0", s0}, {"t", to_json(t)}, {"terms", series.size()}};
  r.inside_disc = make_record("borel_closure_disc", in, b.value, direct, tol + trunc);

  Integrand g{[sh](cplx u) { return theta_eval(sh, u, 1e-15).value; }, 0, {}};
  if (ev.closed())
    for (int k = -4; k <= 4; ++k) g.poles.push_back(s0 + 2.0 * pi * I * double(k));
  QuadratureResult lap = laplace_ray(g, RayDirection{0, 0, std::nullopt}, rho, tol / 2);
  cplx f = F(rho);
  nlohmann::json in2{{"s0", s0}, {"rho", to_json(rho)}};
  r.laplace = make_record("borel_closure_laplace", in2, lap.value, f, tol + lap.abs_error_estimate);
  return r;
}

}  // namespace resdet
