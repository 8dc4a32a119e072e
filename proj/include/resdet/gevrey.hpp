#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "resdet/laplace.hpp"
#include "resdet/report.hpp"
#include "resdet/theta.hpp"

namespace resdet {

// sum_i a_i z^{-i-1}
struct AsymptoticSeries {
  std::vector<cplx> a;

  size_t size() const { return a.size(); }
  const cplx& operator[](size_t i) const { return a[i]; }
  // sum_{i<N} a_i z^{-i-1}
  cplx partial_sum(cplx z, size_t N) const;
  // a_i / i!, formed in the log domain
  cplx borel_coefficient(size_t i) const;
};

inline constexpr int kMaxGevreyOrder = 30;

// a_i = d^i/ds^i Theta(s) at s = -s0, i = 0..N
AsymptoticSeries gevrey_coefficients(const ThetaEvaluator& ev, double s0, int N);

// Coefficients of the (m-1)-th z-derivative: index m-1+i carries
// (-1)^{m-1} (m+i-1)!/i! a_i, lower indices vanish. N+1 entries in total.
AsymptoticSeries gevrey_derivative_coefficients(const ThetaEvaluator& ev, double s0, int m,
                                                int N);

// Root-test radius estimate from the upper half of the Borel coefficients.
double borel_radius(const AsymptoticSeries& s);

struct BorelValue {
  cplx value;
  double truncation_estimate = 0;  // modulus of the last term
  double radius = 0;
};

// sum a_i t^i / i!. Throws RadiusExceeded when the last three terms grow.
BorelValue borel_eval(const AsymptoticSeries& s, cplx t);
cplx borel_of(const AsymptoticSeries& s, cplx t);

struct GevreyFit {
  double L = 0;
  double M = 0;
  int max_order = 0;
  std::vector<double> residuals;  // per N = 1..max_order: min relative slack over the grid
  double alternation_ratio = 0;   // max remainder / first omitted term
};

nlohmann::json to_json(const GevreyFit& f);

// Searches M on 60 log points in [1e-3, 1e3], L = max over grid and N of
// |F - S_N| |rho|^{N+1} / (N! M^N); keeps the M minimizing L M^{N_max}.
// Throws NoFit when no M gives L <= 1e6.
GevreyFit gevrey_validate(const std::function<cplx(cplx)>& F, const AsymptoticSeries& series,
                          const std::vector<cplx>& rho_grid, int N_max);

// |rho| log-spaced in [rmin, rmax] times arg evenly in [-amax, amax]
std::vector<cplx> sector_grid(double rmin, double rmax, int nr, double amax, int na);

struct BorelClosureReport {
  CheckRecord inside_disc;  // borel_of vs Theta(t - s0)
  CheckRecord laplace;      // L^0 Theta(. - s0) vs F
};

// Both halves of Laplace o Borel = identity for a shifted theta germ:
// the Borel sum matches Theta(t - s0) at t inside the disc, and the
// transform of Theta(. - s0) along arg t = 0 matches F(rho).
BorelClosureReport borel_closure_check(const ThetaEvaluator& ev, double s0,
                                       const AsymptoticSeries& series,
                                       const std::function<cplx(cplx)>& F, cplx t, cplx rho,
                                       double tol);

}  // namespace resdet
