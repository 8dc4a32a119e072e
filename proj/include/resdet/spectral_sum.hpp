#pragma once

#include <cmath>
#include <limits>

#include "resdet/numerics.hpp"
#include "resdet/spectrum.hpp"

namespace resdet {

struct TailBound {
  enum class Method { exact, geometric_from_last_term, weyl_integral, euler_maclaurin };
  long truncation_index = 0;  // eigenvalues (or law levels) summed explicitly
  double bound = 0;
  Method method = Method::exact;
};

const char* to_string(TailBound::Method m);

struct SpectralSumResult {
  cplx value;
  TailBound tail;
};

inline constexpr double kWeylSafety = 0.9;
inline constexpr long kExplicitLawLevels = 512;

// Sums s.term(root) over the spectrum, one call per stored eigenvalue
// (multiplicities are explicit), then over the root law if present, else
// bounds the remainder with s.weyl_tail. A summand provides
//   template <class T> T term(const T& root) const;      // cplx and Jet<5>
//   double weyl_tail(double b, double S, int d) const;   // sum_{n>S} |term|
// where weyl_tail may assume rho_n >= b n^{1/d} for n > S and returns +inf
// when its own validity condition fails.
// `use_first` < size() drops stored eigenvalues; their exact absolute sum is
// then added to the bound.
template <class S>
SpectralSumResult spectral_sum(const Spectrum& sp, const S& s,
                               long use_first = -1) {
  const auto& roots = sp.roots();
  long n_stored = static_cast<long>(roots.size());
  long n_use = use_first < 0 ? n_stored : std::min(use_first, n_stored);
  CompensatedSum acc;
  double scale = 0;
  for (long n = 0; n < n_use; ++n) {
    cplx v = s.term(cplx(roots[n]));
    acc += v;
    scale += std::abs(v);
  }
  SpectralSumResult out;
  out.tail.truncation_index = n_use;
  double dropped = 0;
  for (long n = n_use; n < n_stored; ++n) dropped += std::abs(s.term(cplx(roots[n])));

  if (sp.law()) {
    const RootLaw& law = *sp.law();
    long j = law.first_level;
    long j_end = j + kExplicitLawLevels;
    cplx prev = 0;
    bool have_prev = false;
    for (; j < j_end; ++j) {
      cplx v = law.multiplicity(j) * s.term(cplx(law.root(j)));
      acc += v;
      scale += std::abs(v);
      if (have_prev && std::abs(prev) > 0) {
        double q = std::abs(v) / std::abs(prev);
        if (q < 1) {
          double tail = std::abs(v) * q / (1 - q);
          if (tail <= 1e-17 * scale || std::abs(v) == 0) {
            out.value = acc.value();
            out.tail.bound = tail + dropped;
            out.tail.truncation_index = n_use + (j - law.first_level + 1);
            out.tail.method = TailBound::Method::geometric_from_last_term;
            return out;
          }
        }
      }
      prev = v;
      have_prev = true;
    }
    auto g = [&](const auto& x) {
      using T = std::decay_t<decltype(x)>;
      T root = x * law.slope + T(law.offset);
      T mult = x * law.mult1 + T(law.mult0);
      return mult * s.term(root);
    };
    TailSum em = euler_maclaurin_tail(g, double(j_end));
    acc += em.value;
    out.value = acc.value();
    out.tail.bound = em.bound + dropped;
    out.tail.truncation_index = n_use + kExplicitLawLevels;
    out.tail.method = TailBound::Method::euler_maclaurin;
    return out;
  }
  out.value = acc.value();
  if (sp.weyl_constant()) {
    double b = std::sqrt(kWeylSafety * *sp.weyl_constant());
    out.tail.bound = s.weyl_tail(b, double(n_stored), sp.dimension()) + dropped;
    out.tail.method = TailBound::Method::weyl_integral;
  } else {
    out.tail.bound = dropped;
    out.tail.method = TailBound::Method::exact;
  }
  return out;
}

}  // namespace resdet
