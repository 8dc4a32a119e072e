#include <gtest/gtest.h>

#include <random>

#include "resdet/errors.hpp"
#include "resdet/regularizations.hpp"

using namespace resdet;

namespace ref {
// mpmath, 30 digits
constexpr double sharp2_composite_s0m1_rho1 = 0.869658286405745622466;  // sum 4e^{-n}/(1+n^2)
constexpr double d_sharp2_composite_s0mhalf_rho1 = 0.297304935410775171013;
}  // namespace ref

namespace {
std::shared_ptr<const Spectrum> circle() {
  return std::make_shared<const Spectrum>(Spectrum::circle(200));
}
std::shared_ptr<const Spectrum> single(double lambda) {
  return std::make_shared<const Spectrum>(std::vector<double>{lambda}, 1);
}
// composite m0 for the circle from the closed identity
// sum_{n != 0} 2 rho/(rho^2 + n^2) = 2 pi coth(pi rho) - 2/rho
cplx circle_composite_closed(cplx rho, int m0) {
  // derivatives via partial fractions of coth: pi coth(pi rho) = sum_k 1/(rho - ik)
  // is slow, so use the two lowest orders analytically
  if (m0 == 2) {
    cplx s = std::sinh(pi * rho);
    return -2.0 * pi * pi / (s * s) + 2.0 / (rho * rho);
  }
  // m0 == 3: d^2/drho^2
  cplx s = std::sinh(pi * rho), c = std::cosh(pi * rho);
  return 4.0 * pi * pi * pi * c / (s * s * s) - 4.0 / (rho * rho * rho);
}
}  // namespace

TEST(LogDeriv, SingleEigenvalue) {
  auto r = log_deriv_det({single(1.0), 1, Variable::lambda}, 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(r.value.real(), 0.5);
  EXPECT_EQ(r.tail.bound, 0);
}

TEST(LogDeriv, CircleCompositeMatchesClosedIdentity) {
  auto r = log_deriv_det({circle(), 2, Variable::rho, true}, 1.0, 1e-10);
  EXPECT_NEAR(r.value.real(), circle_composite_closed(1.0, 2).real(), 1e-12);
  EXPECT_NEAR(r.value.real(), 1.852000386, 1e-9);
  cplx rho(0.7, -0.4);
  auto r3 = log_deriv_det({circle(), 3, Variable::rho, true}, rho, 1e-10);
  EXPECT_NEAR(std::abs(r3.value - circle_composite_closed(rho, 3)), 0, 1e-11);
}

TEST(LogDeriv, CircleLambdaVariable) {
  auto r = log_deriv_det({circle(), 1, Variable::lambda}, 1.0, 1e-10);
  EXPECT_NEAR(r.value.real(), pi / std::tanh(pi) - 1, 1e-12);
}

TEST(LogDeriv, OrderConstraints) {
  EXPECT_THROW(log_deriv_det({circle(), 1, Variable::rho}, 1.0, 1e-8), ValidationError);
  auto sphere = std::make_shared<const Spectrum>(Spectrum::sphere(10));
  EXPECT_THROW(log_deriv_det({sphere, 1, Variable::lambda}, 1.0, 1e-8), ValidationError);
  EXPECT_THROW(log_deriv_det({sphere, 2, Variable::rho, true}, 1.0, 1e-8), ValidationError);
  EXPECT_NO_THROW(log_deriv_det({sphere, 3, Variable::rho, true}, 1.0, 1e-8));
}

TEST(LogDeriv, PoleHit) {
  EXPECT_THROW(log_deriv_det({single(1.0), 1, Variable::lambda}, -1.0, 1e-8), PoleHit);
  EXPECT_THROW(log_deriv_det({circle(), 2, Variable::rho, true}, cplx(0, 3), 1e-8), PoleHit);
  // beyond the stored prefix, on the root law
  EXPECT_THROW(log_deriv_det({circle(), 2, Variable::rho, true}, cplx(0, 1000), 1e-8), PoleHit);
  EXPECT_NO_THROW(log_deriv_det({circle(), 2, Variable::rho, true}, cplx(1e-6, 3), 1e-6));
}

TEST(LogDeriv, InsufficientSpectrumWithWeylOnly) {
  auto c = Spectrum::circle(50);
  auto weyl_only = std::make_shared<const Spectrum>(c.eigenvalues(), 1, 0, 0.25);
  EXPECT_THROW(log_deriv_det({weyl_only, 2, Variable::rho, true}, 1.0, 1e-10),
               InsufficientSpectrum);
}

// Property: certified tails dominate the true error on the circle.
TEST(LogDeriv, TailCertificatesDominate) {
  for (long levels : {100L, 400L, 1600L}) {
    auto c = Spectrum::circle(levels);
    auto weyl_only = std::make_shared<const Spectrum>(c.eigenvalues(), 1, 0, 0.25);
    for (cplx rho : {cplx(1.0), cplx(0.5, 0.3), cplx(2, -1)}) {
      auto r = log_deriv_det({weyl_only, 2, Variable::rho, true}, rho, 1.0);
      EXPECT_EQ(r.tail.method, TailBound::Method::weyl_integral);
      EXPECT_LE(std::abs(r.value - circle_composite_closed(rho, 2)), r.tail.bound);
      auto l = log_deriv_det({weyl_only, 1, Variable::lambda}, rho * rho, 1.0);
      cplx closed = (pi / std::tanh(pi * rho) - 1.0 / rho) / rho;  // sum_{n!=0} 1/(rho^2+n^2)
      EXPECT_LE(std::abs(l.value - closed), l.tail.bound);
    }
  }
  auto r = log_deriv_det({circle(), 2, Variable::rho, true}, cplx(0.5, 0.3), 1e-8);
  EXPECT_EQ(r.tail.method, TailBound::Method::euler_maclaurin);
  EXPECT_LE(std::abs(r.value - circle_composite_closed(cplx(0.5, 0.3), 2)), r.tail.bound + 1e-13);
}

// Property: composite(rho) = (-i)^m D(-i rho) + i^m D(i rho) with
// D(s) = sum (-1)^{m-1}(m-1)!/(s+rho_n)^m, on finite truncations.
TEST(LogDeriv, PartialFractionIdentity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 30), re(0.2, 3), im(-2, 2);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> ev(1 + trial);
    for (auto& x : ev) x = u(rng);
    std::sort(ev.begin(), ev.end());
    auto sp = std::make_shared<const Spectrum>(ev, 1);
    cplx rho(re(rng), im(rng));
    for (int m : {2, 3, 4}) {
      cplx comp = log_deriv_det({sp, m, Variable::rho, true}, rho, 1).value;
      cplx dm = log_deriv_det({sp, m, Variable::rho}, -I * rho, 1).value;
      cplx dp = log_deriv_det({sp, m, Variable::rho}, I * rho, 1).value;
      cplx rhs = std::pow(-I, m) * dm + std::pow(I, m) * dp;
      EXPECT_NEAR(std::abs(comp - rhs), 0, 1e-12 * (1 + std::abs(comp)));
    }
  }
}

// Property: Cauchy-Riemann residual of a fourth-order local difference
// stencil stays below 1e-6 across the domain.
TEST(LogDeriv, HolomorphyProxy) {
  auto sp = circle();
  auto f = [&](cplx z) { return log_deriv_det({sp, 1, Variable::lambda}, z, 1e-9).value; };
  const double h = 1e-3;
  auto d = [&](cplx z, cplx dir) {
    return (-f(z + 2.0 * h * dir) + 8.0 * f(z + h * dir) - 8.0 * f(z - h * dir) +
            f(z - 2.0 * h * dir)) /
           (12 * h);
  };
  for (cplx z : {cplx(1, 0), cplx(0.5, 2), cplx(-0.5, 0.7), cplx(3, -4)}) {
    cplx fx = d(z, 1.0), fy = d(z, I);
    EXPECT_LT(std::abs(fx + I * fy), 1e-6) << z;
  }
}

TEST(ExpDeformed, SingleEigenvalue) {
  auto r = exp_deformed_det({single(1.0), -1, ExpVariant::sharp2}, 1.0, 1e-14);
  EXPECT_NEAR(r.value.real(), std::exp(-1.0) / 2, 1e-16);
}

TEST(ExpDeformed, CircleSharp2Composite) {
  ExpDeformRequest req{circle(), -1, ExpVariant::sharp2};
  cplx rho = 1.0;
  auto r = exp_deformed_det(req, rho * rho, 1e-13);
  EXPECT_NEAR((2.0 * rho * r.value).real(), ref::sharp2_composite_s0m1_rho1, 1e-14);
  EXPECT_EQ(r.tail.method, TailBound::Method::geometric_from_last_term);
}

TEST(ExpDeformed, VanishesForLargeNegativeShift) {
  auto r = exp_deformed_det({circle(), -60, ExpVariant::sharp2}, 1.0, 1e-14);
  EXPECT_LT(std::abs(r.value), 1e-26);
}

TEST(ExpDeformed, VariantsOnWeylOnlySpectrum) {
  auto c = Spectrum::circle(100);
  auto weyl_only = std::make_shared<const Spectrum>(c.eigenvalues(), 1, 0, 0.25);
  for (auto v : {ExpVariant::sharp1_lambda, ExpVariant::sharp1_rho, ExpVariant::sharp2}) {
    auto a = exp_deformed_det({weyl_only, -0.5, v}, cplx(2, 1), 1e-10);
    auto b = exp_deformed_det({circle(), -0.5, v}, cplx(2, 1), 1e-10);
    EXPECT_LE(std::abs(a.value - b.value), a.tail.bound + b.tail.bound + 1e-15);
    EXPECT_LT(a.tail.bound, 1e-10);
  }
}

TEST(ExpDeformed, PoleHit) {
  EXPECT_THROW(exp_deformed_det({circle(), -1, ExpVariant::sharp2}, -4.0, 1e-8), PoleHit);
  EXPECT_THROW(exp_deformed_det({circle(), -1, ExpVariant::sharp1_rho}, -2.0, 1e-8), PoleHit);
}

TEST(DeformedDerivative, OrderZeroIsComposite) {
  ExpDeformRequest req{circle(), -0.7, ExpVariant::sharp2};
  cplx rho(1.2, 0.3);
  auto d0 = derivative_of_exp_deformed(req, 0, rho, 1e-13);
  auto e = exp_deformed_det(req, rho * rho, 1e-13);
  EXPECT_NEAR(std::abs(d0.value - 2.0 * rho * e.value), 0, 1e-14);
}

TEST(DeformedDerivative, MatchesFiniteDifference) {
  ExpDeformRequest req{circle(), -0.5, ExpVariant::sharp2};
  auto F = [&](double r) { return (2.0 * r * exp_deformed_det(req, r * r, 1e-14).value).real(); };
  const double h = 1e-3;
  double fd = (-F(1 + 2 * h) + 8 * F(1 + h) - 8 * F(1 - h) + F(1 - 2 * h)) / (12 * h);
  auto d1 = derivative_of_exp_deformed(req, 1, 1.0, 1e-13);
  EXPECT_NEAR(d1.value.real(), fd, 1e-7);
  EXPECT_NEAR(d1.value.real(), ref::d_sharp2_composite_s0mhalf_rho1, 1e-13);
}

TEST(DeformedDerivative, ApproachesLogDerivative) {
  double target = log_deriv_det({circle(), 2, Variable::rho, true}, 1.0, 1e-10).value.real();
  double prev = std::numeric_limits<double>::infinity();
  for (double s0 : {-0.2, -0.1, -0.05}) {
    auto d = derivative_of_exp_deformed({circle(), s0, ExpVariant::sharp2}, 1, 1.0, 1e-10);
    double gap = std::abs(d.value.real() - target);
    EXPECT_LT(gap, prev);
    prev = gap;
  }
}

TEST(DeformedDerivative, OrderLimitAndPole) {
  EXPECT_THROW(derivative_of_exp_deformed({circle(), -1, ExpVariant::sharp2}, 13, 1.0, 1e-8),
               ValidationError);
  EXPECT_THROW(derivative_of_exp_deformed({circle(), -1, ExpVariant::sharp2}, 2, cplx(0, 2), 1e-8),
               PoleHit);
}

TEST(ExpDeformed, DerivativeInZMatchesDifferences) {
  for (auto v : {ExpVariant::sharp1_lambda, ExpVariant::sharp1_rho, ExpVariant::sharp2}) {
    ExpDeformRequest req{circle(), -0.7, v};
    cplx z(2.0, 0.5);
    double h = 1e-3;
    auto f = [&](cplx w) { return exp_deformed_det(req, w, 1e-14).value; };
    cplx fd = (f(z - 2 * h) - 8.0 * f(z - h) + 8.0 * f(z + h) - f(z + 2 * h)) / (12 * h);
    auto d1 = exp_deformed_det_derivative(req, 1, z, 1e-14);
    EXPECT_NEAR(std::abs(d1.value - fd), 0.0, 1e-9);
    auto d0 = exp_deformed_det_derivative(req, 0, z, 1e-14);
    EXPECT_NEAR(std::abs(d0.value - f(z)), 0.0, 1e-15);
  }
  // single eigenvalue, second derivative 2 e^{s0}/(z+1)^3
  ExpDeformRequest one{single(1.0), -1.0, ExpVariant::sharp1_lambda};
  auto d2 = exp_deformed_det_derivative(one, 2, 1.0, 1e-14);
  EXPECT_NEAR(d2.value.real(), 2 * std::exp(-1.0) / 8, 1e-16);
}
