#include <gtest/gtest.h>

#include <random>

#include "resdet/errors.hpp"
#include "resdet/theta.hpp"

using namespace resdet;

// Reference values below were computed with mpmath at 30 digits from the
// defining series or closed forms and frozen here.
namespace ref {
constexpr double s1_at_1 = 1.16395341373865284877;          // 2/(e-1)
constexpr double s2_at_1 = 2.07635090061717912696;          // cosh(1/2)/(2 sinh^2(1/2))
constexpr double s1_d1_at_1 = -1.84134718841558463789;      // -sum 2n e^{-n}
constexpr double s1_d2_at_1 = 3.98458953424997478585;       // sum 2n^2 e^{-n}
constexpr double s1_d7_at_07 = -174854.262779121579178;     // sum 2(-n)^7 e^{-0.7n}
constexpr double s1_lambda_at_03 = 2.23604318759286551781;  // sum 2 e^{-0.3 n^2}
constexpr double s1_at_001 = 199.001666663888891339;        // sum 2 e^{-0.01 n}
constexpr double s2_d5_at_15 = -84.2859171273313563079;
}  // namespace ref

namespace {
auto circle(long levels, bool with_law) {
  Spectrum c = Spectrum::circle(levels);
  if (with_law) return std::make_shared<const Spectrum>(c);
  return std::make_shared<const Spectrum>(c.eigenvalues(), 1, 0, 0.25);
}
}  // namespace

TEST(ClosedForms, CircleAndSphereAtOne) {
  auto s1 = theta_eval(ThetaEvaluator::closed_s1(), 1.0, 1e-12);
  EXPECT_NEAR(s1.value.real(), ref::s1_at_1, 1e-15);
  EXPECT_EQ(s1.tail.bound, 0);
  auto s2 = theta_eval(ThetaEvaluator::closed_s2(), 1.0, 1e-12);
  EXPECT_NEAR(s2.value.real(), ref::s2_at_1, 1e-14);
}

TEST(ClosedForms, SphereIsEven) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-4, 4);
  for (int k = 0; k < 50; ++k) {
    cplx t(u(rng), u(rng));
    if (closed_pole_distance(t) < 0.1) continue;
    EXPECT_NEAR(std::abs(theta_s2(t) - theta_s2(-t)), 0, 1e-12 * std::abs(theta_s2(t)));
  }
}

TEST(ClosedForms, PowerTimesThetaNearOrigin) {
  cplx t(1e-7, 2e-7);
  EXPECT_NEAR(std::abs(t_pow_theta_closed(ThetaKind::closed_s1, t, 1) - 2.0), 0, 1e-6);
  EXPECT_NEAR(std::abs(t_pow_theta_closed(ThetaKind::closed_s2, t, 2) - 2.0), 0, 1e-12);
  cplx w(0.8, 0.3);
  EXPECT_NEAR(std::abs(t_pow_theta_closed(ThetaKind::closed_s2, w, 2) - w * w * theta_s2(w)), 0,
              1e-13);
}

TEST(SpectralTheta, StoredPrefixWithWeylTail) {
  auto sp = circle(60, false);
  auto v = theta_eval(ThetaEvaluator::spectral_rho(sp), 1.0, 1e-12);
  EXPECT_EQ(v.tail.method, TailBound::Method::weyl_integral);
  EXPECT_LE(std::abs(v.value.real() - ref::s1_at_1), v.tail.bound + 1e-15);
  EXPECT_LE(v.tail.bound, 1e-12);
}

TEST(SpectralTheta, InsufficientSpectrumWhenTailTooLarge) {
  auto sp = circle(5, false);
  EXPECT_THROW(theta_eval(ThetaEvaluator::spectral_rho(sp), 0.2, 1e-12), InsufficientSpectrum);
}

TEST(SpectralTheta, RootLawReachesSmallRealPart) {
  auto sp = circle(10, true);
  auto v = theta_eval(ThetaEvaluator::spectral_rho(sp), 0.01, 1e-10);
  EXPECT_NEAR(v.value.real(), ref::s1_at_001, 1e-10);
  EXPECT_LE(std::abs(v.value.real() - ref::s1_at_001), v.tail.bound + 1e-12);
}

TEST(SpectralTheta, LambdaVariant) {
  auto sp = circle(40, false);
  auto v = theta_eval(ThetaEvaluator::spectral_lambda(sp), 0.3, 1e-12);
  EXPECT_NEAR(v.value.real(), ref::s1_lambda_at_03, 1e-13);
}

TEST(SpectralTheta, DomainError) {
  auto sp = circle(10, true);
  EXPECT_THROW(theta_eval(ThetaEvaluator::spectral_rho(sp), cplx(-0.1, 1), 1e-8), DomainError);
  auto sh = ThetaEvaluator::shifted(ThetaEvaluator::spectral_rho(sp), -1);
  EXPECT_NO_THROW(theta_eval(sh, cplx(-0.5, 1), 1e-8));
  EXPECT_THROW(theta_eval(sh, cplx(-1.5, 1), 1e-8), DomainError);
  EXPECT_THROW(theta_eval(ThetaEvaluator::closed_s1(), cplx(0, 2 * pi), 1e-8), DomainError);
}

TEST(SpectralTheta, ShiftedMatchesClosed) {
  auto sp = circle(20, true);
  auto sh = ThetaEvaluator::shifted(ThetaEvaluator::spectral_rho(sp), -1);
  auto v = theta_eval(sh, cplx(0.3, 0.4), 1e-12);
  EXPECT_NEAR(std::abs(v.value - theta_s1(cplx(1.3, 0.4))), 0, 1e-13);
}

TEST(ThetaDerivative, SpectralCircle) {
  auto ev = ThetaEvaluator::spectral_rho(circle(60, false));
  EXPECT_NEAR(theta_derivative(ev, 0, 1), ref::s1_at_1, 1e-13);
  EXPECT_NEAR(theta_derivative(ev, 1, 1), ref::s1_d1_at_1, 1e-13);
  EXPECT_NEAR(theta_derivative(ev, 2, 1), ref::s1_d2_at_1, 1e-13);
}

TEST(ThetaDerivative, HighOrderSpectralAndClosedAgree) {
  auto ev = ThetaEvaluator::spectral_rho(circle(30, true));
  EXPECT_NEAR(theta_derivative(ev, 7, 0.7) / ref::s1_d7_at_07, 1, 1e-13);
  EXPECT_NEAR(theta_derivative(ThetaEvaluator::closed_s1(), 7, 0.7) / ref::s1_d7_at_07, 1, 1e-11);
  EXPECT_NEAR(theta_derivative(ThetaEvaluator::closed_s2(), 5, 1.5) / ref::s2_d5_at_15, 1, 1e-11);
  auto sphere = ThetaEvaluator::spectral_rho(std::make_shared<const Spectrum>(Spectrum::sphere(8)));
  EXPECT_NEAR(theta_derivative(sphere, 5, 1.5) / ref::s2_d5_at_15, 1, 1e-12);
}

TEST(ThetaDerivative, OrderLimit) {
  EXPECT_THROW(theta_derivative(ThetaEvaluator::closed_s1(), kMaxThetaOrder + 1, 1), DomainError);
}

// Property: tail bound is nonincreasing in the truncation index.
TEST(SpectralTheta, MonotoneTail) {
  auto ev = ThetaEvaluator::spectral_rho(circle(60, false));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> re(0.2, 3), im(-5, 5);
  for (int trial = 0; trial < 20; ++trial) {
    cplx t(re(rng), im(rng));
    double prev = std::numeric_limits<double>::infinity();
    for (long N = 0; N <= 120; N += 4) {
      auto v = theta_eval_truncated(ev, t, N);
      EXPECT_LE(v.tail.bound, prev * (1 + 1e-12)) << t << " N=" << N;
      EXPECT_LE(std::abs(v.value - theta_s1(t)), v.tail.bound + 1e-13);
      prev = v.tail.bound;
    }
  }
}

// Property: |Theta(t)| <= (r + Theta(delta/2)) e^{-rho_1 Re t} for
// Re t > delta, where r counts eigenvalues with rho_n = rho_1.
TEST(SpectralTheta, ExponentialDecay) {
  auto sp = circle(60, true);
  auto ev = ThetaEvaluator::spectral_rho(sp);
  const double delta = 0.3;
  double r = 2;
  double c = r + theta_eval(ev, delta / 2, 1e-9).value.real();
  for (double x = 0.31; x < 8; x += 0.37)
    for (double y = -6; y <= 6; y += 1.3) {
      double v = std::abs(theta_eval(ev, cplx(x, y), 1e-9).value);
      EXPECT_LE(v, c * std::exp(-sp->roots()[0] * x));
    }
}

// Property: spectral and closed forms agree at 100 random points.
TEST(SpectralTheta, AgreesWithClosedForm) {
  auto ev = ThetaEvaluator::spectral_rho(circle(400, false));
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> re(0.1, 5), im(-10, 10);
  for (int k = 0; k < 100; ++k) {
    cplx t(re(rng), im(rng));
    auto v = theta_eval(ev, t, 1e-6);
    EXPECT_LE(std::abs(v.value - theta_s1(t)), v.tail.bound + 1e-12 * std::abs(theta_s1(t)));
  }
}

TEST(SpectralTheta, DecaysAtInfinity) {
  auto ev = ThetaEvaluator::spectral_rho(circle(10, true));
  EXPECT_LT(std::abs(theta_eval(ev, 60.0, 1e-12).value), 1e-25);
  EXPECT_LT(std::abs(theta_eval(ThetaEvaluator::closed_s2(), 80.0, 1e-12).value), 1e-16);
}

TEST(Loading, SpectrumCsv) {
  auto sp = parse_spectrum("1.0\n4.0\n9.0\n", R"({"dimension": 1})");
  ASSERT_EQ(sp.size(), 3u);
  EXPECT_EQ(sp.eigenvalues()[2], 9.0);
  EXPECT_EQ(sp.roots()[1], 2.0);
  EXPECT_EQ(sp.dimension(), 1);
  auto with_header = parse_spectrum("lambda\n1\n2\n", R"({"dimension": 2, "shift": 0.5})");
  EXPECT_EQ(with_header.size(), 2u);
  EXPECT_EQ(with_header.shift(), 0.5);
}

TEST(Loading, NegativeEigenvalueIsValidationError) {
  try {
    parse_spectrum("1.0\n-4.0\n", R"({"dimension": 1})");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.invariant, "positivity");
  }
  EXPECT_THROW(parse_spectrum("4.0\n1.0\n", R"({"dimension": 1})"), ValidationError);
}

TEST(Loading, ParseErrorCarriesLine) {
  try {
    parse_spectrum("1.0\n4.0\nabc\n", R"({"dimension": 1})");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 3);
  }
  EXPECT_THROW(parse_spectrum("1.0\n", "{not json"), ParseError);
}

TEST(Loading, LengthSpectrumFoldsMultiplicity) {
  auto ls = parse_length_spectrum("2.0,1\n2.5,1\n3.1,2\n", R"({"genus": 2})");
  ASSERT_EQ(ls.lengths().size(), 3u);
  EXPECT_EQ(ls.multiplicities()[2], 2);
  auto folded = parse_length_spectrum("3.1,1\n2.0,1\n3.1,1\n", R"({"genus": 3})");
  ASSERT_EQ(folded.lengths().size(), 2u);
  EXPECT_EQ(folded.multiplicities()[1], 2);
  EXPECT_EQ(folded.genus(), 3);
  EXPECT_THROW(parse_length_spectrum("2.0,1\n", R"({"genus": 1})"), ValidationError);
}

TEST(Loading, WeylDeviationReported) {
  auto sp = Spectrum::circle(50);
  ASSERT_TRUE(sp.weyl_deviation());
  EXPECT_NEAR(*sp.weyl_deviation(), 0.75, 1e-15);  // n = 1: lambda = 1 vs 1/4
}
