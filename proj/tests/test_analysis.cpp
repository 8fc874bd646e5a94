#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qmboot/analysis.hpp"
#include "qmboot/errors.hpp"

using namespace qmboot;

// Reference values computed with mpmath at 40 digits and frozen.

TEST_CASE("erfcx against high-precision references") {
  const struct {
    double z, v;
  } ref[] = {{-5.0, 144009798674.66104},
             {-4.5, 1245928884.2744062},
             {-4.0, 17772220.904016288},
             {-3.5, 417962.42244577031},
             {-3.0, 16205.988853999587},
             {-2.5, 1035.8148429726229},
             {-2.0, 108.94090438997797},
             {-1.5, 18.653886256262734},
             {-1.0, 5.0089800807622835},
             {-0.5, 1.9523604891825571},
             {0.0, 1.0},
             {0.5, 0.61569034419292587},
             {1.0, 0.427583576155807},
             {1.5, 0.3215854164543175},
             {2.0, 0.25539567631050574},
             {2.5, 0.21080636406114358},
             {3.0, 0.17900115118138995},
             {3.5, 0.1552936556088943},
             {4.0, 0.13699945762506139},
             {4.5, 0.12248480427384142},
             {5.0, 0.11070463773306863}};
  for (const auto& r : ref) {
    CAPTURE(r.z);
    CHECK(erfcx(r.z) == doctest::Approx(r.v).epsilon(1e-12));
  }
  // large argument: erfcx(z) ~ 1/(z sqrt(pi))
  CHECK(erfcx(50.0) == doctest::Approx(1.0 / (50.0 * std::sqrt(std::numbers::pi))).epsilon(1e-3));
  CHECK(erfcx(1e4) == doctest::Approx(1.0 / (1e4 * std::sqrt(std::numbers::pi))).epsilon(1e-7));
}

TEST_CASE("erfcx reflection: erfcx(-z) = 2 exp(z^2) - erfcx(z)") {
  for (double z : {0.3, 1.0, 2.2, 3.7}) {
    CAPTURE(z);
    CHECK(erfcx(-z) == doctest::Approx(2 * std::exp(z * z) - erfcx(z)).epsilon(1e-12));
  }
}

TEST_CASE("one-loop energy against high-precision references") {
  const struct {
    double g, v;
  } ref[] = {{0.5, 0.77620488929219195},
             {1.0, 1.0255582905852849},
             {5.0, 1.6263298654349291},
             {10.0, 2.2477111906161876},
             {40.0, 4.4728668693607286}};
  for (const auto& r : ref) {
    CAPTURE(r.g);
    CHECK(oneloop_E0(r.g) == doctest::Approx(r.v).epsilon(5e-12));
  }
  CHECK_THROWS_AS(oneloop_E0(0.0), InputError);
  CHECK_THROWS_AS(oneloop_E0(-1.0), InputError);
}

TEST_CASE("one-term asymptotics is the harmonic energy plus the 1/g^2 correction") {
  const double lead = 3 * std::sqrt(1.5) / std::numbers::pi;
  CHECK(lead / 100.0 == doctest::Approx(0.011695452018505142).epsilon(1e-15));
  for (double g : {5.0, 10.0, 40.0}) {
    CAPTURE(g);
    CHECK(oneloop_asymptotic(g, 1) ==
          doctest::Approx(std::sqrt(g / 2) + lead / (g * g)).epsilon(1e-15));
  }
  CHECK(oneloop_asymptotic(10.0, 1) == doctest::Approx(2.2477634295182948).epsilon(1e-14));
  CHECK(oneloop_asymptotic(40.0, 1) == doctest::Approx(4.472866920750736).epsilon(1e-14));
  CHECK_THROWS_AS(oneloop_asymptotic(4.9, 1), InputError);
  CHECK_THROWS_AS(oneloop_asymptotic(10.0, 0), InputError);
  CHECK_THROWS_AS(oneloop_asymptotic(10.0, 6), InputError);
}

TEST_CASE("asymptotic residual scales like g^-5") {
  const struct {
    double g, r;
  } ref[] = {{10.0, -5.2238902e-5}, {20.0, -1.6431331e-6}, {40.0, -5.1390007e-8}};
  double prev = 0.0;
  for (const auto& x : ref) {
    CAPTURE(x.g);
    double r = oneloop_E0(x.g) - oneloop_asymptotic(x.g, 1);
    CHECK(r == doctest::Approx(x.r).epsilon(1e-3));
    if (prev != 0.0) {
      double ratio = r / prev;  // doubling g should shrink the residual ~2^-5
      CHECK(ratio > 0.02);
      CHECK(ratio < 0.1);
    }
    prev = r;
  }
  // the two-term expansion lands closer than the one-term one
  for (double g : {10.0, 40.0})
    CHECK(std::abs(oneloop_E0(g) - oneloop_asymptotic(g, 2)) <
          std::abs(oneloop_E0(g) - oneloop_asymptotic(g, 1)));
}

TEST_CASE("oneloop_curve marks the asymptotics NaN below its validity edge") {
  OneLoopCurve c = oneloop_curve({1.0, 5.0, 10.0});
  REQUIRE(c.g.size() == 3);
  REQUIRE(c.E0.size() == 3);
  REQUIRE(c.asym1.size() == 3);
  CHECK(std::isnan(c.asym1[0]));
  CHECK(c.asym1[1] == doctest::Approx(oneloop_asymptotic(5.0, 1)));
  CHECK(c.E0[2] == doctest::Approx(oneloop_E0(10.0)));
}

TEST_CASE("gap formula values and guards") {
  FitParams p;
  p.a = p.b = p.c = p.d = 1.0;
  p.anchor = 1.0;
  CHECK(gap_formula(1.0, p) == doctest::Approx(0.53788284273999024).epsilon(1e-15));
  CHECK(gap_formula(0.0, p) == 1.0);  // exactly the anchor
  CHECK_THROWS_AS(gap_formula(-0.1, p), InputError);
  // monotone decreasing for these parameters
  double last = gap_formula(0.0, p);
  for (double g = 0.25; g <= 4.0; g += 0.25) {
    double v = gap_formula(g, p);
    CHECK(v < last);
    last = v;
  }
}

namespace {

GapCurve synthetic_curve(const FitParams& p, double unc) {
  GapCurve c;
  c.n = 2;
  c.depth = 13;
  c.tol = 1e-9;
  for (int i = 0; i <= 25; ++i) {
    GapSample s;
    s.g = 0.2 * i;
    s.gap_anharmonic = gap_formula(s.g, p);
    s.gap_raw = s.gap_anharmonic + (s.g > 0 ? std::sqrt(2 * s.g) : 0.0);
    s.uncertainty = unc;
    c.samples.push_back(s);
  }
  return c;
}

}  // namespace

TEST_CASE("noiseless synthetic curves refit to their generating parameters") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uac(0.01, 2.0), ubd(0.3, 2.5);
  for (int draw = 0; draw < 3; ++draw) {
    FitParams truth;
    truth.a = uac(rng);
    truth.c = uac(rng);
    truth.b = ubd(rng);
    truth.d = ubd(rng);
    truth.anchor = 0.9;
    CAPTURE(truth.a);
    CAPTURE(truth.b);
    CAPTURE(truth.c);
    CAPTURE(truth.d);
    FitParams fit = fit_gap(synthetic_curve(truth, 1e-6));
    CHECK(fit.starts_converged > 0);
    CHECK(std::abs(fit.a - truth.a) / truth.a < 1e-6);
    CHECK(std::abs(fit.b - truth.b) / truth.b < 1e-6);
    CHECK(std::abs(fit.c - truth.c) / truth.c < 1e-6);
    CHECK(std::abs(fit.d - truth.d) / truth.d < 1e-6);
    CHECK(fit.anchor == 0.9);
    CHECK(fit.rms < 1e-7);
  }
}

TEST_CASE("rescaling every uncertainty leaves the fit unchanged") {
  FitParams truth;
  truth.a = 0.88;
  truth.b = 0.52;
  truth.c = 0.015;
  truth.d = 1.9;
  truth.anchor = 0.9;
  FitParams f1 = fit_gap(synthetic_curve(truth, 1e-4));
  FitParams f7 = fit_gap(synthetic_curve(truth, 7e-4));
  CHECK(f1.a == doctest::Approx(f7.a).epsilon(1e-10));
  CHECK(f1.b == doctest::Approx(f7.b).epsilon(1e-10));
  CHECK(f1.c == doctest::Approx(f7.c).epsilon(1e-10));
  CHECK(f1.d == doctest::Approx(f7.d).epsilon(1e-10));
}

TEST_CASE("fit input validation") {
  FitParams p;
  p.a = 1.0;
  p.b = 0.5;
  p.c = 0.1;
  p.d = 1.5;
  p.anchor = 0.9;
  GapCurve good = synthetic_curve(p, 1e-6);

  GapCurve negative = good;
  negative.samples[3].g = -0.5;
  CHECK_THROWS_AS(fit_gap(negative), InputError);

  GapCurve unanchored = good;
  unanchored.samples.erase(unanchored.samples.begin());
  CHECK_THROWS_AS(fit_gap(unanchored), InputError);

  GapCurve sparse = good;
  sparse.samples.resize(5);  // anchor + 4 positive samples
  CHECK_THROWS_AS(fit_gap(sparse), InputError);

  std::vector<std::array<double, 4>> few(7, {1.0, 1.0, 1.0, 1.0});
  CHECK_THROWS_AS(fit_gap(good, few), InputError);

  std::vector<std::array<double, 4>> bad(9, {1.0, 1.0, 1.0, 1.0});
  bad[2][1] = 0.0;
  CHECK_THROWS_AS(fit_gap(good, bad), InputError);
}

TEST_CASE("default fit starts: 81 strictly positive corners") {
  auto starts = default_fit_starts();
  CHECK(starts.size() == 81);
  for (const auto& s : starts)
    for (double v : s) CHECK(v > 0);
}
