#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "adabb/stepsize.hpp"

using namespace adabb;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrt2 = std::sqrt(2.0);
}  // namespace

TEST_CASE("theta0_init branches") {
  // lambda_1 >= sqrt(2) alpha_0: theta_0 = lambda^2/(2 alpha^2) - 1.
  CHECK(theta0_init(2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  // below the threshold: 0.
  CHECK(theta0_init(1.0, 1.0) == 0.0);
  // exactly at the threshold both branches agree at 0.
  CHECK(theta0_init(kSqrt2, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
  // degenerate first secant pair.
  CHECK(theta0_init(kInf, 1.0) == 0.0);
  CHECK_THROWS_AS(theta0_init(1.0, 0.0), InvalidState);
}

TEST_CASE("theta0_init makes alpha_1 = lambda_1/sqrt(2) via Case i") {
  const double lam = 2.0, a0 = 1.0;
  const double th0 = theta0_init(lam, a0);
  auto d = adabb_step(lam, a0, th0, StepOption::II, StepOption::II);
  CHECK(d.case_tag == CaseTag::CaseI);
  CHECK(std::abs(d.alpha_k - lam / kSqrt2) <= 1e-15 * lam);

  // benchmark-protocol magnitudes: tiny alpha_0.
  const double a0s = 1e-10, lams = 0.37;
  const double th0s = theta0_init(lams, a0s);
  auto ds = adabb_step(lams, a0s, th0s, StepOption::II, StepOption::II);
  CHECK(std::abs(ds.alpha_k - lams / kSqrt2) <= 1e-12 * lams);
}

TEST_CASE("adabb Case i") {
  auto d = adabb_step(1.0, 0.5, 1.0, StepOption::II, StepOption::II);
  CHECK(d.case_tag == CaseTag::CaseI);
  CHECK(d.alpha_k == doctest::Approx(0.5 * kSqrt2).epsilon(1e-15));
  CHECK(d.theta_k == doctest::Approx(kSqrt2).epsilon(1e-15));
  // tie lambda = alpha_prev belongs to Case i.
  auto t = adabb_step(0.5, 0.5, 0.0, StepOption::II, StepOption::II);
  CHECK(t.case_tag == CaseTag::CaseI);
  CHECK(t.alpha_k == doctest::Approx(0.5).epsilon(1e-15));
  // degenerate lambda = +inf routes to Case i.
  auto g = adabb_step(kInf, 2.0, 3.0, StepOption::I, StepOption::I);
  CHECK(g.case_tag == CaseTag::CaseI);
  CHECK(g.alpha_k == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("adabb Case ii Option II") {
  auto d = adabb_step(0.75, 1.0, 1.0, StepOption::II, StepOption::II);
  CHECK(d.case_tag == CaseTag::CaseII);
  CHECK(d.alpha_k == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(d.theta_k == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("adabb Case ii Option I") {
  // min{sqrt(1.5), sqrt(3)} * 1 = sqrt(1.5); theta = 2a - a/0.75.
  auto d = adabb_step(0.75, 1.0, 1.0, StepOption::I, StepOption::II);
  CHECK(d.case_tag == CaseTag::CaseII);
  CHECK(d.alpha_k == doctest::Approx(1.224744871391589).epsilon(1e-15));
  CHECK(d.theta_k == doctest::Approx(0.816496580927726).epsilon(1e-14));
}

TEST_CASE("adabb Case iii Option II") {
  auto d = adabb_step(0.4, 1.0, 0.7, StepOption::II, StepOption::II);
  CHECK(d.case_tag == CaseTag::CaseIII);
  CHECK(d.alpha_k == doctest::Approx(0.4 / kSqrt2).epsilon(1e-15));
  CHECK(d.theta_k == doctest::Approx(0.4 / kSqrt2).epsilon(1e-15));
  // tie lambda = alpha_prev/2 belongs to Case iii.
  auto t = adabb_step(0.5, 1.0, 0.0, StepOption::II, StepOption::II);
  CHECK(t.case_tag == CaseTag::CaseIII);
}

TEST_CASE("adabb Case iii Option I") {
  // sqrt(1/(2*0.6)) * 0.4 = 0.4/sqrt(1.2).
  auto d = adabb_step(0.4, 1.0, 0.7, StepOption::II, StepOption::I);
  CHECK(d.case_tag == CaseTag::CaseIII);
  CHECK(d.alpha_k == doctest::Approx(0.36514837167011077).epsilon(1e-15));
  CHECK(d.theta_k == doctest::Approx(0.36514837167011077).epsilon(1e-15));
}

TEST_CASE("adabb invalid inputs") {
  CHECK_THROWS_AS(adabb_step(1.0, 0.0, 1.0, StepOption::II, StepOption::II),
                  InvalidState);
  CHECK_THROWS_AS(adabb_step(0.0, 1.0, 1.0, StepOption::II, StepOption::II),
                  InvalidState);
  CHECK_THROWS_AS(adabb_step(1.0, 1.0, -0.5, StepOption::II, StepOption::II),
                  InvalidState);
}

TEST_CASE("option dominance: Option II <= Option I in Cases ii and iii") {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const double a_prev = std::exp(ud(rng) * 8.0 - 4.0);
    const double theta_prev = ud(rng) * 5.0;
    // Case ii: lambda in (a_prev/2, a_prev).
    {
      const double lam = a_prev * (0.5 + 0.5 * ud(rng));
      if (lam > 0.5 * a_prev && lam < a_prev) {
        auto d1 = adabb_step(lam, a_prev, theta_prev, StepOption::I,
                             StepOption::II);
        auto d2 = adabb_step(lam, a_prev, theta_prev, StepOption::II,
                             StepOption::II);
        CHECK(d2.alpha_k <= d1.alpha_k);
      }
    }
    // Case iii: lambda in (0, a_prev/2].
    {
      const double lam = a_prev * 0.5 * (ud(rng) * 0.999 + 0.001);
      auto d1 =
          adabb_step(lam, a_prev, theta_prev, StepOption::II, StepOption::I);
      auto d2 =
          adabb_step(lam, a_prev, theta_prev, StepOption::II, StepOption::II);
      CHECK(d2.alpha_k <= d1.alpha_k);
    }
  }
}

TEST_CASE("adabb case exhaustiveness") {
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double a_prev = std::exp(ud(rng) * 10.0 - 5.0);
    const double lam = std::exp(ud(rng) * 10.0 - 5.0);
    auto d = adabb_step(lam, a_prev, ud(rng), StepOption::II, StepOption::II);
    if (lam >= a_prev)
      CHECK(d.case_tag == CaseTag::CaseI);
    else if (lam > 0.5 * a_prev)
      CHECK(d.case_tag == CaseTag::CaseII);
    else
      CHECK(d.case_tag == CaseTag::CaseIII);
    CHECK(d.alpha_k > 0.0);
    CHECK(d.theta_k >= 0.0);
  }
}

TEST_CASE("adabb_sc branches") {
  // eta=0.5, delta=1.5.
  auto a = adabb_sc_step(2.0, 1.0, 1.0, 0.5, 1.5);
  CHECK(a.case_tag == CaseTag::CaseI);
  CHECK(a.alpha_k == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
  CHECK(a.alpha_k <= 2.0);

  auto b = adabb_sc_step(0.9, 1.0, 0.3, 0.5, 1.5);
  CHECK(b.case_tag == CaseTag::CaseII);
  CHECK(b.alpha_k == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(b.theta_k == doctest::Approx(0.8).epsilon(1e-15));

  auto c = adabb_sc_step(0.5, 1.0, 0.3, 0.5, 1.5);
  CHECK(c.case_tag == CaseTag::CaseIII);
  CHECK(c.alpha_k == doctest::Approx(0.5 / kSqrt2).epsilon(1e-15));

  // Case-i cap: alpha <= lambda.
  auto d = adabb_sc_step(1.05, 1.0, 5.0, 0.9, 1.5);
  CHECK(d.alpha_k == doctest::Approx(1.05).epsilon(1e-15));

  CHECK_THROWS_AS(adabb_sc_step(1.0, 1.0, 0.0, 1.0, 1.5), InvalidState);
  CHECK_THROWS_AS(adabb_sc_step(1.0, 1.0, 0.0, 0.5, 2.0), InvalidState);
}

TEST_CASE("adabb_sc alpha <= lambda always") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (int trial = 0; trial < 5000; ++trial) {
    const double a_prev = std::exp(ud(rng) * 8.0 - 4.0);
    const double lam = std::exp(ud(rng) * 8.0 - 4.0);
    const double eta = ud(rng) * 0.99;
    const double delta = 1.0 + 1e-6 + ud(rng) * (1.0 - 2e-6);
    auto d = adabb_sc_step(lam, a_prev, ud(rng) * 3.0, eta, delta);
    CHECK(d.alpha_k <= lam * (1.0 + 1e-15));
  }
}

TEST_CASE("adapbb branches") {
  auto a = adapbb_step(2.0, 1.0, 1.0);
  CHECK(a.case_tag == CaseTag::CaseI);
  CHECK(a.alpha_k == doctest::Approx(kSqrt2).epsilon(1e-15));
  CHECK(a.theta_k == doctest::Approx(kSqrt2).epsilon(1e-15));

  auto b = adapbb_step(0.75, 1.0, 1.0);
  CHECK(b.case_tag == CaseTag::CaseII);
  CHECK(b.alpha_k == doctest::Approx(1.0 / kSqrt2).epsilon(1e-15));
  CHECK(b.theta_k == 0.0);

  auto c = adapbb_step(0.4, 1.0, 1.0);
  CHECK(c.case_tag == CaseTag::CaseIII);
  CHECK(c.alpha_k == doctest::Approx(0.4 / kSqrt2).epsilon(1e-15));
  CHECK(c.theta_k == 0.0);
}

TEST_CASE("baseline AdGD") {
  auto c = Controller::baseline(ControllerKind::AdGD);
  auto d = baseline_step(c, 1.0, 1.0, 1.0, 1.0, 1.0);
  CHECK(d.alpha_k == doctest::Approx(1.0 / kSqrt2).epsilon(1e-15));
  CHECK(d.theta_k == doctest::Approx(1.0 / kSqrt2).epsilon(1e-15));
  CHECK(d.case_tag == CaseTag::CaseII);
  // degenerate: curvature term +inf, growth wins.
  auto g = baseline_step(c, kInf, kInf, 0.0, 1.0, 1.0);
  CHECK(g.alpha_k == doctest::Approx(kSqrt2).epsilon(1e-15));
  CHECK(g.case_tag == CaseTag::CaseI);
}

TEST_CASE("baseline AdGD2") {
  auto c = Controller::baseline(ControllerKind::AdGD2);
  // min{sqrt(2/3 + 1/3)*1, 1/sqrt(2-1)} = 1 (tie -> growth term).
  auto d = baseline_step(c, 1.0, 1.0, 1.0, 1.0, 1.0 / 3.0);
  CHECK(d.alpha_k == doctest::Approx(1.0).epsilon(1e-15));
  // zero bracket: 2 a^2 L^2 <= 1 makes the curvature term +inf.
  auto z = baseline_step(c, 1.0, 1.0, 0.5, 1.0, 1.0 / 3.0);
  CHECK(z.alpha_k == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(z.case_tag == CaseTag::CaseI);
}

TEST_CASE("baseline AdaPGM") {
  auto c = Controller::baseline(ControllerKind::AdaPGM);
  // min{sqrt(2), 1/(2 sqrt(0.5))} = 1/sqrt(2).
  auto d = baseline_step(c, 0.5, 2.0, std::sqrt(2.5) /*unused*/, 1.0, 1.0);
  CHECK(d.alpha_k == doctest::Approx(1.0 / kSqrt2).epsilon(1e-15));
  CHECK(d.case_tag == CaseTag::CaseII);
  // lambda >= alpha_prev: bracket <= 0, growth wins.
  auto g = baseline_step(c, 2.0, 2.5, 0.5, 1.0, 0.0);
  CHECK(g.alpha_k == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g.case_tag == CaseTag::CaseI);
}

TEST_CASE("baseline AdaPGM_PiR defaults match sqrt(2) x AdaPGM curvature") {
  // pi=1, r=1/2: second term = sqrt((1/2)/[a^2 L^2 - a/beta]) * a.
  // With 1/L^2 = lambda beta the bracket equals (a/beta)(a/lambda - 1)... x2.
  auto pgm = Controller::baseline(ControllerKind::AdaPGM);
  auto pir = Controller::baseline(ControllerKind::AdaPGM_PiR);
  std::mt19937 rng(55);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double a_prev = std::exp(ud(rng) * 4.0 - 2.0);
    const double lam = a_prev * (0.05 + 0.9 * ud(rng));  // force curvature term
    const double bet = lam * (1.0 + ud(rng));            // beta >= lambda
    const double lk = 1.0 / std::sqrt(lam * bet);
    const double big = 1e9;  // giant theta so the growth term never wins
    auto d1 = baseline_step(pgm, lam, bet, lk, a_prev, big);
    auto d2 = baseline_step(pir, lam, bet, lk, a_prev, big);
    CHECK(d2.alpha_k == doctest::Approx(kSqrt2 * d1.alpha_k).epsilon(1e-10));
  }
}

TEST_CASE("baseline parameter validation") {
  auto c = Controller::baseline(ControllerKind::AdaPGM_PiR);
  c.pi = 0.5;
  c.r = 0.5;
  CHECK_THROWS_AS(baseline_step(c, 1.0, 1.0, 1.0, 1.0, 0.0), InvalidState);
  auto f = Controller::fixed(0.1);
  CHECK_THROWS_AS(baseline_step(f, 1.0, 1.0, 1.0, 1.0, 0.0), InvalidState);
}

TEST_CASE("controller_name variant map") {
  CHECK(controller_name(Controller::adabb()) == "adabb");
  CHECK(controller_name(Controller::adabb(StepOption::I, StepOption::I)) ==
        "adabb1");
  CHECK(controller_name(Controller::adabb(StepOption::I, StepOption::II)) ==
        "adabb2");
  CHECK(controller_name(Controller::adabb(StepOption::II, StepOption::I)) ==
        "adabb3");
  CHECK(controller_name(Controller::baseline(ControllerKind::BB_GLL)) ==
        "bb_gll");
}
