#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "svine/margins.hpp"
#include "svine/math.hpp"
#include "svine/rng.hpp"

using namespace svine;
using Eigen::VectorXd;

namespace {

MarginalModel skew_t(double mu, double sigma, double nu, double gamma) {
  MarginalModel m;
  m.kind = MarginKind::SkewedStudent;
  m.mu = mu;
  m.sigma = sigma;
  m.nu = nu;
  m.gamma = gamma;
  return m;
}

VectorXd simulate_margin(const MarginalModel& m, int n, std::uint64_t seed) {
  CounterRng rng(seed);
  VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = margin_quantile(m, rng.next());
  return x;
}

}  // namespace

TEST_CASE("skewed Student reference values") {
  const MarginalModel m = skew_t(0.0, 1.0, 5.0, 1.5);
  CHECK(margin_pdf(m, 0.7) ==
        doctest::Approx(0.30833656349989399381).epsilon(1e-12));
  CHECK(margin_pdf(m, -0.7) ==
        doctest::Approx(0.19273402886815684759).epsilon(1e-12));
  CHECK(margin_cdf(m, 0.7) ==
        doctest::Approx(0.54282397379152345806).epsilon(1e-12));
  CHECK(margin_cdf(m, -1.1) ==
        doctest::Approx(0.04918638894864547822).epsilon(1e-12));
  CHECK(margin_cdf(m, 0.0) ==
        doctest::Approx(0.30769230769230769231).epsilon(1e-13));
  CHECK(margin_quantile(m, 0.3) ==
        doctest::Approx(-0.021957308554098009675).epsilon(1e-10));
  CHECK(margin_quantile(m, 0.9) ==
        doctest::Approx(2.5929598094409288134).epsilon(1e-10));
}

TEST_CASE("skewed Student reduces to Student t at gamma = 1") {
  const MarginalModel m = skew_t(0.3, 1.7, 6.0, 1.0);
  for (double x : {-2.0, -0.4, 0.3, 1.1, 4.0}) {
    const double s = (x - 0.3) / 1.7;
    CHECK(margin_pdf(m, x) ==
          doctest::Approx(math::t_pdf(s, 6.0) / 1.7).epsilon(1e-13));
    CHECK(margin_cdf(m, x) == doctest::Approx(math::t_cdf(s, 6.0)).epsilon(1e-13));
  }
}

TEST_CASE("margin densities integrate to one") {
  for (const MarginalModel& m :
       {skew_t(0.0, 1.0, 5.0, 1.5), skew_t(-1.0, 0.5, 3.0, 0.6),
        skew_t(2.0, 3.0, 12.0, 2.5)}) {
    const double lo = margin_quantile(m, 1e-10);
    const double hi = margin_quantile(m, 1.0 - 1e-10);
    const double mass = math::integrate(
        [&](double x) { return margin_pdf(m, x); }, lo, hi, 1e-9);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("quantile and cdf cancel") {
  for (const MarginalModel& m :
       {skew_t(0.0, 1.0, 5.0, 1.5), skew_t(1.0, 2.0, 4.0, 0.7)}) {
    for (int i = 1; i <= 40; ++i) {
      const double p = i / 41.0;
      CHECK(margin_cdf(m, margin_quantile(m, p)) ==
            doctest::Approx(p).epsilon(1e-8));
    }
  }
  MarginalModel normal;
  normal.kind = MarginKind::Normal;
  normal.mu = -2.0;
  normal.sigma = 0.7;
  for (double p : {0.001, 0.25, 0.5, 0.97}) {
    CHECK(margin_cdf(normal, margin_quantile(normal, p)) ==
          doctest::Approx(p).epsilon(1e-10));
  }
}

TEST_CASE("normal margin fit is the analytic MLE") {
  const VectorXd x = simulate_margin(skew_t(0.0, 1.0, 8.0, 1.0), 500, 3);
  const MarginalModel m = fit_margin(x, MarginKind::Normal);
  CHECK(m.mu == doctest::Approx(x.mean()).epsilon(1e-14));
  CHECK(m.sigma ==
        doctest::Approx(std::sqrt((x.array() - x.mean()).square().mean()))
            .epsilon(1e-14));
  double ll = 0.0;
  for (int i = 0; i < 500; ++i) ll += margin_log_pdf(m, x[i]);
  CHECK(m.loglik == doctest::Approx(ll).epsilon(1e-12));
}

TEST_CASE("empirical margin") {
  SUBCASE("cdf at sample points reproduces average ranks") {
    VectorXd x(3);
    x << 3.0, 1.0, 2.0;
    const MarginalModel m = fit_margin((VectorXd(10) << 3, 1, 2, 5, 6, 7, 8, 9,
                                        10, 11)
                                           .finished(),
                                       MarginKind::Empirical);
    CHECK(margin_cdf(m, 1.0) == doctest::Approx(1.0 / 11.0));
    CHECK(margin_cdf(m, 3.0) == doctest::Approx(3.0 / 11.0));
    // tied pair averages its ranks: (1+2)/2 / (n+1)
    VectorXd t(10);
    t << 4, 4, 7, 9, 11, 13, 15, 17, 19, 21;
    const MarginalModel mt = fit_margin(t, MarginKind::Empirical);
    CHECK(margin_cdf(mt, 4.0) == doctest::Approx(1.5 / 11.0));
    CHECK(margin_cdf(mt, 5.0) == doctest::Approx(2.5 / 11.0));  // off-sample
  }

  SUBCASE("quantile returns sample values and inverts the cdf") {
    VectorXd x(12);
    for (int i = 0; i < 12; ++i) x[i] = std::sin(3.0 * i) * 5.0;
    const MarginalModel m = fit_margin(x, MarginKind::Empirical);
    for (int i = 0; i < 12; ++i)
      CHECK(margin_quantile(m, margin_cdf(m, x[i])) == x[i]);
  }

  SUBCASE("no density exists") {
    const MarginalModel m =
        fit_margin(VectorXd::LinSpaced(10, 0.0, 1.0), MarginKind::Empirical);
    CHECK_THROWS_AS((void)margin_pdf(m, 0.5), std::invalid_argument);
  }
}

TEST_CASE("validation rejects bad parameters") {
  CHECK_THROWS_AS(validate(skew_t(0.0, -1.0, 5.0, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(validate(skew_t(0.0, 1.0, 2.0, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(validate(skew_t(0.0, 1.0, 5.0, 0.0)), std::invalid_argument);
  CHECK_NOTHROW(validate(skew_t(0.0, 1.0, 5.0, 1.5)));
  MarginalModel e;
  e.kind = MarginKind::Empirical;
  CHECK_THROWS_AS(validate(e), std::invalid_argument);
  CHECK_THROWS_AS((void)fit_margin(VectorXd::Zero(5), MarginKind::Normal),
                  std::invalid_argument);
}

TEST_CASE("skewed Student fit recovers simulation parameters") {
  const MarginalModel truth = skew_t(0.5, 2.0, 5.0, 1.5);
  const int n = 5000;
  const VectorXd x = simulate_margin(truth, n, 77);
  const MarginalModel fit = fit_margin(x, MarginKind::SkewedStudent);

  // fitted likelihood cannot fall below the truth's on the same sample
  double ll_truth = 0.0;
  for (int i = 0; i < n; ++i) ll_truth += margin_log_pdf(truth, x[i]);
  CHECK(fit.loglik >= ll_truth - 1e-6);

  // standard errors from a central-difference Hessian of the negative
  // log-likelihood on the unconstrained scale, delta-method back-transform
  auto nll = [&](const Eigen::Vector4d& raw) {
    MarginalModel c = skew_t(raw[0], std::exp(raw[1]), 2.0 + std::exp(raw[2]),
                             std::exp(raw[3]));
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc -= margin_log_pdf(c, x[i]);
    return acc;
  };
  Eigen::Vector4d raw(fit.mu, std::log(fit.sigma), std::log(fit.nu - 2.0),
                      std::log(fit.gamma));
  const double h = 1e-4;
  Eigen::Matrix4d H;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Eigen::Vector4d pp = raw, pm = raw, mp = raw, mm = raw;
      pp[i] += h; pp[j] += h;
      pm[i] += h; pm[j] -= h;
      mp[i] -= h; mp[j] += h;
      mm[i] -= h; mm[j] -= h;
      H(i, j) = (nll(pp) - nll(pm) - nll(mp) + nll(mm)) / (4.0 * h * h);
    }
  }
  const Eigen::Matrix4d cov = H.inverse();
  const double jac[4] = {1.0, fit.sigma, fit.nu - 2.0, fit.gamma};
  const double target[4] = {truth.mu, truth.sigma, truth.nu, truth.gamma};
  const double got[4] = {fit.mu, fit.sigma, fit.nu, fit.gamma};
  for (int i = 0; i < 4; ++i) {
    const double se = std::sqrt(cov(i, i)) * jac[i];
    CHECK(std::fabs(got[i] - target[i]) < 3.0 * se);
  }
}
