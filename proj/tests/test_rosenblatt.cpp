#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "svine/linear.hpp"
#include "svine/math.hpp"
#include "svine/rng.hpp"
#include "svine/rosenblatt.hpp"

using namespace svine;
using Eigen::VectorXd;

namespace {

// Literal textbook recursion, exponential in the window length. Everything
// the streaming engine produces is checked against this on short windows.
double naive_forward(const CopulaSequence& seq, const VectorXd& u, double x);
double naive_backward(const CopulaSequence& seq, const VectorXd& u, double x);

double naive_forward(const CopulaSequence& seq, const VectorXd& u, double x) {
  const int k = static_cast<int>(u.size());
  if (k == 0) return x;
  const VectorXd rest = u.tail(k - 1);  // drop the oldest value
  return h1(seq.at(k), naive_backward(seq, rest, u[0]),
            naive_forward(seq, rest, x));
}

double naive_backward(const CopulaSequence& seq, const VectorXd& u, double x) {
  const int k = static_cast<int>(u.size());
  if (k == 0) return x;
  const VectorXd rest = u.head(k - 1);  // drop the newest value
  return h2(seq.at(k), naive_backward(seq, rest, x),
            naive_forward(seq, rest, u[k - 1]));
}

// Joint log density as the double product over (lag, time) pairs, each
// factor evaluated with fresh naive recursions.
double naive_log_joint(const CopulaSequence& seq, const VectorXd& u) {
  const int n = static_cast<int>(u.size());
  double acc = 0.0;
  for (int j = 2; j <= n; ++j) {
    const int kmax = std::min(j - 1, seq.truncation_lag);
    for (int k = 1; k <= kmax; ++k) {
      const VectorXd window = u.segment(j - k, k - 1);
      acc += log_density(seq.at(k), naive_backward(seq, window, u[j - k - 1]),
                         naive_forward(seq, window, u[j - 1]));
    }
  }
  return acc;
}

CopulaSequence mixed_sequence(int p, std::uint64_t seed, bool exchangeable_only) {
  CounterRng rng(seed);
  std::vector<PairCopula> cops;
  const Family fams[5] = {Family::Gauss, Family::Clayton, Family::Gumbel,
                          Family::Frank, Family::Joe};
  for (int k = 0; k < p; ++k) {
    const Family f = fams[static_cast<int>(rng.next() * 5.0) % 5];
    double tau = 1.2 * (rng.next() - 0.5);
    if (std::fabs(tau) < 0.02) tau = 0.05;
    if (exchangeable_only && f != Family::Gauss && f != Family::Frank)
      tau = std::fabs(tau);  // keep base (unrotated) versions
    cops.push_back(copula_from_tau(f, tau));
  }
  return CopulaSequence(std::move(cops));
}

VectorXd random_unit(int n, std::uint64_t seed) {
  CounterRng rng(seed);
  VectorXd u(n);
  for (int i = 0; i < n; ++i) u[i] = rng.next();
  return u;
}

CopulaSequence gauss_sequence(const Pacf& pacf) {
  std::vector<PairCopula> cops;
  for (int k = 0; k < pacf.alpha.size(); ++k)
    cops.push_back(gauss_copula(pacf.alpha[k]));
  return CopulaSequence(std::move(cops));
}

}  // namespace

TEST_CASE("streaming recursions match the literal definition") {
  for (int p : {1, 3, 6}) {
    const CopulaSequence seq = mixed_sequence(p, 100 + p, false);
    for (int k = 0; k <= 8; ++k) {
      const VectorXd u = random_unit(k, 200 + 10 * p + k);
      const double x = 0.37;
      CHECK(forward(seq, u, x) ==
            doctest::Approx(naive_forward(seq, u, x)).epsilon(1e-12));
      CHECK(backward(seq, u, x) ==
            doctest::Approx(naive_backward(seq, u, x)).epsilon(1e-12));
    }
    const VectorXd path = random_unit(8, 300 + p);
    CHECK(log_joint_density(seq, path) ==
          doctest::Approx(naive_log_joint(seq, path)).epsilon(1e-10));
  }
}

TEST_CASE("identity cases") {
  const CopulaSequence indep(std::vector<PairCopula>(4, independence_copula()));
  const VectorXd u = random_unit(4, 7);
  const VectorXd empty;

  SUBCASE("empty window is the identity map") {
    const CopulaSequence seq = mixed_sequence(3, 11, false);
    for (double x : {0.05, 0.5, 0.99}) {
      CHECK(forward(seq, empty, x) == x);
      CHECK(backward(seq, empty, x) == x);
      CHECK(forward_inverse(seq, empty, x) == x);
    }
  }

  SUBCASE("independence sequence passes everything through") {
    for (double x : {0.1, 0.6}) {
      CHECK(forward(indep, u, x) == doctest::Approx(x).epsilon(1e-14));
      CHECK(backward(indep, u, x) == doctest::Approx(x).epsilon(1e-14));
      CHECK(forward_inverse(indep, u, x) == doctest::Approx(x).epsilon(1e-14));
    }
    CHECK(log_joint_density(indep, u) == doctest::Approx(0.0).epsilon(1e-14));
  }

  SUBCASE("single observation has zero log density") {
    const CopulaSequence seq = mixed_sequence(3, 12, false);
    CHECK(log_joint_density(seq, VectorXd::Constant(1, 0.42)) == 0.0);
  }

  SUBCASE("two observations reduce to the first pair copula") {
    const CopulaSequence seq = mixed_sequence(3, 13, false);
    VectorXd pair(2);
    pair << 0.3, 0.8;
    CHECK(log_joint_density(seq, pair) ==
          doctest::Approx(log_density(seq.at(1), 0.3, 0.8)).epsilon(1e-13));
    CHECK(log_conditional_density(seq, pair.head(1), 0.8) ==
          doctest::Approx(log_density(seq.at(1), 0.3, 0.8)).epsilon(1e-13));
  }
}

TEST_CASE("monotonicity and reversibility") {
  SUBCASE("forward and backward are strictly increasing in x") {
    const CopulaSequence seq = mixed_sequence(5, 21, false);
    const VectorXd u = random_unit(5, 22);
    double pf = 0.0, pb = 0.0;
    for (int i = 1; i <= 50; ++i) {
      const double x = i / 51.0;
      const double f = forward(seq, u, x);
      const double b = backward(seq, u, x);
      CHECK(f > pf);
      CHECK(b > pb);
      pf = f;
      pb = b;
    }
  }

  SUBCASE("exchangeable sequences are time-reversible") {
    const CopulaSequence seq = mixed_sequence(10, 23, true);
    for (int k = 0; k <= 10; ++k) {
      const VectorXd u = random_unit(k, 24 + k);
      const double x = 0.613;
      CHECK(backward(seq, u.reverse(), x) ==
            doctest::Approx(forward(seq, u, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("layer-by-layer inversion") {
  const CopulaSequence seq = mixed_sequence(6, 31, false);

  SUBCASE("forward after forward_inverse restores z") {
    for (int k : {1, 3, 6, 9}) {
      const VectorXd u = random_unit(k, 32 + k);
      for (double z : {0.02, 0.35, 0.5, 0.77, 0.98}) {
        const double x = forward_inverse(seq, u, z);
        CHECK(forward(seq, u, x) == doctest::Approx(z).epsilon(1e-9));
      }
    }
  }

  SUBCASE("inverse after forward restores x") {
    const VectorXd u = random_unit(6, 33);
    for (double x : {0.1, 0.5, 0.9}) {
      CHECK(forward_inverse(seq, u, forward(seq, u, x)) ==
            doctest::Approx(x).epsilon(1e-9));
    }
  }
}

namespace {

// Log density of the n-variate Gaussian copula with the Toeplitz correlation
// matrix implied by the pacf; the linear-algebra route the engine never takes.
double toeplitz_gauss_log_density(const Pacf& pacf, const VectorXd& u) {
  const int n = static_cast<int>(u.size());
  const Acf acf = pacf_to_acf(pacf);
  Eigen::MatrixXd P(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      P(i, j) = i == j ? 1.0 : acf.rho[std::abs(i - j) - 1];
  VectorXd q(n);
  for (int i = 0; i < n; ++i) q[i] = math::norm_quantile(u[i]);
  const Eigen::LLT<Eigen::MatrixXd> llt(P);
  const double logdet =
      2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return -0.5 * (logdet + q.dot(llt.solve(q)) - q.squaredNorm());
}

}  // namespace

TEST_CASE("Gaussian sequences match the linear closed forms") {
  // Two regimes: a strongly dependent sequence evaluated on windows drawn
  // from the process itself (arbitrary windows would push true conditional
  // dfs below the 1e-12 evaluation clamp, where engine and unclamped
  // closed forms legitimately part ways), and a moderate sequence on
  // arbitrary iid-uniform windows.
  const int K = 20;
  CounterRng rng(41);
  VectorXd strong(K), mild(K);
  for (int k = 0; k < K; ++k) {
    strong[k] = 0.9 * (2.0 * rng.next() - 1.0) * 0.7;
    mild[k] = 0.3 * (2.0 * rng.next() - 1.0);
  }

  for (int regime = 0; regime < 2; ++regime) {
    const Pacf pacf{regime == 0 ? strong : mild};
    const CopulaSequence seq = gauss_sequence(pacf);
    const DlCoefficients coef = dl_coefficients(pacf);
    VectorXd path(K);
    if (regime == 0) {
      CounterRng zr(99);
      for (int t = 0; t < K; ++t)
        path[t] = gaussian_forward_inverse(coef, path.head(t), zr.next());
    } else {
      path = random_unit(K, 50);
    }

    for (int k = 0; k <= K; ++k) {
      const VectorXd u = path.tail(k);
      const double x = 0.31, z = 0.84;
      CHECK(forward(seq, u, x) ==
            doctest::Approx(gaussian_forward(coef, u, x)).epsilon(1e-8));
      CHECK(forward_inverse(seq, u, z) ==
            doctest::Approx(gaussian_forward_inverse(coef, u, z)).epsilon(1e-8));
    }
    for (int n : {2, 5, 12, 20}) {
      const VectorXd u = path.head(n);
      CHECK(log_joint_density(seq, u) ==
            doctest::Approx(toeplitz_gauss_log_density(pacf, u)).epsilon(1e-8));
    }
  }
}

TEST_CASE("truncation consistency is exact") {
  const int p = 4;
  const CopulaSequence seq = mixed_sequence(p, 71, false);
  for (int k : {5, 8, 12}) {
    const VectorXd u = random_unit(k, 72 + k);
    const VectorXd tail = u.tail(p);
    const double x = 0.44, z = 0.62;
    CHECK(forward(seq, u, x) == forward(seq, tail, x));
    CHECK(forward_inverse(seq, u, z) == forward_inverse(seq, tail, z));
    CHECK(log_conditional_density(seq, u, x) ==
          log_conditional_density(seq, tail, x));
  }
}

TEST_CASE("conditional density") {
  const CopulaSequence seq = mixed_sequence(5, 81, false);

  SUBCASE("log f equals the joint-density increment") {
    for (int k : {1, 2, 4, 7}) {
      const VectorXd u = random_unit(k, 82 + k);
      const double x = 0.58;
      VectorXd ext(k + 1);
      ext.head(k) = u;
      ext[k] = x;
      CHECK(log_conditional_density(seq, u, x) ==
            doctest::Approx(log_joint_density(seq, ext) -
                            log_joint_density(seq, u))
                .epsilon(1e-9));
    }
  }

  SUBCASE("conditional density integrates to one") {
    for (int k = 1; k <= 5; ++k) {
      const VectorXd u = random_unit(k, 90 + k);
      const double mass = math::integrate(
          [&](double x) { return std::exp(log_conditional_density(seq, u, x)); },
          0.0, 1.0, 1e-9);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    }
  }

  SUBCASE("density of a full grid integrates to one in three dimensions") {
    // smooth bounded-density families keep the nested quadrature cheap
    const CopulaSequence small(
        {gauss_copula(0.5), copula_from_tau(Family::Frank, 0.3)});
    const double mass = math::integrate(
        [&](double a) {
          return math::integrate(
              [&](double b) {
                return math::integrate(
                    [&](double c) {
                      VectorXd u(3);
                      u << a, b, c;
                      return std::exp(log_joint_density(small, u));
                    },
                    0.0, 1.0, 1e-7);
              },
              0.0, 1.0, 1e-7);
        },
        0.0, 1.0, 1e-6);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("streaming state bookkeeping") {
  const int p = 4;
  const CopulaSequence seq = mixed_sequence(p, 101, false);
  const int n = 12;
  const VectorXd u = random_unit(n, 102);

  SUBCASE("push innovations equal windowed forward calls") {
    RosenblattState state(seq);
    for (int t = 0; t < n; ++t) {
      const auto [z, logf] = state.push(u[t]);
      const int k = std::min(t, p);
      const VectorXd window = u.segment(t - k, k);
      CHECK(z == doctest::Approx(forward(seq, window, u[t])).epsilon(1e-13));
      CHECK(logf ==
            doctest::Approx(log_conditional_density(seq, window, u[t]))
                .epsilon(1e-13));
    }
  }

  SUBCASE("push_inverse undoes push") {
    RosenblattState fwd_state(seq), inv_state(seq);
    for (int t = 0; t < n; ++t) {
      const double z = fwd_state.push(u[t]).innovation;
      CHECK(inv_state.push_inverse(z) == doctest::Approx(u[t]).epsilon(1e-9));
    }
  }

  SUBCASE("backward values with extended capacity") {
    const int cap = 7;
    RosenblattState state(seq, cap);
    for (int t = 0; t < n; ++t) {
      state.push(u[t]);
      const int m = t + 1;
      CHECK(state.backward_value(0) == u[m - 1]);
      for (int l = 1; l < std::min(m - 1, cap); ++l) {
        const VectorXd window = u.segment(m - l, l);
        CHECK(state.backward_value(l) ==
              doctest::Approx(backward(seq, window, u[m - l - 1]))
                  .epsilon(1e-12));
      }
    }
    CHECK_THROWS_AS((void)state.backward_value(cap), std::out_of_range);
  }

  SUBCASE("capacity below the truncation lag is rejected") {
    CHECK_THROWS_AS(RosenblattState(seq, p - 1), std::invalid_argument);
  }

  SUBCASE("reset restarts the stream") {
    RosenblattState state(seq);
    state.push(0.3);
    state.push(0.7);
    state.reset();
    CHECK(state.count() == 0);
    CHECK(state.push(0.3).innovation == 0.3);
  }
}

TEST_CASE("marginal copula estimates") {
  SUBCASE("lag one is exact") {
    const CopulaSequence seq = mixed_sequence(3, 111, false);
    CHECK(marginal_copula_estimate(seq, 1, 0.3, 0.7, 1, 5) ==
          cdf(seq.at(1), 0.3, 0.7));
  }

  SUBCASE("independence factorizes") {
    const CopulaSequence indep(std::vector<PairCopula>(3, independence_copula()));
    const double est = marginal_copula_estimate(indep, 3, 0.4, 0.6, 2000, 5);
    CHECK(est == doctest::Approx(0.24).epsilon(1e-9));
  }

  SUBCASE("Gauss lag two recovers the implied autocorrelation") {
    VectorXd alpha(2);
    alpha << 0.6, 0.25;
    const Acf acf = pacf_to_acf(Pacf{alpha});
    const CopulaSequence seq = gauss_sequence(Pacf{alpha});
    const int nsamp = 200000;
    const double v1 = 0.35, v2 = 0.65;
    const double est = marginal_copula_estimate(seq, 2, v1, v2, nsamp, 99);
    const double expect = math::bvn_cdf(math::norm_quantile(v1),
                                        math::norm_quantile(v2), acf.rho[1]);
    // conservative bound on the Monte Carlo standard error: sd <= 1/2
    CHECK(std::fabs(est - expect) < 3.0 * 0.5 / std::sqrt(double(nsamp)));
  }

  SUBCASE("fixed seeds are reproducible") {
    const CopulaSequence seq = mixed_sequence(2, 121, false);
    const double a = marginal_copula_estimate(seq, 3, 0.2, 0.9, 500, 7);
    const double b = marginal_copula_estimate(seq, 3, 0.2, 0.9, 500, 7);
    const double c = marginal_copula_estimate(seq, 3, 0.2, 0.9, 500, 8);
    CHECK(a == b);
    CHECK(a != c);
    CHECK_THROWS_AS((void)marginal_copula_estimate(seq, 0, 0.5, 0.5, 10, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("forward ladder lists every partial transform") {
  const CopulaSequence seq = mixed_sequence(5, 303, false);
  RosenblattState state(seq);
  CounterRng rng(8);
  for (int t = 0; t < 9; ++t) {
    const double x = rng.next();
    const VectorXd ladder = state.forward_ladder(x);
    REQUIRE(ladder.size() == state.active() + 1);
    CHECK(ladder[0] == x);
    CHECK(ladder[state.active()] == state.forward_value(x));
    state.push(x);
  }
  // against the free function on explicit trailing windows
  VectorXd u(9);
  CounterRng replay(8);
  for (int t = 0; t < 9; ++t) u[t] = replay.next();
  RosenblattState fresh(seq);
  for (int t = 0; t < 8; ++t) fresh.push(u[t]);
  const VectorXd ladder = fresh.forward_ladder(u[8]);
  for (int l = 0; l <= fresh.active(); ++l)
    CHECK(ladder[l] ==
          doctest::Approx(forward(seq, u.segment(8 - l, l), u[8]))
              .epsilon(1e-13));
}
