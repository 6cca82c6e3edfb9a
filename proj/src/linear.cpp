#include "svine/linear.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "svine/math.hpp"

namespace svine {

namespace {

void check_open_unit(const Eigen::VectorXd& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i)) || !(std::fabs(v(i)) < 1.0))
      throw std::invalid_argument(std::string(what) + ": entry at lag " +
                                  std::to_string(i + 1) +
                                  " lies outside (-1,1)");
  }
}

// MA(inf) weights of a causal ARMA filter, truncated once the last
// max(p,1) weights fall below 1e-14 in magnitude (single small values can
// be sign-change crossings, not decay).
std::vector<double> arma_weights(const Eigen::Ref<const Eigen::VectorXd>& phi,
                                 const Eigen::Ref<const Eigen::VectorXd>& psi,
                                 long cap) {
  if (!is_causal(phi))
    throw std::invalid_argument("arma: autoregressive part is not causal");
  const long p = phi.size(), q = psi.size();
  std::vector<double> w{1.0};
  long small_run = 0;
  const long need = std::max(p, 1L);
  for (long j = 1; j < cap; ++j) {
    double wj = j <= q ? psi(j - 1) : 0.0;
    for (long i = 1; i <= std::min(j, p); ++i) wj += phi(i - 1) * w[j - i];
    w.push_back(wj);
    small_run = std::fabs(wj) < 1e-14 ? small_run + 1 : 0;
    if (j > q && small_run >= need) break;
  }
  return w;
}

}  // namespace

Pacf acf_to_pacf(const Acf& acf) {
  check_open_unit(acf.rho, "acf");
  const int K = static_cast<int>(acf.rho.size());
  Eigen::VectorXd alpha(K), row(K), prev(K);
  double v = 1.0;
  for (int k = 1; k <= K; ++k) {
    double num = acf.rho(k - 1);
    for (int j = 1; j <= k - 1; ++j) num -= prev(j - 1) * acf.rho(k - j - 1);
    const double a = num / v;
    if (!std::isfinite(a) || !(std::fabs(a) < 1.0))
      throw std::invalid_argument(
          "acf_to_pacf: sequence is not positive definite at lag " +
          std::to_string(k));
    alpha(k - 1) = a;
    for (int j = 1; j <= k - 1; ++j)
      row(j - 1) = prev(j - 1) - a * prev(k - j - 1);
    row(k - 1) = a;
    prev.head(k) = row.head(k);
    v *= 1.0 - a * a;
  }
  return {alpha};
}

Acf pacf_to_acf(const Pacf& pacf) {
  check_open_unit(pacf.alpha, "pacf");
  const int K = static_cast<int>(pacf.alpha.size());
  Eigen::VectorXd rho(K), row(K), prev(K);
  double v = 1.0;
  for (int k = 1; k <= K; ++k) {
    const double a = pacf.alpha(k - 1);
    double r = a * v;
    for (int j = 1; j <= k - 1; ++j) r += prev(j - 1) * rho(k - j - 1);
    rho(k - 1) = r;
    for (int j = 1; j <= k - 1; ++j)
      row(j - 1) = prev(j - 1) - a * prev(k - j - 1);
    row(k - 1) = a;
    prev.head(k) = row.head(k);
    v *= 1.0 - a * a;
  }
  return {rho};
}

DlCoefficients dl_coefficients(const Pacf& pacf) {
  check_open_unit(pacf.alpha, "pacf");
  const int K = static_cast<int>(pacf.alpha.size());
  DlCoefficients out;
  out.phi.reserve(K);
  out.sigma.resize(K);
  out.psi.reserve(K + 1);
  out.psi.push_back(Eigen::VectorXd::Ones(1));
  double s2 = 1.0;
  for (int k = 1; k <= K; ++k) {
    const double a = pacf.alpha(k - 1);
    Eigen::VectorXd row(k);
    for (int j = 1; j <= k - 1; ++j)
      row(j - 1) = out.phi[k - 2](j - 1) - a * out.phi[k - 2](k - j - 1);
    row(k - 1) = a;
    out.phi.push_back(std::move(row));
    s2 *= 1.0 - a * a;
    out.sigma(k - 1) = std::sqrt(s2);
    Eigen::VectorXd ps(k + 1);
    ps(0) = out.sigma(k - 1);
    for (int j = 1; j <= k; ++j) {
      double acc = 0.0;
      for (int i = 1; i <= j; ++i)
        acc += out.phi[k - 1](i - 1) * out.psi[k - i](j - i);
      ps(j) = acc;
    }
    out.psi.push_back(std::move(ps));
  }
  return out;
}

bool is_causal(const Eigen::Ref<const Eigen::VectorXd>& phi) {
  const Eigen::Index p = phi.size();
  if (p == 0) return true;
  if (p == 1) return std::fabs(phi(0)) < 1.0;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(p, p);
  comp.row(0) = phi.transpose();
  comp.block(1, 0, p - 1, p - 1).setIdentity();
  return comp.eigenvalues().cwiseAbs().maxCoeff() < 1.0;
}

Acf arma_acf(const Eigen::Ref<const Eigen::VectorXd>& phi,
             const Eigen::Ref<const Eigen::VectorXd>& psi, int K) {
  const auto w = arma_weights(phi, psi, 100000);
  const long L = static_cast<long>(w.size());
  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(K + 1);
  for (long m = 0; m <= K; ++m) {
    double acc = 0.0;
    for (long j = 0; j + m < L; ++j) acc += w[j] * w[j + m];
    gamma(m) = acc;
  }
  return {gamma.tail(K) / gamma(0)};
}

Acf arfima_acf(const Eigen::Ref<const Eigen::VectorXd>& phi, double d,
               const Eigen::Ref<const Eigen::VectorXd>& psi, int K) {
  if (!std::isfinite(d) || !(d > -0.5 && d < 0.5))
    throw std::invalid_argument("arfima: d must lie in (-1/2, 1/2)");
  if (d == 0.0) return arma_acf(phi, psi, K);
  // Weight cap 2e4 keeps the O(L^2) lag-covariance of the ARMA part cheap;
  // the fractional tail itself is exact, so no long-memory truncation error.
  const auto w = arma_weights(phi, psi, 20000);
  const long L = static_cast<long>(w.size());
  Eigen::VectorXd ra(L);
  for (long m = 0; m < L; ++m) {
    double acc = 0.0;
    for (long j = 0; j + m < L; ++j) acc += w[j] * w[j + m];
    ra(m) = acc;
  }
  // gamma of the pure fractional process, exact forward recursion
  Eigen::VectorXd gy(K + L + 1);
  gy(0) = std::exp(std::lgamma(1.0 - 2.0 * d) - 2.0 * std::lgamma(1.0 - d));
  for (long j = 1; j < gy.size(); ++j)
    gy(j) = gy(j - 1) * (j - 1.0 + d) / (j - d);
  Eigen::VectorXd gamma(K + 1);
  for (long k = 0; k <= K; ++k) {
    double acc = ra(0) * gy(k);
    for (long m = 1; m < L; ++m)
      acc += ra(m) * (gy(std::labs(k - m)) + gy(k + m));
    gamma(k) = acc;
  }
  return {gamma.tail(K) / gamma(0)};
}

Pacf arfima_pacf(const Eigen::Ref<const Eigen::VectorXd>& phi, double d,
                 const Eigen::Ref<const Eigen::VectorXd>& psi, int K) {
  if (!std::isfinite(d) || !(d > -0.5 && d < 0.5))
    throw std::invalid_argument("arfima: d must lie in (-1/2, 1/2)");
  if (phi.size() == 0 && psi.size() == 0) {
    Eigen::VectorXd alpha(K);
    for (int k = 1; k <= K; ++k) alpha(k - 1) = d / (k - d);
    return {alpha};
  }
  return acf_to_pacf(arfima_acf(phi, d, psi, K));
}

Acf fgn_acf(double H, int K) {
  if (!std::isfinite(H) || !(H > 0.0 && H < 1.0))
    throw std::invalid_argument("fgn: H must lie in (0,1)");
  Eigen::VectorXd rho(K);
  if (H == 0.5) {
    rho.setZero();
    return {rho};
  }
  for (int k = 1; k <= K; ++k) {
    // 0.5 k^{2H} ((1+1/k)^{2H} + (1-1/k)^{2H} - 2), in expm1 form to keep
    // the second difference from cancelling against the constant
    const double a = std::expm1(2.0 * H * std::log1p(1.0 / k));
    const double b = std::expm1(2.0 * H * std::log1p(-1.0 / k));
    rho(k - 1) = 0.5 * std::pow(k, 2.0 * H) * (a + b);
  }
  return {rho};
}

Pacf fgn_pacf(double H, int K) { return acf_to_pacf(fgn_acf(H, K)); }

namespace {

void check_window(const DlCoefficients& coef, Eigen::Index k,
                  const char* what) {
  if (k > coef.order())
    throw std::invalid_argument(std::string(what) +
                                ": window exceeds coefficient order");
}

}  // namespace

double gaussian_forward(const DlCoefficients& coef,
                        const Eigen::Ref<const Eigen::VectorXd>& u, double x) {
  const Eigen::Index k = u.size();
  check_window(coef, k, "gaussian_forward");
  x = math::unit_clamp(x);
  if (k == 0) return x;
  double m = 0.0;
  for (Eigen::Index j = 1; j <= k; ++j)
    m += coef.phi[k - 1](j - 1) * math::norm_quantile(math::unit_clamp(u(k - j)));
  return math::norm_cdf((math::norm_quantile(x) - m) / coef.sigma(k - 1));
}

double gaussian_forward_inverse(const DlCoefficients& coef,
                                const Eigen::Ref<const Eigen::VectorXd>& u,
                                double z) {
  const Eigen::Index k = u.size();
  check_window(coef, k, "gaussian_forward_inverse");
  z = math::unit_clamp(z);
  if (k == 0) return z;
  double m = 0.0;
  for (Eigen::Index j = 1; j <= k; ++j)
    m += coef.phi[k - 1](j - 1) * math::norm_quantile(math::unit_clamp(u(k - j)));
  return math::norm_cdf(coef.sigma(k - 1) * math::norm_quantile(z) + m);
}

double gaussian_inverse(const DlCoefficients& coef,
                        const Eigen::Ref<const Eigen::VectorXd>& z, double x) {
  const Eigen::Index k = z.size();
  check_window(coef, k, "gaussian_inverse");
  x = math::unit_clamp(x);
  if (k == 0) return x;
  double m = coef.sigma(k - 1) * math::norm_quantile(x);
  for (Eigen::Index j = 1; j <= k; ++j)
    m += coef.psi[k](j) * math::norm_quantile(math::unit_clamp(z(k - j)));
  return math::norm_cdf(m);
}

std::pair<double, double> debowski_check(const Pacf& pacf,
                                         long extension_cap) {
  check_open_unit(pacf.alpha, "pacf");
  const long p = pacf.alpha.size();
  double rhs = 1.0;
  for (long i = 0; i < p; ++i)
    rhs *= (1.0 + pacf.alpha(i)) / (1.0 - pacf.alpha(i));
  if (p == 0) return {1.0, 1.0};

  const Acf acf = pacf_to_acf(pacf);
  double sum = acf.rho.sum();
  // Beyond the pacf support the process is autoregressive of order p, so
  // the acf continues by the projection recursion with the frozen top row.
  const Eigen::VectorXd phi = dl_coefficients(pacf).phi.back();
  Eigen::VectorXd window = acf.rho;  // oldest first
  const long cap = extension_cap >= 0 ? extension_cap
                                      : std::max(100000L, 50L * p);
  long small_run = 0;
  for (long k = 0; k < cap; ++k) {
    double r = 0.0;
    for (long j = 1; j <= p; ++j) r += phi(j - 1) * window(p - j);
    sum += r;
    if (p > 1) window.head(p - 1) = window.tail(p - 1).eval();
    window(p - 1) = r;
    small_run = std::fabs(r) < 1e-13 ? small_run + 1 : 0;
    if (small_run >= 20) break;
  }
  return {1.0 + 2.0 * sum, rhs};
}

double tau_from_alpha(double alpha) {
  if (!std::isfinite(alpha) || !(std::fabs(alpha) < 1.0))
    throw std::invalid_argument("tau_from_alpha: argument outside (-1,1)");
  return 2.0 / math::pi * std::asin(alpha);
}

double alpha_from_tau(double tau) {
  if (!std::isfinite(tau) || !(std::fabs(tau) < 1.0))
    throw std::invalid_argument("alpha_from_tau: argument outside (-1,1)");
  return std::sin(math::pi * tau / 2.0);
}

}  // namespace svine
