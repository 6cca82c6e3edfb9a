#include "svine/margins.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "svine/errors.hpp"
#include "svine/math.hpp"
#include "svine/optim.hpp"

namespace svine {

namespace {

// Fernandez-Steel normalizer: density = norm * t_nu(scaled s) / sigma.
double fs_norm(double gamma) { return 2.0 / (gamma + 1.0 / gamma); }

double empirical_cdf(const Eigen::VectorXd& sorted, double x) {
  const auto* b = sorted.data();
  const auto* e = b + sorted.size();
  const double less = static_cast<double>(std::lower_bound(b, e, x) - b);
  const double eq = static_cast<double>(std::upper_bound(b, e, x) - b) - less;
  // average rank of the tied block at x; (less + 1/2)/(n+1) off the sample
  const double rank = eq > 0.0 ? less + 0.5 * (eq + 1.0) : less + 0.5;
  return rank / (static_cast<double>(sorted.size()) + 1.0);
}

}  // namespace

int MarginalModel::param_count() const {
  switch (kind) {
    case MarginKind::Normal: return 2;
    case MarginKind::SkewedStudent: return 4;
    case MarginKind::Empirical: return 0;
  }
  return 0;
}

void validate(const MarginalModel& m) {
  auto bad = [](const char* what) {
    throw std::invalid_argument(std::string("margin: ") + what);
  };
  switch (m.kind) {
    case MarginKind::Normal:
      if (!(m.sigma > 0.0) || !std::isfinite(m.sigma) || !std::isfinite(m.mu))
        bad("Normal requires finite mu and sigma > 0");
      break;
    case MarginKind::SkewedStudent:
      if (!(m.sigma > 0.0) || !std::isfinite(m.sigma) || !std::isfinite(m.mu))
        bad("SkewedStudent requires finite mu and sigma > 0");
      if (!(m.nu > 2.0) || !std::isfinite(m.nu))
        bad("SkewedStudent requires nu > 2");
      if (!(m.gamma > 0.0) || !std::isfinite(m.gamma))
        bad("SkewedStudent requires gamma > 0");
      break;
    case MarginKind::Empirical:
      if (m.sample.size() < 2) bad("Empirical requires at least two values");
      if (!std::is_sorted(m.sample.data(), m.sample.data() + m.sample.size()))
        bad("Empirical sample must be sorted");
      break;
  }
}

double margin_log_pdf(const MarginalModel& m, double x) {
  switch (m.kind) {
    case MarginKind::Normal: {
      const double s = (x - m.mu) / m.sigma;
      return -0.5 * s * s - std::log(m.sigma) -
             0.91893853320467274178;  // log sqrt(2 pi)
    }
    case MarginKind::SkewedStudent: {
      const double s = (x - m.mu) / m.sigma;
      const double scaled = s >= 0.0 ? s / m.gamma : s * m.gamma;
      return std::log(fs_norm(m.gamma)) + math::t_log_pdf(scaled, m.nu) -
             std::log(m.sigma);
    }
    case MarginKind::Empirical:
      throw std::invalid_argument("margin: empirical margin has no density");
  }
  return 0.0;
}

double margin_pdf(const MarginalModel& m, double x) {
  return std::exp(margin_log_pdf(m, x));
}

double margin_cdf(const MarginalModel& m, double x) {
  switch (m.kind) {
    case MarginKind::Normal:
      return math::norm_cdf((x - m.mu) / m.sigma);
    case MarginKind::SkewedStudent: {
      const double s = (x - m.mu) / m.sigma;
      const double g2 = m.gamma * m.gamma;
      if (s < 0.0) return 2.0 / (1.0 + g2) * math::t_cdf(s * m.gamma, m.nu);
      return 1.0 / (1.0 + g2) +
             2.0 * g2 / (1.0 + g2) * (math::t_cdf(s / m.gamma, m.nu) - 0.5);
    }
    case MarginKind::Empirical:
      return empirical_cdf(m.sample, x);
  }
  return 0.0;
}

double margin_quantile(const MarginalModel& m, double p) {
  p = math::unit_clamp(p);
  switch (m.kind) {
    case MarginKind::Normal:
      return m.mu + m.sigma * math::norm_quantile(p);
    case MarginKind::SkewedStudent: {
      const double g2 = m.gamma * m.gamma;
      const double split = 1.0 / (1.0 + g2);
      double s;
      if (p < split) {
        s = math::t_quantile(0.5 * p * (1.0 + g2), m.nu) / m.gamma;
      } else {
        s = m.gamma *
            math::t_quantile(0.5 + (p - split) * (1.0 + g2) / (2.0 * g2), m.nu);
      }
      return m.mu + m.sigma * s;
    }
    case MarginKind::Empirical: {
      const auto n = m.sample.size();
      if (n == 0)
        throw std::invalid_argument("margin: empirical margin has no sample");
      const auto idx = std::clamp<Eigen::Index>(
          static_cast<Eigen::Index>(std::lround(p * (n + 1))) - 1, 0, n - 1);
      return m.sample[idx];
    }
  }
  return 0.0;
}

MarginalModel fit_margin(const Eigen::Ref<const Eigen::VectorXd>& x,
                         MarginKind kind) {
  const auto n = x.size();
  if (n < 10) throw std::invalid_argument("fit_margin: need at least 10 values");

  MarginalModel m;
  m.kind = kind;
  switch (kind) {
    case MarginKind::Empirical: {
      m.sample = x;
      std::sort(m.sample.data(), m.sample.data() + n);
      m.loglik = 0.0;
      return m;
    }
    case MarginKind::Normal: {
      m.mu = x.mean();
      m.sigma = std::sqrt((x.array() - m.mu).square().mean());
      if (!(m.sigma > 0.0))
        throw std::invalid_argument("fit_margin: sample is constant");
      double ll = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) ll += margin_log_pdf(m, x[i]);
      m.loglik = ll;
      return m;
    }
    case MarginKind::SkewedStudent: {
      const double mu0 = x.mean();
      const double sd0 = std::sqrt((x.array() - mu0).square().mean());
      if (!(sd0 > 0.0))
        throw std::invalid_argument("fit_margin: sample is constant");
      auto from_raw = [](const Eigen::VectorXd& raw) {
        MarginalModel c;
        c.kind = MarginKind::SkewedStudent;
        c.mu = raw[0];
        c.sigma = std::exp(raw[1]);
        c.nu = 2.0 + std::exp(raw[2]);
        c.gamma = std::exp(raw[3]);
        return c;
      };
      auto nll = [&](const Eigen::VectorXd& raw) {
        const MarginalModel c = from_raw(raw);
        double acc = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) acc -= margin_log_pdf(c, x[i]);
        return acc;
      };
      Eigen::VectorXd raw0(4);
      raw0 << mu0, std::log(sd0), std::log(8.0 - 2.0), 0.0;
      SimplexResult r = minimize_simplex(nll, raw0);
      // one restart from the incumbent guards against premature collapse
      SimplexOptions again;
      again.initial_step = 0.05;
      SimplexResult r2 = minimize_simplex(nll, r.x, again);
      if (r2.f < r.f) r = r2;
      if (!r.converged)
        throw convergence_error("fit_margin: simplex failed to converge");
      m = from_raw(r.x);
      m.loglik = -r.f;
      return m;
    }
  }
  return m;
}

}  // namespace svine
