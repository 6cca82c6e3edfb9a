#include "svine/inference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "svine/math.hpp"
#include "svine/optim.hpp"
#include "svine/process.hpp"
#include "svine/rosenblatt.hpp"

namespace svine {

Eigen::VectorXd pseudo_observations(
    const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Eigen::Index n = x.size();
  if (n < 2)
    throw std::invalid_argument("pseudo_observations: need at least 2 values");
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return x[a] < x[b]; });

  Eigen::VectorXd u(n);
  Eigen::Index a = 0;
  while (a < n) {
    Eigen::Index b = a + 1;
    while (b < n && x[order[b]] == x[order[a]]) ++b;
    // tied block occupies ranks a+1..b, average rank a + (b-a+1)/2
    const double rank = double(a) + 0.5 * double(b - a + 1);
    for (Eigen::Index i = a; i < b; ++i) u[order[i]] = rank / double(n + 1);
    a = b;
  }
  return u;
}

double kendall_tau_b(const Eigen::Ref<const Eigen::VectorXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& y) {
  const Eigen::Index n = x.size();
  if (y.size() != n)
    throw std::invalid_argument("kendall_tau_b: length mismatch");
  if (n < 2) throw std::invalid_argument("kendall_tau_b: need at least 2");
  long long conc = 0, disc = 0, tie_x = 0, tie_y = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0) ++tie_x;
      if (dy == 0.0) ++tie_y;
      const double s = dx * dy;
      if (s > 0) ++conc;
      else if (s < 0) ++disc;
    }
  }
  const double n0 = 0.5 * double(n) * double(n - 1);
  const double denom =
      std::sqrt((n0 - double(tie_x)) * (n0 - double(tie_y)));
  if (denom == 0.0) return 0.0;  // a constant column carries no ordering
  return double(conc - disc) / denom;
}

namespace {

// Negative joint copula log density as a function of the unconstrained
// kpacf parameters; the family/rotation of every lag is reassigned from
// the sign of tau_k at each evaluation via sequence_from_kpacf.
struct CopulaObjective {
  const Eigen::Ref<const Eigen::VectorXd>& u;
  const KpacfSpec& tmpl;
  Family family;
  NegativeTauRule rule;
  int truncation;

  double operator()(const Eigen::VectorXd& raw) const {
    const KpacfSpec cand = kpacf_from_unconstrained(tmpl, raw);
    return -log_joint_density(
        sequence_from_kpacf(cand, family, rule, truncation), u);
  }
};

void check_unit_interval(const Eigen::Ref<const Eigen::VectorXd>& u,
                         const char* who) {
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (!(u[i] > 0.0) || !(u[i] < 1.0))
      throw std::invalid_argument(std::string(who) +
                                  ": data must lie strictly inside (0,1)");
}

}  // namespace

CopulaSequence report_sequence(const FitReport& report) {
  return sequence_from_kpacf(report.spec, report.family, report.rule,
                             report.truncation_lag);
}

FitReport fit_copula(const Eigen::Ref<const Eigen::VectorXd>& u,
                     const KpacfSpec& spec_template, Family family,
                     NegativeTauRule rule, int truncation_lag) {
  if (u.size() < 2)
    throw std::invalid_argument("fit_copula: need at least 2 observations");
  check_unit_interval(u, "fit_copula");
  if (truncation_lag < 0)
    throw std::invalid_argument("fit_copula: truncation lag must be >= 0");
  validate(spec_template);

  const CopulaObjective objective{u, spec_template, family, rule,
                                  truncation_lag};
  KpacfSpec fitted = spec_template;
  bool converged = true;
  const Eigen::VectorXd raw0 = kpacf_to_unconstrained(spec_template);
  if (raw0.size() > 0) {
    const SimplexResult first = minimize_simplex(objective, raw0);
    SimplexOptions polish;
    polish.initial_step = 0.05;
    const SimplexResult second = minimize_simplex(objective, first.x, polish);
    const SimplexResult& best = second.f <= first.f ? second : first;
    converged = best.converged;
    fitted = kpacf_from_unconstrained(spec_template, best.x);
  }

  FitReport report;
  report.spec = fitted;
  report.family = family;
  report.rule = rule;
  report.truncation_lag = truncation_lag;
  report.param_count = kpacf_param_count(fitted);
  report.converged = converged;

  const CopulaSequence seq =
      sequence_from_kpacf(fitted, family, rule, truncation_lag);
  report.loglik = log_joint_density(seq, u);
  report.aic = 2.0 * report.param_count - 2.0 * report.loglik;

  const Residuals res = residuals(seq, u);
  report.residuals_z = res.z;
  report.residuals_normal = res.z_normal;

  report.stderrs = standard_errors(report, u);
  report.stderr_failed =
      !report.stderrs.has_value() && report.param_count > 0;
  return report;
}

Residuals residuals(const CopulaSequence& seq,
                    const Eigen::Ref<const Eigen::VectorXd>& u) {
  Residuals out;
  out.z = invert_to_innovations(seq, u);
  out.z_normal.resize(out.z.size());
  for (Eigen::Index i = 0; i < out.z.size(); ++i)
    out.z_normal[i] = math::norm_quantile(out.z[i]);
  return out;
}

std::vector<TauEstimate> semi_empirical_kpacf(
    const Eigen::Ref<const Eigen::VectorXd>& u, const CopulaSequence& seq,
    int K) {
  const int n = static_cast<int>(u.size());
  if (K < 1 || K >= n)
    throw std::invalid_argument("semi_empirical_kpacf: need 1 <= K < n");
  check_unit_interval(u, "semi_empirical_kpacf");

  std::vector<std::vector<double>> first(K + 1), second(K + 1);
  for (int k = 1; k <= K; ++k) {
    first[k].reserve(n - k);
    second[k].reserve(n - k);
  }
  RosenblattState state(seq, std::max(K, seq.truncation_lag));
  for (int t = 0; t < n; ++t) {
    if (t >= 1) {
      const Eigen::VectorXd ladder = state.forward_ladder(u[t]);
      const int top = std::min(t, K);
      for (int k = 1; k <= top; ++k) {
        first[k].push_back(state.backward_value(k - 1));
        second[k].push_back(ladder[k - 1]);
      }
    }
    state.push(u[t]);
  }

  std::vector<TauEstimate> out(K);
  for (int k = 1; k <= K; ++k) {
    const auto m = static_cast<Eigen::Index>(first[k].size());
    out[k - 1].lag = k;
    out[k - 1].tau = kendall_tau_b(
        Eigen::Map<const Eigen::VectorXd>(first[k].data(), m),
        Eigen::Map<const Eigen::VectorXd>(second[k].data(), m));
  }
  return out;
}

FitReport fit_full(const Eigen::Ref<const Eigen::VectorXd>& x,
                   MarginKind margin_kind, const KpacfSpec& spec_template,
                   Family family, NegativeTauRule rule, int truncation_lag) {
  MarginalModel margin = fit_margin(x, margin_kind);

  Eigen::VectorXd u(x.size());
  if (margin_kind == MarginKind::Empirical) {
    u = pseudo_observations(x);
  } else {
    for (Eigen::Index i = 0; i < x.size(); ++i)
      u[i] = math::unit_clamp(margin_cdf(margin, x[i]));
  }

  FitReport report =
      fit_copula(u, spec_template, family, rule, truncation_lag);
  report.param_count += margin.param_count();
  report.loglik += margin.loglik;
  report.aic = 2.0 * report.param_count - 2.0 * report.loglik;
  report.margin_fit = std::move(margin);
  return report;
}

std::optional<Eigen::MatrixXd> inverse_hessian(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::Ref<const Eigen::VectorXd>& x, double step) {
  const Eigen::Index d = x.size();
  Eigen::MatrixXd H(d, d);
  const double f0 = f(x);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) {
      double hij;
      if (i == j) {
        Eigen::VectorXd p = x, m = x;
        p[i] += step;
        m[i] -= step;
        hij = (f(p) - 2.0 * f0 + f(m)) / (step * step);
      } else {
        Eigen::VectorXd pp = x, pm = x, mp = x, mm = x;
        pp[i] += step; pp[j] += step;
        pm[i] += step; pm[j] -= step;
        mp[i] -= step; mp[j] += step;
        mm[i] -= step; mm[j] -= step;
        hij = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * step * step);
      }
      if (!std::isfinite(hij)) return std::nullopt;
      H(i, j) = hij;
      H(j, i) = hij;
    }
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(H);
  if (llt.info() != Eigen::Success) return std::nullopt;
  return llt.solve(Eigen::MatrixXd::Identity(d, d));
}

std::optional<Eigen::VectorXd> standard_errors(
    const FitReport& report, const Eigen::Ref<const Eigen::VectorXd>& u) {
  const int dim = kpacf_param_count(report.spec);
  if (dim == 0) return Eigen::VectorXd();

  const CopulaObjective objective{u, report.spec, report.family, report.rule,
                                  report.truncation_lag};
  const Eigen::VectorXd raw = kpacf_to_unconstrained(report.spec);
  const double step = 1e-4;
  const auto cov_raw = inverse_hessian(
      [&](const Eigen::VectorXd& r) { return objective(r); }, raw, step);
  if (!cov_raw) return std::nullopt;

  // delta method through the unconstrained-to-theta map; the map is smooth,
  // so a central difference with the same step is plenty
  Eigen::MatrixXd jac(dim, dim);
  for (int j = 0; j < dim; ++j) {
    Eigen::VectorXd p = raw, m = raw;
    p[j] += step;
    m[j] -= step;
    jac.col(j) = (kpacf_from_unconstrained(report.spec, p).theta -
                  kpacf_from_unconstrained(report.spec, m).theta) /
                 (2.0 * step);
  }
  const Eigen::MatrixXd cov = jac * (*cov_raw) * jac.transpose();
  Eigen::VectorXd se(dim);
  for (int i = 0; i < dim; ++i) {
    if (!(cov(i, i) > 0.0)) return std::nullopt;
    se[i] = std::sqrt(cov(i, i));
  }
  return se;
}

}  // namespace svine
