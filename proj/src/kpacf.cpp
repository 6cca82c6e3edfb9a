#include "svine/kpacf.hpp"

#include <cmath>
#include <cstdio>

#include "svine/linear.hpp"

namespace svine {

namespace {

// Partial-autocorrelation reparameterization of a causal AR block
// (the classic stationarity transform used by ARMA fitters): raw -> tanh
// gives the reflection coefficients, then the Levinson-Durbin coefficient
// recursion yields the polynomial coefficients.
Eigen::VectorXd partrans(const Eigen::Ref<const Eigen::VectorXd>& raw) {
  const int p = static_cast<int>(raw.size());
  Eigen::VectorXd cur = raw.array().tanh();
  Eigen::VectorXd work = cur;
  for (int j = 1; j < p; ++j) {
    const double a = cur(j);
    for (int k = 0; k < j; ++k) work(k) -= a * cur(j - k - 1);
    cur.head(j) = work.head(j);
  }
  return cur;
}

Eigen::VectorXd inv_partrans(const Eigen::Ref<const Eigen::VectorXd>& coef) {
  const int p = static_cast<int>(coef.size());
  Eigen::VectorXd cur = coef;
  Eigen::VectorXd work = coef;
  for (int j = p - 1; j > 0; --j) {
    const double a = cur(j);
    if (!(std::fabs(a) < 1.0))
      throw std::invalid_argument(
          "kpacf: AR/MA block is not causal/invertible, cannot map to the "
          "unconstrained scale");
    for (int k = 0; k < j; ++k)
      work(k) = (cur(k) + a * cur(j - k - 1)) / (1.0 - a * a);
    cur.head(j) = work.head(j);
  }
  for (int j = 0; j < p; ++j) {
    if (!(std::fabs(cur(j)) < 1.0))
      throw std::invalid_argument(
          "kpacf: AR/MA block is not causal/invertible, cannot map to the "
          "unconstrained scale");
    cur(j) = std::atanh(cur(j));
  }
  return cur;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

int kpacf_param_count(const KpacfSpec& spec) {
  switch (spec.kind) {
    case KpacfKind::Arma: return spec.p + spec.q;
    case KpacfKind::Arfima: return spec.p + spec.q + 1;
    case KpacfKind::Fgn: return 1;
    case KpacfKind::Explicit: return static_cast<int>(spec.theta.size());
  }
  throw std::invalid_argument("kpacf: unknown kind");
}

void validate(const KpacfSpec& spec) {
  if (spec.p < 0 || spec.q < 0)
    throw std::invalid_argument("kpacf: orders must be nonnegative");
  if (spec.horizon < 1)
    throw std::invalid_argument("kpacf: horizon must be positive");
  if (spec.theta.size() != kpacf_param_count(spec))
    throw std::invalid_argument(
        "kpacf: theta has " + std::to_string(spec.theta.size()) +
        " entries, expected " + std::to_string(kpacf_param_count(spec)));
  if (!spec.theta.allFinite())
    throw std::invalid_argument("kpacf: theta contains non-finite entries");
  switch (spec.kind) {
    case KpacfKind::Arma:
      if (!is_causal(spec.theta.head(spec.p)))
        throw std::invalid_argument("kpacf: AR part is not causal");
      break;
    case KpacfKind::Arfima: {
      const double d = spec.theta(spec.p + spec.q);
      if (!(d > -0.5 && d < 0.5))
        throw std::invalid_argument("kpacf: d must lie in (-1/2, 1/2)");
      if (!is_causal(spec.theta.head(spec.p)))
        throw std::invalid_argument("kpacf: AR part is not causal");
      break;
    }
    case KpacfKind::Fgn: {
      const double H = spec.theta(0);
      if (!(H > 0.0 && H < 1.0))
        throw std::invalid_argument("kpacf: H must lie in (0,1)");
      break;
    }
    case KpacfKind::Explicit:
      for (Eigen::Index i = 0; i < spec.theta.size(); ++i)
        if (!(std::fabs(spec.theta(i)) < 1.0))
          throw std::invalid_argument("kpacf: explicit tau at lag " +
                                      std::to_string(i + 1) +
                                      " lies outside (-1,1)");
      break;
  }
}

Eigen::VectorXd kpacf_taus(const KpacfSpec& spec, int K) {
  validate(spec);
  if (K < 1) throw std::invalid_argument("kpacf: lag count must be positive");
  switch (spec.kind) {
    case KpacfKind::Arma: {
      const Pacf a =
          acf_to_pacf(arma_acf(spec.theta.head(spec.p),
                               spec.theta.segment(spec.p, spec.q), K));
      Eigen::VectorXd tau(K);
      for (int k = 0; k < K; ++k) tau(k) = tau_from_alpha(a.alpha(k));
      return tau;
    }
    case KpacfKind::Arfima: {
      const Pacf a =
          arfima_pacf(spec.theta.head(spec.p), spec.theta(spec.p + spec.q),
                      spec.theta.segment(spec.p, spec.q), K);
      Eigen::VectorXd tau(K);
      for (int k = 0; k < K; ++k) tau(k) = tau_from_alpha(a.alpha(k));
      return tau;
    }
    case KpacfKind::Fgn: {
      const Pacf a = fgn_pacf(spec.theta(0), K);
      Eigen::VectorXd tau(K);
      for (int k = 0; k < K; ++k) tau(k) = tau_from_alpha(a.alpha(k));
      return tau;
    }
    case KpacfKind::Explicit: {
      Eigen::VectorXd tau = Eigen::VectorXd::Zero(K);
      const int m = std::min<int>(K, static_cast<int>(spec.theta.size()));
      tau.head(m) = spec.theta.head(m);
      return tau;
    }
  }
  throw std::invalid_argument("kpacf: unknown kind");
}

Eigen::VectorXd kpacf_to_unconstrained(const KpacfSpec& spec) {
  validate(spec);
  switch (spec.kind) {
    case KpacfKind::Arma: {
      Eigen::VectorXd raw(spec.p + spec.q);
      raw.head(spec.p) = inv_partrans(spec.theta.head(spec.p));
      raw.segment(spec.p, spec.q) =
          inv_partrans(spec.theta.segment(spec.p, spec.q));
      return raw;
    }
    case KpacfKind::Arfima: {
      Eigen::VectorXd raw(spec.p + spec.q + 1);
      raw.head(spec.p) = inv_partrans(spec.theta.head(spec.p));
      raw.segment(spec.p, spec.q) =
          inv_partrans(spec.theta.segment(spec.p, spec.q));
      raw(spec.p + spec.q) = std::atanh(2.0 * spec.theta(spec.p + spec.q));
      return raw;
    }
    case KpacfKind::Fgn: {
      Eigen::VectorXd raw(1);
      const double H = spec.theta(0);
      raw(0) = std::log(H / (1.0 - H));
      return raw;
    }
    case KpacfKind::Explicit:
      return spec.theta.array().atanh();
  }
  throw std::invalid_argument("kpacf: unknown kind");
}

KpacfSpec kpacf_from_unconstrained(
    const KpacfSpec& tmpl, const Eigen::Ref<const Eigen::VectorXd>& raw) {
  if (raw.size() != kpacf_param_count(tmpl))
    throw std::invalid_argument("kpacf: unconstrained vector has wrong size");
  KpacfSpec out = tmpl;
  switch (tmpl.kind) {
    case KpacfKind::Arma:
      out.theta.resize(tmpl.p + tmpl.q);
      out.theta.head(tmpl.p) = partrans(raw.head(tmpl.p));
      out.theta.segment(tmpl.p, tmpl.q) = partrans(raw.segment(tmpl.p, tmpl.q));
      return out;
    case KpacfKind::Arfima:
      out.theta.resize(tmpl.p + tmpl.q + 1);
      out.theta.head(tmpl.p) = partrans(raw.head(tmpl.p));
      out.theta.segment(tmpl.p, tmpl.q) = partrans(raw.segment(tmpl.p, tmpl.q));
      out.theta(tmpl.p + tmpl.q) = 0.5 * std::tanh(raw(tmpl.p + tmpl.q));
      return out;
    case KpacfKind::Fgn:
      out.theta.resize(1);
      out.theta(0) = logistic(raw(0));
      return out;
    case KpacfKind::Explicit:
      out.theta = raw.array().tanh();
      return out;
  }
  throw std::invalid_argument("kpacf: unknown kind");
}

CopulaSequence sequence_from_kpacf(const KpacfSpec& spec, Family family,
                                   NegativeTauRule rule, int truncation_lag) {
  if (truncation_lag < 1)
    throw std::invalid_argument("kpacf: truncation lag must be positive");
  const Eigen::VectorXd tau = kpacf_taus(spec, truncation_lag);
  std::vector<PairCopula> cops;
  cops.reserve(truncation_lag);
  for (int k = 0; k < truncation_lag; ++k)
    cops.push_back(copula_from_tau(family, tau(k), rule));
  return CopulaSequence(std::move(cops));
}

std::string kpacf_kind_string(const KpacfSpec& spec) {
  char buf[48];
  switch (spec.kind) {
    case KpacfKind::Arma:
      std::snprintf(buf, sizeof buf, "arma(%d,%d)", spec.p, spec.q);
      return buf;
    case KpacfKind::Arfima:
      std::snprintf(buf, sizeof buf, "arfima(%d,%d)", spec.p, spec.q);
      return buf;
    case KpacfKind::Fgn:
      return "fgn";
    case KpacfKind::Explicit:
      return "explicit";
  }
  throw std::invalid_argument("kpacf: unknown kind");
}

KpacfSpec kpacf_spec_from_kind_string(const std::string& kind) {
  KpacfSpec spec;
  int p = 0, q = 0;
  if (kind == "fgn") {
    spec.kind = KpacfKind::Fgn;
    return spec;
  }
  if (kind == "explicit") {
    spec.kind = KpacfKind::Explicit;
    return spec;
  }
  if (std::sscanf(kind.c_str(), "arma(%d,%d)", &p, &q) == 2) {
    spec.kind = KpacfKind::Arma;
  } else if (std::sscanf(kind.c_str(), "arfima(%d,%d)", &p, &q) == 2) {
    spec.kind = KpacfKind::Arfima;
  } else {
    throw std::invalid_argument("kpacf: unrecognized kind string: " + kind);
  }
  if (p < 0 || q < 0)
    throw std::invalid_argument("kpacf: orders must be nonnegative");
  spec.p = p;
  spec.q = q;
  return spec;
}

}  // namespace svine
