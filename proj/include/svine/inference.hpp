#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "svine/copula_sequence.hpp"
#include "svine/kpacf.hpp"
#include "svine/margins.hpp"

namespace svine {

/// Ranks over (n+1), average ranks for ties: the usual map of raw data onto
/// approximately uniform pseudo-observations in (0,1).
Eigen::VectorXd pseudo_observations(const Eigen::Ref<const Eigen::VectorXd>& x);

/// Kendall's tau with the tau-b tie correction; plain tau when ties are
/// absent. O(n^2), fine for the sample sizes seen here.
double kendall_tau_b(const Eigen::Ref<const Eigen::VectorXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& y);

/// Result of a copula-process fit (and, via fit_full, of the two-stage fit
/// with a marginal model).
///
/// loglik and aic cover everything the report estimated: the copula stage
/// alone for fit_copula, margin plus copula for fit_full with a parametric
/// margin. aic = 2 * (free parameters) - 2 * loglik always.
///
/// stderr_failed marks a requested-but-unavailable standard-error vector
/// (non-positive-definite observed information); converged = false marks a
/// best-so-far report whose optimizer stalled.
struct FitReport {
  KpacfSpec spec;  // theta holds the fitted parameters
  Family family = Family::Gauss;
  NegativeTauRule rule = NegativeTauRule::Rotate90;
  int truncation_lag = 0;
  double loglik = 0.0;
  double aic = 0.0;
  int param_count = 0;
  bool converged = true;
  std::optional<Eigen::VectorXd> stderrs;
  bool stderr_failed = false;
  Eigen::VectorXd residuals_z;
  Eigen::VectorXd residuals_normal;
  std::optional<MarginalModel> margin_fit;
};

/// The fitted copula sequence a report describes.
CopulaSequence report_sequence(const FitReport& report);

/// Maximizes the joint copula log density over the kpacf parameters on
/// their unconstrained scale (so every candidate theta is valid by
/// construction and nothing is ever clipped). The family/rotation of each
/// lag copula is reassigned from the sign of tau_k(theta) at every
/// evaluation. Derivative-free simplex search with one restart from the
/// incumbent; a stalled search returns the best-so-far report with
/// converged = false rather than throwing.
FitReport fit_copula(const Eigen::Ref<const Eigen::VectorXd>& u,
                     const KpacfSpec& spec_template, Family family,
                     NegativeTauRule rule, int truncation_lag);

/// Innovation residuals under a fitted sequence: z_1 = u_1, later z_t is the
/// forward transform of u_t over its truncated trailing window, and z_normal
/// maps them through the standard normal quantile. For the true model these
/// are the simulation innovations.
struct Residuals {
  Eigen::VectorXd z;
  Eigen::VectorXd z_normal;
};

Residuals residuals(const CopulaSequence& seq,
                    const Eigen::Ref<const Eigen::VectorXd>& u);

/// Semi-empirical Kendall pacf: for each lag k, the sample tau of the pairs
///   ( backward transform of u_{j-k} through the k-1 values between,
///     forward  transform of u_j    over  the same window ),   j = k+1..n,
/// where both transforms use the fitted copulas at lags < k. Lag 1 is the
/// ordinary tau of consecutive pairs. One streaming sweep, O(n * K).
struct TauEstimate {
  int lag = 0;
  double tau = 0.0;
};

std::vector<TauEstimate> semi_empirical_kpacf(
    const Eigen::Ref<const Eigen::VectorXd>& u, const CopulaSequence& seq,
    int K);

/// Two-stage fit: margin first, probability-integral transform, then the
/// copula stage on the transformed data. With the Empirical margin the
/// transform is exactly pseudo_observations and the report matches
/// fit_copula on them; with a parametric margin, loglik/aic/param_count
/// cover both stages and margin_fit carries the margin.
FitReport fit_full(const Eigen::Ref<const Eigen::VectorXd>& x,
                   MarginKind margin_kind, const KpacfSpec& spec_template,
                   Family family, NegativeTauRule rule, int truncation_lag);

/// Inverse of the central-difference Hessian of f at x (the asymptotic
/// covariance when f is a negative log likelihood at its minimum); nullopt
/// when the Hessian is not positive definite or not finite.
std::optional<Eigen::MatrixXd> inverse_hessian(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::Ref<const Eigen::VectorXd>& x, double step = 1e-4);

/// Observed-information standard errors of the fitted kpacf parameters:
/// central-difference Hessian of the negative log likelihood at theta-hat on
/// the unconstrained scale (step 1e-4), inverted and delta-method-mapped
/// back to theta. Returns nullopt when the Hessian is not positive definite
/// (flat or misidentified directions).
std::optional<Eigen::VectorXd> standard_errors(
    const FitReport& report, const Eigen::Ref<const Eigen::VectorXd>& u);

}  // namespace svine
