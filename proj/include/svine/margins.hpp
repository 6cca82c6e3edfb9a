#pragma once

#include <Eigen/Dense>

namespace svine {

enum class MarginKind { Normal, SkewedStudent, Empirical };

/// Marginal distribution of the observed process.
///
/// Normal uses (mu, sigma). SkewedStudent is the Fernandez-Steel skew-t in
/// location-scale form: the standardized variable s = (x - mu)/sigma has
/// density proportional to t_nu(s/gamma) for s >= 0 and t_nu(gamma s) for
/// s < 0, so gamma > 1 puts extra mass on the right and gamma = 1 recovers
/// the symmetric Student t. Empirical keeps the sorted sample and maps
/// through average ranks over n + 1, the same convention as
/// pseudo_observations.
struct MarginalModel {
  MarginKind kind = MarginKind::Empirical;
  double mu = 0.0;
  double sigma = 1.0;
  double nu = 5.0;     // SkewedStudent dof, > 2
  double gamma = 1.0;  // SkewedStudent skewness, > 0
  Eigen::VectorXd sample;  // Empirical: sorted observations
  double loglik = 0.0;     // at the fitted parameters (0 for Empirical)

  int param_count() const;
};

void validate(const MarginalModel& m);

/// Density / log density. Empirical margins have no density; both throw.
double margin_pdf(const MarginalModel& m, double x);
double margin_log_pdf(const MarginalModel& m, double x);

/// Distribution function; for Empirical the average-rank step function,
/// strictly inside (0,1).
double margin_cdf(const MarginalModel& m, double x);

/// Quantile, the inverse of margin_cdf (nearest sample for Empirical).
double margin_quantile(const MarginalModel& m, double p);

/// Maximum likelihood fit. Normal is analytic; SkewedStudent runs the
/// simplex optimizer on (mu, log sigma, log(nu - 2), log gamma); Empirical
/// stores the sorted sample. Throws convergence_error if the optimizer
/// stalls (best-so-far is not returned: a margin that has not converged
/// poisons the copula stage silently).
MarginalModel fit_margin(const Eigen::Ref<const Eigen::VectorXd>& x,
                         MarginKind kind);

}  // namespace svine
