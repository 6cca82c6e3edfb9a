#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "svine/errors.hpp"

namespace svine {

/// Autocorrelation sequence rho_1..rho_K. Entries must lie in (-1,1); the
/// stronger requirement that every implied Toeplitz correlation matrix is
/// positive definite is enforced by acf_to_pacf, which fails at the first
/// lag whose partial autocorrelation leaves (-1,1).
struct Acf {
  Eigen::VectorXd rho;
};

/// Partial autocorrelation sequence alpha_1..alpha_K, each in (-1,1).
/// Any such sequence is a valid stationary specification.
struct Pacf {
  Eigen::VectorXd alpha;
};

/// Best-linear-predictor machinery derived from a pacf of length K.
///
/// phi[k-1](j-1) holds the projection coefficient of the j-th most recent
/// value when predicting one step ahead from k values; sigma(k-1) is the
/// corresponding innovation standard deviation sqrt(prod_{j<=k}(1-alpha_j^2));
/// psi[k](j) holds the moving-average weights of the finite-history
/// representation, with psi[k](0) = sigma_k and psi[0] = {1}.
struct DlCoefficients {
  std::vector<Eigen::VectorXd> phi;
  Eigen::VectorXd sigma;
  std::vector<Eigen::VectorXd> psi;

  int order() const { return static_cast<int>(sigma.size()); }
};

/// Levinson-Durbin step from autocorrelations to partial autocorrelations.
/// Throws std::invalid_argument naming the failing lag when the input is not
/// a valid stationary acf (some |alpha_k| >= 1).
Pacf acf_to_pacf(const Acf& acf);

/// Inverse transform; exact inverse of acf_to_pacf up to rounding.
Acf pacf_to_acf(const Pacf& pacf);

/// Full triangular projection arrays per the Levinson-Durbin recursion.
DlCoefficients dl_coefficients(const Pacf& pacf);

/// True when the AR polynomial 1 - phi_1 z - ... - phi_p z^p has all roots
/// outside the unit circle (checked via the companion-matrix spectrum).
bool is_causal(const Eigen::Ref<const Eigen::VectorXd>& phi);

/// ARMA(p,q) autocorrelations to lag K from the MA(inf) expansion, truncated
/// once weights drop below 1e-14 in magnitude (hard cap 1e5 terms).
/// phi are AR coefficients, psi MA coefficients (sign convention
/// X_t = sum phi_i X_{t-i} + eps_t + sum psi_j eps_{t-j}).
Acf arma_acf(const Eigen::Ref<const Eigen::VectorXd>& phi,
             const Eigen::Ref<const Eigen::VectorXd>& psi, int K);

/// ARFIMA(p,d,q) autocorrelations to lag K, d in (-1/2, 1/2): the exact
/// fractional-noise autocovariance (forward recursion from
/// gamma(0) = Gamma(1-2d)/Gamma(1-d)^2) convolved with the autocovariance of
/// the truncated ARMA weight sequence. Plain long-truncation of the combined
/// weight sequence converges too slowly near d = 1/2 to be usable here.
Acf arfima_acf(const Eigen::Ref<const Eigen::VectorXd>& phi, double d,
               const Eigen::Ref<const Eigen::VectorXd>& psi, int K);

/// ARFIMA partial autocorrelations. For p = q = 0 uses the closed form
/// alpha_k = d/(k-d) exactly; otherwise goes through arfima_acf and the
/// Levinson-Durbin transform.
Pacf arfima_pacf(const Eigen::Ref<const Eigen::VectorXd>& phi, double d,
                 const Eigen::Ref<const Eigen::VectorXd>& psi, int K);

/// Fractional-Gaussian-noise pacf for Hurst index H in (0,1):
/// rho_k = ((k+1)^{2H} + (k-1)^{2H} - 2 k^{2H})/2, then acf_to_pacf.
Pacf fgn_pacf(double H, int K);
Acf fgn_acf(double H, int K);

/// Forward Rosenblatt transform of a stationary Gaussian copula process in
/// closed form: Phi((Phi^{-1}(x) - sum_j phi_j^{(k)} Phi^{-1}(u_{k+1-j}))
/// / sigma_k), where k = u.size() and u is ordered oldest first.
double gaussian_forward(const DlCoefficients& coef,
                        const Eigen::Ref<const Eigen::VectorXd>& u, double x);

/// Inverse of gaussian_forward in its last argument.
double gaussian_forward_inverse(const DlCoefficients& coef,
                                const Eigen::Ref<const Eigen::VectorXd>& u,
                                double z);

/// Closed-form inverse Rosenblatt transform (moving-average form):
/// Phi(sigma_k Phi^{-1}(x) + sum_j psi_j^{(k)} Phi^{-1}(z_{k+1-j})) with
/// z the innovation window ordered oldest first.
double gaussian_inverse(const DlCoefficients& coef,
                        const Eigen::Ref<const Eigen::VectorXd>& z, double x);

/// Both sides of the long-run variance identity
/// 1 + 2 sum_k rho_k = prod_k (1+alpha_k)/(1-alpha_k).
/// The left side extends the acf beyond the pacf support by the implied
/// autoregressive recursion until the terms are negligible or the extension
/// cap is reached; extension_cap < 0 selects max(100000, 50 * support).
std::pair<double, double> debowski_check(const Pacf& pacf,
                                         long extension_cap = -1);

/// Kendall-tau parameterization of a partial autocorrelation, tau =
/// (2/pi) arcsin(alpha), and its inverse. Exact closed forms.
double tau_from_alpha(double alpha);
double alpha_from_tau(double tau);

}  // namespace svine
