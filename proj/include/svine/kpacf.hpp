#pragma once

#include <Eigen/Dense>
#include <string>

#include "svine/copula_sequence.hpp"
#include "svine/errors.hpp"

namespace svine {

enum class KpacfKind { Arma, Arfima, Fgn, Explicit };

/// Parametric family for the Kendall partial autocorrelation sequence
/// tau_k(theta), the lag-k Kendall's tau of each partial copula.
///
/// theta layout by kind:
///   Arma:     [phi_1..phi_p, psi_1..psi_q]
///   Arfima:   [phi_1..phi_p, psi_1..psi_q, d],  d in (-1/2, 1/2)
///   Fgn:      [H],                              H in (0, 1)
///   Explicit: [tau_1..tau_m], each in (-1, 1)
///
/// horizon is the default number of lags generated when no explicit
/// truncation is requested.
struct KpacfSpec {
  KpacfKind kind = KpacfKind::Explicit;
  int p = 0;
  int q = 0;
  Eigen::VectorXd theta;
  int horizon = 30;
};

/// Number of free parameters implied by (kind, p, q) or, for Explicit,
/// by the stored tau list.
int kpacf_param_count(const KpacfSpec& spec);

/// Validates orders, theta length, and parameter domains; throws
/// std::invalid_argument describing the first violation.
void validate(const KpacfSpec& spec);

/// tau_1..tau_K. Arma/Arfima go through the model acf and the
/// Levinson-Durbin transform; Fgn through its closed-form acf; Explicit
/// returns the stored values padded with zeros beyond their support.
Eigen::VectorXd kpacf_taus(const KpacfSpec& spec, int K);

/// Bijection between theta and an unconstrained optimization vector.
///
/// AR and MA blocks map through the partial-autocorrelation
/// reparameterization (tanh of the raw values fed through the
/// Levinson-Durbin coefficient recursion), so every raw vector yields a
/// causal AR part and an invertible MA part; d maps through tanh(raw)/2,
/// H through the logistic function, explicit taus through tanh. The
/// optimizer therefore never sees a constraint boundary and no clipping
/// happens anywhere.
Eigen::VectorXd kpacf_to_unconstrained(const KpacfSpec& spec);
KpacfSpec kpacf_from_unconstrained(const KpacfSpec& tmpl,
                                   const Eigen::Ref<const Eigen::VectorXd>& raw);

/// Builds the lag-indexed copula sequence sharing the spec's kpacf:
/// copula k = copula_from_tau(family, tau_k, rule), truncated at lag p.
CopulaSequence sequence_from_kpacf(const KpacfSpec& spec, Family family,
                                   NegativeTauRule rule, int truncation_lag);

/// Kind strings used in model-spec files: "arma(p,q)", "arfima(p,q)",
/// "fgn", "explicit".
std::string kpacf_kind_string(const KpacfSpec& spec);
KpacfSpec kpacf_spec_from_kind_string(const std::string& kind);

}  // namespace svine
