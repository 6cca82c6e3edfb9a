#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "svine/copula_sequence.hpp"

namespace svine {

/// Streaming engine for the interlacing conditional-df recursions of a
/// stationary pair-copula sequence.
///
/// After m pushed values w_1..w_m (w_m most recent) the state holds, for
/// each lag l < min(m, capacity), the backward value
///   back[l] = P(W_{m-l} <= w_{m-l} | W_{m-l+1..m} = w_{m-l+1..m}),
/// which is exactly what the next forward/backward step consumes. Each push
/// costs O(capacity) h-function calls, so a full sweep over n values is
/// O(n * capacity).
///
/// The sequence is referenced, not copied; it must outlive the state.
class RosenblattState {
 public:
  struct PushResult {
    double innovation;    // R_L(window, x), L = min(m, capacity)
    double log_density;   // log f_L(window, x), the conditional log density
  };

  /// capacity < 0 selects the sequence's truncation lag. A larger capacity
  /// only matters when backward values beyond the truncation lag are read
  /// (they pass through independence copulas unchanged otherwise).
  explicit RosenblattState(const CopulaSequence& seq, int capacity = -1);

  void reset();
  int count() const { return m_; }
  int active() const { return m_ < cap_ ? m_ : cap_; }

  /// Appends an observation; returns its innovation and conditional density.
  PushResult push(double x);

  /// Appends the observation whose innovation is z; returns it.
  double push_inverse(double z);

  /// Conditional df / its inverse / conditional log density of a candidate
  /// next value, without mutating the state.
  double forward_value(double x) const;
  double inverse_value(double z) const;
  double log_conditional(double x) const;

  /// All partial forward transforms of a candidate next value at once:
  /// entry l is R_l(trailing l values, x), for l = 0..active(). One call
  /// costs the same as forward_value.
  Eigen::VectorXd forward_ladder(double x) const;

  /// back[lag] as described above; lag < active(). lag 0 is the most
  /// recent observation itself.
  double backward_value(int lag) const;

 private:
  template <bool WithDensity>
  double forward_pass(double x, double* log_density_out) const;
  void update_backward(double x);

  const CopulaSequence* seq_;
  int cap_ = 0;
  int m_ = 0;
  std::vector<double> back_;
  mutable std::vector<double> fwd_;
};

/// R_k(u, x): conditional df of the next value given the window u, ordered
/// oldest first. k = u.size(); conditioning beyond the truncation lag is a
/// no-op by construction.
double forward(const CopulaSequence& seq,
               const Eigen::Ref<const Eigen::VectorXd>& u, double x);

/// R^(2)_k(u, x): conditional df of the value immediately before the
/// window. Computed as the forward recursion of the transposed sequence on
/// the reversed window, which is the time-reversal identity.
double backward(const CopulaSequence& seq,
                const Eigen::Ref<const Eigen::VectorXd>& u, double x);

/// x solving forward(seq, u, x) = z, by layer-wise inversion of the nested
/// h-functions (one monotone inversion per lag, no outer root search).
double forward_inverse(const CopulaSequence& seq,
                       const Eigen::Ref<const Eigen::VectorXd>& u, double z);

/// log of the joint copula density of u under the sequence; 0 for n <= 1.
double log_joint_density(const CopulaSequence& seq,
                         const Eigen::Ref<const Eigen::VectorXd>& u);

/// log f_k(u, x), the conditional log density of x given the window u,
/// evaluated through the product form along the recursion path.
double log_conditional_density(const CopulaSequence& seq,
                               const Eigen::Ref<const Eigen::VectorXd>& u,
                               double x);

/// Monte Carlo estimate of the unconditional (marginal) copula of two
/// values k lags apart, by averaging the lag-k copula over simulated
/// intervening windows. k = 1 is exact. Deterministic for a fixed seed.
double marginal_copula_estimate(const CopulaSequence& seq, int k, double v1,
                                double v2, int n_samples, std::uint64_t seed);

}  // namespace svine
