#include "svine/rosenblatt.hpp"

#include <algorithm>
#include <stdexcept>

#include "svine/math.hpp"
#include "svine/rng.hpp"

namespace svine {

RosenblattState::RosenblattState(const CopulaSequence& seq, int capacity)
    : seq_(&seq),
      cap_(capacity < 0 ? seq.truncation_lag : capacity),
      back_(static_cast<std::size_t>(std::max(cap_, 0))),
      fwd_(static_cast<std::size_t>(std::max(cap_, 0)) + 1) {
  if (capacity >= 0 && capacity < seq.truncation_lag) {
    throw std::invalid_argument(
        "RosenblattState: capacity below the sequence truncation lag");
  }
}

void RosenblattState::reset() { m_ = 0; }

// Fills fwd_[0..L] with the forward path of x through the current state:
// fwd_[l] = P(next <= x | last l observations). Returns fwd_[L].
template <bool WithDensity>
double RosenblattState::forward_pass(double x, double* log_density_out) const {
  const int L = active();
  fwd_[0] = x;
  double acc = 0.0;
  for (int l = 1; l <= L; ++l) {
    const PairCopula cop = seq_->at(l);
    if (WithDensity) acc += log_density(cop, back_[l - 1], fwd_[l - 1]);
    fwd_[l] = h1(cop, back_[l - 1], fwd_[l - 1]);
  }
  if (WithDensity) *log_density_out = acc;
  return fwd_[L];
}

// Shifts the backward values one step: afterwards back_[l] conditions on a
// window ending at the value x just appended. Descending order reuses the
// previous back_[l-1] before it is overwritten. fwd_ must hold the forward
// path of x (forward_pass has run).
void RosenblattState::update_backward(double x) {
  const int top = std::min(m_, cap_ - 1);
  for (int l = top; l >= 1; --l) {
    back_[l] = h2(seq_->at(l), back_[l - 1], fwd_[l - 1]);
  }
  if (cap_ >= 1) back_[0] = x;
  ++m_;
}

RosenblattState::PushResult RosenblattState::push(double x) {
  double logf = 0.0;
  const double z = forward_pass<true>(x, &logf);
  update_backward(x);
  return {z, logf};
}

double RosenblattState::push_inverse(double z) {
  const double x = inverse_value(z);  // also leaves the path in fwd_
  update_backward(x);
  return x;
}

double RosenblattState::forward_value(double x) const {
  return forward_pass<false>(x, nullptr);
}

Eigen::VectorXd RosenblattState::forward_ladder(double x) const {
  forward_pass<false>(x, nullptr);
  return Eigen::Map<const Eigen::VectorXd>(fwd_.data(), active() + 1);
}

// Peels the nested h-functions from the outside in: the layer-l value of
// the solution is recovered by one closed (or locally bracketed) monotone
// inversion per lag, so no outer root search over x is needed.
double RosenblattState::inverse_value(double z) const {
  const int L = active();
  fwd_[L] = z;
  for (int l = L; l >= 1; --l) {
    fwd_[l - 1] = h1_inverse(seq_->at(l), back_[l - 1], fwd_[l]);
  }
  return fwd_[0];
}

double RosenblattState::log_conditional(double x) const {
  double logf = 0.0;
  forward_pass<true>(x, &logf);
  return logf;
}

double RosenblattState::backward_value(int lag) const {
  if (lag < 0 || lag >= active()) {
    throw std::out_of_range("RosenblattState: backward lag out of range");
  }
  return back_[lag];
}

namespace {

RosenblattState fed_state(const CopulaSequence& seq,
                          const Eigen::Ref<const Eigen::VectorXd>& u) {
  RosenblattState state(seq);
  for (Eigen::Index t = 0; t < u.size(); ++t) state.push(u[t]);
  return state;
}

}  // namespace

double forward(const CopulaSequence& seq,
               const Eigen::Ref<const Eigen::VectorXd>& u, double x) {
  return fed_state(seq, u).forward_value(x);
}

double backward(const CopulaSequence& seq,
                const Eigen::Ref<const Eigen::VectorXd>& u, double x) {
  return forward(transposed(seq), u.reverse(), x);
}

double forward_inverse(const CopulaSequence& seq,
                       const Eigen::Ref<const Eigen::VectorXd>& u, double z) {
  return fed_state(seq, u).inverse_value(z);
}

double log_joint_density(const CopulaSequence& seq,
                         const Eigen::Ref<const Eigen::VectorXd>& u) {
  RosenblattState state(seq);
  double acc = 0.0;
  for (Eigen::Index t = 0; t < u.size(); ++t) acc += state.push(u[t]).log_density;
  return acc;
}

double log_conditional_density(const CopulaSequence& seq,
                               const Eigen::Ref<const Eigen::VectorXd>& u,
                               double x) {
  return fed_state(seq, u).log_conditional(x);
}

double marginal_copula_estimate(const CopulaSequence& seq, int k, double v1,
                                double v2, int n_samples, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("marginal_copula_estimate: k < 1");
  if (k == 1) return cdf(seq.at(1), v1, v2);
  if (n_samples < 1) {
    throw std::invalid_argument("marginal_copula_estimate: n_samples < 1");
  }

  // Average, over windows drawn from the stationary law, of the lag-k pair
  // copula evaluated at the conditional dfs of v1 (before the window) and
  // v2 (after it). The two values are conditionally independent given the
  // window once k exceeds the truncation lag, which this form still covers.
  CounterRng rng(seed);
  Eigen::VectorXd window(k - 1);
  const PairCopula& top = seq.at(k);
  double acc = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    RosenblattState state(seq);
    for (int t = 0; t < k - 1; ++t) {
      window[t] = state.push_inverse(rng.next());
    }
    const double b = state.forward_value(v2);
    const double a = backward(seq, window, v1);
    acc += cdf(top, a, b);
  }
  return acc / static_cast<double>(n_samples);
}

}  // namespace svine
