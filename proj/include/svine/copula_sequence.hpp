#pragma once

#include <vector>

#include "svine/pair_copula.hpp"

namespace svine {

/// Lag-indexed pair-copula sequence defining a stationary process.
///
/// copulas[k-1] couples observations k steps apart, conditionally on the
/// values between them. Lags beyond truncation_lag use the independence
/// copula, so the process is Markov of order truncation_lag.
struct CopulaSequence {
  std::vector<PairCopula> copulas;
  int truncation_lag = 0;

  CopulaSequence() = default;
  explicit CopulaSequence(std::vector<PairCopula> cops)
      : copulas(std::move(cops)),
        truncation_lag(static_cast<int>(copulas.size())) {}

  /// Copula at lag k >= 1; independence beyond the stored range.
  PairCopula at(int k) const {
    if (k < 1) throw std::invalid_argument("copula lag must be >= 1");
    if (k > truncation_lag || k > static_cast<int>(copulas.size()))
      return independence_copula();
    return copulas[static_cast<std::size_t>(k) - 1];
  }
};

/// Sequence with every copula transposed. Running recursions on the
/// transposed sequence over a reversed window reproduces the original
/// process read backwards in time.
inline CopulaSequence transposed(const CopulaSequence& seq) {
  CopulaSequence out = seq;
  for (auto& c : out.copulas) c = transposed(c);
  return out;
}

}  // namespace svine
