#include "svine/process.hpp"

#include <stdexcept>

#include "svine/rng.hpp"
#include "svine/rosenblatt.hpp"

namespace svine {

SVineModel make_model(const KpacfParam& param, int truncation_lag,
                      MarginalModel margin) {
  validate(param.spec);
  const int p = truncation_lag < 0 ? param.spec.horizon : truncation_lag;
  SVineModel model;
  model.seq = sequence_from_kpacf(param.spec, param.family, param.rule, p);
  model.margin = std::move(margin);
  model.kpacf = param;
  return model;
}

SimulationPath simulate(const SVineModel& model, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("simulate: need n >= 1");
  SimulationPath path;
  path.u.resize(n);
  path.z.resize(n);
  path.seed = seed;
  path.truncation_lag = model.seq.truncation_lag;

  CounterRng rng(seed);
  RosenblattState state(model.seq);
  for (int k = 0; k < n; ++k) {
    path.z[k] = rng.next();
    path.u[k] = state.push_inverse(path.z[k]);
  }
  return path;
}

Eigen::VectorXd margin_scale(const SVineModel& model,
                             const Eigen::Ref<const Eigen::VectorXd>& u) {
  Eigen::VectorXd x(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i)
    x[i] = margin_quantile(model.margin, u[i]);
  return x;
}

double causal_filter(const CopulaSequence& seq,
                     const Eigen::Ref<const Eigen::VectorXd>& z) {
  if (z.size() < 1) throw std::invalid_argument("causal_filter: empty input");
  // The intermediate U-values are exactly the simulation recursion driven by
  // the given innovations, so one streaming pass reproduces S_k.
  RosenblattState state(seq);
  double x = 0.5;
  for (Eigen::Index j = 0; j < z.size(); ++j) x = state.push_inverse(z[j]);
  return x;
}

Eigen::VectorXd invert_to_innovations(
    const CopulaSequence& seq, const Eigen::Ref<const Eigen::VectorXd>& u) {
  Eigen::VectorXd z(u.size());
  RosenblattState state(seq);
  for (Eigen::Index t = 0; t < u.size(); ++t)
    z[t] = state.push(u[t]).innovation;
  return z;
}

ConvergenceTable convergence_experiment(const CopulaSequence& seq, int n,
                                        std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("convergence_experiment: need n >= 2");
  CounterRng rng(seed);
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z[i] = rng.next();

  ConvergenceTable table;
  table.lag.resize(n - 1);
  table.value.resize(n - 1);
  for (int k = 1; k < n; ++k) {
    table.lag[k - 1] = k;
    table.value[k - 1] = causal_filter(seq, z.tail(k + 1));
  }
  table.ultimate = table.value[n - 2];
  return table;
}

SVineModel clayton_excursion_preset() {
  SVineModel model;
  model.seq = CopulaSequence({clayton_copula(2.0, Rotation::Deg180),
                              clayton_copula(2.0, Rotation::Deg0),
                              clayton_copula(4.0, Rotation::Deg180)});
  return model;
}

}  // namespace svine
