#include "svine/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace svine {

SimplexResult minimize_simplex(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x0, const SimplexOptions& opts) {
  const int n = static_cast<int>(x0.size());
  SimplexResult res;
  res.evaluations = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++res.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : 1e300;
  };

  if (n == 0) {
    res.x = x0;
    res.f = eval(x0);
    res.converged = true;
    return res;
  }

  std::vector<Eigen::VectorXd> verts(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (int i = 0; i < n; ++i) {
    double step = opts.initial_step;
    if (verts[i + 1][i] == 0.0) step = std::max(step, 0.05);
    verts[i + 1][i] += step;
  }
  for (int i = 0; i <= n; ++i) fv[i] = eval(verts[i]);

  std::vector<int> order(n + 1);
  while (res.evaluations < opts.max_iter) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return fv[a] < fv[b]; });
    const int best = order[0], worst = order[n], second = order[n - 1];

    double spread_x = 0.0;
    for (int i = 1; i <= n; ++i)
      spread_x = std::max(
          spread_x, (verts[order[i]] - verts[best]).cwiseAbs().maxCoeff());
    if (std::fabs(fv[worst] - fv[best]) <= opts.f_tol &&
        spread_x <= opts.x_tol) {
      res.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += verts[i];
    centroid /= n;

    const Eigen::VectorXd xr = centroid + (centroid - verts[worst]);
    const double fr = eval(xr);
    if (fr < fv[best]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - verts[worst]);
      const double fe = eval(xe);
      if (fe < fr) {
        verts[worst] = xe;
        fv[worst] = fe;
      } else {
        verts[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr < fv[second]) {
      verts[worst] = xr;
      fv[worst] = fr;
    } else {
      const bool outside = fr < fv[worst];
      const Eigen::VectorXd base = outside ? xr : verts[worst];
      const Eigen::VectorXd xc = centroid + 0.5 * (base - centroid);
      const double fc = eval(xc);
      if (fc < std::min(fr, fv[worst])) {
        verts[worst] = xc;
        fv[worst] = fc;
      } else {
        // shrink towards the best vertex
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          verts[i] = verts[best] + 0.5 * (verts[i] - verts[best]);
          fv[i] = eval(verts[i]);
        }
      }
    }
  }

  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (fv[i] < fv[best]) best = i;
  res.x = verts[best];
  res.f = fv[best];
  return res;
}

}  // namespace svine
