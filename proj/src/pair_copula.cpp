#include "svine/pair_copula.hpp"

#include <array>
#include <cmath>

#include "svine/math.hpp"

namespace svine {

using math::unit_clamp;

PairCopula independence_copula() { return {}; }

PairCopula gauss_copula(double alpha) {
  PairCopula c{Family::Gauss, Rotation::Deg0, alpha, 4.0};
  validate(c);
  return c;
}

PairCopula clayton_copula(double theta, Rotation rot) {
  PairCopula c{Family::Clayton, rot, theta, 4.0};
  validate(c);
  return c;
}

PairCopula gumbel_copula(double theta, Rotation rot) {
  PairCopula c{Family::Gumbel, rot, theta, 4.0};
  validate(c);
  return c;
}

PairCopula frank_copula(double theta) {
  PairCopula c{Family::Frank, Rotation::Deg0, theta, 4.0};
  validate(c);
  return c;
}

PairCopula joe_copula(double theta, Rotation rot) {
  PairCopula c{Family::Joe, rot, theta, 4.0};
  validate(c);
  return c;
}

PairCopula student_copula(double alpha, double nu) {
  PairCopula c{Family::StudentT, Rotation::Deg0, alpha, nu};
  validate(c);
  return c;
}

void validate(const PairCopula& cop) {
  const double t = cop.param;
  switch (cop.family) {
    case Family::Independence:
      return;
    case Family::Gauss:
      if (!(t > -1.0 && t < 1.0))
        throw std::invalid_argument("gauss copula: alpha must lie in (-1,1)");
      return;
    case Family::StudentT:
      if (!(t > -1.0 && t < 1.0))
        throw std::invalid_argument("student copula: alpha must lie in (-1,1)");
      if (!(cop.df > 2.0))
        throw std::invalid_argument("student copula: nu must be > 2");
      return;
    case Family::Clayton:
      if (!(t > 0.0))
        throw std::invalid_argument("clayton copula: theta must be > 0");
      return;
    case Family::Gumbel:
      if (!(t >= 1.0))
        throw std::invalid_argument("gumbel copula: theta must be >= 1");
      return;
    case Family::Frank:
      if (!(t != 0.0) || !std::isfinite(t))
        throw std::invalid_argument("frank copula: theta must be finite, nonzero");
      return;
    case Family::Joe:
      if (!(t >= 1.0))
        throw std::invalid_argument("joe copula: theta must be >= 1");
      return;
  }
  throw std::invalid_argument("pair copula: unknown family");
}

namespace {

// ---- base (unrotated) family implementations --------------------------
// All bases are exchangeable, so base h2(u,v) = base h1(v,u) and the
// h2-inverse reuses the h1-inverse; only the rotation wrapper distinguishes
// the two arguments.

double base_cdf(const PairCopula& c, double u, double v) {
  switch (c.family) {
    case Family::Independence:
      return u * v;
    case Family::Gauss:
      return math::bvn_cdf(math::norm_quantile(u), math::norm_quantile(v),
                           c.param);
    case Family::Clayton: {
      const double th = c.param;
      const double a = -th * std::log(u);
      const double b = -th * std::log(v);
      const double m = std::max(a, b);
      // log(e^a + e^b - 1), stable for large exponents
      const double ls =
          m + std::log(std::exp(a - m) + std::exp(b - m) - std::exp(-m));
      return std::exp(-ls / th);
    }
    case Family::Gumbel: {
      const double th = c.param;
      const double la = std::log(-std::log(u));
      const double lb = std::log(-std::log(v));
      const double m = std::max(th * la, th * lb);
      const double ls =
          m + std::log(std::exp(th * la - m) + std::exp(th * lb - m));
      return std::exp(-std::exp(ls / th));
    }
    case Family::Frank: {
      const double th = c.param;
      const double gu = std::expm1(-th * u);
      const double gv = std::expm1(-th * v);
      const double g1 = std::expm1(-th);
      return -std::log1p(gu * gv / g1) / th;
    }
    case Family::Joe: {
      const double th = c.param;
      const double qa = -std::expm1(th * std::log1p(-u));  // 1 - (1-u)^th
      const double qb = -std::expm1(th * std::log1p(-v));
      const double T = 1.0 - qa * qb;  // a^th + b^th - a^th b^th
      return 1.0 - std::exp(std::log(T) / th);
    }
    case Family::StudentT: {
      // One-dimensional quadrature of the conditional df; the recursion
      // engine never calls this, it serves diagnostics and tests.
      const PairCopula base{Family::StudentT, Rotation::Deg0, c.param, c.df};
      auto f = [&](double s) { return h1(base, s, v); };
      return math::integrate(f, math::unit_eps, u, 1e-11);
    }
  }
  throw std::invalid_argument("pair copula: unknown family");
}

double base_log_density(const PairCopula& c, double u, double v) {
  switch (c.family) {
    case Family::Independence:
      return 0.0;
    case Family::Gauss: {
      const double r = c.param;
      const double x = math::norm_quantile(u);
      const double y = math::norm_quantile(v);
      const double o = 1.0 - r * r;
      return -0.5 * std::log(o) -
             (r * r * (x * x + y * y) - 2.0 * r * x * y) / (2.0 * o);
    }
    case Family::Clayton: {
      const double th = c.param;
      const double a = -th * std::log(u);
      const double b = -th * std::log(v);
      const double m = std::max(a, b);
      const double ls =
          m + std::log(std::exp(a - m) + std::exp(b - m) - std::exp(-m));
      return std::log1p(th) + (th + 1.0) * (-std::log(u) - std::log(v)) -
             (2.0 + 1.0 / th) * ls;
    }
    case Family::Gumbel: {
      const double th = c.param;
      const double la = std::log(-std::log(u));
      const double lb = std::log(-std::log(v));
      const double m = std::max(th * la, th * lb);
      const double ls =
          m + std::log(std::exp(th * la - m) + std::exp(th * lb - m));
      const double s_pow = std::exp(ls / th);  // S^(1/th)
      return -s_pow + (th - 1.0) * (la + lb) - std::log(u) - std::log(v) +
             (1.0 / th - 2.0) * ls + std::log(s_pow + th - 1.0);
    }
    case Family::Frank: {
      const double th = c.param;
      const double gu = std::expm1(-th * u);
      const double gv = std::expm1(-th * v);
      const double g1 = std::expm1(-th);
      const double den = g1 + gu * gv;  // den < 0 iff th > 0
      return std::log(th * (-g1)) - th * (u + v) -
             2.0 * std::log(std::fabs(den));
    }
    case Family::Joe: {
      const double th = c.param;
      const double la = std::log1p(-u);  // log(1-u)
      const double lb = std::log1p(-v);
      const double qa = -std::expm1(th * la);  // 1 - (1-u)^th
      const double qb = -std::expm1(th * lb);
      const double T = 1.0 - qa * qb;  // = a^th + b^th - a^th b^th
      return (th - 1.0) * (la + lb) + (1.0 / th - 2.0) * std::log(T) +
             std::log(th - 1.0 + T);
    }
    case Family::StudentT: {
      const double r = c.param;
      const double nu = c.df;
      const double x = math::t_quantile(u, nu);
      const double y = math::t_quantile(v, nu);
      const double o = 1.0 - r * r;
      const double q = (x * x - 2.0 * r * x * y + y * y) / (nu * o);
      const double log_joint = std::lgamma(0.5 * nu + 1.0) -
                               std::lgamma(0.5 * nu) - std::log(nu * math::pi) -
                               0.5 * std::log(o) -
                               (0.5 * nu + 1.0) * std::log1p(q);
      return log_joint - math::t_log_pdf(x, nu) - math::t_log_pdf(y, nu);
    }
  }
  throw std::invalid_argument("pair copula: unknown family");
}

double base_h1(const PairCopula& c, double u, double v) {
  switch (c.family) {
    case Family::Independence:
      return v;
    case Family::Gauss: {
      const double r = c.param;
      return math::norm_cdf((math::norm_quantile(v) - r * math::norm_quantile(u)) /
                            std::sqrt(1.0 - r * r));
    }
    case Family::Clayton: {
      const double th = c.param;
      const double a = -th * std::log(u);
      const double b = -th * std::log(v);
      const double m = std::max(a, b);
      const double ls =
          m + std::log(std::exp(a - m) + std::exp(b - m) - std::exp(-m));
      return std::exp(-(th + 1.0) * std::log(u) - (1.0 + 1.0 / th) * ls);
    }
    case Family::Gumbel: {
      const double th = c.param;
      const double la = std::log(-std::log(u));
      const double lb = std::log(-std::log(v));
      const double m = std::max(th * la, th * lb);
      const double ls =
          m + std::log(std::exp(th * la - m) + std::exp(th * lb - m));
      // C(u,v) * xt^(th-1) * S^(1/th-1) / u, assembled in log space
      return std::exp(-std::exp(ls / th) + (th - 1.0) * la +
                      (1.0 / th - 1.0) * ls - std::log(u));
    }
    case Family::Frank: {
      const double th = c.param;
      const double gu = std::expm1(-th * u);
      const double gv = std::expm1(-th * v);
      const double g1 = std::expm1(-th);
      return std::exp(-th * u) * gv / (g1 + gu * gv);
    }
    case Family::Joe: {
      const double th = c.param;
      const double la = std::log1p(-u);
      const double lb = std::log1p(-v);
      const double qa = -std::expm1(th * la);
      const double qb = -std::expm1(th * lb);
      const double T = 1.0 - qa * qb;
      return std::exp((th - 1.0) * la + std::log(qb) +
                      (1.0 / th - 1.0) * std::log(T));
    }
    case Family::StudentT: {
      const double r = c.param;
      const double nu = c.df;
      const double x = math::t_quantile(u, nu);
      const double y = math::t_quantile(v, nu);
      const double s =
          std::sqrt((nu + x * x) * (1.0 - r * r) / (nu + 1.0));
      return math::t_cdf((y - r * x) / s, nu + 1.0);
    }
  }
  throw std::invalid_argument("pair copula: unknown family");
}

// v solving base_h1(u, v) = z; closed forms except Gumbel and Joe.
double base_h1_inverse(const PairCopula& c, double u, double z) {
  switch (c.family) {
    case Family::Independence:
      return z;
    case Family::Gauss: {
      const double r = c.param;
      return math::norm_cdf(std::sqrt(1.0 - r * r) * math::norm_quantile(z) +
                            r * math::norm_quantile(u));
    }
    case Family::Clayton: {
      const double th = c.param;
      // v = (u^-th (z^(-th/(1+th)) - 1) + 1)^(-1/th)
      const double w = -th * std::log(u) +
                       std::log(std::expm1(-th / (1.0 + th) * std::log(z)));
      const double softplus = w > 36.0 ? w : std::log1p(std::exp(w));
      return std::exp(-softplus / th);
    }
    case Family::Frank: {
      const double th = c.param;
      const double gu = std::expm1(-th * u);
      const double g1 = std::expm1(-th);
      const double gv = z * g1 / (std::exp(-th * u) - z * gu);
      return -std::log1p(gv) / th;
    }
    case Family::StudentT: {
      const double r = c.param;
      const double nu = c.df;
      const double x = math::t_quantile(u, nu);
      const double s =
          std::sqrt((nu + x * x) * (1.0 - r * r) / (nu + 1.0));
      return math::t_cdf(math::t_quantile(z, nu + 1.0) * s + r * x, nu);
    }
    case Family::Gumbel:
    case Family::Joe: {
      auto f = [&](double v) { return base_h1(c, u, v) - z; };
      auto df = [&](double v) { return std::exp(base_log_density(c, u, v)); };
      auto root = math::solve_increasing(f, df, math::unit_eps,
                                         1.0 - math::unit_eps, z, 1e-12,
                                         1e-15, 200);
      if (!root.converged)
        throw numeric_error("h_inverse: no convergence", root.lo, root.hi);
      return root.x;
    }
  }
  throw std::invalid_argument("pair copula: unknown family");
}

// Map a rotated evaluation onto the base copula. Returns the base-call
// arguments and flags for the output algebra of each operation.
struct RotArgs {
  double u, v;
};

RotArgs rot_args(Rotation r, double u, double v) {
  switch (r) {
    case Rotation::Deg0:
      return {u, v};
    case Rotation::Deg90:
      return {1.0 - u, v};
    case Rotation::Deg180:
      return {1.0 - u, 1.0 - v};
    case Rotation::Deg270:
      return {u, 1.0 - v};
  }
  throw std::invalid_argument("pair copula: unknown rotation");
}

PairCopula as_base(const PairCopula& c) {
  return {c.family, Rotation::Deg0, c.param, c.df};
}

}  // namespace

double cdf(const PairCopula& cop, double u, double v) {
  validate(cop);
  u = unit_clamp(u);
  v = unit_clamp(v);
  const PairCopula b = as_base(cop);
  const auto [ru, rv] = rot_args(cop.rotation, u, v);
  switch (cop.rotation) {
    case Rotation::Deg0:
      return base_cdf(b, ru, rv);
    case Rotation::Deg90:
      return v - base_cdf(b, ru, rv);
    case Rotation::Deg180:
      return u + v - 1.0 + base_cdf(b, ru, rv);
    case Rotation::Deg270:
      return u - base_cdf(b, ru, rv);
  }
  throw std::invalid_argument("pair copula: unknown rotation");
}

double log_density(const PairCopula& cop, double u, double v) {
  validate(cop);
  const auto [ru, rv] =
      rot_args(cop.rotation, unit_clamp(u), unit_clamp(v));
  return base_log_density(as_base(cop), ru, rv);
}

double density(const PairCopula& cop, double u, double v) {
  return std::exp(log_density(cop, u, v));
}

double h1(const PairCopula& cop, double u, double v) {
  validate(cop);
  u = unit_clamp(u);
  v = unit_clamp(v);
  const PairCopula b = as_base(cop);
  const auto [ru, rv] = rot_args(cop.rotation, u, v);
  double out;
  switch (cop.rotation) {
    case Rotation::Deg0:
      out = base_h1(b, ru, rv);
      break;
    case Rotation::Deg90:
      out = base_h1(b, ru, rv);
      break;
    case Rotation::Deg180:
      out = 1.0 - base_h1(b, ru, rv);
      break;
    case Rotation::Deg270:
      out = 1.0 - base_h1(b, ru, rv);
      break;
    default:
      throw std::invalid_argument("pair copula: unknown rotation");
  }
  return unit_clamp(out);
}

double h2(const PairCopula& cop, double u, double v) {
  validate(cop);
  u = unit_clamp(u);
  v = unit_clamp(v);
  const PairCopula b = as_base(cop);
  const auto [ru, rv] = rot_args(cop.rotation, u, v);
  // base h2(u,v) = base h1(v,u): all bases are exchangeable
  double out;
  switch (cop.rotation) {
    case Rotation::Deg0:
      out = base_h1(b, rv, ru);
      break;
    case Rotation::Deg90:
      out = 1.0 - base_h1(b, rv, ru);
      break;
    case Rotation::Deg180:
      out = 1.0 - base_h1(b, rv, ru);
      break;
    case Rotation::Deg270:
      out = base_h1(b, rv, ru);
      break;
    default:
      throw std::invalid_argument("pair copula: unknown rotation");
  }
  return unit_clamp(out);
}

double h1_inverse(const PairCopula& cop, double u, double z) {
  validate(cop);
  u = unit_clamp(u);
  z = unit_clamp(z);
  const PairCopula b = as_base(cop);
  switch (cop.rotation) {
    case Rotation::Deg0:
      return unit_clamp(base_h1_inverse(b, u, z));
    case Rotation::Deg90:
      return unit_clamp(base_h1_inverse(b, 1.0 - u, z));
    case Rotation::Deg180:
      return unit_clamp(1.0 - base_h1_inverse(b, 1.0 - u, 1.0 - z));
    case Rotation::Deg270:
      return unit_clamp(1.0 - base_h1_inverse(b, u, 1.0 - z));
  }
  throw std::invalid_argument("pair copula: unknown rotation");
}

double h2_inverse(const PairCopula& cop, double v, double z) {
  validate(cop);
  v = unit_clamp(v);
  z = unit_clamp(z);
  const PairCopula b = as_base(cop);
  // base h2-inverse in u is base h1-inverse with the fixed argument v
  switch (cop.rotation) {
    case Rotation::Deg0:
      return unit_clamp(base_h1_inverse(b, v, z));
    case Rotation::Deg90:
      return unit_clamp(1.0 - base_h1_inverse(b, v, 1.0 - z));
    case Rotation::Deg180:
      return unit_clamp(1.0 - base_h1_inverse(b, 1.0 - v, 1.0 - z));
    case Rotation::Deg270:
      return unit_clamp(base_h1_inverse(b, 1.0 - v, z));
  }
  throw std::invalid_argument("pair copula: unknown rotation");
}

double h_inverse(const PairCopula& cop, int which, double u_fixed, double z) {
  if (which == 1) return h1_inverse(cop, u_fixed, z);
  if (which == 2) return h2_inverse(cop, u_fixed, z);
  throw std::invalid_argument("h_inverse: which must be 1 or 2");
}

namespace {

double base_tau(const PairCopula& c) {
  switch (c.family) {
    case Family::Independence:
      return 0.0;
    case Family::Gauss:
    case Family::StudentT:
      return 2.0 / math::pi * std::asin(c.param);
    case Family::Clayton:
      return c.param / (c.param + 2.0);
    case Family::Gumbel:
      return 1.0 - 1.0 / c.param;
    case Family::Frank: {
      const double th = std::fabs(c.param);
      const double tau = 1.0 - 4.0 / th * (1.0 - math::debye1(th));
      return c.param > 0.0 ? tau : -tau;
    }
    case Family::Joe: {
      // tau = 1 - 4 sum_{k>=1} 1 / (k (th k + 2) (th (k-1) + 2)).
      // Telescopes to 0 at th=1 and to 2 - pi^2/6 at th=2.
      const double th = c.param;
      double s = 0.0;
      const int K = 2000;
      for (int k = K; k >= 1; --k)
        s += 1.0 / (k * (th * k + 2.0) * (th * (k - 1.0) + 2.0));
      // midpoint-rule tail with the asymptotic expansion of the integral
      const double M = K + 0.5;
      const double p1 = 2.0 / th, p2 = (2.0 - th) / th;
      const double tail =
          (0.5 / (M * M) - (p1 + p2) / (3.0 * M * M * M) +
           (0.25 * (p1 * p1 + p1 * p2 + p2 * p2) + 0.125) / (M * M * M * M)) /
          (th * th);
      return 1.0 - 4.0 * (s + tail);
    }
  }
  throw std::invalid_argument("pair copula: unknown family");
}

}  // namespace

double kendall_tau(const PairCopula& cop) {
  validate(cop);
  const double t = base_tau(as_base(cop));
  return (cop.rotation == Rotation::Deg90 || cop.rotation == Rotation::Deg270)
             ? -t
             : t;
}

PairCopula copula_from_tau(Family family, double tau, NegativeTauRule rule) {
  if (!(tau > -1.0 && tau < 1.0))
    throw std::invalid_argument("copula_from_tau: tau must lie in (-1,1)");
  if (tau == 0.0) return independence_copula();
  switch (family) {
    case Family::Independence:
      throw std::invalid_argument(
          "copula_from_tau: Independence cannot reach nonzero tau");
    case Family::StudentT:
      throw std::invalid_argument(
          "copula_from_tau: StudentT is excluded from single-parameter "
          "tau inversion");
    case Family::Gauss:
      return gauss_copula(std::sin(math::pi * tau / 2.0));
    case Family::Frank: {
      // tau(theta) is odd and increasing; bisect on theta in [-50, 50]
      auto tau_of = [](double th) {
        return kendall_tau({Family::Frank, Rotation::Deg0, th, 4.0});
      };
      if (std::fabs(tau) >= tau_of(50.0))
        throw std::invalid_argument(
            "copula_from_tau: tau unreachable for Frank within theta in "
            "[-50,50]");
      double lo = tau > 0.0 ? 1e-9 : -50.0;
      double hi = tau > 0.0 ? 50.0 : -1e-9;
      for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, std::fabs(lo));
           ++i) {
        const double mid = 0.5 * (lo + hi);
        if (tau_of(mid) < tau) lo = mid; else hi = mid;
      }
      return frank_copula(0.5 * (lo + hi));
    }
    default:
      break;
  }
  // Clayton / Gumbel / Joe: positive-dependence families
  const bool neg = tau < 0.0;
  if (neg && rule == NegativeTauRule::SubstituteFrank)
    return copula_from_tau(Family::Frank, tau, rule);
  if (neg && rule == NegativeTauRule::SubstituteGauss)
    return copula_from_tau(Family::Gauss, tau, rule);
  const double at = std::fabs(tau);
  const Rotation rot = !neg ? Rotation::Deg0
                            : (rule == NegativeTauRule::Rotate90
                                   ? Rotation::Deg90
                                   : Rotation::Deg270);
  switch (family) {
    case Family::Clayton:
      return clayton_copula(2.0 * at / (1.0 - at), rot);
    case Family::Gumbel:
      return gumbel_copula(1.0 / (1.0 - at), rot);
    case Family::Joe: {
      auto tau_of = [](double th) {
        return base_tau({Family::Joe, Rotation::Deg0, th, 4.0});
      };
      double lo = 1.0, hi = 2.0;
      while (tau_of(hi) < at) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6)
          throw std::invalid_argument(
              "copula_from_tau: tau unreachable for Joe within theta cap");
      }
      for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (tau_of(mid) < at) lo = mid; else hi = mid;
      }
      return joe_copula(0.5 * (lo + hi), rot);
    }
    default:
      throw std::invalid_argument("copula_from_tau: unsupported family");
  }
}

PairCopula transposed(const PairCopula& cop) {
  PairCopula t = cop;
  if (cop.rotation == Rotation::Deg90) t.rotation = Rotation::Deg270;
  else if (cop.rotation == Rotation::Deg270) t.rotation = Rotation::Deg90;
  return t;
}

bool is_exchangeable(const PairCopula& cop) {
  return cop.family == Family::Independence ||
         cop.rotation == Rotation::Deg0 || cop.rotation == Rotation::Deg180;
}

namespace {
const std::array<std::string, 7> kFamilyNames = {
    "independence", "gauss", "clayton", "gumbel", "frank", "joe", "studentt"};
const std::array<std::string, 4> kRuleNames = {
    "rotate", "rotate270", "substitute_frank", "substitute_gauss"};
}  // namespace

const std::string& family_name(Family f) {
  return kFamilyNames[static_cast<int>(f)];
}

Family family_from_name(const std::string& name) {
  for (std::size_t i = 0; i < kFamilyNames.size(); ++i)
    if (kFamilyNames[i] == name) return static_cast<Family>(i);
  throw std::invalid_argument("unknown copula family: " + name);
}

int rotation_degrees(Rotation r) { return 90 * static_cast<int>(r); }

Rotation rotation_from_degrees(int deg) {
  switch (deg) {
    case 0: return Rotation::Deg0;
    case 90: return Rotation::Deg90;
    case 180: return Rotation::Deg180;
    case 270: return Rotation::Deg270;
  }
  throw std::invalid_argument("rotation must be one of 0, 90, 180, 270");
}

const std::string& negative_rule_name(NegativeTauRule r) {
  return kRuleNames[static_cast<int>(r)];
}

NegativeTauRule negative_rule_from_name(const std::string& name) {
  if (name == "rotate" || name == "rotate90") return NegativeTauRule::Rotate90;
  for (std::size_t i = 1; i < kRuleNames.size(); ++i)
    if (kRuleNames[i] == name) return static_cast<NegativeTauRule>(i);
  throw std::invalid_argument("unknown negative-tau rule: " + name);
}

}  // namespace svine
