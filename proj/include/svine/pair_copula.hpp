#pragma once

#include <string>

namespace svine {

enum class Family { Independence, Gauss, Clayton, Gumbel, Frank, Joe, StudentT };

enum class Rotation { Deg0, Deg90, Deg180, Deg270 };

/// How copula_from_tau realizes a negative tau for families whose parameter
/// range only covers positive dependence (Clayton, Gumbel, Joe).
enum class NegativeTauRule { Rotate90, Rotate270, SubstituteFrank, SubstituteGauss };

/// A bivariate pair copula: family, dependence parameter, rotation.
/// Parameter domains: Gauss/StudentT alpha in (-1,1); Clayton theta > 0;
/// Gumbel, Joe theta >= 1; Frank theta != 0. StudentT carries its
/// degrees-of-freedom (nu > 2) in df; other families ignore it.
struct PairCopula {
  Family family = Family::Independence;
  Rotation rotation = Rotation::Deg0;
  double param = 0.0;
  double df = 4.0;
};

PairCopula independence_copula();
PairCopula gauss_copula(double alpha);
PairCopula clayton_copula(double theta, Rotation rot = Rotation::Deg0);
PairCopula gumbel_copula(double theta, Rotation rot = Rotation::Deg0);
PairCopula frank_copula(double theta);
PairCopula joe_copula(double theta, Rotation rot = Rotation::Deg0);
PairCopula student_copula(double alpha, double nu);

/// Throws std::invalid_argument when the parameter leaves its admissible
/// domain or the rotation is meaningless for the family.
void validate(const PairCopula& cop);

/// C(u, v). Arguments are clamped to [1e-12, 1-1e-12] first, as everywhere.
double cdf(const PairCopula& cop, double u, double v);

double density(const PairCopula& cop, double u, double v);
double log_density(const PairCopula& cop, double u, double v);

/// h1 = dC/du (conditional df of V given U = u); h2 = dC/dv.
double h1(const PairCopula& cop, double u, double v);
double h2(const PairCopula& cop, double u, double v);

/// v solving h1(u, v) = z.
double h1_inverse(const PairCopula& cop, double u, double z);
/// u solving h2(u, v) = z.
double h2_inverse(const PairCopula& cop, double v, double z);
/// Spec-shaped dispatcher over the two inverses; which is 1 or 2 and
/// u_fixed is the non-solved argument.
double h_inverse(const PairCopula& cop, int which, double u_fixed, double z);

/// Kendall's tau. Closed forms where available (Gauss, StudentT, Clayton,
/// Gumbel), Debye quadrature for Frank, a tail-corrected series for Joe.
double kendall_tau(const PairCopula& cop);

/// Copula with the given family whose Kendall tau equals tau. tau = 0 maps
/// to Independence for every family; negative tau on Clayton/Gumbel/Joe is
/// realized per the rule. StudentT is excluded from this single-parameter
/// inversion (its nu is a user-fixed constant).
PairCopula copula_from_tau(Family family, double tau,
                           NegativeTauRule rule = NegativeTauRule::Rotate90);

/// Copula of the argument-swapped pair: C^T(u,v) = C(v,u). For the
/// exchangeable base families this flips rotation 90 <-> 270.
PairCopula transposed(const PairCopula& cop);

/// True when C(u,v) = C(v,u); rotations by 90/270 break exchangeability.
bool is_exchangeable(const PairCopula& cop);

const std::string& family_name(Family f);
Family family_from_name(const std::string& name);
int rotation_degrees(Rotation r);
Rotation rotation_from_degrees(int deg);
const std::string& negative_rule_name(NegativeTauRule r);
NegativeTauRule negative_rule_from_name(const std::string& name);

}  // namespace svine
