#pragma once

// Membership tests for the vanishing loci near the diagonal, and numerical
// checks of the local structure statements about them.
//
// Coordinates are 0-based here except where a parameter names a bracket
// index (j, k in the minor checks are 1-based, as in expand.hpp).

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "thetalab/chars.hpp"
#include "thetalab/expand.hpp"
#include "thetalab/sampling.hpp"
#include "thetalab/theta.hpp"

namespace thetalab {

inline constexpr double kDefaultLocusTol = 1e-8;
inline constexpr double kDefaultRankTol = 1e-7;

struct LocusVerdict {
  std::string locus;
  std::string digest;       // of the input period matrix
  nlohmann::json witness;   // every constant or minor consulted
  double tol = 0.0;
  bool verdict = false;

  nlohmann::json to_json() const;
};

/// FNV-1a 64 over the entries' IEEE bytes, as 16 hex digits.
std::string digest(const PeriodMatrix& tau);

/// All theta constants with some [1;1] column vanish, relative to the largest
/// even theta constant.
LocusVerdict is_diagonal_orbit(const PeriodMatrix& tau, double tol = kDefaultLocusTol);

/// theta[m1 (+) m2] vanishes for every odd m1 of genus g1 and odd m2 of genus g - g1.
LocusVerdict is_product_orbit(const PeriodMatrix& tau, int g1, double tol = kDefaultLocusTol);

struct NullRank {
  bool is_null = false;
  int rank = 0;
  double relative_value = 0.0;  // |theta_m| / max even |theta|
};

/// Whether theta_m vanishes (relative) and the numerical rank of its z-Hessian.
NullRank thetanull_rank_class(const PeriodMatrix& tau, const Characteristic& m,
                              double tol = kDefaultLocusTol, double rank_tol = kDefaultRankTol);

/// Every constant of hyperelliptic_vanishing_set(g) vanishes. The witness also
/// lists the even m + b^g with m a sum of exactly g basis members, which are
/// reported but not required to be non-zero.
LocusVerdict hyperelliptic_vanishing_test(const PeriodMatrix& tau, double tol = kDefaultLocusTol);

/// For each triple j1 < j2 < j3, the tau-gradient of theta at diag(t) for the
/// characteristic o_j1 + o_j2 + o_j3 (columns permuted by pi when given) is
/// supported only at (pi(j1), pi(j3)); their common kernel in the symmetric
/// matrices has dimension 2g - 1.
LocusVerdict tridiagonal_tangent_check(const std::vector<cplx>& t, double tol = kDefaultLocusTol,
                                       const std::vector<int>& pi = {});

/// Direction on the slice tau_jk = 0 (4 <= j < k), tau_1j = tau_2j = tau_3j.
CMatrix slice_y_direction(int g, Rng& rng);

/// Residual of the displayed d_{z1} theta expansion on the slice; target >= 3.
SlopeReport gradient_slice_residual(const std::vector<cplx>& t, const CMatrix& dir,
                                    const std::vector<double>& ladder);

/// C_j = d_{zj} theta - phi_j x_1j (d_1 + d_2 + d_3) theta, x = tau / 2 pi i,
/// against (psi_j - 2 phi_j^2) x_1j^3 prod f: slope 3 and coefficient within 5%.
/// j is 1-based, j >= 4.
SlopeReport gradient_combination(const std::vector<cplx>& t, const CMatrix& dir, int j,
                                 const std::vector<double>& ladder);

/// The residual report followed by one combination report per j = 4..g.
std::vector<SlopeReport> gradient_locus_check(const std::vector<cplx>& t, const CMatrix& dir,
                                              const std::vector<double>& ladder);

enum class MinorKind { D12j, D12jj, D12jk };
std::string_view to_string(MinorKind kind);
MinorKind parse_minor_kind(std::string_view name);

/// tau_12 on the theta_{m0} = 0 branch through the expansion seed
/// tau_12 = -2 pi i sum_{a >= 3} phi_a x_1a x_2a, refined by Newton steps.
PeriodMatrix solve_thetanull_tau12(const PeriodMatrix& tau, const ThetaOptions& opts);

/// det of T / prod f on rows and columns (1-based), T_ab = 2 pi i d theta_m0 / d tau_ab.
cplx hessian_minor_det(const PeriodMatrix& tau, const std::vector<int>& rows,
                       const std::vector<int>& cols, const ThetaOptions& opts);

/// Direction for a minor check. D12j and D12jj use tau_1a = tau_2a (a >= 3);
/// D12j additionally has tau_ab = 0 for 3 <= a < b. D12jk scales
/// tau_1j = tau_2j, tau_1k = tau_2k with eps^2 (see minor_identity_check).
CMatrix slice_z_direction(int g, Rng& rng, MinorKind kind);

/// Compares a minor of the true Hessian along a ray on the slice, with tau_12
/// solved from theta_m0 = 0, against its leading formula:
///   D12j   det(1,2,j)       ~ (2 phi_j^2 - psi_j / 2) x_1j^2              order 2
///   D12jj  det(1,2,3,j)     ~ -x_13^2 x_1j^2 (4phi_3^2 - psi_3)(4phi_j^2 - psi_j) / 4   order 4
///   D12jk  d det(123j | 123k) / d tau_jk ~ -phi_3 phi_j phi_k x_13^2 D_123 / 2 pi i  order 4
/// Passes when the fitted slope matches, the leading coefficient agrees within
/// 5% at the smallest eps, and (D12j, D12jj) the residual after subtracting
/// the formula has slope at least order + 1.
SlopeReport minor_identity_check(const std::vector<cplx>& t, const CMatrix& dir, MinorKind kind,
                                 int j, int k, const std::vector<double>& ladder);

}  // namespace thetalab
