#pragma once

// Riemann theta functions with characteristics: truncated lattice sums with a
// rigorous tail bound, z-derivatives by term-wise differentiation, and
// tau-derivatives through the heat equation.

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "thetalab/chars.hpp"

namespace thetalab {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

class PeriodMatrixError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when the requested accuracy needs a lattice radius above the cap.
class ThetaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point of the Siegel upper half-space.
class PeriodMatrix {
 public:
  /// Validates exact symmetry and positive-definite imaginary part.
  explicit PeriodMatrix(CMatrix entries);

  static PeriodMatrix diagonal(const std::vector<cplx>& t);

  int genus() const { return static_cast<int>(entries_.rows()); }
  const CMatrix& entries() const { return entries_; }
  cplx operator()(int a, int b) const { return entries_(a, b); }
  /// Smallest eigenvalue of Im tau.
  double min_imag_eigenvalue() const { return lambda_min_; }

  /// Copy with tau_ab = tau_ba = value.
  PeriodMatrix with_entry(int a, int b, cplx value) const;
  /// tau + s * direction (direction symmetric).
  PeriodMatrix shifted(const CMatrix& direction, cplx s) const;

  /// {"g": n, "entries": [[[re, im], ...], ...]}
  nlohmann::json to_json() const;
  static PeriodMatrix from_json(const nlohmann::json& j);

 private:
  CMatrix entries_;
  double lambda_min_ = 0.0;
};

/// Accumulation arithmetic for the lattice sum. Results are always double.
enum class Precision { Double, Extended };

struct ThetaOptions {
  double tol = 1e-12;                 // absolute truncation error bound
  int max_radius = 60;                // cap on the lattice box half-width
  int max_order = 6;                  // cap on the total z-derivative order
  Precision precision = Precision::Double;
};

/// Orders of z-differentiation per coordinate.
using MultiIndex = std::vector<int>;

struct ThetaResult {
  cplx value;
  double tol = 0.0;  // bound on the neglected tail
  int radius = 0;
};

/// Smallest box half-width whose tail bound is below opts.tol for derivative
/// order `order`; throws ThetaError above opts.max_radius.
int truncation_radius(const PeriodMatrix& tau, const CVector& z, int order,
                      const ThetaOptions& opts);
/// The tail bound used by truncation_radius for a given radius.
double tail_bound(int g, double lambda_min, double imag_z_norm, int order, int radius);

ThetaResult eval(const Characteristic& m, const PeriodMatrix& tau, const CVector& z,
                 const MultiIndex& d, const ThetaOptions& opts = {});

/// All requested derivatives from one lattice pass.
std::vector<cplx> eval_many(const Characteristic& m, const PeriodMatrix& tau, const CVector& z,
                            const std::vector<MultiIndex>& ds, const ThetaOptions& opts = {});

/// theta_m(tau, 0).
cplx theta_constant(const Characteristic& m, const PeriodMatrix& tau,
                    const ThetaOptions& opts = {});

/// theta_m(tau, 0) for many characteristics, sharing one pass per eps row.
std::vector<cplx> theta_constants(const std::vector<Characteristic>& ms, const PeriodMatrix& tau,
                                  const ThetaOptions& opts = {});

/// z-gradient at z = 0.
CVector gradient(const Characteristic& m, const PeriodMatrix& tau, const ThetaOptions& opts = {});
/// z-Hessian at z = 0, symmetric.
CMatrix hessian(const Characteristic& m, const PeriodMatrix& tau, const ThetaOptions& opts = {});

/// d theta_m / d tau_jk at z = 0 (0-based j, k): (1/4 pi i) d_j^2 theta on the
/// diagonal, (1/2 pi i) d_j d_k theta off it.
cplx tau_derivative(const Characteristic& m, const PeriodMatrix& tau, int j, int k,
                    const ThetaOptions& opts = {});
/// The symmetric matrix of all tau_derivative values.
CMatrix tau_gradient(const Characteristic& m, const PeriodMatrix& tau,
                     const ThetaOptions& opts = {});

/// theta^{(k)}[m](t, 0) for k = 0..max_order, m of genus 1.
std::vector<cplx> genus1_derivatives(const Characteristic& m, cplx t, int max_order,
                                     const ThetaOptions& opts = {});

/// Singular values above rel_tol * largest; 0 for the zero matrix.
int numerical_rank(const CMatrix& m, double rel_tol);

}  // namespace thetalab
