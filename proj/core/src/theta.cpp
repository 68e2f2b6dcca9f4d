#include "thetalab/theta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include <nlohmann/json.hpp>

namespace thetalab {

namespace {

constexpr double kPi = std::numbers::pi;

void check_genus_match(const Characteristic& m, const PeriodMatrix& tau) {
  if (m.genus() != tau.genus()) throw ThetaError("characteristic and period matrix genus differ");
}

void check_multi_index(const MultiIndex& d, int g, int max_order) {
  if (static_cast<int>(d.size()) != g) throw ThetaError("multi-index length must equal g");
  int total = 0;
  for (int k : d) {
    if (k < 0) throw ThetaError("negative derivative order");
    total += k;
  }
  if (total > max_order) {
    throw ThetaError("derivative order " + std::to_string(total) + " above cap " +
                     std::to_string(max_order));
  }
}

int total_order(const MultiIndex& d) {
  int t = 0;
  for (int k : d) t += k;
  return t;
}

// Visits every p in [-R, R]^g with the exponent
//   pi i [n^t tau n + 2 n^t (z + delta/2)],  n = p + eps/2,
// accumulated coordinate by coordinate. visit(idx, exponent) receives the
// box indices idx[a] = p_a + R.
template <typename T, typename Visit>
void lattice_walk(const PeriodMatrix& tau, const CVector& z, std::uint32_t eps,
                  std::uint32_t delta, int radius, Visit&& visit) {
  using C = std::complex<T>;
  const int g = tau.genus();
  const int width = 2 * radius + 1;
  const T pi = std::numbers::pi_v<T>;
  const C i_pi(0, pi);

  std::vector<std::vector<T>> n(static_cast<std::size_t>(g), std::vector<T>(width));
  for (int a = 0; a < g; ++a) {
    const T shift = ((eps >> a) & 1U) ? T(0.5) : T(0);
    for (int i = 0; i < width; ++i) n[a][i] = T(i - radius) + shift;
  }
  // diag[a][i]: pi i (tau_aa n^2 + 2 n (z_a + delta_a/2)).
  std::vector<std::vector<C>> diag(static_cast<std::size_t>(g), std::vector<C>(width));
  for (int a = 0; a < g; ++a) {
    const C taa(static_cast<T>(tau(a, a).real()), static_cast<T>(tau(a, a).imag()));
    const C za(static_cast<T>(z(a).real()) + (((delta >> a) & 1U) ? T(0.5) : T(0)),
               static_cast<T>(z(a).imag()));
    for (int i = 0; i < width; ++i) {
      const T x = n[a][i];
      diag[a][i] = i_pi * (taa * (x * x) + T(2) * x * za);
    }
  }
  // cross[a][b]: 2 pi i tau_ab for b < a.
  std::vector<std::vector<C>> cross(static_cast<std::size_t>(g), std::vector<C>(g));
  for (int a = 0; a < g; ++a) {
    for (int b = 0; b < a; ++b) {
      cross[a][b] = T(2) * i_pi * C(static_cast<T>(tau(a, b).real()), static_cast<T>(tau(a, b).imag()));
    }
  }

  std::vector<int> idx(static_cast<std::size_t>(g), 0);
  std::vector<C> partial(static_cast<std::size_t>(g + 1), C(0));
  // Iterative odometer: partial[a] holds the exponent over coordinates < a.
  int a = 0;
  idx[0] = -1;
  while (a >= 0) {
    if (++idx[a] >= width) {
      --a;
      continue;
    }
    C e = partial[a] + diag[a][idx[a]];
    const T na = n[a][idx[a]];
    for (int b = 0; b < a; ++b) e += cross[a][b] * (na * n[b][idx[b]]);
    partial[a + 1] = e;
    if (a + 1 == g) {
      visit(idx, e);
    } else {
      ++a;
      idx[a] = -1;
    }
  }
}

template <typename T>
std::vector<cplx> eval_many_impl(const Characteristic& m, const PeriodMatrix& tau,
                                 const CVector& z, const std::vector<MultiIndex>& ds,
                                 int radius) {
  using C = std::complex<T>;
  const int g = tau.genus();
  const int width = 2 * radius + 1;
  int max_k = 0;
  for (const auto& d : ds) {
    for (int k : d) max_k = std::max(max_k, k);
  }
  // powers[a][i][k] = (2 pi i n_a)^k
  std::vector<std::vector<std::vector<C>>> powers(
      static_cast<std::size_t>(g), std::vector<std::vector<C>>(width, std::vector<C>(max_k + 1)));
  const C two_pi_i(0, 2 * std::numbers::pi_v<T>);
  for (int a = 0; a < g; ++a) {
    const T shift = ((m.eps() >> a) & 1U) ? T(0.5) : T(0);
    for (int i = 0; i < width; ++i) {
      const C base = two_pi_i * (T(i - radius) + shift);
      C acc(1);
      for (int k = 0; k <= max_k; ++k) {
        powers[a][i][k] = acc;
        acc *= base;
      }
    }
  }
  std::vector<C> sums(ds.size(), C(0));
  lattice_walk<T>(tau, z, m.eps(), m.delta(), radius, [&](const std::vector<int>& idx, C e) {
    const C w = std::exp(e);
    for (std::size_t r = 0; r < ds.size(); ++r) {
      C term = w;
      for (int a = 0; a < g; ++a) {
        const int k = ds[r][static_cast<std::size_t>(a)];
        if (k > 0) term *= powers[a][idx[a]][k];
      }
      sums[r] += term;
    }
  });
  std::vector<cplx> out;
  out.reserve(sums.size());
  for (const auto& s : sums) out.emplace_back(static_cast<double>(s.real()), static_cast<double>(s.imag()));
  return out;
}

template <typename T>
void constants_for_eps(std::uint32_t eps, const std::vector<std::size_t>& which,
                       const std::vector<Characteristic>& ms, const PeriodMatrix& tau, int radius,
                       std::vector<cplx>& out) {
  using C = std::complex<T>;
  const int g = tau.genus();
  // Buckets by p mod 2; the delta twist is constant on each bucket.
  std::vector<C> bucket(std::size_t{1} << g, C(0));
  const CVector zero = CVector::Zero(g);
  lattice_walk<T>(tau, zero, eps, 0U, radius, [&](const std::vector<int>& idx, C e) {
    std::size_t r = 0;
    for (int a = 0; a < g; ++a) {
      if (((idx[a] - radius) & 1) != 0) r |= std::size_t{1} << a;
    }
    bucket[r] += std::exp(e);
  });
  for (std::size_t w : which) {
    const std::uint32_t delta = ms[w].delta();
    C total(0);
    for (std::size_t r = 0; r < bucket.size(); ++r) {
      // exp(pi i n_a) with n_a = p_a + eps_a / 2.
      C twist(1);
      for (int a = 0; a < g; ++a) {
        if (((delta >> a) & 1U) == 0) continue;
        if ((r >> a) & 1U) twist = -twist;
        if ((eps >> a) & 1U) twist *= C(0, 1);
      }
      total += twist * bucket[r];
    }
    out[w] = cplx(static_cast<double>(total.real()), static_cast<double>(total.imag()));
  }
}

}  // namespace

PeriodMatrix::PeriodMatrix(CMatrix entries) : entries_(std::move(entries)) {
  const auto g = entries_.rows();
  if (g < 1 || g != entries_.cols()) throw PeriodMatrixError("period matrix must be square, g >= 1");
  if (g > Characteristic::kMaxGenus) throw PeriodMatrixError("genus too large");
  for (Eigen::Index a = 0; a < g; ++a) {
    for (Eigen::Index b = 0; b < g; ++b) {
      if (!std::isfinite(entries_(a, b).real()) || !std::isfinite(entries_(a, b).imag())) {
        throw PeriodMatrixError("period matrix has non-finite entries");
      }
      if (entries_(a, b) != entries_(b, a)) throw PeriodMatrixError("period matrix is not symmetric");
    }
  }
  const Eigen::MatrixXd im = entries_.imag();
  Eigen::LLT<Eigen::MatrixXd> llt(im);
  if (llt.info() != Eigen::Success) {
    throw PeriodMatrixError("imaginary part is not positive definite");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(im, Eigen::EigenvaluesOnly);
  lambda_min_ = es.eigenvalues()(0);
  if (!(lambda_min_ > 0.0)) throw PeriodMatrixError("imaginary part is not positive definite");
}

PeriodMatrix PeriodMatrix::diagonal(const std::vector<cplx>& t) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(t.size()), static_cast<Eigen::Index>(t.size()));
  for (std::size_t a = 0; a < t.size(); ++a) {
    m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) = t[a];
  }
  return PeriodMatrix(m);
}

PeriodMatrix PeriodMatrix::with_entry(int a, int b, cplx value) const {
  CMatrix m = entries_;
  m(a, b) = value;
  m(b, a) = value;
  return PeriodMatrix(m);
}

PeriodMatrix PeriodMatrix::shifted(const CMatrix& direction, cplx s) const {
  CMatrix m = entries_ + s * direction;
  // Symmetrize bit-exactly.
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    for (Eigen::Index b = a + 1; b < m.cols(); ++b) m(b, a) = m(a, b);
  }
  return PeriodMatrix(m);
}

nlohmann::json PeriodMatrix::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (int a = 0; a < genus(); ++a) {
    nlohmann::json row = nlohmann::json::array();
    for (int b = 0; b < genus(); ++b) row.push_back({entries_(a, b).real(), entries_(a, b).imag()});
    rows.push_back(row);
  }
  return {{"g", genus()}, {"entries", rows}};
}

PeriodMatrix PeriodMatrix::from_json(const nlohmann::json& j) {
  try {
    const int g = j.at("g").get<int>();
    const auto& rows = j.at("entries");
    if (g < 1 || !rows.is_array() || static_cast<int>(rows.size()) != g) {
      throw PeriodMatrixError("\"entries\" must hold g rows");
    }
    CMatrix m(g, g);
    for (int a = 0; a < g; ++a) {
      const auto& row = rows.at(static_cast<std::size_t>(a));
      if (!row.is_array() || static_cast<int>(row.size()) != g) {
        throw PeriodMatrixError("each row must hold g [re, im] pairs");
      }
      for (int b = 0; b < g; ++b) {
        const auto& e = row.at(static_cast<std::size_t>(b));
        if (!e.is_array() || e.size() != 2) throw PeriodMatrixError("entries are [re, im] pairs");
        m(a, b) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
      }
    }
    return PeriodMatrix(m);
  } catch (const nlohmann::json::exception& e) {
    throw PeriodMatrixError(std::string("malformed period matrix JSON: ") + e.what());
  }
}

double tail_bound(int g, double lambda_min, double imag_z_norm, int order, int radius) {
  // Shell k (max |p_a| = k) holds (2k+1)^g - (2k-1)^g points with
  // k - 1/2 <= |n|_inf and |n|_2 <= sqrt(g) (k + 1/2).
  double total = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = radius + 1; k < radius + 100000; ++k) {
    const double lo = k - 0.5;
    const double hi = k + 0.5;
    const double count_log = std::log(std::pow(2.0 * k + 1, g) - std::pow(2.0 * k - 1, g));
    const double log_term = count_log - kPi * lambda_min * lo * lo +
                            2.0 * kPi * std::sqrt(static_cast<double>(g)) * hi * imag_z_norm +
                            order * std::log(2.0 * kPi * hi);
    const double term = std::exp(log_term);
    total += term;
    if (term < prev && term < 1e-300 + total * 1e-17) break;
    prev = term;
  }
  return total;
}

int truncation_radius(const PeriodMatrix& tau, const CVector& z, int order,
                      const ThetaOptions& opts) {
  if (!(opts.tol >= 1e-16)) throw ThetaError("tolerance must be at least 1e-16");
  const double y = z.size() == 0 ? 0.0 : z.imag().norm();
  for (int r = 1; r <= opts.max_radius; ++r) {
    if (tail_bound(tau.genus(), tau.min_imag_eigenvalue(), y, order, r) < opts.tol) return r;
  }
  throw ThetaError("tolerance " + std::to_string(opts.tol) + " unattainable within radius cap " +
                   std::to_string(opts.max_radius) + " (near-degenerate Im tau?)");
}

std::vector<cplx> eval_many(const Characteristic& m, const PeriodMatrix& tau, const CVector& z,
                            const std::vector<MultiIndex>& ds, const ThetaOptions& opts) {
  check_genus_match(m, tau);
  if (z.size() != tau.genus()) throw ThetaError("z must have length g");
  int order = 0;
  for (const auto& d : ds) {
    check_multi_index(d, tau.genus(), opts.max_order);
    order = std::max(order, total_order(d));
  }
  const int radius = truncation_radius(tau, z, order, opts);
  if (opts.precision == Precision::Extended) {
    return eval_many_impl<long double>(m, tau, z, ds, radius);
  }
  return eval_many_impl<double>(m, tau, z, ds, radius);
}

ThetaResult eval(const Characteristic& m, const PeriodMatrix& tau, const CVector& z,
                 const MultiIndex& d, const ThetaOptions& opts) {
  ThetaResult r;
  r.value = eval_many(m, tau, z, {d}, opts).front();
  r.radius = truncation_radius(tau, z, total_order(d), opts);
  r.tol = tail_bound(tau.genus(), tau.min_imag_eigenvalue(), z.imag().norm(), total_order(d),
                     r.radius);
  return r;
}

cplx theta_constant(const Characteristic& m, const PeriodMatrix& tau, const ThetaOptions& opts) {
  return eval_many(m, tau, CVector::Zero(tau.genus()), {MultiIndex(tau.genus(), 0)}, opts).front();
}

std::vector<cplx> theta_constants(const std::vector<Characteristic>& ms, const PeriodMatrix& tau,
                                  const ThetaOptions& opts) {
  std::map<std::uint32_t, std::vector<std::size_t>> by_eps;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    check_genus_match(ms[i], tau);
    by_eps[ms[i].eps()].push_back(i);
  }
  std::vector<cplx> out(ms.size());
  if (ms.empty()) return out;
  const int radius = truncation_radius(tau, CVector::Zero(tau.genus()), 0, opts);
  for (const auto& [eps, which] : by_eps) {
    if (opts.precision == Precision::Extended) {
      constants_for_eps<long double>(eps, which, ms, tau, radius, out);
    } else {
      constants_for_eps<double>(eps, which, ms, tau, radius, out);
    }
  }
  return out;
}

CVector gradient(const Characteristic& m, const PeriodMatrix& tau, const ThetaOptions& opts) {
  const int g = tau.genus();
  std::vector<MultiIndex> ds;
  for (int a = 0; a < g; ++a) {
    MultiIndex d(g, 0);
    d[a] = 1;
    ds.push_back(d);
  }
  const auto v = eval_many(m, tau, CVector::Zero(g), ds, opts);
  CVector out(g);
  for (int a = 0; a < g; ++a) out(a) = v[a];
  return out;
}

CMatrix hessian(const Characteristic& m, const PeriodMatrix& tau, const ThetaOptions& opts) {
  const int g = tau.genus();
  std::vector<MultiIndex> ds;
  for (int a = 0; a < g; ++a) {
    for (int b = a; b < g; ++b) {
      MultiIndex d(g, 0);
      ++d[a];
      ++d[b];
      ds.push_back(d);
    }
  }
  const auto v = eval_many(m, tau, CVector::Zero(g), ds, opts);
  CMatrix out(g, g);
  std::size_t r = 0;
  for (int a = 0; a < g; ++a) {
    for (int b = a; b < g; ++b) {
      out(a, b) = v[r];
      out(b, a) = v[r];
      ++r;
    }
  }
  return out;
}

cplx tau_derivative(const Characteristic& m, const PeriodMatrix& tau, int j, int k,
                    const ThetaOptions& opts) {
  const int g = tau.genus();
  if (j < 0 || k < 0 || j >= g || k >= g) throw ThetaError("tau index out of range");
  MultiIndex d(g, 0);
  ++d[j];
  ++d[k];
  const cplx second = eval_many(m, tau, CVector::Zero(g), {d}, opts).front();
  const cplx two_pi_i(0, 2 * kPi);
  return j == k ? second / (2.0 * two_pi_i) : second / two_pi_i;
}

CMatrix tau_gradient(const Characteristic& m, const PeriodMatrix& tau, const ThetaOptions& opts) {
  CMatrix h = hessian(m, tau, opts);
  const cplx two_pi_i(0, 2 * kPi);
  for (int a = 0; a < h.rows(); ++a) {
    for (int b = 0; b < h.cols(); ++b) h(a, b) /= (a == b ? 2.0 * two_pi_i : two_pi_i);
  }
  return h;
}

std::vector<cplx> genus1_derivatives(const Characteristic& m, cplx t, int max_order,
                                     const ThetaOptions& opts) {
  if (m.genus() != 1) throw ThetaError("genus1_derivatives needs a genus-1 characteristic");
  std::vector<MultiIndex> ds;
  for (int k = 0; k <= max_order; ++k) ds.push_back({k});
  return eval_many(m, PeriodMatrix::diagonal({t}), CVector::Zero(1), ds, opts);
}

int numerical_rank(const CMatrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  const double top = s.size() > 0 ? s(0) : 0.0;
  if (!(top > 0.0)) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel_tol * top) ++rank;
  }
  return rank;
}

}  // namespace thetalab
