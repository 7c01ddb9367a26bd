#ifndef PACSLAB_FOCK_HPP
#define PACSLAB_FOCK_HPP

// Truncated Fock-space states and operators.
//
// A single mode is represented on |0>..|dim-1>. Two-mode states are stored as
// a dim_a x dim_b amplitude grid, amp(n, m) = <n|_a <m|_b psi. Everything here
// is a value type; operations are pure.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "pacslab/errors.hpp"

namespace pacslab {

using cplx = std::complex<double>;

/// Tolerances shared by all modules. Identities are checked at
/// `identity_tol`, evolutions and fidelities at `evolution_tol`.
struct NumericConfig {
  double identity_tol = 1e-12;
  double evolution_tol = 1e-10;
  double tail_tol = 1e-12;
  int max_taylor_terms = 200;
};

inline constexpr double kNormalizedTol = 1e-12;

/// Default single-mode truncation for a coherent amplitude. Keeps the Poisson
/// tail below 1e-14 for |alpha| up to a few units.
inline std::size_t default_dim(cplx alpha) {
  const double a = std::abs(alpha);
  return std::max<std::size_t>(32, static_cast<std::size_t>(std::ceil(a * a + 8.0 * a + 16.0)));
}

class FockVector {
 public:
  explicit FockVector(Eigen::VectorXcd amp, bool normalized = false)
      : amp_(std::move(amp)), normalized_(normalized) {
    if (amp_.size() == 0) throw InvalidDimension("FockVector: dim must be >= 1");
    if (!amp_.allFinite()) throw NumericRangeError("FockVector: non-finite amplitude");
    if (normalized_ && std::abs(norm_sq() - 1.0) > kNormalizedTol)
      throw NumericalFailure("FockVector: flagged normalized but norm_sq = " +
                             std::to_string(norm_sq()));
  }

  static FockVector basis(std::size_t dim, std::size_t n) {
    if (dim == 0) throw InvalidDimension("basis: dim must be >= 1");
    if (n >= dim) throw InvalidDimension("basis: index out of range");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(n)) = 1.0;
    return FockVector(std::move(v), true);
  }

  std::size_t dim() const { return static_cast<std::size_t>(amp_.size()); }
  const Eigen::VectorXcd& amp() const { return amp_; }
  cplx operator[](std::size_t n) const { return amp_(static_cast<Eigen::Index>(n)); }
  bool normalized() const { return normalized_; }
  double norm_sq() const { return amp_.squaredNorm(); }

  /// Copy scaled to unit norm; throws EmptyBranch on the zero vector.
  FockVector unit() const {
    const double n2 = norm_sq();
    if (!(n2 > std::numeric_limits<double>::min()))
      throw EmptyBranch("cannot normalize a zero vector");
    return FockVector(amp_ / std::sqrt(n2), true);
  }

 private:
  Eigen::VectorXcd amp_;
  bool normalized_;
};

class OperatorMatrix {
 public:
  explicit OperatorMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols())
      throw InvalidDimension("OperatorMatrix: must be square with dim >= 1");
  }

  static OperatorMatrix identity(std::size_t dim) {
    if (dim == 0) throw InvalidDimension("identity: dim must be >= 1");
    const auto d = static_cast<Eigen::Index>(dim);
    return OperatorMatrix(Eigen::MatrixXcd::Identity(d, d));
  }

  static OperatorMatrix zero(std::size_t dim) {
    if (dim == 0) throw InvalidDimension("zero: dim must be >= 1");
    const auto d = static_cast<Eigen::Index>(dim);
    return OperatorMatrix(Eigen::MatrixXcd::Zero(d, d));
  }

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const Eigen::MatrixXcd& entries() const { return entries_; }
  cplx operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  OperatorMatrix adjoint() const { return OperatorMatrix(entries_.adjoint()); }

  bool is_hermitian(double tol = kNormalizedTol) const {
    return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() <= tol;
  }

  /// Induced 1-norm, max column sum of |entries|.
  double norm1() const { return entries_.cwiseAbs().colwise().sum().maxCoeff(); }

  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    check_same(a.dim(), b.dim());
    return OperatorMatrix(a.entries_ * b.entries_);
  }
  friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
    check_same(a.dim(), b.dim());
    return OperatorMatrix(a.entries_ + b.entries_);
  }
  friend OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
    check_same(a.dim(), b.dim());
    return OperatorMatrix(a.entries_ - b.entries_);
  }
  friend OperatorMatrix operator*(cplx s, const OperatorMatrix& a) {
    return OperatorMatrix(s * a.entries_);
  }

  OperatorMatrix pow(unsigned k) const {
    OperatorMatrix out = identity(dim());
    for (unsigned i = 0; i < k; ++i) out = out * *this;
    return out;
  }

 private:
  static void check_same(std::size_t a, std::size_t b) {
    if (a != b) throw DimensionMismatch("OperatorMatrix: dimension mismatch");
  }

  Eigen::MatrixXcd entries_;
};

/// Ladder lowering operator: entries[n-1][n] = sqrt(n).
inline OperatorMatrix annihilation_matrix(std::size_t dim) {
  if (dim == 0) throw InvalidDimension("annihilation_matrix: dim must be >= 1");
  const auto d = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index n = 1; n < d; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
  return OperatorMatrix(std::move(m));
}

inline OperatorMatrix creation_matrix(std::size_t dim) { return annihilation_matrix(dim).adjoint(); }

inline OperatorMatrix number_matrix(std::size_t dim) {
  if (dim == 0) throw InvalidDimension("number_matrix: dim must be >= 1");
  const auto d = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index n = 0; n < d; ++n) m(n, n) = static_cast<double>(n);
  return OperatorMatrix(std::move(m));
}

/// Poisson mass sum_{n >= dim} e^{-x} x^n / n!, x = |alpha|^2, summed
/// directly from the tail so small values keep full relative precision.
inline double coherent_tail_mass(cplx alpha, std::size_t dim) {
  const double x = std::norm(alpha);
  if (x == 0.0) return 0.0;
  const double n0 = static_cast<double>(dim);
  double log_term = -x + n0 * std::log(x) - std::lgamma(n0 + 1.0);
  double sum = 0.0;
  for (std::size_t k = 0; k < 100000; ++k) {
    const double term = std::exp(log_term);
    sum += term;
    const double n = n0 + static_cast<double>(k);
    if (n + 1.0 > x && term <= 1e-18 * sum) break;
    if (term == 0.0 && n + 1.0 > x) break;
    log_term += std::log(x) - std::log(n + 1.0);
  }
  return std::min(sum, 1.0);
}

/// Coherent state e^{-|alpha|^2/2} sum alpha^n / sqrt(n!) |n>, truncated.
/// Throws TruncationInsufficient when the discarded Poisson mass exceeds
/// `tail_tol`; flags the result normalized when that mass is below 1e-12.
inline FockVector coherent_state(cplx alpha, std::size_t dim, double tail_tol = kNormalizedTol) {
  if (dim == 0) throw InvalidDimension("coherent_state: dim must be >= 1");
  const double tail = coherent_tail_mass(alpha, dim);
  if (tail > tail_tol)
    throw TruncationInsufficient("coherent_state: dim " + std::to_string(dim) +
                                     " too small for |alpha| = " + std::to_string(std::abs(alpha)),
                                 tail);
  const auto d = static_cast<Eigen::Index>(dim);
  Eigen::VectorXcd v(d);
  cplx c = std::exp(-0.5 * std::norm(alpha));
  v(0) = c;
  for (Eigen::Index n = 1; n < d; ++n) {
    c *= alpha / std::sqrt(static_cast<double>(n));
    v(n) = c;
  }
  const bool flagged = tail <= kNormalizedTol && std::abs(v.squaredNorm() - 1.0) <= kNormalizedTol;
  return FockVector(std::move(v), flagged);
}

inline cplx inner_product(const FockVector& psi, const FockVector& phi) {
  if (psi.dim() != phi.dim()) throw DimensionMismatch("inner_product: dimension mismatch");
  return psi.amp().dot(phi.amp());  // Eigen conjugates the left operand
}

/// |<psi|phi>|^2 / (<psi|psi><phi|phi>).
inline double fidelity(const FockVector& psi, const FockVector& phi) {
  const double den = psi.norm_sq() * phi.norm_sq();
  if (!(den > 0.0)) throw EmptyBranch("fidelity: zero vector");
  return std::norm(inner_product(psi, phi)) / den;
}

inline FockVector apply_operator(const OperatorMatrix& m, const FockVector& psi) {
  if (m.dim() != psi.dim()) throw DimensionMismatch("apply_operator: dimension mismatch");
  return FockVector(m.entries() * psi.amp());
}

/// Mean and variance of the photon number of a (not necessarily normalized)
/// state.
inline std::pair<double, double> photon_number_moments(const FockVector& psi) {
  const double n2 = psi.norm_sq();
  if (!(n2 > 0.0)) throw EmptyBranch("photon_number_moments: zero vector");
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t n = 0; n < psi.dim(); ++n) {
    const double p = std::norm(psi[n]) / n2;
    mean += p * static_cast<double>(n);
    second += p * static_cast<double>(n * n);
  }
  return {mean, second - mean * mean};
}

// --- matrix exponential action -------------------------------------------

struct ExpmOptions {
  double tol = 1e-10;
  int max_terms = 200;
  /// Norm of each sub-step generator; the Taylor terms never exceed
  /// e^{step_norm} in magnitude.
  double step_norm = 4.0;
};

/// e^{A} v for a linear map given only by its action `apply(x) -> A x` and a
/// bound `norm_bound >= ||A||`. The exponent is split into s equal sub-steps
/// and each sub-step is summed as a Taylor series until two consecutive terms
/// drop below tol/s relative to the partial sum.
template <class Apply>
Eigen::VectorXcd expm_action(Apply&& apply, double norm_bound, Eigen::VectorXcd v,
                             const ExpmOptions& opt = {}) {
  if (!(opt.tol > 0.0)) throw DomainError("expm_action: tol must be > 0");
  if (!std::isfinite(norm_bound) || norm_bound < 0.0)
    throw DomainError("expm_action: norm bound must be finite and >= 0");
  if (norm_bound == 0.0) return v;
  const auto steps = std::max<long>(1, static_cast<long>(std::ceil(norm_bound / opt.step_norm)));
  const double step_tol = opt.tol / static_cast<double>(steps);
  const double scale = 1.0 / static_cast<double>(steps);

  for (long s = 0; s < steps; ++s) {
    Eigen::VectorXcd term = v;
    Eigen::VectorXcd sum = v;
    double prev_norm = term.norm();
    bool converged = false;
    for (int k = 1; k <= opt.max_terms; ++k) {
      term = apply(term);
      term *= scale / static_cast<double>(k);
      sum += term;
      const double tn = term.norm();
      const double ref = std::max(sum.norm(), std::numeric_limits<double>::min());
      if (tn <= step_tol * ref && prev_norm <= step_tol * ref) {
        converged = true;
        break;
      }
      prev_norm = tn;
    }
    if (!converged)
      throw NumericalFailure("expm_action: Taylor series did not converge within " +
                             std::to_string(opt.max_terms) + " terms");
    if (!sum.allFinite()) throw NumericalFailure("expm_action: non-finite result");
    v = std::move(sum);
  }
  return v;
}

/// e^{M} psi with relative error <= tol.
inline FockVector expm_apply(const OperatorMatrix& m, const FockVector& psi, double tol,
                             int max_terms = NumericConfig{}.max_taylor_terms) {
  if (m.dim() != psi.dim()) throw DimensionMismatch("expm_apply: dimension mismatch");
  const auto& mat = m.entries();
  ExpmOptions opt;
  opt.tol = tol;
  opt.max_terms = max_terms;
  return FockVector(expm_action([&mat](const Eigen::VectorXcd& x) -> Eigen::VectorXcd { return mat * x; },
                                m.norm1(), psi.amp(), opt));
}

// --- two modes ------------------------------------------------------------

class TwoModeState {
 public:
  explicit TwoModeState(Eigen::MatrixXcd amp, bool normalized = false)
      : amp_(std::move(amp)), normalized_(normalized) {
    if (amp_.rows() == 0 || amp_.cols() == 0)
      throw InvalidDimension("TwoModeState: dims must be >= 1");
    if (!amp_.allFinite()) throw NumericRangeError("TwoModeState: non-finite amplitude");
    if (normalized_ && std::abs(norm_sq() - 1.0) > kNormalizedTol)
      throw NumericalFailure("TwoModeState: flagged normalized but norm_sq = " +
                             std::to_string(norm_sq()));
  }

  std::size_t dim_a() const { return static_cast<std::size_t>(amp_.rows()); }
  std::size_t dim_b() const { return static_cast<std::size_t>(amp_.cols()); }
  const Eigen::MatrixXcd& amp() const { return amp_; }
  cplx operator()(std::size_t n, std::size_t m) const {
    return amp_(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  }
  bool normalized() const { return normalized_; }
  double norm_sq() const { return amp_.squaredNorm(); }

 private:
  Eigen::MatrixXcd amp_;
  bool normalized_;
};

inline TwoModeState tensor(const FockVector& a, const FockVector& b) {
  return TwoModeState(a.amp() * b.amp().transpose(), a.normalized() && b.normalized());
}

inline double fidelity(const TwoModeState& x, const TwoModeState& y) {
  if (x.dim_a() != y.dim_a() || x.dim_b() != y.dim_b())
    throw DimensionMismatch("fidelity: two-mode dimension mismatch");
  const double den = x.norm_sq() * y.norm_sq();
  if (!(den > 0.0)) throw EmptyBranch("fidelity: zero state");
  const cplx ov = (x.amp().conjugate().cwiseProduct(y.amp())).sum();
  return std::norm(ov) / den;
}

/// Row-major flattening, index n * dim_b + m.
inline Eigen::VectorXcd flatten(const TwoModeState& s) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(s.dim_a() * s.dim_b()));
  for (std::size_t n = 0; n < s.dim_a(); ++n)
    for (std::size_t m = 0; m < s.dim_b(); ++m) v(static_cast<Eigen::Index>(n * s.dim_b() + m)) = s(n, m);
  return v;
}

inline TwoModeState unflatten(const Eigen::VectorXcd& v, std::size_t dim_a, std::size_t dim_b) {
  if (static_cast<std::size_t>(v.size()) != dim_a * dim_b)
    throw DimensionMismatch("unflatten: size mismatch");
  Eigen::MatrixXcd amp(static_cast<Eigen::Index>(dim_a), static_cast<Eigen::Index>(dim_b));
  for (std::size_t n = 0; n < dim_a; ++n)
    for (std::size_t m = 0; m < dim_b; ++m)
      amp(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) = v(static_cast<Eigen::Index>(n * dim_b + m));
  return TwoModeState(std::move(amp));
}

struct Projection {
  FockVector state;  ///< normalized a-mode state
  double probability;
};

/// Projects mode b onto |m> and renormalizes the remaining a-mode column.
inline Projection project_b(const TwoModeState& s, std::size_t m) {
  if (m >= s.dim_b()) throw InvalidDimension("project_b: m out of range");
  Eigen::VectorXcd col = s.amp().col(static_cast<Eigen::Index>(m));
  const double p = col.squaredNorm();
  if (!(p > std::numeric_limits<double>::min()))
    throw EmptyBranch("project_b: outcome m = " + std::to_string(m) + " has zero probability");
  return {FockVector(col / std::sqrt(p), true), p};
}

}  // namespace pacslab

#endif  // PACSLAB_FOCK_HPP
