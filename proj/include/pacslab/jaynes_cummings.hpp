#ifndef PACSLAB_JAYNES_CUMMINGS_HPP
#define PACSLAB_JAYNES_CUMMINGS_HPP

// Resonant atom-cavity interaction H = beta (a^dagger |g><e| + a |e><g|),
// initial state |alpha>|e>. Time enters only through the dimensionless
// product beta*t.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pacslab/fock.hpp"
#include "pacslab/pacs.hpp"
#include "pacslab/special.hpp"

namespace pacslab {

struct JcParams {
  cplx alpha;
  double beta_t = 0.0;
  std::size_t dim = 0;  ///< 0 selects default_dim(alpha) + 4
};

inline std::size_t jc_dim(const JcParams& p) { return p.dim != 0 ? p.dim : default_dim(p.alpha) + 4; }

inline void validate(const JcParams& p) {
  if (!std::isfinite(p.beta_t) || p.beta_t < 0.0)
    throw DomainError("JcParams: beta_t must be finite and >= 0");
}

struct JointAtomFieldState {
  FockVector field_e;  ///< field component paired with |e>
  FockVector field_g;  ///< field component paired with |g>

  double norm_sq() const { return field_e.norm_sq() + field_g.norm_sq(); }
};

/// Rabi closed form: each pair |n>|e>, |n+1>|g> rotates at frequency sqrt(n+1).
inline JointAtomFieldState jc_evolve_exact(const JcParams& p) {
  validate(p);
  const std::size_t dim = jc_dim(p);
  const FockVector coh = coherent_state(p.alpha, dim);
  const auto d = static_cast<Eigen::Index>(dim);
  Eigen::VectorXcd e(d);
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(d);
  for (Eigen::Index n = 0; n < d; ++n) {
    const double w = p.beta_t * std::sqrt(static_cast<double>(n + 1));
    e(n) = coh.amp()(n) * std::cos(w);
    if (n + 1 < d) g(n + 1) = cplx(0.0, -1.0) * coh.amp()(n) * std::sin(w);
  }
  return {FockVector(std::move(e)), FockVector(std::move(g))};
}

/// Short-time form |alpha>|e> - i beta t a^dagger|alpha>|g>.
inline JointAtomFieldState jc_short_time(const JcParams& p) {
  validate(p);
  const std::size_t dim = jc_dim(p);
  const FockVector coh = coherent_state(p.alpha, dim);
  const FockVector added = apply_operator(creation_matrix(dim), coh);
  return {FockVector(coh.amp()), FockVector(cplx(0.0, -p.beta_t) * added.amp())};
}

/// Partial sums of the power series of the evolution operator, with
/// tau = -i beta t:
///   e-branch: sum_n tau^{2n}/(2n)!     (a a^dagger)^n |alpha>
///   g-branch: sum_n tau^{2n+1}/(2n+1)! (a^dagger a)^n a^dagger |alpha>
/// n runs over [0, n_terms). Throws NumericalFailure when the final term is
/// still larger than the one before it.
inline JointAtomFieldState jc_evolve_series(const JcParams& p, unsigned n_terms) {
  validate(p);
  if (n_terms == 0) throw DomainError("jc_evolve_series: n_terms must be >= 1");
  const std::size_t dim = jc_dim(p);
  const OperatorMatrix ad = creation_matrix(dim);
  const OperatorMatrix a = annihilation_matrix(dim);
  const Eigen::MatrixXcd lower_raise = (a * ad).entries();
  const Eigen::MatrixXcd raise_lower = (ad * a).entries();
  const cplx tau(0.0, -p.beta_t);

  const FockVector coh = coherent_state(p.alpha, dim);
  Eigen::VectorXcd term_e = coh.amp();
  Eigen::VectorXcd term_g = tau * (ad.entries() * coh.amp());
  Eigen::VectorXcd sum_e = term_e;
  Eigen::VectorXcd sum_g = term_g;
  double prev = term_e.norm() + term_g.norm();
  for (unsigned n = 1; n < n_terms; ++n) {
    const double two_n = 2.0 * n;
    term_e = (tau * tau / ((two_n - 1.0) * two_n)) * (lower_raise * term_e);
    term_g = (tau * tau / (two_n * (two_n + 1.0))) * (raise_lower * term_g);
    sum_e += term_e;
    sum_g += term_g;
    const double cur = term_e.norm() + term_g.norm();
    if (n + 1 == n_terms && cur > prev && cur > 0.0)
      throw NumericalFailure("jc_evolve_series: terms still growing after " +
                             std::to_string(n_terms) + " terms (last term norm " +
                             std::to_string(cur) + ")");
    prev = cur;
  }
  return {FockVector(std::move(sum_e)), FockVector(std::move(sum_g))};
}

struct ConditionalState {
  FockVector state;  ///< normalized
  double probability;
};

/// Field state after detecting the atom in |g>.
inline ConditionalState jc_conditional_ground(const JointAtomFieldState& s) {
  const double p = s.field_g.norm_sq();
  if (!(p > std::numeric_limits<double>::min()))
    throw EmptyBranch("jc_conditional_ground: ground-state detection has zero probability");
  return {s.field_g.unit(), p};
}

// --- re-expansion of the conditional field in photon-added states ----------

/// How the coefficients multiplying |alpha, m> are formed.
enum class MpacsConvention {
  b_table_normalized,    ///< B(n,m,alpha), |alpha,m> normalized, n >= 1
  b_table_unnormalized,  ///< B(n,m,alpha), |alpha,m> unnormalized, n >= 1
  normal_ordered,        ///< alpha^{m-1}[m S(n,m) + S(n,m-1)], unnormalized, n >= 0
};

inline constexpr std::array<MpacsConvention, 3> kMpacsConventions = {
    MpacsConvention::b_table_normalized, MpacsConvention::b_table_unnormalized,
    MpacsConvention::normal_ordered};

inline std::string_view to_string(MpacsConvention c) {
  switch (c) {
    case MpacsConvention::b_table_normalized: return "b_table_normalized";
    case MpacsConvention::b_table_unnormalized: return "b_table_unnormalized";
    case MpacsConvention::normal_ordered: return "normal_ordered";
  }
  return "unknown";
}

namespace detail {

inline cplx ipow(cplx z, unsigned k) {
  cplx out = 1.0;
  for (unsigned i = 0; i < k; ++i) out *= z;
  return out;
}

}  // namespace detail

/// B(n, m, alpha) = alpha^{m-1} [m S(n,m) + S(n,m-1) m! alpha] sqrt(m! L_m(-|alpha|^2)).
inline cplx mpacs_b_coefficient(unsigned n, unsigned m, cplx alpha) {
  if (m == 0) return 0.0;
  const double s_nm = to_double(stirling2(n, m));
  const double s_nm1 = to_double(stirling2(n, m - 1));
  const double m_fact = std::exp(log_factorial(m));
  const cplx bracket = static_cast<double>(m) * s_nm + s_nm1 * m_fact * alpha;
  return detail::ipow(alpha, m - 1) * bracket * std::sqrt(pacs_norm_sq({alpha, m}));
}

/// Coefficient of (a^dagger)^m |alpha> in (a^dagger a)^n a^dagger |alpha>,
/// from normal ordering with Stirling numbers.
inline cplx mpacs_normal_ordered_coefficient(unsigned n, unsigned m, cplx alpha) {
  if (m == 0) return 0.0;
  const double s_nm = to_double(stirling2(n, m));
  const double s_nm1 = to_double(stirling2(n, m - 1));
  return detail::ipow(alpha, m - 1) * (static_cast<double>(m) * s_nm + s_nm1);
}

/// Unnormalized sum_{n,m} tau^{2n+1}/(2n+1)! coef(n,m) |alpha,m> under the
/// given convention, tau = -i beta t.
inline FockVector mpacs_reconstruct(const JcParams& p, unsigned n_max, unsigned m_max,
                                    MpacsConvention convention) {
  validate(p);
  if (n_max > default_stirling_table().n_max())
    throw DomainError("mpacs_reconstruct: n_max exceeds the Stirling table");
  const std::size_t dim = jc_dim(p);
  const bool normalized_basis = convention == MpacsConvention::b_table_normalized;
  const unsigned n_first = convention == MpacsConvention::normal_ordered ? 0u : 1u;

  std::vector<Eigen::VectorXcd> basis;
  basis.reserve(m_max + 1);
  for (unsigned m = 0; m <= m_max; ++m) {
    basis.push_back(pacs_state({p.alpha, m}, dim,
                               normalized_basis ? Normalization::normalized : Normalization::unnormalized)
                        .amp());
  }

  const cplx tau(0.0, -p.beta_t);
  Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  for (unsigned n = n_first; n <= n_max; ++n) {
    const cplx weight = detail::ipow(tau, 2 * n + 1) / std::exp(log_factorial(2 * n + 1));
    for (unsigned m = 1; m <= m_max; ++m) {
      const cplx c = convention == MpacsConvention::normal_ordered
                         ? mpacs_normal_ordered_coefficient(n, m, p.alpha)
                         : mpacs_b_coefficient(n, m, p.alpha);
      if (c != 0.0) sum += (weight * c) * basis[m];
    }
  }
  return FockVector(std::move(sum));
}

struct MpacsExpansion {
  /// b_table(n, m) = B(n, m, alpha) for 1 <= n <= n_max, 1 <= m <= m_max;
  /// row and column 0 are zero.
  Eigen::MatrixXcd b_table;
  std::vector<std::pair<MpacsConvention, double>> fidelities;
  MpacsConvention matching;
  double matching_fidelity;
  FockVector reconstruction;  ///< under `matching`, unnormalized
};

/// Tabulates B(n, m, alpha) and reconstructs the conditional field
/// under every convention, keeping the one with the highest fidelity against
/// the exact conditional state.
inline MpacsExpansion mpacs_expansion(const JcParams& p, unsigned n_max, unsigned m_max = 0) {
  if (m_max == 0) m_max = n_max + 1;
  JcParams q = p;
  q.dim = std::max(jc_dim(p), default_dim(p.alpha) + m_max + 1);

  Eigen::MatrixXcd table = Eigen::MatrixXcd::Zero(n_max + 1, m_max + 1);
  for (unsigned n = 1; n <= n_max; ++n)
    for (unsigned m = 1; m <= m_max; ++m) table(n, m) = mpacs_b_coefficient(n, m, p.alpha);

  const FockVector exact = jc_conditional_ground(jc_evolve_exact(q)).state;
  std::vector<std::pair<MpacsConvention, double>> fids;
  std::optional<FockVector> best;
  MpacsConvention best_conv = kMpacsConventions.front();
  double best_fid = -1.0;
  for (MpacsConvention c : kMpacsConventions) {
    FockVector rec = mpacs_reconstruct(q, n_max, m_max, c);
    const double f = rec.norm_sq() > 0.0 ? fidelity(rec, exact) : 0.0;
    fids.emplace_back(c, f);
    if (f > best_fid) {
      best_fid = f;
      best_conv = c;
      best = std::move(rec);
    }
  }
  return {std::move(table), std::move(fids), best_conv, best_fid, std::move(*best)};
}

// --- overlap curves --------------------------------------------------------

inline constexpr double kEmptyBranchProbability = 1e-14;

struct CurvePoint {
  double beta_t;
  unsigned m;
  std::optional<double> overlap_modulus;  ///< |<alpha,m|cond>|, both normalized
  std::optional<double> overlap_sq;
  double ground_prob;
};

/// Overlap of the ground-conditioned field with normalized |alpha, m> along
/// a beta*t grid. Points with ground probability below 1e-14 carry no overlap.
/// Output order is grid-major, then m in the order given.
inline std::vector<CurvePoint> jc_overlap_curve(cplx alpha, std::span<const double> beta_t_grid,
                                                std::span<const unsigned> m_list, std::size_t dim = 0) {
  if (beta_t_grid.empty()) throw DomainError("jc_overlap_curve: empty grid");
  if (m_list.empty()) throw DomainError("jc_overlap_curve: empty m list");
  const unsigned m_max = *std::max_element(m_list.begin(), m_list.end());
  if (dim == 0) dim = default_dim(alpha) + m_max + 4;

  std::vector<FockVector> targets;
  for (unsigned m : m_list) targets.push_back(pacs_state({alpha, m}, dim, Normalization::normalized));

  std::vector<CurvePoint> out;
  out.reserve(beta_t_grid.size() * m_list.size());
  for (double bt : beta_t_grid) {
    const JointAtomFieldState s = jc_evolve_exact({alpha, bt, dim});
    const double prob = s.field_g.norm_sq();
    std::optional<FockVector> cond;
    if (prob >= kEmptyBranchProbability) cond = s.field_g.unit();
    for (std::size_t i = 0; i < m_list.size(); ++i) {
      CurvePoint pt{bt, m_list[i], std::nullopt, std::nullopt, prob};
      if (cond) {
        const cplx ov = inner_product(targets[i], *cond);
        pt.overlap_modulus = std::abs(ov);
        pt.overlap_sq = std::norm(ov);
      }
      out.push_back(pt);
    }
  }
  return out;
}

}  // namespace pacslab

#endif  // PACSLAB_JAYNES_CUMMINGS_HPP
