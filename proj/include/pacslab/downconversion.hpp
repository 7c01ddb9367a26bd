#ifndef PACSLAB_DOWNCONVERSION_HPP
#define PACSLAB_DOWNCONVERSION_HPP

// Two-mode down-conversion H = r (e^{i phi} a^dag b^dag + e^{-i phi} a b),
// evolved for unit time from |alpha>|0>. Closed forms come from the SU(1,1)
// disentangled evolution operator; the numeric path exponentiates H directly.

#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pacslab/fock.hpp"
#include "pacslab/pacs.hpp"
#include "pacslab/special.hpp"

namespace pacslab {

struct DcParams {
  cplx alpha;
  double r = 0.0;    ///< |lambda| t
  double phi = 0.0;  ///< arg(lambda t)
  std::size_t dim_a = 0;  ///< 0 selects dc_default_dims
  std::size_t dim_b = 0;
};

inline void validate(const DcParams& p) {
  if (!std::isfinite(p.r) || p.r < 0.0) throw DomainError("DcParams: r must be finite and >= 0");
  if (!std::isfinite(p.phi)) throw DomainError("DcParams: phi must be finite");
}

struct SqueezeFactors {
  double u;
  double v;
  double w;
};

/// Coefficients of exp(u a^dag b^dag) exp(v (n_a + n_b + 1)) exp(w a b).
inline SqueezeFactors su11_factors(double r) {
  if (!std::isfinite(r) || r < 0.0) throw DomainError("su11_factors: r must be finite and >= 0");
  const double t = std::tanh(r);
  return {t, -std::log(std::cosh(r)), -t};
}

/// Amplitude alpha / cosh r of the photon-added state left in mode a.
inline cplx conditioned_amplitude(cplx alpha, double r) { return alpha / std::cosh(r); }

/// Seed amplitude that yields a conditioned photon-added state of amplitude
/// `alpha_target` after squeezing r.
inline cplx seed_amplitude(cplx alpha_target, double r) {
  if (!std::isfinite(r) || r < 0.0) throw DomainError("seed_amplitude: r must be finite and >= 0");
  return alpha_target * std::cosh(r);
}

/// Probability of detecting m photons in mode b:
/// e^{-|alpha|^2 tanh^2 r} / cosh^2 r * tanh^{2m} r * L_m(-|alpha|^2 / cosh^2 r).
/// Orders past the recurrence limit go through the log-space series.
inline double p_m(cplx alpha, double r, unsigned m) {
  if (!std::isfinite(r) || r < 0.0) throw DomainError("p_m: r must be finite and >= 0");
  const double t = std::tanh(r);
  const double c2 = std::cosh(r) * std::cosh(r);
  const double x = std::norm(alpha);
  if (t == 0.0) return m == 0 ? 1.0 : 0.0;
  const double log_geom = 2.0 * static_cast<double>(m) * std::log(t);
  if (m > kLaguerreMaxOrder)
    return std::exp(-x * t * t + log_geom - std::log(c2) + log_laguerre_neg(m, x / c2));
  return std::exp(-x * t * t + log_geom) / c2 * laguerre(m, -x / c2);
}

/// Closed-form single-photon-added overlap
/// [(1 + |alpha|^2/cosh^2 r) / (1 + |alpha|^2)] exp[-|alpha|^2 (1 - 1/cosh^2 r)].
/// It does not equal |<alpha,1|alpha~,1>|^2; that fidelity is
/// spacs_overlap_numeric().
inline double spacs_overlap_closed(cplx alpha, double r) {
  if (!std::isfinite(r) || r < 0.0) throw DomainError("spacs_overlap_closed: r must be finite and >= 0");
  const double x = std::norm(alpha);
  const double inv_c2 = 1.0 / (std::cosh(r) * std::cosh(r));
  return (1.0 + x * inv_c2) / (1.0 + x) * std::exp(-x * (1.0 - inv_c2));
}

/// Large-r limit e^{-|alpha|^2} / (1 + |alpha|^2).
inline double spacs_overlap_saturation(cplx alpha) {
  const double x = std::norm(alpha);
  return std::exp(-x) / (1.0 + x);
}

/// |<alpha,1|alpha~,1>|^2 with both states normalized, by direct summation.
inline double spacs_overlap_numeric(cplx alpha, double r, std::size_t dim = 0) {
  if (dim == 0) dim = pacs_default_dim(alpha, 1);
  return std::norm(pacs_overlap({alpha, 1}, {conditioned_amplitude(alpha, r), 1}, dim,
                                Normalization::normalized));
}

// --- truncation --------------------------------------------------------------

inline constexpr std::size_t kMaxDimB = 8192;

namespace detail {

/// P_0, P_1, ... up to the first index M where P_M < floor and the sequence
/// is decreasing; also returns a geometric bound on sum_{m > M} P_m.
struct PmTable {
  std::vector<double> p;
  double beyond;
};

inline PmTable pm_table(cplx alpha, double r, double floor) {
  PmTable out{{}, 0.0};
  if (std::tanh(r) == 0.0) {
    out.p = {1.0};
    return out;
  }
  for (unsigned m = 0;; ++m) {
    if (m > kMaxDimB)
      throw TruncationInsufficient("dc dims: r = " + std::to_string(r) + " needs more than " +
                                       std::to_string(kMaxDimB) + " b-mode levels",
                                   out.p.back());
    out.p.push_back(p_m(alpha, r, m));
    const std::size_t n = out.p.size();
    if (n >= 2 && out.p[n - 1] < floor && out.p[n - 1] < out.p[n - 2]) {
      // Successive ratios of P_m decrease toward tanh^2 r.
      const double q = out.p[n - 1] / out.p[n - 2];
      out.beyond = out.p[n - 1] * q / (1.0 - q);
      return out;
    }
  }
}

}  // namespace detail

/// sum_{m >= dim_b} P_m.
inline double b_tail_mass(cplx alpha, double r, std::size_t dim_b) {
  const detail::PmTable t = detail::pm_table(alpha, r, 1e-30);
  double tail = t.beyond;
  for (std::size_t m = t.p.size(); m-- > dim_b;) tail += t.p[m];
  return tail;
}

/// Mass of the normalized (a^dag)^m |alpha> on levels >= dim.
inline double pacs_tail_fraction(cplx alpha, unsigned m, std::size_t dim) {
  if (dim <= m) return 1.0;
  const double x = std::norm(alpha);
  if (x == 0.0) return 0.0;
  // |((a^dag)^m alpha)_{m+j}|^2 is proportional to x^j (m+j)! / (j!)^2.
  const double lx = std::log(x);
  auto lt = [&](std::size_t j) {
    return static_cast<double>(j) * lx + log_factorial(m + j) - 2.0 * log_factorial(j);
  };
  std::vector<double> logs;
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0;; ++j) {
    const double v = lt(j);
    logs.push_back(v);
    peak = std::max(peak, v);
    const bool past_peak = static_cast<double>((j + 1) * (j + 1)) > x * static_cast<double>(m + j + 1);
    if (past_peak && v < peak - 50.0) break;
  }
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t j = logs.size(); j-- > 0;) {
    const double w = std::exp(logs[j] - peak);
    total += w;
    if (j >= dim - m) tail += w;
  }
  return std::min(tail / total, 1.0);
}

struct DcDims {
  std::size_t dim_a;
  std::size_t dim_b;
};

/// Smallest dim_b whose b-mode tail mass is <= tail_tol, and a dim_a that
/// leaves the retained columns' total a-mode loss below the same bound.
inline DcDims dc_default_dims(cplx alpha, double r, double tail_tol = 1e-13) {
  if (!std::isfinite(r) || r < 0.0) throw DomainError("dc_default_dims: r must be finite and >= 0");
  const detail::PmTable t = detail::pm_table(alpha, r, tail_tol * 1e-3);
  const std::vector<double>& p = t.p;
  std::vector<double> suffix(p.size() + 1, t.beyond);
  for (std::size_t m = p.size(); m-- > 0;) suffix[m] = suffix[m + 1] + p[m];
  std::size_t dim_b = 2;
  while (dim_b < p.size() && suffix[dim_b] > tail_tol) ++dim_b;

  const cplx at = conditioned_amplitude(alpha, r);
  std::size_t margin = default_dim(alpha);
  for (;; margin += 8) {
    double lost = 0.0;
    for (std::size_t m = 0; m < dim_b; ++m)
      lost += p[m] * pacs_tail_fraction(at, static_cast<unsigned>(m), dim_b + margin);
    if (lost <= tail_tol) break;
  }
  return {dim_b + margin, dim_b};
}

inline DcDims resolve_dims(const DcParams& p) {
  if (p.dim_a != 0 && p.dim_b != 0) return {p.dim_a, p.dim_b};
  DcDims d = dc_default_dims(p.alpha, p.r);
  if (p.dim_a != 0) d.dim_a = p.dim_a;
  if (p.dim_b != 0) d.dim_b = p.dim_b;
  return d;
}

// --- evolution ---------------------------------------------------------------

enum class Truncation {
  strict,   ///< missing norm beyond tol raises TruncationInsufficient
  partial,  ///< keep the retained columns, unflagged
};

/// Evolved state from the disentangled form:
///   e^{-|alpha|^2 tanh^2 r / 2} / cosh r
///     * sum_n (-i e^{i phi} tanh r)^n / sqrt(n!) (a^dag)^n |alpha~>|n>,
/// alpha~ = alpha / cosh r. Column n entry n+j is evaluated in log space.
inline TwoModeState dc_evolve_closed(const DcParams& p, Truncation mode = Truncation::strict,
                                     double tol = NumericConfig{}.evolution_tol) {
  validate(p);
  const DcDims dims = resolve_dims(p);
  const auto da = static_cast<Eigen::Index>(dims.dim_a);
  const auto db = static_cast<Eigen::Index>(dims.dim_b);
  const double t = std::tanh(p.r);
  const double x = std::norm(p.alpha);
  const cplx at = conditioned_amplitude(p.alpha, p.r);
  const double log_pref = -0.5 * x * t * t - std::log(std::cosh(p.r)) - 0.5 * std::norm(at);
  const double u_phase = p.phi - 0.5 * std::numbers::pi;  // arg(-i e^{i phi})
  const double a_phase = std::arg(at);
  const double log_t = t > 0.0 ? std::log(t) : 0.0;
  const double log_at = std::abs(at) > 0.0 ? std::log(std::abs(at)) : 0.0;

  Eigen::MatrixXcd amp = Eigen::MatrixXcd::Zero(da, db);
  for (Eigen::Index n = 0; n < db; ++n) {
    if (n > 0 && t == 0.0) break;
    for (Eigen::Index k = n; k < da; ++k) {
      const auto j = static_cast<std::size_t>(k - n);
      if (j > 0 && std::abs(at) == 0.0) break;
      const double lm = log_pref + static_cast<double>(n) * log_t + static_cast<double>(j) * log_at +
                        0.5 * (log_factorial(static_cast<std::size_t>(k)) -
                               log_factorial(static_cast<std::size_t>(n))) -
                        log_factorial(j);
      const double ph = static_cast<double>(n) * u_phase + static_cast<double>(j) * a_phase;
      amp(k, n) = std::polar(std::exp(lm), ph);
    }
  }
  const double missing = 1.0 - amp.squaredNorm();
  if (mode == Truncation::strict && std::abs(missing) > tol)
    throw TruncationInsufficient("dc_evolve_closed: dims (" + std::to_string(dims.dim_a) + ", " +
                                     std::to_string(dims.dim_b) + ") lose norm",
                                 missing);
  return TwoModeState(std::move(amp), std::abs(missing) <= kNormalizedTol);
}

/// Generator -i r (e^{i phi} a^dag b^dag + e^{-i phi} a b) as a dense matrix
/// on the flattened tensor space, index n * dim_b + m. For small dims only.
inline OperatorMatrix dc_generator_matrix(std::size_t dim_a, std::size_t dim_b, double r, double phi) {
  const Eigen::MatrixXcd ad_a = creation_matrix(dim_a).entries();
  const Eigen::MatrixXcd ad_b = creation_matrix(dim_b).entries();
  const auto na = static_cast<Eigen::Index>(dim_a);
  const auto nb = static_cast<Eigen::Index>(dim_b);
  Eigen::MatrixXcd pair_up = Eigen::MatrixXcd::Zero(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i)
    for (Eigen::Index k = 0; k < na; ++k)
      if (ad_a(i, k) != 0.0) pair_up.block(i * nb, k * nb, nb, nb) = ad_a(i, k) * ad_b;
  const cplx up = std::polar(r, phi - 0.5 * std::numbers::pi);
  const cplx down = std::polar(r, -phi - 0.5 * std::numbers::pi);
  return OperatorMatrix(up * pair_up + down * pair_up.adjoint());
}

/// Action of the generator on the band 0 <= n_a - n_b < band of the
/// amplitude grid. H conserves n_a - n_b, so each band row d is an
/// independent tridiagonal chain in n_b.
class PairGenerator {
 public:
  PairGenerator(std::size_t dim_a, std::size_t dim_b, std::size_t band, double r, double phi)
      : dim_a_(dim_a), dim_b_(dim_b), band_(band), up_(std::polar(r, phi - 0.5 * std::numbers::pi)),
        down_(std::polar(r, -phi - 0.5 * std::numbers::pi)) {}

  std::size_t size() const { return band_ * dim_b_; }
  std::size_t index(std::size_t d, std::size_t m) const { return d * dim_b_ + m; }
  bool valid(std::size_t d, std::size_t m) const { return m < dim_b_ && m + d < dim_a_; }

  Eigen::VectorXcd operator()(const Eigen::VectorXcd& v) const {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
    for (std::size_t d = 0; d < band_; ++d) {
      for (std::size_t m = 0; m < dim_b_ && m + d < dim_a_; ++m) {
        const double n = static_cast<double>(m + d);
        const double mb = static_cast<double>(m);
        cplx acc = 0.0;
        if (m > 0) acc += up_ * std::sqrt(n * mb) * v(static_cast<Eigen::Index>(index(d, m - 1)));
        if (valid(d, m + 1))
          acc += down_ * std::sqrt((n + 1.0) * (mb + 1.0)) * v(static_cast<Eigen::Index>(index(d, m + 1)));
        out(static_cast<Eigen::Index>(index(d, m))) = acc;
      }
    }
    return out;
  }

  /// Max row sum of |entries|, equal to the 1-norm since H is Hermitian.
  double norm_bound() const {
    double best = 0.0;
    const double r = std::abs(up_);
    for (std::size_t d = 0; d < band_; ++d) {
      for (std::size_t m = 0; m < dim_b_ && m + d < dim_a_; ++m) {
        const double n = static_cast<double>(m + d);
        const double mb = static_cast<double>(m);
        double row = m > 0 ? std::sqrt(n * mb) : 0.0;
        if (valid(d, m + 1)) row += std::sqrt((n + 1.0) * (mb + 1.0));
        best = std::max(best, r * row);
      }
    }
    return best;
  }

 private:
  std::size_t dim_a_;
  std::size_t dim_b_;
  std::size_t band_;
  cplx up_;    // coefficient of a^dag b^dag in the generator
  cplx down_;  // coefficient of a b
};

/// Direct exponentiation of the generator on |alpha>|0>.
inline TwoModeState dc_evolve_numeric(const DcParams& p, double tol = NumericConfig{}.evolution_tol) {
  validate(p);
  const DcDims dims = resolve_dims(p);
  const std::size_t band =
      std::min(dims.dim_a, std::max(dims.dim_a > dims.dim_b ? dims.dim_a - dims.dim_b : 0,
                                    default_dim(p.alpha)));
  const FockVector seed = coherent_state(p.alpha, band, NumericConfig{}.tail_tol);

  PairGenerator gen(dims.dim_a, dims.dim_b, band, p.r, p.phi);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(gen.size()));
  for (std::size_t d = 0; d < band; ++d) v(static_cast<Eigen::Index>(gen.index(d, 0))) = seed[d];

  ExpmOptions opt;
  opt.tol = tol;
  const Eigen::VectorXcd out = expm_action(gen, gen.norm_bound(), std::move(v), opt);

  Eigen::MatrixXcd amp = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dims.dim_a),
                                                static_cast<Eigen::Index>(dims.dim_b));
  for (std::size_t d = 0; d < band; ++d)
    for (std::size_t m = 0; gen.valid(d, m); ++m)
      amp(static_cast<Eigen::Index>(m + d), static_cast<Eigen::Index>(m)) =
          out(static_cast<Eigen::Index>(gen.index(d, m)));
  return TwoModeState(std::move(amp));
}

struct ConditionalMpacs {
  FockVector state;  ///< normalized a-mode state
  double probability;
  cplx alpha_tilde;
  double ideal_fidelity;  ///< against normalized (a^dag)^m |alpha_tilde>
};

/// Conditions mode b on |m> and compares the a-mode with the photon-added
/// coherent state of amplitude alpha / cosh r.
inline ConditionalMpacs conditional_mpacs(const TwoModeState& s, unsigned m, cplx alpha, double r) {
  Projection proj = project_b(s, m);
  const cplx at = conditioned_amplitude(alpha, r);
  const FockVector ideal = pacs_state({at, m}, s.dim_a(), Normalization::normalized);
  const double f = fidelity(proj.state, ideal);
  return {std::move(proj.state), proj.probability, at, f};
}

}  // namespace pacslab

#endif  // PACSLAB_DOWNCONVERSION_HPP
