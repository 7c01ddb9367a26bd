#ifndef PACSLAB_PACS_HPP
#define PACSLAB_PACS_HPP

// m-photon-added coherent states |alpha, m> = (a^dagger)^m |alpha>.

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pacslab/fock.hpp"
#include "pacslab/special.hpp"

namespace pacslab {

struct PacsSpec {
  cplx alpha;
  unsigned m = 0;
};

enum class Normalization { unnormalized, normalized };

/// Truncation that leaves room for m photon additions on top of the coherent
/// default.
inline std::size_t pacs_default_dim(cplx alpha, unsigned m) { return default_dim(alpha) + m; }

/// Builds (a^dagger)^m |alpha> on |0>..|dim-1>. The coherent tail check runs at
/// dim - m since every creation step shifts weight one level up.
inline FockVector pacs_state(const PacsSpec& spec, std::size_t dim, Normalization norm,
                             double tail_tol = kNormalizedTol) {
  if (dim <= spec.m)
    throw TruncationInsufficient("pacs_state: dim " + std::to_string(dim) +
                                     " leaves no room for m = " + std::to_string(spec.m),
                                 1.0);
  const double tail = coherent_tail_mass(spec.alpha, dim - spec.m);
  if (tail > tail_tol)
    throw TruncationInsufficient("pacs_state: dim " + std::to_string(dim) + " too small", tail);

  // (a^dagger)^m on the coherent amplitudes: entry k picks up c_{k-m} sqrt(k!/(k-m)!).
  FockVector coh = coherent_state(spec.alpha, dim, 1.0);
  const auto d = static_cast<Eigen::Index>(dim);
  Eigen::VectorXcd v = coh.amp();
  for (unsigned step = 0; step < spec.m; ++step) {
    for (Eigen::Index k = d - 1; k >= 1; --k) v(k) = std::sqrt(static_cast<double>(k)) * v(k - 1);
    v(0) = 0.0;
  }
  FockVector out(std::move(v));
  return norm == Normalization::normalized ? out.unit() : out;
}

/// <alpha,m|alpha,m> = m! L_m(-|alpha|^2).
inline double pacs_norm_sq(const PacsSpec& spec) {
  return std::exp(log_factorial(spec.m)) * laguerre(spec.m, -std::norm(spec.alpha));
}

inline cplx pacs_overlap(const PacsSpec& a, const PacsSpec& b, std::size_t dim, Normalization norm) {
  return inner_product(pacs_state(a, dim, norm), pacs_state(b, dim, norm));
}

/// Gram matrix of the normalized states |alpha, 0..m_max>.
inline Eigen::MatrixXcd pacs_gram(cplx alpha, unsigned m_max, std::size_t dim) {
  std::vector<FockVector> states;
  for (unsigned m = 0; m <= m_max; ++m)
    states.push_back(pacs_state({alpha, m}, dim, Normalization::normalized));
  const auto n = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      g(i, j) = inner_product(states[static_cast<std::size_t>(i)], states[static_cast<std::size_t>(j)]);
  return g;
}

}  // namespace pacslab

#endif  // PACSLAB_PACS_HPP
