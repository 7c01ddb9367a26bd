#ifndef PACSLAB_IDENTITIES_HPP
#define PACSLAB_IDENTITIES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>

#include <Eigen/Dense>

#include "pacslab/fock.hpp"
#include "pacslab/special.hpp"

namespace pacslab {

/// Largest |x - y| / max(1, |y|) over the leading blk x blk block. Entries of
/// high ladder powers reach ~1e10 on moderate truncations, where an absolute
/// bound would only measure double rounding.
inline double scaled_entry_error(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y, Eigen::Index blk) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < blk; ++j)
    for (Eigen::Index i = 0; i < blk; ++i)
      worst = std::max(worst, std::abs(x(i, j) - y(i, j)) / std::max(1.0, std::abs(y(i, j))));
  return worst;
}

/// (a^dag a)^n = sum_k S(n,k) (a^dag)^k a^k, worst scaled entry error over
/// 1 <= n <= n_max on the block clear of the truncation edge.
inline double normal_ordering_error(std::size_t dim, unsigned n_max) {
  if (dim <= n_max) throw InvalidDimension("normal_ordering_error: dim must exceed n_max");
  const OperatorMatrix a = annihilation_matrix(dim);
  const OperatorMatrix ad = creation_matrix(dim);
  const auto d = static_cast<Eigen::Index>(dim);
  double worst = 0.0;
  for (unsigned n = 1; n <= n_max; ++n) {
    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(d, d);
    for (unsigned k = 1; k <= n; ++k) rhs += to_double(stirling2(n, k)) * (ad.pow(k) * a.pow(k)).entries();
    worst = std::max(worst, scaled_entry_error((ad * a).pow(n).entries(), rhs, d - static_cast<Eigen::Index>(n)));
  }
  return worst;
}

/// (a^dag)^k a^k a^dag = k (a^dag)^k a^{k-1} + (a^dag)^{k+1} a^k for 1 <= k <= k_max.
inline double ladder_reordering_error(std::size_t dim, unsigned k_max) {
  if (dim <= k_max + 1) throw InvalidDimension("ladder_reordering_error: dim must exceed k_max + 1");
  const OperatorMatrix a = annihilation_matrix(dim);
  const OperatorMatrix ad = creation_matrix(dim);
  double worst = 0.0;
  for (unsigned k = 1; k <= k_max; ++k) {
    const Eigen::MatrixXcd lhs = (ad.pow(k) * a.pow(k) * ad).entries();
    const Eigen::MatrixXcd rhs =
        static_cast<double>(k) * (ad.pow(k) * a.pow(k - 1)).entries() + (ad.pow(k + 1) * a.pow(k)).entries();
    worst = std::max(worst, scaled_entry_error(lhs, rhs, static_cast<Eigen::Index>(dim - k - 1)));
  }
  return worst;
}

}  // namespace pacslab

#endif  // PACSLAB_IDENTITIES_HPP
