#ifndef PACSLAB_SPECIAL_HPP
#define PACSLAB_SPECIAL_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pacslab/errors.hpp"

namespace pacslab {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::size_t kStirlingDefaultMax = 64;
inline constexpr unsigned kLaguerreMaxOrder = 512;
inline constexpr std::size_t kLogFactorialMax = 1000000;

/// Stirling numbers of the second kind S(n, k), 0 <= k <= n <= n_max, held as
/// exact integers. Built once from S(n,k) = k S(n-1,k) + S(n-1,k-1).
class StirlingTable {
 public:
  explicit StirlingTable(std::size_t n_max = kStirlingDefaultMax) : n_max_(n_max) {
    rows_.resize(n_max + 1);
    rows_[0] = {BigInt(1)};
    for (std::size_t n = 1; n <= n_max; ++n) {
      rows_[n].assign(n + 1, BigInt(0));
      for (std::size_t k = 1; k <= n; ++k) {
        BigInt v = rows_[n - 1].size() > k ? BigInt(k) * rows_[n - 1][k] : BigInt(0);
        v += rows_[n - 1][k - 1];
        rows_[n][k] = std::move(v);
      }
    }
  }

  std::size_t n_max() const { return n_max_; }

  /// S(n, k); zero for k > n. Throws DomainError when n exceeds the table.
  BigInt operator()(std::size_t n, std::size_t k) const {
    if (n > n_max_)
      throw DomainError("stirling2: n = " + std::to_string(n) + " exceeds table n_max " +
                        std::to_string(n_max_));
    if (k > n) return BigInt(0);
    return rows_[n][k];
  }

 private:
  std::size_t n_max_;
  std::vector<std::vector<BigInt>> rows_;
};

inline const StirlingTable& default_stirling_table() {
  static const StirlingTable table(kStirlingDefaultMax);
  return table;
}

inline BigInt stirling2(std::size_t n, std::size_t k) { return default_stirling_table()(n, k); }

/// Checked narrowing; the exact value does not fit -> OverflowError.
inline std::uint64_t to_u64(const BigInt& v) {
  if (v < 0 || v > BigInt(std::numeric_limits<std::uint64_t>::max()))
    throw OverflowError("exact integer does not fit in 64 bits");
  return v.convert_to<std::uint64_t>();
}

inline double to_double(const BigInt& v) {
  const double d = v.convert_to<double>();
  if (!std::isfinite(d)) throw OverflowError("exact integer exceeds double range");
  return d;
}

/// Laguerre polynomial L_m(x) by the three-term recurrence
/// (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}.
inline double laguerre(unsigned m, double x) {
  if (m > kLaguerreMaxOrder)
    throw DomainError("laguerre: order " + std::to_string(m) + " exceeds " +
                      std::to_string(kLaguerreMaxOrder));
  if (!std::isfinite(x)) throw NumericRangeError("laguerre: non-finite argument");
  double prev = 1.0;
  if (m == 0) return prev;
  double cur = 1.0 - x;
  for (unsigned k = 1; k < m; ++k) {
    const double kd = static_cast<double>(k);
    const double next = ((2.0 * kd + 1.0 - x) * cur - kd * prev) / (kd + 1.0);
    prev = cur;
    cur = next;
  }
  if (!std::isfinite(cur))
    throw NumericRangeError("laguerre: L_" + std::to_string(m) + "(" + std::to_string(x) +
                            ") overflows");
  return cur;
}

namespace detail {

inline const std::vector<double>& log_factorial_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kLogFactorialMax + 1);
    t[0] = 0.0;
    // Kahan summation keeps the running sum accurate to a few ulp.
    double sum = 0.0;
    double carry = 0.0;
    for (std::size_t n = 1; n <= kLogFactorialMax; ++n) {
      const double y = std::log(static_cast<double>(n)) - carry;
      const double s = sum + y;
      carry = (s - sum) - y;
      sum = s;
      t[n] = sum;
    }
    return t;
  }();
  return table;
}

}  // namespace detail

/// ln(n!) for n <= 10^6.
inline double log_factorial(std::size_t n) {
  if (n > kLogFactorialMax) throw DomainError("log_factorial: n exceeds 10^6");
  return detail::log_factorial_table()[n];
}

/// ln L_m(-y) for y >= 0 and any order, from the positive series
/// L_m(-y) = sum_j C(m, j) y^j / j!.
inline double log_laguerre_neg(std::size_t m, double y) {
  if (!std::isfinite(y) || y < 0.0) throw DomainError("log_laguerre_neg: y must be finite and >= 0");
  if (m > kLogFactorialMax) throw DomainError("log_laguerre_neg: order exceeds 10^6");
  if (y == 0.0 || m == 0) return 0.0;
  const double ly = std::log(y);
  auto term = [&](std::size_t j) {
    return log_factorial(m) - log_factorial(j) - log_factorial(m - j) + static_cast<double>(j) * ly -
           log_factorial(j);
  };
  double peak = term(0);
  for (std::size_t j = 1; j <= m; ++j) peak = std::max(peak, term(j));
  double sum = 0.0;
  for (std::size_t j = 0; j <= m; ++j) sum += std::exp(term(j) - peak);
  return peak + std::log(sum);
}

}  // namespace pacslab

#endif  // PACSLAB_SPECIAL_HPP
