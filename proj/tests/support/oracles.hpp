#pragma once

// Test-side reference computations. Deliberately naive and written without
// the library's combinatorics so that agreement means something.

#include <gmpxx.h>

#include <functional>
#include <vector>

#include "hpt/polynomial.hpp"

namespace oracle {

using Q = mpq_class;
using Partition = std::vector<std::vector<int>>;

// Insert element n-1 into every block of every partition of n-1 elements, or
// into a new singleton.
inline std::vector<Partition> partitions(int n) {
  if (n == 0) return {Partition{}};
  std::vector<Partition> out;
  for (const auto& p : partitions(n - 1)) {
    for (std::size_t b = 0; b < p.size(); ++b) {
      auto q = p;
      q[b].push_back(n - 1);
      out.push_back(q);
    }
    auto q = p;
    q.push_back({n - 1});
    out.push_back(q);
  }
  return out;
}

// Sign of reordering graded items into `order` (order[k] = source index at
// position k) by adjacent transpositions.
inline int reorder_sign(std::vector<int> order, const std::vector<int>& degrees) {
  int sign = 1;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = 0; j + 1 < order.size() - i; ++j)
      if (order[j] > order[j + 1]) {
        if ((degrees[order[j]] & 1) && (degrees[order[j + 1]] & 1)) sign = -sign;
        std::swap(order[j], order[j + 1]);
      }
  return sign;
}

// Blocks sorted internally and by least element, concatenated.
inline std::vector<int> canonical_order(Partition p) {
  for (auto& b : p) std::sort(b.begin(), b.end());
  std::sort(p.begin(), p.end());
  std::vector<int> flat;
  for (const auto& b : p) flat.insert(flat.end(), b.begin(), b.end());
  return flat;
}

inline mpz_class double_factorial(long n) {
  mpz_class r = 1;
  for (long k = n; k > 1; k -= 2) r *= k;
  return r;
}

inline mpz_class fact(long n) {
  mpz_class r = 1;
  for (long k = 2; k <= n; ++k) r *= k;
  return r;
}

inline mpz_class binomial(long n, long k) { return fact(n) / (fact(k) * fact(n - k)); }

// E[x^k] for a standard normal.
inline Q normal_moment(long k) { return k % 2 ? Q(0) : Q(double_factorial(k - 1)); }

inline Q normal_expectation(const hpt::Polynomial& p) {
  Q total = 0;
  for (std::size_t k = 0; k < p.coefficients().size(); ++k) total += p.coefficients()[k] * normal_moment(long(k));
  return total;
}

inline Q evaluate(const hpt::Polynomial& p, const Q& t) {
  Q acc = 0;
  const auto& c = p.coefficients();
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * t + c[k];
  return acc;
}

// Univariate cumulants from moments m[1..n]:
//   k_n = m_n - sum_{j=1}^{n-1} C(n-1, j-1) k_j m_{n-j}
inline std::vector<Q> cumulants_from_moments(const std::vector<Q>& m) {
  std::vector<Q> k(m.size());
  for (std::size_t n = 1; n < m.size(); ++n) {
    k[n] = m[n];
    for (std::size_t j = 1; j < n; ++j) k[n] -= Q(binomial(long(n) - 1, long(j) - 1)) * k[j] * m[n - j];
  }
  return k;
}

}  // namespace oracle
