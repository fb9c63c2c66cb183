#pragma once

#include <cmath>
#include <algorithm>
#include <limits>
#include <map>
#include <vector>

#include "radstein/errors.hpp"

namespace radstein {

// Gauss-Hermite rule for the weight e^{-x^2}: sum w_i f(x_i) approximates
// the integral over the real line.  Nodes and weights via Golub-Welsch: the
// eigenvalues of the Jacobi matrix (off-diagonals sqrt(k/2)) are the nodes
// and the squared first eigenvector components give the weights.  The QL
// sweep runs in long double and tracks only the first eigenvector row.
struct quadrature_rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

// Implicit-shift QL for a symmetric tridiagonal matrix, rotating the vector
// z along; on return d holds eigenvalues and z the first components.
inline void tridiagonal_ql(std::vector<long double>& d, std::vector<long double>& e,
                           std::vector<long double>& z) {
  const int n = static_cast<int>(d.size());
  e.push_back(0.0L);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const long double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= std::numeric_limits<long double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) throw quadrature_unstable("QL sweep did not converge");
        long double g = (d[l + 1] - d[l]) / (2.0L * e[l]);
        long double r = std::hypot(g, 1.0L);
        g = d[m] - d[l] + e[l] / (g + (g >= 0 ? std::fabs(r) : -std::fabs(r)));
        long double s = 1.0L, c = 1.0L, p = 0.0L;
        for (int i = m - 1; i >= l; --i) {
          long double f = s * e[i];
          const long double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0L) {
            d[i + 1] -= p;
            e[m] = 0.0L;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0L * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          f = z[i + 1];
          z[i + 1] = s * z[i] + c * f;
          z[i] = c * z[i] - s * f;
        }
        if (r == 0.0L && m - 1 >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0L;
      }
    } while (m != l);
  }
}

}  // namespace detail

inline quadrature_rule compute_gauss_hermite(int n) {
  if (n < 1) throw error("quadrature needs at least one node");
  std::vector<long double> d(n, 0.0L), e(n - 1), z(n, 0.0L);
  for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(k / 2.0L);
  z[0] = 1.0L;
  detail::tridiagonal_ql(d, e, z);

  const long double mu0 = 1.77245385090551602729816748334L;  // sqrt(pi)
  std::vector<std::pair<long double, long double>> pairs(n);
  for (int i = 0; i < n; ++i) pairs[i] = {d[i], mu0 * z[i] * z[i]};
  std::sort(pairs.begin(), pairs.end());

  quadrature_rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = static_cast<double>(pairs[i].first);
    rule.weights[i] = static_cast<double>(pairs[i].second);
  }
  return rule;
}

inline const quadrature_rule& gauss_hermite(int n) {
  static std::map<int, quadrature_rule> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_hermite(n)).first;
  return it->second;
}

// E[f(Z)] for standard Gaussian Z through the rule: substitute x -> sqrt(2) x
// and divide by sqrt(pi).
template <class Fn>
double gaussian_expectation_with_rule(const Fn& f, const quadrature_rule& rule) {
  const double inv_sqrt_pi = 0.5641895835477562869480794515608;
  const double sqrt2 = 1.4142135623730950488016887242097;
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(sqrt2 * rule.nodes[i]);
  return inv_sqrt_pi * acc;
}

}  // namespace radstein
