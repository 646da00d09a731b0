#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace wagefloor {

// Finite chain over productivity levels. transition is row-major n x n,
// transition[i*n + j] = P(next = j | current = i). Levels ascending, positive.
struct MarkovChain {
  std::vector<double> levels;
  std::vector<double> transition;
  int n = 0;

  double prob(int i, int j) const { return transition[i * n + j]; }
};

// Rouwenhorst discretization of log eta_{t+1} = rho log eta_t + eps,
// eps ~ N(0, sigma_eps^2). Node spacing targets the unconditional standard
// deviation of the log process; levels are exponentiated without mean shift.
inline MarkovChain rouwenhorst(double rho, double sigma_eps, int n) {
  if (n < 2) throw std::invalid_argument("rouwenhorst: need at least 2 states");
  if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("rouwenhorst: |rho| must be < 1");
  if (!(sigma_eps > 0.0)) throw std::invalid_argument("rouwenhorst: sigma_eps must be > 0");

  const double p = (1.0 + rho) / 2.0;
  const double q = p;

  // build transition by the standard recursion, padding with zero borders
  std::vector<double> t = {1.0};
  int m = 1;
  while (m < n) {
    const int mm = m + 1;
    std::vector<double> nt(mm * mm, 0.0);
    auto add = [&](int r0, int c0, double w) {
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) nt[(i + r0) * mm + (j + c0)] += w * t[i * m + j];
    };
    add(0, 0, p);
    add(0, 1, 1.0 - p);
    add(1, 1, q);
    add(1, 0, 1.0 - q);
    // interior rows got two contributions; renormalize them by 1/2
    for (int i = 1; i < mm - 1; ++i)
      for (int j = 0; j < mm; ++j) nt[i * mm + j] *= 0.5;
    t.swap(nt);
    m = mm;
  }

  const double psi = sigma_eps * std::sqrt(static_cast<double>(n - 1)) / std::sqrt(1.0 - rho * rho);
  MarkovChain c;
  c.n = n;
  c.levels.resize(n);
  for (int i = 0; i < n; ++i) {
    const double logv = -psi + 2.0 * psi * static_cast<double>(i) / (n - 1);
    c.levels[i] = std::exp(logv);
  }
  c.transition = std::move(t);
  return c;
}

// Stationary row vector pi with pi = pi P, by power iteration from uniform.
inline std::vector<double> chain_stationary(const MarkovChain& chain, double tol = 1e-14,
                                            int max_iter = 1000000) {
  const int n = chain.n;
  std::vector<double> pi(n, 1.0 / n), next(n);
  for (int it = 0; it < max_iter; ++it) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += pi[i] * chain.transition[i * n + j];
      next[j] = s;
    }
    double diff = 0.0, mass = 0.0;
    for (int j = 0; j < n; ++j) {
      diff += std::abs(next[j] - pi[j]);
      mass += next[j];
    }
    for (int j = 0; j < n; ++j) next[j] /= mass;
    pi.swap(next);
    if (diff < tol) return pi;
  }
  return pi;
}

}  // namespace wagefloor
