#pragma once

// Exact reference computations used to check the numerical code. Nothing here shares code
// with the library beyond the Polynomial type used to hand systems over.

#include <algorithm>
#include <map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "chernum/polysys.hpp"

namespace oracle {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using Exps = std::vector<int>;

// Laplace expansion along the first row.
inline Int laplace_det(const std::vector<std::vector<Int>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  Int det = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (m[0][k] == 0) continue;
    std::vector<std::vector<Int>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Int> row;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) row.push_back(m[i][j]);
      minor.push_back(std::move(row));
    }
    const Int term = m[0][k] * laplace_det(minor);
    det += (k % 2 == 0) ? term : Int(-term);
  }
  return det;
}

// sigma_k by brute force over subsets.
inline Int sigma_bruteforce(const std::vector<int>& d, int k) {
  const int r = static_cast<int>(d.size());
  Int total = 0;
  for (unsigned mask = 0; mask < (1u << r); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    Int prod = 1;
    for (int i = 0; i < r; ++i)
      if (mask & (1u << i)) prod *= d[i];
    total += prod;
  }
  return total;
}

// --- Groebner bases over Q in grevlex, for multiplicities of origin-primary ideals ---

inline int total(const Exps& e) {
  int s = 0;
  for (int v : e) s += v;
  return s;
}

struct Grevlex {
  bool operator()(const Exps& a, const Exps& b) const {  // true if a > b
    const int da = total(a), db = total(b);
    if (da != db) return da > db;
    for (std::size_t i = a.size(); i-- > 0;)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  }
};

using QPoly = std::map<Exps, Rat, Grevlex>;  // leading term first

inline bool divides(const Exps& a, const Exps& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline Exps lcm(const Exps& a, const Exps& b) {
  Exps c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = std::max(a[i], b[i]);
  return c;
}

inline Exps sub(const Exps& a, const Exps& b) {
  Exps c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

inline void axpy(QPoly& p, const Rat& c, const Exps& shift, const QPoly& q) {
  for (const auto& [e, v] : q) {
    Exps s(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) s[i] = e[i] + shift[i];
    Rat& t = p[s];
    t += c * v;
    if (t == 0) p.erase(s);
  }
}

inline QPoly reduce(QPoly p, const std::vector<QPoly>& basis) {
  QPoly rem;
  while (!p.empty()) {
    const auto [lm, lc] = *p.begin();
    bool done = false;
    for (const auto& g : basis) {
      const auto& [glm, glc] = *g.begin();
      if (divides(glm, lm)) {
        axpy(p, -lc / glc, sub(lm, glm), g);
        done = true;
        break;
      }
    }
    if (!done) {
      rem[lm] = lc;
      p.erase(p.begin());
    }
  }
  return rem;
}

inline std::vector<QPoly> groebner(std::vector<QPoly> basis) {
  std::erase_if(basis, [](const QPoly& p) { return p.empty(); });
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) pairs.emplace_back(j, i);
  while (!pairs.empty()) {
    const auto [i, j] = pairs.back();
    pairs.pop_back();
    const auto& [li, ci] = *basis[i].begin();
    const auto& [lj, cj] = *basis[j].begin();
    const Exps l = lcm(li, lj);
    QPoly s;
    axpy(s, 1 / ci, sub(l, li), basis[i]);
    axpy(s, -1 / cj, sub(l, lj), basis[j]);
    QPoly r = reduce(s, basis);
    if (!r.empty()) {
      basis.push_back(std::move(r));
      for (std::size_t k = 0; k + 1 < basis.size(); ++k) pairs.emplace_back(k, basis.size() - 1);
    }
  }
  return basis;
}

// dim_Q Q[y]/I counted as standard monomials; -1 if not finite up to max_degree.
inline int quotient_dimension(const std::vector<QPoly>& gens, int num_vars, int max_degree = 40) {
  const auto gb = groebner(gens);
  int count = 0;
  for (int d = 0; d <= max_degree; ++d) {
    int at_degree = 0;
    for (const auto& m : chernum::monomials_of_degree(num_vars, d)) {
      bool standard = true;
      for (const auto& g : gb)
        if (divides(g.begin()->first, m.exponents())) {
          standard = false;
          break;
        }
      at_degree += standard;
    }
    if (at_degree == 0) return count;
    count += at_degree;
  }
  return -1;
}

}  // namespace oracle
