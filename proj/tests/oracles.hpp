#pragma once

// Test-only reference computations. Nothing here calls the library's
// sumset, membership, or lifting code; everything is plain enumeration.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

namespace oracle {

using i64 = std::int64_t;

inline i64 mod(i64 a, i64 m) { return ((a % m) + m) % m; }

inline std::set<i64> pairwise_sums(const std::vector<i64>& a, const std::vector<i64>& b) {
  std::set<i64> out;
  for (i64 x : a) {
    for (i64 y : b) {
      out.insert(x + y);
    }
  }
  return out;
}

// All c in [0, p^k) with c^2 = a mod p^k.
inline std::vector<i64> square_roots(i64 a, i64 p, unsigned k) {
  i64 m = 1;
  for (unsigned i = 0; i < k; ++i) {
    m *= p;
  }
  std::vector<i64> out;
  for (i64 c = 0; c < m; ++c) {
    if (static_cast<__int128>(c) * c % m == mod(a, m)) {
      out.push_back(c);
    }
  }
  return out;
}

// Residue classes reachable as r_0 + ... + r_{n-1} mod m, r_i drawn from sets[i].
inline std::set<i64> residue_sums(const std::vector<std::vector<i64>>& sets, i64 m) {
  std::set<i64> cur{0};
  for (const auto& s : sets) {
    std::set<i64> next;
    for (i64 c : cur) {
      for (i64 r : s) {
        next.insert(mod(c + r, m));
      }
    }
    cur = std::move(next);
  }
  return cur;
}

// Is g a sum of one value from each candidate list?
inline bool decomposes(i64 g, const std::vector<std::vector<i64>>& candidates, std::size_t i = 0) {
  if (i == candidates.size()) {
    return g == 0;
  }
  for (i64 v : candidates[i]) {
    if (decomposes(g - v, candidates, i + 1)) {
      return true;
    }
  }
  return false;
}

// Same question, splitting the lists in halves and matching partial sums.
inline bool decomposes_mitm(i64 g, const std::vector<std::vector<i64>>& candidates) {
  std::size_t half = candidates.size() / 2;
  std::set<i64> left{0};
  for (std::size_t i = 0; i < half; ++i) {
    std::set<i64> next;
    for (i64 a : left) {
      for (i64 v : candidates[i]) {
        next.insert(a + v);
      }
    }
    left = std::move(next);
  }
  std::set<i64> right{0};
  for (std::size_t i = half; i < candidates.size(); ++i) {
    std::set<i64> next;
    for (i64 a : right) {
      for (i64 v : candidates[i]) {
        next.insert(a + v);
      }
    }
    right = std::move(next);
  }
  for (i64 a : left) {
    if (right.count(g - a)) {
      return true;
    }
  }
  return false;
}

// {0} u {+-x : x in values, |x| <= cap}.
inline std::vector<i64> signed_capped(const std::vector<i64>& values, i64 cap) {
  std::vector<i64> out{0};
  for (i64 x : values) {
    if (x <= cap && -x >= -cap) {
      out.push_back(x);
      out.push_back(-x);
    }
  }
  return out;
}

// Dihedral group of the square as permutations of the vertices 0..3;
// element a + 4b is r^a s^b, r = (0 1 2 3), s: i -> -i mod 4.
struct D4 {
  using Perm = std::vector<int>;

  static Perm compose(const Perm& f, const Perm& g) {  // f after g
    Perm h(4);
    for (int i = 0; i < 4; ++i) {
      h[i] = f[g[i]];
    }
    return h;
  }
  static Perm element(int idx) {
    Perm r{1, 2, 3, 0};
    Perm s{0, 3, 2, 1};
    Perm out{0, 1, 2, 3};
    for (int i = 0; i < idx / 4; ++i) {
      out = compose(s, out);
    }
    for (int i = 0; i < idx % 4; ++i) {
      out = compose(r, out);
    }
    return out;
  }
  // Index of x*y, where x*y means "apply y, then x".
  static int multiply(int x, int y) {
    Perm p = compose(element(x), element(y));
    for (int k = 0; k < 8; ++k) {
      if (element(k) == p) {
        return k;
      }
    }
    return -1;
  }
  static int inverse(int x) {
    for (int y = 0; y < 8; ++y) {
      if (multiply(x, y) == 0) {
        return y;
      }
    }
    return -1;
  }
  static std::set<int> star(const std::set<int>& s) {
    std::set<int> out{0};
    for (int x : s) {
      out.insert(x);
      out.insert(inverse(x));
    }
    return out;
  }
};

// Z/1 x Z/2 x ... x Z/N with elements encoded in mixed radix.
struct ProductMod {
  std::size_t N;
  int size() const {
    int s = 1;
    for (std::size_t n = 1; n <= N; ++n) {
      s *= static_cast<int>(n);
    }
    return s;
  }
  std::vector<i64> decode(int x) const {
    std::vector<i64> c(N);
    for (std::size_t n = 1; n <= N; ++n) {
      c[n - 1] = x % static_cast<int>(n);
      x /= static_cast<int>(n);
    }
    return c;
  }
  int encode(const std::vector<i64>& c) const {
    int x = 0;
    for (std::size_t n = N; n >= 1; --n) {
      x = x * static_cast<int>(n) + static_cast<int>(mod(c[n - 1], static_cast<i64>(n)));
    }
    return x;
  }
  int add(int a, int b) const {
    auto x = decode(a), y = decode(b);
    for (std::size_t i = 0; i < N; ++i) {
      x[i] += y[i];
    }
    return encode(x);
  }
  // Codes of elements whose coordinates 1..m are images of -1, 0, 1.
  std::set<int> small_box(std::size_t m) const {
    std::set<int> s;
    for (int x = 0; x < size(); ++x) {
      auto c = decode(x);
      bool ok = true;
      for (std::size_t k = 1; k <= m; ++k) {
        auto kk = static_cast<i64>(k);
        ok = ok && (c[k - 1] == 0 || c[k - 1] == mod(1, kk) || c[k - 1] == mod(-1, kk));
      }
      if (ok) {
        s.insert(x);
      }
    }
    return s;
  }
};

// Closure of n-fold products of a subset of a finite group given by a
// multiplication function on indices.
inline std::set<int> n_fold_products(const std::set<int>& s, unsigned n, int identity,
                                     const std::function<int(int, int)>& mul) {
  std::set<int> cur{identity};
  for (unsigned i = 0; i < n; ++i) {
    std::set<int> next;
    for (int a : cur) {
      for (int b : s) {
        next.insert(mul(a, b));
      }
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace oracle
