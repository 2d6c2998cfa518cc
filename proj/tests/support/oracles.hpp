#pragma once

// Brute-force reference evaluations. Nothing here calls into the library's
// search or pruning code: orders are closed by fixpoint iteration, bounds are
// found by scanning, orthocomplements and automorphisms by walking every
// permutation, and each axiom is its quantified formula evaluated literally.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "oql/state_property.hpp"
#include "oql/subentity.hpp"

namespace oracle {

using Table = std::vector<std::vector<bool>>;
using Map = std::vector<std::size_t>;

struct Lattice {
  std::size_t n = 0;
  Table le;
  std::vector<Map> meet, join;
  std::size_t bot = 0, top = 0;
  std::vector<std::size_t> atoms;
};

inline Table close_order(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  Table le(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) le[i][i] = true;
  for (auto [a, b] : pairs) le[a][b] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (le[a][b] && le[b][c] && !le[a][c]) le[a][c] = true, changed = true;
  }
  return le;
}

inline bool antisymmetric(const Table& le) {
  for (std::size_t a = 0; a < le.size(); ++a)
    for (std::size_t b = 0; b < le.size(); ++b)
      if (a != b && le[a][b] && le[b][a]) return false;
  return true;
}

inline std::optional<std::size_t> glb(const Table& le, std::size_t a, std::size_t b) {
  std::vector<std::size_t> lower;
  for (std::size_t x = 0; x < le.size(); ++x)
    if (le[x][a] && le[x][b]) lower.push_back(x);
  for (auto g : lower)
    if (std::all_of(lower.begin(), lower.end(), [&](std::size_t y) { return le[y][g]; })) return g;
  return std::nullopt;
}

inline std::optional<std::size_t> lub(const Table& le, std::size_t a, std::size_t b) {
  std::vector<std::size_t> upper;
  for (std::size_t x = 0; x < le.size(); ++x)
    if (le[a][x] && le[b][x]) upper.push_back(x);
  for (auto g : upper)
    if (std::all_of(upper.begin(), upper.end(), [&](std::size_t y) { return le[g][y]; })) return g;
  return std::nullopt;
}

/// nullopt unless the closed relation is a partial order with all binary bounds.
inline std::optional<Lattice> make_lattice(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  Lattice L;
  L.n = n;
  L.le = close_order(n, pairs);
  if (!antisymmetric(L.le)) return std::nullopt;
  L.meet.assign(n, Map(n));
  L.join.assign(n, Map(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      auto m = glb(L.le, a, b), j = lub(L.le, a, b);
      if (!m || !j) return std::nullopt;
      L.meet[a][b] = *m;
      L.join[a][b] = *j;
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    bool is_bot = true, is_top = true;
    for (std::size_t y = 0; y < n; ++y) is_bot = is_bot && L.le[x][y], is_top = is_top && L.le[y][x];
    if (is_bot) L.bot = x;
    if (is_top) L.top = x;
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (x == L.bot) continue;
    bool covers_bottom = true;
    for (std::size_t y = 0; y < n; ++y)
      if (y != L.bot && y != x && L.le[y][x]) covers_bottom = false;
    if (covers_bottom) L.atoms.push_back(x);
  }
  return L;
}

inline bool lt(const Lattice& L, std::size_t a, std::size_t b) { return a != b && L.le[a][b]; }

/// Every permutation that is an orthocomplementation, in lexicographic order.
inline std::vector<Map> orthocomplements(const Lattice& L) {
  std::vector<Map> out;
  Map c(L.n);
  std::iota(c.begin(), c.end(), 0);
  do {
    bool ok = true;
    for (std::size_t a = 0; a < L.n && ok; ++a) {
      ok = c[c[a]] == a && L.meet[a][c[a]] == L.bot && L.join[a][c[a]] == L.top;
      for (std::size_t b = 0; b < L.n && ok; ++b)
        if (L.le[a][b]) ok = L.le[c[b]][c[a]];
    }
    if (ok) out.push_back(c);
  } while (std::next_permutation(c.begin(), c.end()));
  return out;
}

/// Order automorphisms by permutation enumeration.
inline std::vector<Map> automorphisms(const Lattice& L) {
  std::vector<Map> out;
  Map f(L.n);
  std::iota(f.begin(), f.end(), 0);
  do {
    bool ok = true;
    for (std::size_t a = 0; a < L.n && ok; ++a)
      for (std::size_t b = 0; b < L.n && ok; ++b) ok = L.le[a][b] == L.le[f[a]][f[b]];
    if (ok) out.push_back(f);
  } while (std::next_permutation(f.begin(), f.end()));
  return out;
}

inline bool is_atom(const Lattice& L, std::size_t a) {
  return std::find(L.atoms.begin(), L.atoms.end(), a) != L.atoms.end();
}

inline std::size_t meet_all(const Lattice& L, const std::vector<std::size_t>& xs) {
  std::size_t m = L.top;
  for (auto x : xs) m = L.meet[m][x];
  return m;
}

inline std::vector<std::size_t> xi(const Table& actual, std::size_t p) {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < actual[p].size(); ++a)
    if (actual[p][a]) out.push_back(a);
  return out;
}

// (i) for all p, q: meet xi(p) = meet xi(q) implies p = q.
inline bool state_determination(const Lattice& L, const Table& actual) {
  for (std::size_t p = 0; p < actual.size(); ++p)
    for (std::size_t q = 0; q < actual.size(); ++q)
      if (p != q && meet_all(L, xi(actual, p)) == meet_all(L, xi(actual, q))) return false;
  return true;
}

// (ii) for all p: meet xi(p) is an atom.
inline bool atomicity(const Lattice& L, const Table& actual) {
  for (std::size_t p = 0; p < actual.size(); ++p)
    if (!is_atom(L, meet_all(L, xi(actual, p)))) return false;
  return true;
}

// (iv) for all a, x and atoms b: a < x < a v b implies x = a or x = a v b.
inline bool covering_violation(const Lattice& L, std::size_t a, std::size_t b, std::size_t x) {
  const std::size_t ab = L.join[a][b];
  return is_atom(L, b) && lt(L, a, x) && lt(L, x, ab) && !(x == a || x == ab);
}

inline bool covering_law(const Lattice& L) {
  for (std::size_t a = 0; a < L.n; ++a)
    for (std::size_t b = 0; b < L.n; ++b)
      for (std::size_t x = 0; x < L.n; ++x)
        if (covering_violation(L, a, b, x)) return false;
  return true;
}

// (v) for all a <= b: (b ^ a') v a = b.
inline bool weak_modularity_violation(const Lattice& L, const Map& c, std::size_t a, std::size_t b) {
  return L.le[a][b] && L.join[L.meet[b][c[a]]][a] != b;
}

inline bool weak_modularity(const Lattice& L, const Map& c) {
  for (std::size_t a = 0; a < L.n; ++a)
    for (std::size_t b = 0; b < L.n; ++b)
      if (weak_modularity_violation(L, c, a, b)) return false;
  return true;
}

// (vi) for all atoms s, t there are distinct atoms s1, s2 and an automorphism f
// with f(s) = t fixing [0, s1 v s2] pointwise.
inline bool plane_pair(const Lattice& L, const std::vector<Map>& autos, std::size_t s, std::size_t t) {
  for (const auto& f : autos) {
    if (f[s] != t) continue;
    for (auto s1 : L.atoms) {
      for (auto s2 : L.atoms) {
        if (s1 == s2) continue;
        const std::size_t hi = L.join[s1][s2];
        bool fixes = true;
        for (std::size_t a = 0; a < L.n && fixes; ++a)
          if (L.le[a][hi]) fixes = f[a] == a;
        if (fixes) return true;
      }
    }
  }
  return false;
}

inline bool plane_transitivity(const Lattice& L) {
  const auto autos = automorphisms(L);
  for (auto s : L.atoms)
    for (auto t : L.atoms)
      if (!plane_pair(L, autos, s, t)) return false;
  return true;
}

// (vii) every b with b = (b ^ a) v (b ^ a') for all a is 0 or I.
inline bool central(const Lattice& L, const Map& c, std::size_t b) {
  for (std::size_t a = 0; a < L.n; ++a)
    if (L.join[L.meet[b][a]][L.meet[b][c[a]]] != b) return false;
  return true;
}

inline bool irreducibility(const Lattice& L, const Map& c) {
  for (std::size_t b = 0; b < L.n; ++b)
    if (b != L.bot && b != L.top && central(L, c, b)) return false;
  return true;
}

/// b and c are orthogonal iff some a has b <= a and c <= a'.
inline bool orthogonal(const Lattice& L, const Map& c, std::size_t x, std::size_t y) {
  for (std::size_t a = 0; a < L.n; ++a)
    if (L.le[x][a] && L.le[y][c[a]]) return true;
  return false;
}

/// Largest family of distinct nonzero, pairwise orthogonal elements (subset scan).
inline std::size_t max_orthogonal_family(const Lattice& L, const Map& c) {
  std::size_t best = 0;
  for (unsigned long mask = 0; mask < (1UL << L.n); ++mask) {
    std::vector<std::size_t> fam;
    for (std::size_t i = 0; i < L.n; ++i)
      if (mask >> i & 1UL) fam.push_back(i);
    if (std::find(fam.begin(), fam.end(), L.bot) != fam.end()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < fam.size() && ok; ++i)
      for (std::size_t j = i + 1; j < fam.size() && ok; ++j) ok = orthogonal(L, c, fam[i], fam[j]);
    if (ok) best = std::max(best, fam.size());
  }
  return best;
}

/// Does some witness (m, n) exist? Every injection n times every map m.
inline bool naive_subentity_exists(const oql::StatePropertySystem& part, const oql::StatePropertySystem& whole,
                                   std::size_t* checked = nullptr) {
  const std::size_t np = part.num_states(), nl = part.lattice().size();
  const std::size_t nw = whole.num_states(), nwl = whole.lattice().size();
  if (nl > nwl) return false;
  std::size_t count = 0;
  std::vector<std::size_t> n(nl), m(nw);

  auto covariant = [&]() {
    for (std::size_t q = 0; q < nw; ++q)
      for (std::size_t a = 0; a < nl; ++a)
        if (part.actual(m[q], a) != whole.actual(q, n[a])) return false;
    return true;
  };
  auto surjective = [&]() {
    std::vector<bool> hit(np, false);
    for (auto p : m) hit[p] = true;
    return std::all_of(hit.begin(), hit.end(), [](bool h) { return h; });
  };
  // Odometer over m in {0..np-1}^nw.
  auto some_m = [&]() {
    if (np == 0) return nw == 0;
    std::fill(m.begin(), m.end(), 0);
    while (true) {
      ++count;
      if (surjective() && covariant()) return true;
      std::size_t i = 0;
      while (i < nw && ++m[i] == np) m[i++] = 0;
      if (i == nw) return false;
    }
  };
  // Odometer over n in {0..nwl-1}^nl, skipping non-injective tuples.
  std::fill(n.begin(), n.end(), 0);
  bool found = false;
  while (!found) {
    std::vector<bool> used(nwl, false);
    bool injective = true;
    for (auto b : n) {
      if (used[b]) injective = false;
      used[b] = true;
    }
    if (injective) found = some_m();
    std::size_t i = 0;
    while (i < nl && ++n[i] == nwl) n[i++] = 0;
    if (i == nl) break;
  }
  if (checked) *checked = count;
  return found;
}

}  // namespace oracle
