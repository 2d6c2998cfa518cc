#include "oql/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace oql {

NotAPartialOrder::NotAPartialOrder(Element a, Element b)
    : LatticeError("order relation has a cycle through elements " + std::to_string(a) + " and " +
                   std::to_string(b)),
      first(a), second(b) {}

NotALattice::NotALattice(Element a, Element b, bool missing_meet_)
    : LatticeError("elements " + std::to_string(a) + " and " + std::to_string(b) + " have no unique " +
                   (missing_meet_ ? "greatest lower bound" : "least upper bound")),
      first(a), second(b), missing_meet(missing_meet_) {}

EmptyInterval::EmptyInterval(Element lo, Element hi)
    : LatticeError("interval [" + std::to_string(lo) + ", " + std::to_string(hi) + "] is empty") {}

bool FiniteLattice::is_atom(Element a) const {
  return std::binary_search(atoms_.begin(), atoms_.end(), a);
}

Element FiniteLattice::meet(const ElementSet& subset) const {
  Element acc = top_;
  for (Element e : subset) acc = meet(acc, e);
  return acc;
}

Element FiniteLattice::join(const ElementSet& subset) const {
  Element acc = bottom_;
  for (Element e : subset) acc = join(acc, e);
  return acc;
}

ElementSet FiniteLattice::interval(Element lo, Element hi) const {
  if (lo >= size_ || hi >= size_) throw LatticeError("interval endpoint out of range");
  if (!leq(lo, hi)) throw EmptyInterval(lo, hi);
  ElementSet out;
  for (Element x = 0; x < size_; ++x)
    if (leq(lo, x) && leq(x, hi)) out.push_back(x);
  return out;
}

std::string FiniteLattice::label(Element a) const {
  return a < labels_.size() ? labels_[a] : std::to_string(a);
}

std::optional<Element> FiniteLattice::find(const std::string& name) const {
  auto it = std::find(labels_.begin(), labels_.end(), name);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<Element>(it - labels_.begin());
}

std::vector<std::pair<Element, Element>> FiniteLattice::order_pairs() const {
  std::vector<std::pair<Element, Element>> out;
  for (Element a = 0; a < size_; ++a)
    for (Element b = 0; b < size_; ++b)
      if (lt(a, b)) out.emplace_back(a, b);
  return out;
}

FiniteLattice build_lattice(std::size_t size,
                            const std::vector<std::pair<Element, Element>>& order_pairs,
                            std::vector<std::string> labels) {
  if (size == 0) throw LatticeError("a lattice needs at least one element");
  if (!labels.empty() && labels.size() != size)
    throw LatticeError("label count does not match lattice size");

  FiniteLattice L;
  L.size_ = size;
  L.order_.assign(size * size, 0);
  auto rel = [&](Element a, Element b) -> char& { return L.order_[a * size + b]; };

  for (Element a = 0; a < size; ++a) rel(a, a) = 1;
  for (auto [a, b] : order_pairs) {
    if (a >= size || b >= size) throw LatticeError("order pair index out of range");
    rel(a, b) = 1;
  }
  // Warshall closure.
  for (Element k = 0; k < size; ++k)
    for (Element i = 0; i < size; ++i)
      if (rel(i, k))
        for (Element j = 0; j < size; ++j)
          if (rel(k, j)) rel(i, j) = 1;

  for (Element a = 0; a < size; ++a)
    for (Element b = a + 1; b < size; ++b)
      if (rel(a, b) && rel(b, a)) throw NotAPartialOrder(a, b);

  L.meet_.assign(size * size, 0);
  L.join_.assign(size * size, 0);
  for (Element a = 0; a < size; ++a) {
    for (Element b = a; b < size; ++b) {
      std::optional<Element> glb, lub;
      for (Element c = 0; c < size; ++c) {
        if (rel(c, a) && rel(c, b) && (!glb || rel(*glb, c))) glb = c;
        if (rel(a, c) && rel(b, c) && (!lub || rel(c, *lub))) lub = c;
      }
      // The candidates above are maximal along one scan; confirm they dominate
      // every common bound.
      for (Element c = 0; c < size; ++c) {
        if (glb && rel(c, a) && rel(c, b) && !rel(c, *glb)) glb.reset();
        if (lub && rel(a, c) && rel(b, c) && !rel(*lub, c)) lub.reset();
      }
      if (!glb) throw NotALattice(a, b, true);
      if (!lub) throw NotALattice(a, b, false);
      L.meet_[a * size + b] = L.meet_[b * size + a] = *glb;
      L.join_[a * size + b] = L.join_[b * size + a] = *lub;
    }
  }

  Element bot = 0, top = 0;
  for (Element a = 1; a < size; ++a) {
    bot = L.meet_[bot * size + a];
    top = L.join_[top * size + a];
  }
  L.bottom_ = bot;
  L.top_ = top;

  // Longest chain from bottom, processed in order of down-set size.
  std::vector<std::size_t> below(size, 0);
  for (Element a = 0; a < size; ++a)
    for (Element c = 0; c < size; ++c)
      if (rel(c, a)) ++below[a];
  std::vector<Element> topo(size);
  std::iota(topo.begin(), topo.end(), Element{0});
  std::stable_sort(topo.begin(), topo.end(),
                   [&](Element x, Element y) { return below[x] < below[y]; });
  L.rank_.assign(size, 0);
  for (Element a : topo)
    for (Element c = 0; c < size; ++c)
      if (c != a && rel(c, a)) L.rank_[a] = std::max(L.rank_[a], L.rank_[c] + 1);

  for (Element a = 0; a < size; ++a)
    if (L.rank_[a] == 1) L.atoms_.push_back(a);

  if (labels.empty()) {
    labels.reserve(size);
    for (Element a = 0; a < size; ++a) labels.push_back(std::to_string(a));
  }
  L.labels_ = std::move(labels);
  return L;
}

namespace {

// Isomorphism-invariant fingerprint of an element.
using Signature = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t, std::size_t>;

std::vector<Signature> signatures(const FiniteLattice& L) {
  const std::size_t n = L.size();
  std::vector<Signature> sig(n);
  for (Element a = 0; a < n; ++a) {
    std::size_t down = 0, up = 0, lower_covers = 0, upper_covers = 0;
    for (Element c = 0; c < n; ++c) {
      if (L.leq(c, a)) ++down;
      if (L.leq(a, c)) ++up;
      if (L.lt(c, a) && L.rank(c) + 1 == L.rank(a)) ++lower_covers;
      if (L.lt(a, c) && L.rank(a) + 1 == L.rank(c)) ++upper_covers;
    }
    sig[a] = {L.rank(a), down, up, lower_covers, upper_covers};
  }
  return sig;
}

// Backtracking over source elements in index order with ascending candidates,
// so solutions are produced in lexicographic order.
class IsoSearch {
public:
  IsoSearch(const FiniteLattice& a, const FiniteLattice& b)
      : a_(a), b_(b), sig_a_(signatures(a)), sig_b_(signatures(b)),
        map_(a.size(), 0), used_(b.size(), false) {}

  template <typename Visit>
  void run(Visit&& visit) {
    if (a_.size() != b_.size()) return;
    auto sa = sig_a_, sb = sig_b_;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return;
    recurse(0, visit);
  }

private:
  template <typename Visit>
  bool recurse(Element i, Visit& visit) {
    if (i == a_.size()) return visit(map_);
    for (Element c = 0; c < b_.size(); ++c) {
      if (used_[c] || sig_a_[i] != sig_b_[c]) continue;
      bool ok = true;
      for (Element j = 0; j < i && ok; ++j) {
        ok = a_.leq(i, j) == b_.leq(c, map_[j]) && a_.leq(j, i) == b_.leq(map_[j], c);
      }
      if (!ok) continue;
      map_[i] = c;
      used_[c] = true;
      const bool stop = recurse(i + 1, visit);
      used_[c] = false;
      if (stop) return true;
    }
    return false;
  }

  const FiniteLattice& a_;
  const FiniteLattice& b_;
  std::vector<Signature> sig_a_, sig_b_;
  std::vector<Element> map_;
  std::vector<bool> used_;
};

}  // namespace

bool is_order_isomorphism(const FiniteLattice& a, const FiniteLattice& b,
                          const std::vector<Element>& map) {
  if (a.size() != b.size() || map.size() != a.size()) return false;
  std::vector<bool> hit(b.size(), false);
  for (Element x : map) {
    if (x >= b.size() || hit[x]) return false;
    hit[x] = true;
  }
  for (Element x = 0; x < a.size(); ++x)
    for (Element y = 0; y < a.size(); ++y)
      if (a.leq(x, y) != b.leq(map[x], map[y])) return false;
  return true;
}

std::optional<LatticeMap> find_isomorphism(const FiniteLattice& a, const FiniteLattice& b) {
  std::optional<LatticeMap> found;
  IsoSearch(a, b).run([&](const std::vector<Element>& m) {
    found = LatticeMap{MapKind::isomorphism, m};
    return true;
  });
  return found;
}

std::vector<LatticeMap> automorphisms(const FiniteLattice& lattice) {
  std::vector<LatticeMap> out;
  IsoSearch(lattice, lattice).run([&](const std::vector<Element>& m) {
    out.push_back(LatticeMap{MapKind::automorphism, m});
    return false;
  });
  return out;
}

ElementSet interval(const FiniteLattice& lattice, Element lo, Element hi) {
  return lattice.interval(lo, hi);
}

}  // namespace oql
