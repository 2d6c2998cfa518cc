#include "oql/axioms.hpp"

#include <algorithm>
#include <functional>

namespace oql {

std::string axiom_name(Axiom a) {
  switch (a) {
    case Axiom::state_determination: return "state_determination";
    case Axiom::atomicity: return "atomicity";
    case Axiom::orthocomplementation: return "orthocomplementation";
    case Axiom::covering_law: return "covering_law";
    case Axiom::weak_modularity: return "weak_modularity";
    case Axiom::plane_transitivity: return "plane_transitivity";
    case Axiom::irreducibility: return "irreducibility";
    case Axiom::infinite_length: return "infinite_length";
  }
  return "unknown";
}

bool is_orthocomplementation(const FiniteLattice& L, const Orthocomplement& c) {
  const std::size_t n = L.size();
  if (c.size() != n) return false;
  for (Element a = 0; a < n; ++a) {
    if (c[a] >= n || c[c[a]] != a) return false;
    if (L.meet(a, c[a]) != L.bottom() || L.join(a, c[a]) != L.top()) return false;
    for (Element b = 0; b < n; ++b)
      if (L.leq(a, b) && !L.leq(c[b], c[a])) return false;
  }
  return true;
}

namespace {

constexpr Element unassigned = static_cast<Element>(-1);

class OrthoSearch {
public:
  explicit OrthoSearch(const FiniteLattice& L) : L_(L), c_(L.size(), unassigned) {}

  // Calls visit on each complete map in lexicographic order until it returns true.
  void run(const std::function<bool(const Orthocomplement&)>& visit) { recurse(0, visit); }

private:
  bool consistent(Element a, Element b) const {
    // With c(a) = b tentatively set, check order reversal against every
    // assigned element.
    for (Element x = 0; x < L_.size(); ++x) {
      if (c_[x] == unassigned) continue;
      if (L_.leq(a, x) && !L_.leq(c_[x], b)) return false;
      if (L_.leq(x, a) && !L_.leq(b, c_[x])) return false;
    }
    return true;
  }

  bool recurse(Element a, const std::function<bool(const Orthocomplement&)>& visit) {
    while (a < L_.size() && c_[a] != unassigned) ++a;
    if (a == L_.size()) return visit(c_);
    for (Element b = 0; b < L_.size(); ++b) {
      if (c_[b] != unassigned && b != a) continue;
      if (L_.meet(a, b) != L_.bottom() || L_.join(a, b) != L_.top()) continue;
      c_[a] = b;
      const bool ok_a = consistent(a, b);
      bool stop = false;
      if (ok_a) {
        c_[b] = a;
        if (consistent(b, a)) stop = recurse(a + 1, visit);
        if (b != a) c_[b] = unassigned;
      }
      c_[a] = unassigned;
      if (stop) return true;
    }
    return false;
  }

  const FiniteLattice& L_;
  Orthocomplement c_;
};

AxiomVerdict verdict(Axiom a) {
  AxiomVerdict v;
  v.axiom = a;
  return v;
}

std::string tuple_text(const FiniteLattice& L, std::initializer_list<Element> xs) {
  std::string out = "(";
  bool first = true;
  for (Element x : xs) {
    if (!first) out += ", ";
    out += L.label(x);
    first = false;
  }
  return out + ")";
}

}  // namespace

std::vector<Orthocomplement> orthocomplementations(const FiniteLattice& L, std::size_t limit) {
  std::vector<Orthocomplement> out;
  OrthoSearch(L).run([&](const Orthocomplement& c) {
    if (is_orthocomplementation(L, c)) out.push_back(c);
    return limit != 0 && out.size() >= limit;
  });
  return out;
}

std::optional<Orthocomplement> find_orthocomplementation(const FiniteLattice& L) {
  auto all = orthocomplementations(L, 1);
  if (all.empty()) return std::nullopt;
  return all.front();
}

AxiomVerdict check_orthocomplementation(const FiniteLattice& L) {
  auto v = verdict(Axiom::orthocomplementation);
  if (auto c = find_orthocomplementation(L)) {
    v.status = VerdictStatus::pass;
    v.witness = *c;
    std::string text = "witness:";
    for (Element a = 0; a < L.size(); ++a) text += " " + L.label(a) + "->" + L.label((*c)[a]);
    v.note = text;
  } else {
    v.note = "no orthocomplementation exists";
  }
  return v;
}

AxiomVerdict check_covering_law(const FiniteLattice& L) {
  auto v = verdict(Axiom::covering_law);
  for (Element a = 0; a < L.size(); ++a) {
    for (Element b : L.atoms()) {
      const Element ab = L.join(a, b);
      for (Element x = 0; x < L.size(); ++x) {
        if (L.lt(a, x) && L.lt(x, ab)) {
          v.counterexample = std::vector<std::size_t>{a, b, x};
          v.note = "(a, b, x) = " + tuple_text(L, {a, b, x}) + " has a < x < a v b";
          return v;
        }
      }
    }
  }
  v.status = VerdictStatus::pass;
  return v;
}

AxiomVerdict check_weak_modularity(const FiniteLattice& L, const Orthocomplement& c) {
  auto v = verdict(Axiom::weak_modularity);
  for (Element a = 0; a < L.size(); ++a) {
    for (Element b = 0; b < L.size(); ++b) {
      if (!L.leq(a, b)) continue;
      const Element lhs = L.join(L.meet(b, c[a]), a);
      if (lhs != b) {
        v.counterexample = std::vector<std::size_t>{a, b};
        v.note = "(a, b) = " + tuple_text(L, {a, b}) + " gives (b ^ a') v a = " + L.label(lhs);
        return v;
      }
    }
  }
  v.status = VerdictStatus::pass;
  return v;
}

AxiomVerdict check_plane_transitivity(const FiniteLattice& L) {
  auto v = verdict(Axiom::plane_transitivity);
  const auto autos = automorphisms(L);
  const auto& atoms = L.atoms();

  // For each pair of distinct atoms, the automorphisms fixing [0, s1 v s2].
  struct Plane {
    Element s1, s2;
    std::vector<std::size_t> fixing;
  };
  std::vector<Plane> planes;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      Plane pl{atoms[i], atoms[j], {}};
      const auto fixed = L.interval(L.bottom(), L.join(atoms[i], atoms[j]));
      for (std::size_t k = 0; k < autos.size(); ++k) {
        const bool fixes = std::all_of(fixed.begin(), fixed.end(),
                                       [&](Element e) { return autos[k](e) == e; });
        if (fixes) pl.fixing.push_back(k);
      }
      planes.push_back(std::move(pl));
    }
  }

  bool all_ok = true;
  for (Element s : atoms) {
    for (Element t : atoms) {
      std::string line = L.label(s) + " -> " + L.label(t) + ": ";
      bool found = false;
      for (const auto& pl : planes) {
        for (std::size_t k : pl.fixing) {
          if (autos[k](s) == t) {
            line += "automorphism #" + std::to_string(k) + " fixing [0, " + L.label(pl.s1) + " v " +
                    L.label(pl.s2) + "]";
            found = true;
            break;
          }
        }
        if (found) break;
      }
      if (!found) {
        line += planes.empty() ? "no two distinct atoms" : "no automorphism fixes a plane interval";
        if (all_ok) v.counterexample = std::vector<std::size_t>{s, t};
        all_ok = false;
      }
      v.details.push_back(std::move(line));
    }
  }
  if (all_ok) {
    v.status = VerdictStatus::pass;
  } else {
    const auto& ce = *v.counterexample;
    v.note = "atom pair " + tuple_text(L, {ce[0], ce[1]}) + " has no witnessing automorphism";
  }
  return v;
}

AxiomVerdict check_irreducibility(const FiniteLattice& L, const Orthocomplement& c) {
  auto v = verdict(Axiom::irreducibility);
  for (Element b = 0; b < L.size(); ++b) {
    if (b == L.bottom() || b == L.top()) continue;
    bool central = true;
    for (Element a = 0; a < L.size() && central; ++a)
      central = L.join(L.meet(b, a), L.meet(b, c[a])) == b;
    if (central) {
      v.counterexample = std::vector<std::size_t>{b};
      v.note = "element " + L.label(b) + " is central (b = (b ^ a) v (b ^ a') for all a)";
      return v;
    }
  }
  v.status = VerdictStatus::pass;
  return v;
}

ElementSet max_orthogonal_family(const FiniteLattice& L, const Orthocomplement& c) {
  ElementSet nonzero;
  for (Element a = 0; a < L.size(); ++a)
    if (a != L.bottom()) nonzero.push_back(a);

  ElementSet best, current;
  std::function<void(std::size_t)> grow = [&](std::size_t from) {
    if (current.size() > best.size()) best = current;
    if (current.size() + (nonzero.size() - from) <= best.size()) return;
    for (std::size_t i = from; i < nonzero.size(); ++i) {
      const Element x = nonzero[i];
      const bool fits = std::all_of(current.begin(), current.end(),
                                    [&](Element y) { return L.leq(x, c[y]); });
      if (!fits) continue;
      current.push_back(x);
      grow(i + 1);
      current.pop_back();
    }
  };
  grow(0);
  return best;
}

AxiomVerdict check_infinite_length(const FiniteLattice& L, const Orthocomplement& c) {
  auto v = verdict(Axiom::infinite_length);
  const auto family = max_orthogonal_family(L, c);
  v.counterexample = std::vector<std::size_t>(family.begin(), family.end());
  std::string names;
  for (Element e : family) names += (names.empty() ? "" : ", ") + L.label(e);
  v.note = "finite lattice; maximum mutually orthogonal family size " +
           std::to_string(family.size()) + ": {" + names + "}";
  return v;
}

AxiomVerdict check_state_determination(const StatePropertySystem& s) {
  auto v = verdict(Axiom::state_determination);
  std::vector<Element> meets(s.num_states());
  for (StateIndex p = 0; p < s.num_states(); ++p) meets[p] = s.state_meet(p);
  for (StateIndex p = 0; p < s.num_states(); ++p) {
    for (StateIndex q = p + 1; q < s.num_states(); ++q) {
      if (meets[p] == meets[q]) {
        v.counterexample = std::vector<std::size_t>{p, q};
        v.note = "states " + s.state_label(p) + " and " + s.state_label(q) +
                 " share the meet " + s.lattice().label(meets[p]);
        return v;
      }
    }
  }
  v.status = VerdictStatus::pass;
  return v;
}

AxiomVerdict check_atomicity(const StatePropertySystem& s) {
  auto v = verdict(Axiom::atomicity);
  for (StateIndex p = 0; p < s.num_states(); ++p) {
    const Element m = s.state_meet(p);
    if (!s.lattice().is_atom(m)) {
      v.counterexample = std::vector<std::size_t>{p, m};
      v.note = "state " + s.state_label(p) + " has meet " + s.lattice().label(m) +
               ", which is not an atom";
      return v;
    }
  }
  v.status = VerdictStatus::pass;
  return v;
}

namespace {

const Orthocomplement& require_ortho(const std::optional<Orthocomplement>& c) {
  if (!c) throw NoOrthocomplementation();
  return *c;
}

}  // namespace

AxiomVerdict check_orthocomplementation(const StatePropertySystem& s) {
  return check_orthocomplementation(s.lattice());
}

AxiomVerdict check_covering_law(const StatePropertySystem& s) { return check_covering_law(s.lattice()); }

AxiomVerdict check_weak_modularity(const StatePropertySystem& s) {
  return check_weak_modularity(s.lattice(), require_ortho(find_orthocomplementation(s.lattice())));
}

AxiomVerdict check_plane_transitivity(const StatePropertySystem& s) {
  return check_plane_transitivity(s.lattice());
}

AxiomVerdict check_irreducibility(const StatePropertySystem& s) {
  return check_irreducibility(s.lattice(), require_ortho(find_orthocomplementation(s.lattice())));
}

AxiomVerdict check_infinite_length(const StatePropertySystem& s) {
  return check_infinite_length(s.lattice(), require_ortho(find_orthocomplementation(s.lattice())));
}

std::vector<AxiomVerdict> run_battery(const StatePropertySystem& s, BatteryOptions options) {
  const FiniteLattice& L = s.lattice();
  std::vector<AxiomVerdict> out;
  out.push_back(check_state_determination(s));
  out.push_back(check_atomicity(s));
  out.push_back(check_orthocomplementation(L));
  out.push_back(check_covering_law(L));

  const AxiomVerdict ortho = out[2];
  if (!ortho.passed()) {
    for (Axiom a : {Axiom::weak_modularity, Axiom::plane_transitivity, Axiom::irreducibility,
                    Axiom::infinite_length}) {
      if (a == Axiom::plane_transitivity) {
        out.push_back(check_plane_transitivity(L));
        continue;
      }
      auto v = verdict(a);
      v.note = "requires an orthocomplementation; none exists";
      out.push_back(std::move(v));
    }
    return out;
  }

  const Orthocomplement& c = *ortho.witness;
  auto weak = check_weak_modularity(L, c);
  auto irreducible = check_irreducibility(L, c);

  if (L.size() <= options.cross_validate_max_size) {
    const auto all = orthocomplementations(L);
    auto cross = [&](AxiomVerdict& v, auto&& check) {
      for (const auto& other : all) {
        if (check(L, other).status != v.status) {
          v.status = VerdictStatus::discrepancy;
          v.note = "verdict depends on the chosen orthocomplementation (" +
                   std::to_string(all.size()) + " exist)";
          return;
        }
      }
      v.note += (v.note.empty() ? "" : "; ") + std::string("consistent across ") +
                std::to_string(all.size()) + " orthocomplementation(s)";
    };
    cross(weak, [](const FiniteLattice& l, const Orthocomplement& o) {
      return check_weak_modularity(l, o);
    });
    cross(irreducible, [](const FiniteLattice& l, const Orthocomplement& o) {
      return check_irreducibility(l, o);
    });
  }

  out.push_back(std::move(weak));
  out.push_back(check_plane_transitivity(L));
  out.push_back(std::move(irreducible));
  out.push_back(check_infinite_length(L, c));
  return out;
}

}  // namespace oql
