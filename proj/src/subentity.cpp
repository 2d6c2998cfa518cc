#include "oql/subentity.hpp"

#include <algorithm>

namespace oql {

BudgetExhausted::BudgetExhausted(std::size_t nodes_)
    : std::runtime_error("witness search exhausted its budget after " + std::to_string(nodes_) +
                         " nodes"),
      nodes(nodes_) {}

WitnessReport verify_witness(const StatePropertySystem& part, const StatePropertySystem& whole,
                             const SubentityWitness& w) {
  const std::size_t part_states = part.num_states(), part_props = part.lattice().size();
  const std::size_t whole_states = whole.num_states(), whole_props = whole.lattice().size();
  if (w.m.size() != whole_states) throw DomainMismatch("m must be defined on every compound state");
  if (w.n.size() != part_props) throw DomainMismatch("n must be defined on every part property");
  for (auto p : w.m)
    if (p >= part_states) throw DomainMismatch("m maps outside the part states");
  for (auto b : w.n)
    if (b >= whole_props) throw DomainMismatch("n maps outside the compound properties");

  WitnessReport r;
  std::vector<bool> hit(part_states, false);
  for (auto p : w.m) hit[p] = true;
  for (StateIndex p = 0; p < part_states; ++p) {
    if (!hit[p]) {
      r.failed = WitnessReport::Clause::m_not_surjective;
      r.witnesses = {p};
      r.message = "m not surjective: part state " + part.state_label(p) + " is never reached";
      return r;
    }
  }

  for (Element a = 0; a < part_props; ++a) {
    for (Element b = a + 1; b < part_props; ++b) {
      if (w.n[a] == w.n[b]) {
        r.failed = WitnessReport::Clause::n_not_injective;
        r.witnesses = {a, b};
        r.message = "n not injective: " + part.lattice().label(a) + " and " + part.lattice().label(b) +
                    " share an image";
        return r;
      }
    }
  }

  for (StateIndex q = 0; q < whole_states; ++q) {
    for (Element a = 0; a < part_props; ++a) {
      if (part.actual(w.m[q], a) != whole.actual(q, w.n[a])) {
        r.failed = WitnessReport::Clause::covariance;
        r.witnesses = {q, a};
        r.message = "covariance fails at compound state " + whole.state_label(q) + " and part property " +
                    part.lattice().label(a);
        return r;
      }
    }
  }
  r.ok = true;
  r.message = "witness verified";
  return r;
}

namespace {

class WitnessSearch {
public:
  WitnessSearch(const StatePropertySystem& part, const StatePropertySystem& whole, std::size_t budget)
      : part_(part), whole_(whole), budget_(budget),
        np_(part.num_states()), nl_(part.lattice().size()),
        nw_(whole.num_states()), nwl_(whole.lattice().size()),
        n_(nl_, 0), used_(nwl_, false), m_(nw_, 0) {}

  std::optional<SubentityWitness> run() {
    if (nl_ > nwl_ || np_ > nw_) return std::nullopt;
    Candidates all(nw_, std::vector<char>(np_, 1));
    if (assign_n(0, all)) return SubentityWitness{m_, n_};
    return std::nullopt;
  }

  std::size_t nodes() const { return nodes_; }

private:
  using Candidates = std::vector<std::vector<char>>;  // [whole state][part state]

  void tick() {
    if (++nodes_ > budget_) throw BudgetExhausted(nodes_);
  }

  bool covers_all(const Candidates& cand) const {
    for (StateIndex p = 0; p < np_; ++p) {
      bool any = false;
      for (StateIndex q = 0; q < nw_ && !any; ++q) any = cand[q][p] != 0;
      if (!any) return false;
    }
    return true;
  }

  bool assign_n(Element a, const Candidates& cand) {
    if (a == nl_) {
      covered_.assign(np_, 0);
      return assign_m(0, cand);
    }
    for (Element b = 0; b < nwl_; ++b) {
      if (used_[b]) continue;
      tick();
      Candidates next = cand;
      bool dead = false;
      for (StateIndex q = 0; q < nw_ && !dead; ++q) {
        bool any = false;
        for (StateIndex p = 0; p < np_; ++p) {
          if (next[q][p] && part_.actual(p, a) != whole_.actual(q, b)) next[q][p] = 0;
          any = any || next[q][p];
        }
        dead = !any;
      }
      if (dead || !covers_all(next)) continue;
      n_[a] = b;
      used_[b] = true;
      const bool found = assign_n(a + 1, next);
      used_[b] = false;
      if (found) return true;
    }
    return false;
  }

  // Can the uncovered part states be matched to distinct whole states >= from?
  bool completable(StateIndex from, const Candidates& cand) const {
    std::vector<StateIndex> need;
    for (StateIndex p = 0; p < np_; ++p)
      if (!covered_[p]) need.push_back(p);
    if (need.size() > nw_ - from) return false;
    std::vector<std::ptrdiff_t> owner(nw_, -1);
    for (std::size_t i = 0; i < need.size(); ++i) {
      std::vector<char> seen(nw_, 0);
      if (!augment(need, i, from, cand, owner, seen)) return false;
    }
    return true;
  }

  bool augment(const std::vector<StateIndex>& need, std::size_t i, StateIndex from, const Candidates& cand,
               std::vector<std::ptrdiff_t>& owner, std::vector<char>& seen) const {
    for (StateIndex q = from; q < nw_; ++q) {
      if (!cand[q][need[i]] || seen[q]) continue;
      seen[q] = 1;
      if (owner[q] < 0 ||
          augment(need, static_cast<std::size_t>(owner[q]), from, cand, owner, seen)) {
        owner[q] = static_cast<std::ptrdiff_t>(i);
        return true;
      }
    }
    return false;
  }

  bool assign_m(StateIndex q, const Candidates& cand) {
    if (q == nw_) return std::all_of(covered_.begin(), covered_.end(), [](int c) { return c > 0; });
    for (StateIndex p = 0; p < np_; ++p) {
      if (!cand[q][p]) continue;
      tick();
      m_[q] = p;
      ++covered_[p];
      const bool ok = completable(q + 1, cand) && assign_m(q + 1, cand);
      --covered_[p];
      if (ok) return true;
    }
    return false;
  }

  const StatePropertySystem& part_;
  const StatePropertySystem& whole_;
  std::size_t budget_;
  std::size_t np_, nl_, nw_, nwl_;
  std::vector<Element> n_;
  std::vector<bool> used_;
  std::vector<StateIndex> m_;
  std::vector<int> covered_;
  std::size_t nodes_ = 0;
};

}  // namespace

std::optional<SubentityWitness> search_witness(const StatePropertySystem& part,
                                               const StatePropertySystem& whole, std::size_t budget,
                                               SearchStats* stats) {
  WitnessSearch search(part, whole, budget);
  try {
    auto out = search.run();
    if (stats) stats->nodes = search.nodes();
    return out;
  } catch (const BudgetExhausted&) {
    if (stats) stats->nodes = search.nodes();
    throw;
  }
}

CompletedQuantumModel make_completed_model(FactorDims dims, std::vector<DensityOperator> whole_states,
                                           std::vector<Projection> part_properties) {
  for (const auto& w : whole_states)
    if (w.dim() != dims.total()) throw DimensionMismatch("compound state has the wrong dimension");
  const auto db = static_cast<Eigen::Index>(dims.b);
  CompletedQuantumModel model{dims, std::move(whole_states), std::move(part_properties), {}};
  for (const auto& p : model.part_properties) {
    if (p.dim() != dims.a) throw DimensionMismatch("part property has the wrong dimension");
    model.whole_properties.emplace_back(tensor(p.matrix(), ComplexMatrix::Identity(db, db)));
  }
  return model;
}

CompletedBuild build_completed_model(FactorDims dims, const std::vector<DensityOperator>& whole_states,
                                     const std::vector<Projection>& part_properties, double eps,
                                     std::vector<std::string> whole_labels,
                                     std::vector<std::string> part_property_labels) {
  const CompletedQuantumModel model = make_completed_model(dims, whole_states, part_properties);

  std::vector<DensityOperator> part_states;
  std::vector<std::string> part_labels;
  std::vector<StateIndex> m;
  for (std::size_t q = 0; q < whole_states.size(); ++q) {
    DensityOperator reduced = partial_trace(whole_states[q], dims, Factor::A);
    std::optional<StateIndex> found;
    for (StateIndex p = 0; p < part_states.size() && !found; ++p)
      if (max_abs_diff(part_states[p].matrix(), reduced.matrix()) <= eps) found = p;
    if (!found) {
      found = part_states.size();
      part_states.push_back(std::move(reduced));
      part_labels.push_back("Tr_B(" + (whole_labels.empty() ? "w" + std::to_string(q) : whole_labels[q]) + ")");
    }
    m.push_back(*found);
  }

  std::vector<std::string> whole_prop_labels;
  for (std::size_t i = 0; i < part_properties.size(); ++i)
    whole_prop_labels.push_back(
        (part_property_labels.empty() ? "P" + std::to_string(i) : part_property_labels[i]) + "(x)I");

  QuantumSps part = quantum_sps(dims.a, part_states, part_properties, eps, part_labels,
                                std::move(part_property_labels));
  QuantumSps whole = quantum_sps(dims.total(), whole_states, model.whole_properties, eps,
                                 std::move(whole_labels), std::move(whole_prop_labels));

  const auto db = static_cast<Eigen::Index>(dims.b);
  std::vector<Element> n;
  for (const auto& p : part.properties) {
    const Projection embedded(tensor(p.matrix(), ComplexMatrix::Identity(db, db)));
    const auto idx = find_projection(whole.properties, embedded, eps);
    if (!idx) throw DomainMismatch("embedded part property is missing from the compound lattice");
    n.push_back(*idx);
  }

  return CompletedBuild{std::move(part_states), std::move(part), std::move(whole),
                        SubentityWitness{std::move(m), std::move(n)}};
}

CanonicalCheck canonical_witness_check(const CompletedQuantumModel& model, double eps,
                                       Embedding embedding) {
  CanonicalCheck out;
  const auto db = static_cast<Eigen::Index>(model.dims.b);
  for (std::size_t q = 0; q < model.whole_states.size(); ++q) {
    const DensityOperator& w = model.whole_states[q];
    const DensityOperator reduced = partial_trace(w, model.dims, Factor::A);
    for (std::size_t a = 0; a < model.part_properties.size(); ++a) {
      const Projection& p = model.part_properties[a];
      const ComplexMatrix lifted = embedding == Embedding::right_identity
                                       ? tensor(p.matrix(), ComplexMatrix::Identity(db, db))
                                       : tensor(ComplexMatrix::Identity(db, db), p.matrix());
      if (lifted.rows() != static_cast<Eigen::Index>(w.dim()))
        throw DimensionMismatch("embedded property does not act on the compound space");
      const double whole_value = born(w, Projection(lifted, eps));
      const double part_value = born(reduced, p);
      out.max_born_gap = std::max(out.max_born_gap, std::abs(whole_value - part_value));
      if ((whole_value >= 1.0 - eps) != (part_value >= 1.0 - eps) && out.ok) {
        out.ok = false;
        out.mismatch = std::make_pair(q, a);
      }
    }
  }
  return out;
}

}  // namespace oql
