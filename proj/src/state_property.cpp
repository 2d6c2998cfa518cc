#include "oql/state_property.hpp"

namespace oql {

namespace {

std::string family_text(const ElementSet& family) {
  std::string out = "{";
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(family[i]);
  }
  return out + "}";
}

}  // namespace

Def1TopBottomViolation::Def1TopBottomViolation(StateIndex p, std::string detail)
    : SpsError("state " + std::to_string(p) + ": " + detail), state(p) {}

Def1MeetClosureViolation::Def1MeetClosureViolation(StateIndex p, ElementSet family_)
    : SpsError("state " + std::to_string(p) + ": actual properties not closed under the meet of " +
               family_text(family_)),
      state(p), family(std::move(family_)) {}

std::vector<Def1Violation> definition1_violations(const FiniteLattice& L,
                                                  const ActualityTable& actual) {
  std::vector<Def1Violation> out;
  const std::size_t n = L.size();
  for (StateIndex p = 0; p < actual.size(); ++p) {
    const auto& row = actual[p];
    if (!row[L.top()]) out.push_back({Def1Violation::Kind::top_not_actual, p, {}});
    if (row[L.bottom()]) out.push_back({Def1Violation::Kind::bottom_actual, p, {}});

    bool pair_failed = false;
    for (Element a = 0; a < n && !pair_failed; ++a) {
      for (Element b = a + 1; b < n; ++b) {
        const bool both = row[a] && row[b];
        if (row[L.meet(a, b)] != both) {
          out.push_back({Def1Violation::Kind::meet_closure, p, {a, b}});
          pair_failed = true;
          break;
        }
      }
    }
    if (pair_failed) continue;

    ElementSet family;
    for (Element a = 0; a < n; ++a)
      if (row[a]) family.push_back(a);
    if (!family.empty() && !row[L.meet(family)])
      out.push_back({Def1Violation::Kind::meet_closure, p, family});
  }
  return out;
}

ElementSet StatePropertySystem::xi(StateIndex p) const {
  ElementSet out;
  for (Element a = 0; a < lattice_.size(); ++a)
    if (xi_[p][a]) out.push_back(a);
  return out;
}

std::vector<StateIndex> StatePropertySystem::kappa(Element a) const {
  std::vector<StateIndex> out;
  for (StateIndex p = 0; p < kappa_[a].size(); ++p)
    if (kappa_[a][p]) out.push_back(p);
  return out;
}

Element StatePropertySystem::state_meet(StateIndex p) const { return lattice_.meet(xi(p)); }

std::string StatePropertySystem::state_label(StateIndex p) const {
  return p < state_labels_.size() ? state_labels_[p] : "s" + std::to_string(p);
}

StatePropertySystem build_sps(FiniteLattice lattice, std::size_t num_states,
                              const ActualityTable& actual,
                              std::vector<std::string> state_labels) {
  if (actual.size() != num_states) throw SpsError("actuality table has wrong number of rows");
  for (const auto& row : actual)
    if (row.size() != lattice.size()) throw SpsError("actuality row has wrong number of columns");
  if (!state_labels.empty() && state_labels.size() != num_states)
    throw SpsError("state label count does not match state count");

  const auto violations = definition1_violations(lattice, actual);
  if (!violations.empty()) {
    const auto& v = violations.front();
    switch (v.kind) {
      case Def1Violation::Kind::top_not_actual:
        throw Def1TopBottomViolation(v.state, "top property is not actual");
      case Def1Violation::Kind::bottom_actual:
        throw Def1TopBottomViolation(v.state, "bottom property is actual");
      case Def1Violation::Kind::meet_closure:
        throw Def1MeetClosureViolation(v.state, v.family);
    }
  }

  StatePropertySystem s(std::move(lattice));
  s.xi_ = actual;
  s.kappa_.assign(s.lattice_.size(), std::vector<bool>(num_states, false));
  for (StateIndex p = 0; p < num_states; ++p)
    for (Element a = 0; a < s.lattice_.size(); ++a) s.kappa_[a][p] = actual[p][a];
  if (state_labels.empty())
    for (StateIndex p = 0; p < num_states; ++p) state_labels.push_back("s" + std::to_string(p));
  s.state_labels_ = std::move(state_labels);
  return s;
}

bool state_preorder(const StatePropertySystem& s, StateIndex p, StateIndex q) {
  for (Element a = 0; a < s.lattice().size(); ++a)
    if (s.actual(q, a) && !s.actual(p, a)) return false;
  return true;
}

bool property_preorder(const StatePropertySystem& s, Element a, Element b) {
  for (StateIndex p = 0; p < s.num_states(); ++p)
    if (s.actual(p, a) && !s.actual(p, b)) return false;
  return true;
}

}  // namespace oql
