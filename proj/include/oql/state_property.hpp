#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oql/lattice.hpp"

namespace oql {

using StateIndex = std::size_t;

class SpsError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Top is not actual, or bottom is actual, in some state.
class Def1TopBottomViolation : public SpsError {
public:
  explicit Def1TopBottomViolation(StateIndex p, std::string detail);
  StateIndex state;
};

/// The actual properties of some state are not closed under meets (or not
/// upward closed). `family` is a minimal violating family.
class Def1MeetClosureViolation : public SpsError {
public:
  Def1MeetClosureViolation(StateIndex p, ElementSet family);
  StateIndex state;
  ElementSet family;
};

/// Boolean actuality table, row per state and column per lattice element.
using ActualityTable = std::vector<std::vector<bool>>;

struct Def1Violation {
  enum class Kind { top_not_actual, bottom_actual, meet_closure };
  Kind kind;
  StateIndex state;
  ElementSet family;  // empty for top/bottom violations
};

/// Every violation of the two state-property-system conditions, scanning
/// pairs plus the full actual family of each state.
std::vector<Def1Violation> definition1_violations(const FiniteLattice& lattice,
                                                  const ActualityTable& actual);

/// A finite state property system: states, a complete lattice of properties
/// and the dual actuality maps xi (state to properties) and kappa (property to
/// states).
class StatePropertySystem {
public:
  std::size_t num_states() const { return xi_.size(); }
  const FiniteLattice& lattice() const { return lattice_; }

  bool actual(StateIndex p, Element a) const { return xi_[p][a]; }
  /// Properties actual in state p, ascending.
  ElementSet xi(StateIndex p) const;
  /// States in which property a is actual, ascending.
  std::vector<StateIndex> kappa(Element a) const;
  const ActualityTable& table() const { return xi_; }

  /// Meet of every property actual in p.
  Element state_meet(StateIndex p) const;

  const std::vector<std::string>& state_labels() const { return state_labels_; }
  std::string state_label(StateIndex p) const;

  friend StatePropertySystem build_sps(FiniteLattice lattice, std::size_t num_states,
                                       const ActualityTable& actual,
                                       std::vector<std::string> state_labels);

private:
  StatePropertySystem(FiniteLattice lattice) : lattice_(std::move(lattice)) {}

  FiniteLattice lattice_;
  ActualityTable xi_;
  std::vector<std::vector<bool>> kappa_;
  std::vector<std::string> state_labels_;
};

/// Validates the table against the state-property-system conditions and
/// throws the first violation found.
StatePropertySystem build_sps(FiniteLattice lattice, std::size_t num_states,
                              const ActualityTable& actual,
                              std::vector<std::string> state_labels = {});

/// p < q iff xi(q) is a subset of xi(p).
bool state_preorder(const StatePropertySystem& s, StateIndex p, StateIndex q);
/// a < b iff kappa(a) is a subset of kappa(b).
bool property_preorder(const StatePropertySystem& s, Element a, Element b);

}  // namespace oql
