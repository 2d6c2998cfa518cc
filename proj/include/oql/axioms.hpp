#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oql/lattice.hpp"
#include "oql/state_property.hpp"

namespace oql {

enum class Axiom {
  state_determination,
  atomicity,
  orthocomplementation,
  covering_law,
  weak_modularity,
  plane_transitivity,
  irreducibility,
  infinite_length,
};

std::string axiom_name(Axiom a);

enum class VerdictStatus {
  pass,
  fail,
  /// Two orthocomplementations of the same lattice gave different answers.
  discrepancy,
};

/// Outcome of one axiom check. Existence axioms carry a witness when they
/// pass; universal axioms carry a counterexample when they fail. Both are
/// element (or state) tuples whose meaning is spelled out in `note`.
struct AxiomVerdict {
  Axiom axiom;
  VerdictStatus status = VerdictStatus::fail;
  std::optional<std::vector<std::size_t>> witness;
  std::optional<std::vector<std::size_t>> counterexample;
  std::string note;
  /// Per-pair detail, used by plane transitivity.
  std::vector<std::string> details;

  bool passed() const { return status == VerdictStatus::pass; }
};

class NoOrthocomplementation : public std::runtime_error {
public:
  NoOrthocomplementation() : std::runtime_error("lattice admits no orthocomplementation") {}
};

/// An orthocomplementation as an element map.
using Orthocomplement = std::vector<Element>;

/// True if `c` is an involutive, order-reversing complementation.
bool is_orthocomplementation(const FiniteLattice& L, const Orthocomplement& c);

/// All orthocomplementations, lexicographically sorted. `limit` caps the
/// number returned (0 = unlimited).
std::vector<Orthocomplement> orthocomplementations(const FiniteLattice& L, std::size_t limit = 0);

/// Lexicographically least orthocomplementation, if any.
std::optional<Orthocomplement> find_orthocomplementation(const FiniteLattice& L);

// Lattice-level checks for the axioms that depend only on the property
// lattice. The orthocomplement-dependent ones take an explicit witness.
AxiomVerdict check_orthocomplementation(const FiniteLattice& L);
AxiomVerdict check_covering_law(const FiniteLattice& L);
AxiomVerdict check_weak_modularity(const FiniteLattice& L, const Orthocomplement& c);
AxiomVerdict check_plane_transitivity(const FiniteLattice& L);
AxiomVerdict check_irreducibility(const FiniteLattice& L, const Orthocomplement& c);
AxiomVerdict check_infinite_length(const FiniteLattice& L, const Orthocomplement& c);

/// Mutually orthogonal family of nonzero elements of maximum size, ascending.
ElementSet max_orthogonal_family(const FiniteLattice& L, const Orthocomplement& c);

// System-level checks. The orthocomplement-dependent ones use the
// lexicographically least witness and throw NoOrthocomplementation if none
// exists.
AxiomVerdict check_state_determination(const StatePropertySystem& s);
AxiomVerdict check_atomicity(const StatePropertySystem& s);
AxiomVerdict check_orthocomplementation(const StatePropertySystem& s);
AxiomVerdict check_covering_law(const StatePropertySystem& s);
AxiomVerdict check_weak_modularity(const StatePropertySystem& s);
AxiomVerdict check_plane_transitivity(const StatePropertySystem& s);
AxiomVerdict check_irreducibility(const StatePropertySystem& s);
AxiomVerdict check_infinite_length(const StatePropertySystem& s);

struct BatteryOptions {
  /// Cross-validate (v) and (vii) against every orthocomplementation when the
  /// lattice has at most this many elements.
  std::size_t cross_validate_max_size = 12;
};

/// Runs all eight checks in definition order. Axioms that need an
/// orthocomplementation fail with an explanatory note when none exists.
std::vector<AxiomVerdict> run_battery(const StatePropertySystem& s, BatteryOptions options = {});

/// Wording of the covering-law reading, for report headers.
inline constexpr const char* covering_law_convention =
    "covering law premise a < x < a v b uses strict order; conclusion x = a or x = a v b";

}  // namespace oql
