#pragma once

#include <string>
#include <utility>
#include <vector>

#include "oql/hilbert.hpp"
#include "oql/state_property.hpp"

namespace oql {

/// A state property system realised by density operators and projections.
struct QuantumSps {
  StatePropertySystem sps;
  /// Projection for each lattice element, indexed like the lattice.
  std::vector<Projection> properties;
  /// Pairs of requested states whose actuality rows coincide.
  std::vector<std::pair<StateIndex, StateIndex>> duplicate_states;
};

/// Builds the state property system of the given states and properties.
///
/// The property list is augmented with the zero and identity projections,
/// closed under range intersection, and deduplicated within eps. A property P
/// is actual in state W iff Tr(W P) >= 1 - eps. Definition violations are
/// propagated from build_sps.
QuantumSps quantum_sps(std::size_t dim, const std::vector<DensityOperator>& states,
                       const std::vector<Projection>& properties, double eps = Tolerance{}.eps,
                       std::vector<std::string> state_labels = {},
                       std::vector<std::string> property_labels = {});

/// Index of the projection in `list` equal to `p` within eps, if any.
std::optional<std::size_t> find_projection(const std::vector<Projection>& list, const Projection& p,
                                           double eps = Tolerance{}.eps);

}  // namespace oql
