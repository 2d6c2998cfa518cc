#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oql/hilbert.hpp"
#include "oql/quantum_sps.hpp"
#include "oql/state_property.hpp"

namespace oql {

/// Candidate subentity relation: m sends compound (whole) states to part
/// states, n sends part properties to compound properties.
struct SubentityWitness {
  std::vector<StateIndex> m;
  std::vector<Element> n;
  bool operator==(const SubentityWitness&) const = default;
};

class DomainMismatch : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class BudgetExhausted : public std::runtime_error {
public:
  explicit BudgetExhausted(std::size_t nodes);
  std::size_t nodes;
};

struct WitnessReport {
  enum class Clause { none, m_not_surjective, n_not_injective, covariance };
  bool ok = false;
  Clause failed = Clause::none;
  /// For surjectivity: the missed part state. For injectivity: the two part
  /// properties with a common image. For covariance: (whole state, part property).
  std::vector<std::size_t> witnesses;
  std::string message;
};

/// Checks surjectivity of m, injectivity of n, and covariance
/// a in xi(m(p')) <=> n(a) in xi'(p'). Throws DomainMismatch on ill-typed maps.
WitnessReport verify_witness(const StatePropertySystem& part, const StatePropertySystem& whole,
                             const SubentityWitness& w);

struct SearchStats {
  std::size_t nodes = 0;
};

/// Lexicographically least witness (n first, then m). Returns nullopt when the
/// exhaustive search finds none; throws BudgetExhausted past `budget` nodes.
std::optional<SubentityWitness> search_witness(const StatePropertySystem& part,
                                               const StatePropertySystem& whole,
                                               std::size_t budget = 10'000'000,
                                               SearchStats* stats = nullptr);

/// Compound quantum model whose part properties embed as P (x) I.
struct CompletedQuantumModel {
  FactorDims dims;
  std::vector<DensityOperator> whole_states;
  std::vector<Projection> part_properties;
  std::vector<Projection> whole_properties;
};

CompletedQuantumModel make_completed_model(FactorDims dims, std::vector<DensityOperator> whole_states,
                                           std::vector<Projection> part_properties);

struct CompletedBuild {
  std::vector<DensityOperator> part_states;
  QuantumSps part;
  QuantumSps whole;
  SubentityWitness witness;
};

/// Part states are the (deduplicated) reductions of the whole states; the
/// canonical witness is m = partial trace, n = P (x) I.
CompletedBuild build_completed_model(FactorDims dims, const std::vector<DensityOperator>& whole_states,
                                     const std::vector<Projection>& part_properties,
                                     double eps = Tolerance{}.eps,
                                     std::vector<std::string> whole_labels = {},
                                     std::vector<std::string> part_property_labels = {});

enum class Embedding {
  right_identity,  // P (x) I
  left_identity,   // I (x) P
};

struct CanonicalCheck {
  bool ok = true;
  double max_born_gap = 0.0;
  /// (whole state, part property) of the first actuality mismatch.
  std::optional<std::pair<std::size_t, std::size_t>> mismatch;
};

/// For every whole state W' and part property P, compares actuality of the
/// embedded property in W' with actuality of P in Tr_B W'.
CanonicalCheck canonical_witness_check(const CompletedQuantumModel& model,
                                       double eps = Tolerance{}.eps,
                                       Embedding embedding = Embedding::right_identity);

}  // namespace oql
