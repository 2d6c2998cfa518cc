#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "oql/lattice.hpp"
#include "oql/state_property.hpp"

namespace oql::lecce {

using Fraction = boost::rational<long long>;
using DeviceIndex = std::size_t;
using ObjectIndex = std::size_t;

/// One physical object in a laboratory: the preparing device(s) that produced
/// it and the counterfactual yes/no outcome of every registering device.
/// A well-formed world lists exactly one preparer per object.
struct PhysicalObject {
  std::string id;
  std::vector<DeviceIndex> preparers;
  std::vector<bool> outcomes;  // indexed by registering device
  bool operator==(const PhysicalObject&) const = default;
};

struct Laboratory {
  std::string id;
  std::vector<PhysicalObject> objects;
  bool operator==(const Laboratory&) const = default;
};

struct LabWorld {
  std::vector<std::string> preparing;
  std::vector<std::string> registering;
  /// Registering devices flagged ideal; only these form properties.
  std::vector<bool> ideal;
  std::vector<Laboratory> labs;
  bool operator==(const LabWorld&) const = default;
};

class WorldInvalid : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct FrequencyViolation {
  DeviceIndex preparing;
  DeviceIndex registering;
  std::size_t lab_a;
  std::size_t lab_b;
  Fraction freq_a;
  Fraction freq_b;
};

struct WorldReport {
  std::vector<FrequencyViolation> frequency_violations;
  /// Structural problems: objects without exactly one preparer, devices with
  /// empty extensions, malformed outcome rows.
  std::vector<std::string> structural;
  bool valid() const { return frequency_violations.empty() && structural.empty(); }
};

/// Extension of a preparing device in lab j: objects it prepared.
std::vector<ObjectIndex> preparing_extension(const LabWorld& w, std::size_t lab, DeviceIndex pi);
/// Extension of a registering device in lab j: objects answering yes.
std::vector<ObjectIndex> registering_extension(const LabWorld& w, std::size_t lab, DeviceIndex r);

/// |rho_j(pi) & rho_j(r)| / |rho_j(pi)|. Throws WorldInvalid on an empty extension.
Fraction frequency(const LabWorld& w, std::size_t lab, DeviceIndex pi, DeviceIndex r);

/// Checks the one-preparer invariant, nonempty preparer extensions, and that
/// every (preparing, registering) frequency agrees across labs.
WorldReport validate_world(const LabWorld& w);

struct OperationalState {
  std::size_t id;
  std::vector<DeviceIndex> members;
  std::vector<std::vector<ObjectIndex>> extension;  // per lab, ascending
};

struct OperationalProperty {
  std::size_t id;
  std::vector<DeviceIndex> members;
  std::vector<std::vector<ObjectIndex>> extension;  // per lab, ascending
};

/// Preparing devices grouped by their full frequency row. States are ordered
/// by their first member.
std::vector<OperationalState> partition_states(const LabWorld& w);

struct EffectPartition {
  /// Ideal registering devices grouped by extension equality in every lab.
  std::vector<OperationalProperty> properties;
  /// All registering devices grouped by frequency equivalence.
  std::vector<std::vector<DeviceIndex>> effects;
  /// Ideal pairs equivalent by frequencies but with different extensions.
  std::vector<std::pair<DeviceIndex, DeviceIndex>> frequency_only_pairs;
};

EffectPartition partition_effects(const LabWorld& w);

struct CertainlyDomains {
  /// certainly_true[S]: properties E with rho_j(S) within rho_j(E) for every j.
  std::vector<std::vector<std::size_t>> certainly_true;
  /// certainly_yes[E]: states S with rho_j(S) within rho_j(E) for every j.
  std::vector<std::vector<std::size_t>> certainly_yes;
};

CertainlyDomains certainly_domains(const std::vector<OperationalState>& states,
                                   const std::vector<OperationalProperty>& properties);

struct PartitionCheck {
  bool ok = true;
  std::vector<std::string> problems;
};

/// State extensions, recomputed from the world, must be pairwise disjoint and
/// cover every lab's domain.
PartitionCheck check_partition_property(const LabWorld& w, const std::vector<OperationalState>& states);

struct LecceBuild {
  std::vector<OperationalState> states;
  EffectPartition effects;
  CertainlyDomains domains;
  /// Lattice element -> property ids it collects (empty for synthetic ones).
  std::vector<std::vector<std::size_t>> element_members;
  bool synthetic_bottom = false;
  bool synthetic_top = false;
  /// Set when the inclusion order forms a lattice.
  std::optional<FiniteLattice> lattice;
  /// Actuality table of the candidate structure (when the lattice exists).
  ActualityTable actuality;
  std::vector<Def1Violation> definition1;
  /// Set when the candidate passes the state-property-system conditions.
  std::optional<StatePropertySystem> sps;
  std::vector<std::string> notes;
};

/// Orders properties by inclusion of certainly-yes domains, quotients mutual
/// inclusion, adds synthetic bottom/top when absent, and verifies the result.
/// Throws WorldInvalid when validate_world fails.
LecceBuild build_lecce_sps(const LabWorld& w);

}  // namespace oql::lecce
