#include "oql/quantum_sps.hpp"

namespace oql {

std::optional<std::size_t> find_projection(const std::vector<Projection>& list, const Projection& p,
                                           double eps) {
  for (std::size_t i = 0; i < list.size(); ++i)
    if (list[i].dim() == p.dim() && max_abs_diff(list[i].matrix(), p.matrix()) <= eps) return i;
  return std::nullopt;
}

QuantumSps quantum_sps(std::size_t dim, const std::vector<DensityOperator>& states,
                       const std::vector<Projection>& properties, double eps,
                       std::vector<std::string> state_labels,
                       std::vector<std::string> property_labels) {
  for (const auto& w : states)
    if (w.dim() != dim) throw DimensionMismatch("state dimension differs from the model dimension");
  for (const auto& p : properties)
    if (p.dim() != dim) throw DimensionMismatch("property dimension differs from the model dimension");
  if (!property_labels.empty() && property_labels.size() != properties.size())
    throw SpsError("property label count does not match property count");

  std::vector<Projection> props;
  std::vector<std::string> labels;
  auto add = [&](const Projection& p, std::string label) {
    if (find_projection(props, p, eps)) return false;
    props.push_back(p);
    labels.push_back(std::move(label));
    return true;
  };

  add(Projection::zero(dim), "0");
  for (std::size_t i = 0; i < properties.size(); ++i)
    add(properties[i], property_labels.empty() ? "P" + std::to_string(i) : property_labels[i]);
  add(Projection::identity(dim), "I");

  // Close under range intersection.
  for (bool grew = true; grew;) {
    grew = false;
    const std::size_t n = props.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (add(projection_meet(props[i], props[j], eps), labels[i] + "^" + labels[j])) grew = true;
  }

  std::vector<std::pair<Element, Element>> order;
  for (std::size_t i = 0; i < props.size(); ++i)
    for (std::size_t j = 0; j < props.size(); ++j)
      if (i != j && max_abs_diff(props[j].matrix() * props[i].matrix(), props[i].matrix()) <= eps)
        order.emplace_back(i, j);
  FiniteLattice lattice = build_lattice(props.size(), order, labels);

  ActualityTable table(states.size(), std::vector<bool>(props.size(), false));
  for (std::size_t s = 0; s < states.size(); ++s)
    for (std::size_t a = 0; a < props.size(); ++a) table[s][a] = born(states[s], props[a]) >= 1.0 - eps;

  std::vector<std::pair<StateIndex, StateIndex>> duplicates;
  for (std::size_t s = 0; s < states.size(); ++s)
    for (std::size_t t = s + 1; t < states.size(); ++t)
      if (table[s] == table[t]) duplicates.emplace_back(s, t);

  QuantumSps out{build_sps(std::move(lattice), states.size(), table, std::move(state_labels)),
                 std::move(props), std::move(duplicates)};
  return out;
}

}  // namespace oql
