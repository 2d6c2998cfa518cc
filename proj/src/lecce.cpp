#include "oql/lecce.hpp"

#include <algorithm>
#include <map>

namespace oql::lecce {

namespace {

std::string join_names(const std::vector<std::string>& names, const std::vector<DeviceIndex>& members) {
  std::string out;
  for (auto d : members) out += (out.empty() ? "" : "~") + names[d];
  return out;
}

bool subset(const std::vector<ObjectIndex>& a, const std::vector<ObjectIndex>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

void require_valid(const LabWorld& w) {
  const auto report = validate_world(w);
  if (!report.valid()) {
    std::string why = !report.structural.empty() ? report.structural.front()
                                                 : "frequencies differ across laboratories";
    throw WorldInvalid("world is invalid: " + why);
  }
}

}  // namespace

std::vector<ObjectIndex> preparing_extension(const LabWorld& w, std::size_t lab, DeviceIndex pi) {
  std::vector<ObjectIndex> out;
  const auto& objs = w.labs.at(lab).objects;
  for (ObjectIndex x = 0; x < objs.size(); ++x)
    if (std::find(objs[x].preparers.begin(), objs[x].preparers.end(), pi) != objs[x].preparers.end())
      out.push_back(x);
  return out;
}

std::vector<ObjectIndex> registering_extension(const LabWorld& w, std::size_t lab, DeviceIndex r) {
  std::vector<ObjectIndex> out;
  const auto& objs = w.labs.at(lab).objects;
  for (ObjectIndex x = 0; x < objs.size(); ++x)
    if (r < objs[x].outcomes.size() && objs[x].outcomes[r]) out.push_back(x);
  return out;
}

Fraction frequency(const LabWorld& w, std::size_t lab, DeviceIndex pi, DeviceIndex r) {
  const auto prepared = preparing_extension(w, lab, pi);
  if (prepared.empty())
    throw WorldInvalid("preparing device " + w.preparing.at(pi) + " has an empty extension in lab " +
                       w.labs.at(lab).id);
  long long yes = 0;
  for (auto x : prepared)
    if (w.labs[lab].objects[x].outcomes.at(r)) ++yes;
  return Fraction(yes, static_cast<long long>(prepared.size()));
}

WorldReport validate_world(const LabWorld& w) {
  WorldReport report;
  if (w.ideal.size() != w.registering.size())
    report.structural.push_back("ideal flags do not match the registering devices");
  if (w.labs.empty()) report.structural.push_back("world has no laboratories");

  for (const auto& lab : w.labs) {
    for (const auto& obj : lab.objects) {
      if (obj.preparers.size() != 1)
        report.structural.push_back("object " + obj.id + " in lab " + lab.id + " has " +
                                    std::to_string(obj.preparers.size()) + " preparing devices");
      for (auto p : obj.preparers)
        if (p >= w.preparing.size())
          report.structural.push_back("object " + obj.id + " names an unknown preparing device");
      if (obj.outcomes.size() != w.registering.size())
        report.structural.push_back("object " + obj.id + " in lab " + lab.id +
                                    " lacks an outcome for some registering device");
    }
  }
  if (!report.structural.empty()) return report;

  for (std::size_t j = 0; j < w.labs.size(); ++j)
    for (DeviceIndex pi = 0; pi < w.preparing.size(); ++pi)
      if (preparing_extension(w, j, pi).empty())
        report.structural.push_back("preparing device " + w.preparing[pi] + " has an empty extension in lab " +
                                    w.labs[j].id);
  if (!report.structural.empty()) return report;

  for (DeviceIndex pi = 0; pi < w.preparing.size(); ++pi) {
    for (DeviceIndex r = 0; r < w.registering.size(); ++r) {
      std::vector<Fraction> per_lab;
      for (std::size_t j = 0; j < w.labs.size(); ++j) per_lab.push_back(frequency(w, j, pi, r));
      for (std::size_t a = 0; a < per_lab.size(); ++a)
        for (std::size_t b = a + 1; b < per_lab.size(); ++b)
          if (per_lab[a] != per_lab[b])
            report.frequency_violations.push_back({pi, r, a, b, per_lab[a], per_lab[b]});
    }
  }
  return report;
}

std::vector<OperationalState> partition_states(const LabWorld& w) {
  require_valid(w);
  std::map<std::vector<Fraction>, std::size_t> row_to_state;
  std::vector<OperationalState> states;
  for (DeviceIndex pi = 0; pi < w.preparing.size(); ++pi) {
    std::vector<Fraction> row;
    for (std::size_t j = 0; j < w.labs.size(); ++j)
      for (DeviceIndex r = 0; r < w.registering.size(); ++r) row.push_back(frequency(w, j, pi, r));
    auto [it, fresh] = row_to_state.try_emplace(std::move(row), states.size());
    if (fresh) states.push_back({states.size(), {}, std::vector<std::vector<ObjectIndex>>(w.labs.size())});
    states[it->second].members.push_back(pi);
  }
  for (auto& s : states) {
    for (std::size_t j = 0; j < w.labs.size(); ++j) {
      for (auto pi : s.members) {
        auto ext = preparing_extension(w, j, pi);
        s.extension[j].insert(s.extension[j].end(), ext.begin(), ext.end());
      }
      std::sort(s.extension[j].begin(), s.extension[j].end());
      s.extension[j].erase(std::unique(s.extension[j].begin(), s.extension[j].end()), s.extension[j].end());
    }
  }
  return states;
}

EffectPartition partition_effects(const LabWorld& w) {
  require_valid(w);
  EffectPartition out;

  std::vector<std::vector<std::vector<ObjectIndex>>> extensions(w.registering.size());
  std::vector<std::vector<Fraction>> rows(w.registering.size());
  for (DeviceIndex r = 0; r < w.registering.size(); ++r) {
    for (std::size_t j = 0; j < w.labs.size(); ++j) {
      extensions[r].push_back(registering_extension(w, j, r));
      for (DeviceIndex pi = 0; pi < w.preparing.size(); ++pi) rows[r].push_back(frequency(w, j, pi, r));
    }
  }

  std::map<std::vector<Fraction>, std::size_t> effect_of_row;
  for (DeviceIndex r = 0; r < w.registering.size(); ++r) {
    auto [it, fresh] = effect_of_row.try_emplace(rows[r], out.effects.size());
    if (fresh) out.effects.emplace_back();
    out.effects[it->second].push_back(r);
  }

  std::map<std::vector<std::vector<ObjectIndex>>, std::size_t> property_of_ext;
  for (DeviceIndex r = 0; r < w.registering.size(); ++r) {
    if (!w.ideal[r]) continue;
    auto [it, fresh] = property_of_ext.try_emplace(extensions[r], out.properties.size());
    if (fresh) out.properties.push_back({out.properties.size(), {}, extensions[r]});
    out.properties[it->second].members.push_back(r);
  }

  for (DeviceIndex a = 0; a < w.registering.size(); ++a)
    for (DeviceIndex b = a + 1; b < w.registering.size(); ++b)
      if (w.ideal[a] && w.ideal[b] && rows[a] == rows[b] && extensions[a] != extensions[b])
        out.frequency_only_pairs.emplace_back(a, b);
  return out;
}

CertainlyDomains certainly_domains(const std::vector<OperationalState>& states,
                                   const std::vector<OperationalProperty>& properties) {
  CertainlyDomains out;
  out.certainly_true.resize(states.size());
  out.certainly_yes.resize(properties.size());
  for (std::size_t s = 0; s < states.size(); ++s) {
    for (std::size_t e = 0; e < properties.size(); ++e) {
      const auto& se = states[s].extension;
      const auto& pe = properties[e].extension;
      bool within = se.size() == pe.size();
      for (std::size_t j = 0; j < se.size() && within; ++j) within = subset(se[j], pe[j]);
      if (within) {
        out.certainly_true[s].push_back(e);
        out.certainly_yes[e].push_back(s);
      }
    }
  }
  return out;
}

PartitionCheck check_partition_property(const LabWorld& w, const std::vector<OperationalState>& states) {
  PartitionCheck out;
  for (std::size_t j = 0; j < w.labs.size(); ++j) {
    const auto& objs = w.labs[j].objects;
    std::vector<int> owners(objs.size(), 0);
    for (const auto& s : states) {
      std::vector<char> mine(objs.size(), 0);
      for (auto pi : s.members)
        for (auto x : preparing_extension(w, j, pi)) mine[x] = 1;
      for (ObjectIndex x = 0; x < objs.size(); ++x) owners[x] += mine[x];
    }
    for (ObjectIndex x = 0; x < objs.size(); ++x) {
      if (owners[x] == 0) {
        out.ok = false;
        out.problems.push_back("lab " + w.labs[j].id + ": object " + objs[x].id + " is an orphan (no state)");
      } else if (owners[x] > 1) {
        out.ok = false;
        out.problems.push_back("lab " + w.labs[j].id + ": object " + objs[x].id + " lies in " +
                               std::to_string(owners[x]) + " state extensions");
      }
    }
  }
  return out;
}

LecceBuild build_lecce_sps(const LabWorld& w) {
  LecceBuild out;
  out.states = partition_states(w);
  out.effects = partition_effects(w);
  out.domains = certainly_domains(out.states, out.effects.properties);

  const std::size_t num_states = out.states.size();
  if (num_states == 0) {
    out.notes.push_back("world has no states");
    return out;
  }
  std::vector<std::size_t> all_states(num_states);
  for (std::size_t s = 0; s < num_states; ++s) all_states[s] = s;

  // Quotient properties by equal certainly-yes domains.
  std::vector<std::vector<std::size_t>> domain_of;
  std::vector<std::string> labels;
  std::map<std::vector<std::size_t>, std::size_t> class_of;
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t e = 0; e < out.effects.properties.size(); ++e) {
    auto [it, fresh] = class_of.try_emplace(out.domains.certainly_yes[e], classes.size());
    if (fresh) classes.emplace_back();
    classes[it->second].push_back(e);
  }

  const bool has_bottom = class_of.count({}) > 0;
  const bool has_top = class_of.count(all_states) > 0;
  out.synthetic_bottom = !has_bottom;
  out.synthetic_top = !has_top;
  if (out.synthetic_bottom) {
    domain_of.push_back({});
    labels.push_back("0");
    out.element_members.emplace_back();
    out.notes.push_back("added synthetic bottom (empty certainly-yes domain)");
  }
  for (const auto& cls : classes) {
    domain_of.push_back(out.domains.certainly_yes[cls.front()]);
    std::string label;
    for (auto e : cls)
      label += (label.empty() ? "" : "=") + join_names(w.registering, out.effects.properties[e].members);
    labels.push_back(label);
    out.element_members.push_back(cls);
  }
  if (out.synthetic_top) {
    domain_of.push_back(all_states);
    labels.push_back("I");
    out.element_members.emplace_back();
    out.notes.push_back("added synthetic top (all states)");
  }

  std::vector<std::pair<Element, Element>> order;
  for (std::size_t a = 0; a < domain_of.size(); ++a)
    for (std::size_t b = 0; b < domain_of.size(); ++b)
      if (a != b && subset(domain_of[a], domain_of[b])) order.emplace_back(a, b);

  try {
    out.lattice = build_lattice(domain_of.size(), order, labels);
  } catch (const LatticeError& e) {
    out.notes.push_back(std::string("inclusion order is not a lattice: ") + e.what());
    return out;
  }

  out.actuality.assign(num_states, std::vector<bool>(domain_of.size(), false));
  for (std::size_t a = 0; a < domain_of.size(); ++a)
    for (auto s : domain_of[a]) out.actuality[s][a] = true;

  out.definition1 = definition1_violations(*out.lattice, out.actuality);
  if (out.definition1.empty()) {
    std::vector<std::string> state_labels;
    for (const auto& s : out.states) state_labels.push_back(join_names(w.preparing, s.members));
    out.sps = build_sps(*out.lattice, num_states, out.actuality, std::move(state_labels));
  } else {
    out.notes.push_back("candidate structure violates the state property system conditions");
  }
  return out;
}

}  // namespace oql::lecce
