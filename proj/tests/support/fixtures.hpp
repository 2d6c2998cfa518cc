#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "oql/hilbert.hpp"
#include "oql/lattice.hpp"
#include "oql/lecce.hpp"
#include "oql/state_property.hpp"

#ifndef OQL_TEST_DATA
#define OQL_TEST_DATA "tests/data"
#endif

namespace fixtures {

using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

struct LatticeSpec {
  std::string name;
  std::vector<std::string> labels;
  Pairs pairs;

  oql::FiniteLattice build() const { return oql::build_lattice(labels.size(), pairs, labels); }
};

inline std::string data(const std::string& file) { return std::string(OQL_TEST_DATA) + "/" + file; }

inline LatticeSpec two_chain() { return {"2-chain", {"0", "1"}, {{0, 1}}}; }
inline LatticeSpec three_chain() { return {"3-chain", {"0", "m", "1"}, {{0, 1}, {1, 2}}}; }
inline LatticeSpec boolean_square() {
  return {"Boolean square", {"0", "a", "a'", "1"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}};
}
inline LatticeSpec boolean_cube() {
  // 0 a b c ab ac bc 1
  return {"Boolean cube",
          {"0", "a", "b", "c", "ab", "ac", "bc", "1"},
          {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {1, 5}, {3, 5}, {2, 6}, {3, 6}, {4, 7}, {5, 7}, {6, 7}}};
}
inline LatticeSpec mo2() {
  return {"MO2", {"0", "a", "a'", "b", "b'", "1"}, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 5}, {2, 5}, {3, 5}, {4, 5}}};
}
/// 0 < a < b < 1 and 0 < b' < a' < 1.
inline LatticeSpec o6() {
  return {"O6 hexagon", {"0", "a", "b'", "b", "a'", "1"}, {{0, 1}, {1, 3}, {3, 5}, {0, 2}, {2, 4}, {4, 5}}};
}
inline LatticeSpec n5() { return {"N5", {"0", "a", "c", "b", "1"}, {{0, 1}, {1, 2}, {2, 4}, {0, 3}, {3, 4}}}; }
/// Two three-element chains between 0 and 1: 0 < a < c < e < 1, 0 < b < d < f < 1.
inline LatticeSpec double_chain() {
  return {"double chain",
          {"0", "a", "b", "c", "d", "e", "f", "1"},
          {{0, 1}, {1, 3}, {3, 5}, {5, 7}, {0, 2}, {2, 4}, {4, 6}, {6, 7}}};
}
/// 0 < a, b < c, d < 1: a and b have two minimal upper bounds.
inline LatticeSpec bowtie() {
  return {"bowtie", {"0", "a", "b", "c", "d", "1"}, {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 5}, {4, 5}}};
}

/// Canonical gallery used by the battery criteria.
inline std::vector<LatticeSpec> gallery() {
  return {two_chain(), three_chain(), boolean_square(), boolean_cube(), mo2(), o6()};
}

/// One state per atom; the state makes exactly the properties above its atom actual.
inline oql::ActualityTable atom_states(const oql::FiniteLattice& L) {
  oql::ActualityTable t;
  for (auto atom : L.atoms()) {
    std::vector<bool> row(L.size(), false);
    for (oql::Element x = 0; x < L.size(); ++x) row[x] = L.leq(atom, x);
    t.push_back(row);
  }
  return t;
}

inline oql::StatePropertySystem atom_sps(const oql::FiniteLattice& L) {
  const auto t = atom_states(L);
  return oql::build_sps(L, t.size(), t);
}

// Quantum vectors.
inline const double r2 = 1.0 / std::sqrt(2.0);

inline oql::ComplexVector vec(std::initializer_list<oql::Complex> xs) {
  oql::ComplexVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) v(i++) = x;
  return v;
}

inline oql::DensityOperator pure(std::initializer_list<oql::Complex> xs) {
  return oql::DensityOperator::pure(oql::StateVector::normalized(vec(xs)));
}

inline oql::Projection proj(std::initializer_list<oql::Complex> xs) {
  return oql::Projection::onto(oql::StateVector::normalized(vec(xs)));
}

/// |0>, |1>, |+>, |->.
inline std::vector<oql::Projection> qubit_properties() {
  return {proj({1, 0}), proj({0, 1}), proj({1, 1}), proj({1, -1})};
}

/// |00>, |10>, |+0>, |-0>, Bell.
inline std::vector<oql::DensityOperator> bell_compound_states() {
  return {pure({1, 0, 0, 0}), pure({0, 0, 1, 0}), pure({1, 0, 1, 0}), pure({1, 0, -1, 0}), pure({1, 0, 0, 1})};
}

inline std::vector<oql::DensityOperator> pure_qubit_states() {
  return {pure({1, 0}), pure({0, 1}), pure({1, 1}), pure({1, -1})};
}

// Seeded random objects.
using Rng = std::mt19937_64;

inline oql::ComplexVector random_vector(Rng& rng, std::size_t dim) {
  std::normal_distribution<double> g;
  oql::ComplexVector v(static_cast<Eigen::Index>(dim));
  for (auto& x : v) x = {g(rng), g(rng)};
  return v.normalized();
}

inline oql::ComplexMatrix random_unitary(Rng& rng, std::size_t dim) {
  std::normal_distribution<double> g;
  oql::ComplexMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = {g(rng), g(rng)};
  Eigen::HouseholderQR<oql::ComplexMatrix> qr(m);
  return qr.householderQ() * oql::ComplexMatrix::Identity(m.rows(), m.cols());
}

/// Density operator of the given rank: Ginibre-style G G^dagger / trace.
inline oql::DensityOperator random_density(Rng& rng, std::size_t dim, std::size_t rank) {
  std::normal_distribution<double> g;
  oql::ComplexMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(rank));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = {g(rng), g(rng)};
  oql::ComplexMatrix w = m * m.adjoint();
  w /= w.trace().real();
  w = (w + w.adjoint()) / 2.0;
  return oql::DensityOperator(w);
}

/// Projection onto a random subspace of the given rank.
inline oql::Projection random_projection(Rng& rng, std::size_t dim, std::size_t rank) {
  const oql::ComplexMatrix u = random_unitary(rng, dim);
  return oql::Projection::onto_columns(u.leftCols(static_cast<Eigen::Index>(rank)));
}

/// Two labs, six objects each. pi1 and pi2 prepare two objects apiece and are
/// statistically equivalent; pi3 prepares the rest. r1 answers yes exactly on
/// pi1/pi2 objects, r2 exactly on pi3 objects, r3 on half of every preparer's
/// objects with a different half in each lab.
inline oql::lecce::LabWorld lab_world() {
  using oql::lecce::PhysicalObject;
  oql::lecce::LabWorld w;
  w.preparing = {"pi1", "pi2", "pi3"};
  w.registering = {"r1", "r2", "r3"};
  w.ideal = {true, true, false};
  auto obj = [](std::string id, std::size_t prep, bool r1, bool r2, bool r3) {
    return PhysicalObject{std::move(id), {prep}, {r1, r2, r3}};
  };
  w.labs.push_back({"L1",
                    {obj("o1", 0, true, false, true), obj("o2", 0, true, false, false),
                     obj("o3", 1, true, false, true), obj("o4", 1, true, false, false),
                     obj("o5", 2, false, true, true), obj("o6", 2, false, true, false)}});
  w.labs.push_back({"L2",
                    {obj("o1", 0, true, false, false), obj("o2", 0, true, false, true),
                     obj("o3", 1, true, false, false), obj("o4", 1, true, false, true),
                     obj("o5", 2, false, true, false), obj("o6", 2, false, true, true)}});
  return w;
}

/// Same world with r3 flipped on one pi1 object in the second lab.
inline oql::lecce::LabWorld lab_world_mismatch() {
  auto w = lab_world();
  w.labs[1].objects[0].outcomes[2] = true;
  return w;
}

}  // namespace fixtures

namespace fixtures {

/// Random bounded poset on n elements (0 bottom, n-1 top, interior edges
/// only upward in index). Callers filter with the oracle to keep lattices.
inline Pairs random_bounded_poset(Rng& rng, std::size_t n, double density) {
  std::bernoulli_distribution edge(density);
  Pairs pairs;
  for (std::size_t i = 1; i + 1 < n; ++i) pairs.emplace_back(0, i), pairs.emplace_back(i, n - 1);
  if (n == 2) pairs.emplace_back(0, 1);
  for (std::size_t i = 1; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j + 1 < n; ++j)
      if (edge(rng)) pairs.emplace_back(i, j);
  return pairs;
}

}  // namespace fixtures
