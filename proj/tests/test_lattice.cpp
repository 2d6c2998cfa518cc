#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "oql/lattice.hpp"

using namespace oql;

namespace {

Element at(const FiniteLattice& L, const std::string& label) { return *L.find(label); }

}  // namespace

TEST(BuildLattice, TwoChain) {
  const auto L = fixtures::two_chain().build();
  EXPECT_EQ(L.size(), 2u);
  EXPECT_EQ(L.bottom(), 0u);
  EXPECT_EQ(L.top(), 1u);
  EXPECT_EQ(L.atoms(), ElementSet{1});
}

TEST(BuildLattice, BooleanSquareBounds) {
  const auto L = fixtures::boolean_square().build();
  EXPECT_EQ(L.meet(1, 2), 0u);
  EXPECT_EQ(L.join(1, 2), 3u);
  EXPECT_EQ(L.atoms(), (ElementSet{1, 2}));
}

TEST(BuildLattice, PentagonIsALattice) {
  const auto L = fixtures::n5().build();
  EXPECT_EQ(L.size(), 5u);
  EXPECT_EQ(L.join(at(L, "a"), at(L, "b")), L.top());
}

TEST(BuildLattice, BowtieIsRejectedWithItsPair) {
  const auto spec = fixtures::bowtie();
  try {
    spec.build();
    FAIL() << "expected NotALattice";
  } catch (const NotALattice& e) {
    // a and b have two minimal upper bounds c and d; c and d two maximal lower bounds.
    const std::set<Element> pair{e.first, e.second};
    EXPECT_TRUE((pair == std::set<Element>{1, 2} && !e.missing_meet) ||
                (pair == std::set<Element>{3, 4} && e.missing_meet));
  }
}

TEST(BuildLattice, CycleIsNotAPartialOrder) {
  EXPECT_THROW(build_lattice(3, {{0, 1}, {1, 2}, {2, 1}}), NotAPartialOrder);
}

TEST(BuildLattice, RejectsOutOfRangeIndices) {
  EXPECT_THROW(build_lattice(2, {{0, 2}}), LatticeError);
}

TEST(BuildLattice, LabelsDefaultToIndices) {
  const auto L = build_lattice(3, {{0, 1}, {1, 2}});
  EXPECT_EQ(L.label(2), "2");
  EXPECT_EQ(L.find("1"), Element{1});
}

TEST(SubsetMeetJoin, Conventions) {
  const auto sq = fixtures::boolean_square().build();
  EXPECT_EQ(sq.meet(ElementSet{1, 2}), 0u);
  EXPECT_EQ(sq.join(ElementSet{1, 2}), 3u);
  for (const auto& spec : fixtures::gallery()) {
    const auto L = spec.build();
    EXPECT_EQ(L.meet(ElementSet{}), L.top()) << spec.name;
    EXPECT_EQ(L.join(ElementSet{}), L.bottom()) << spec.name;
  }
}

TEST(SubsetMeetJoin, HexagonAndMo2) {
  const auto o6 = fixtures::o6().build();
  EXPECT_EQ(o6.meet(ElementSet{at(o6, "b"), at(o6, "a'")}), o6.bottom());
  const auto mo2 = fixtures::mo2().build();
  EXPECT_EQ(mo2.join(ElementSet{at(mo2, "a"), at(mo2, "b")}), mo2.top());
}

TEST(Interval, Examples) {
  const auto sq = fixtures::boolean_square().build();
  EXPECT_EQ(interval(sq, sq.bottom(), sq.top()), (ElementSet{0, 1, 2, 3}));
  EXPECT_EQ(interval(sq, 0, 1), (ElementSet{0, 1}));
  const auto o6 = fixtures::o6().build();
  EXPECT_EQ(interval(o6, o6.bottom(), at(o6, "b")), (ElementSet{at(o6, "0"), at(o6, "a"), at(o6, "b")}));
  EXPECT_THROW(interval(sq, 1, 2), EmptyInterval);
}

TEST(Automorphisms, Counts) {
  EXPECT_EQ(automorphisms(fixtures::three_chain().build()).size(), 1u);
  EXPECT_EQ(automorphisms(fixtures::boolean_square().build()).size(), 2u);
  // Every permutation of MO2's four atoms is an order automorphism.
  EXPECT_EQ(automorphisms(fixtures::mo2().build()).size(), 24u);
  EXPECT_EQ(automorphisms(fixtures::boolean_cube().build()).size(), 6u);
}

TEST(Automorphisms, Mo2OrthoPreservingSubgroup) {
  const auto L = fixtures::mo2().build();
  // a <-> a', b <-> b'
  const std::vector<Element> c{5, 2, 1, 4, 3, 0};
  std::size_t preserving = 0;
  for (const auto& f : automorphisms(L)) {
    bool ok = true;
    for (Element x = 0; x < L.size(); ++x) ok = ok && f(c[x]) == c[f(x)];
    preserving += ok;
  }
  EXPECT_EQ(preserving, 8u);
}

TEST(Automorphisms, MatchPermutationEnumeration) {
  for (const auto& spec : fixtures::gallery()) {
    const auto L = spec.build();
    const auto ref = oracle::automorphisms(*oracle::make_lattice(spec.labels.size(), spec.pairs));
    std::vector<std::vector<Element>> got;
    for (const auto& m : automorphisms(L)) {
      EXPECT_EQ(m.kind, MapKind::automorphism);
      got.push_back(m.assignment);
    }
    EXPECT_EQ(got, ref) << spec.name;
    ASSERT_FALSE(got.empty());
    EXPECT_EQ(got.front(), ref.front()) << "identity first";
  }
}

TEST(Automorphisms, FormAGroup) {
  for (const auto& spec : fixtures::gallery()) {
    const auto L = spec.build();
    const auto autos = automorphisms(L);
    std::set<std::vector<Element>> all;
    for (const auto& m : autos) all.insert(m.assignment);
    for (const auto& f : autos) {
      std::vector<Element> inv(L.size());
      for (Element a = 0; a < L.size(); ++a) inv[f(a)] = a;
      EXPECT_TRUE(all.count(inv)) << spec.name;
      for (const auto& g : autos) {
        std::vector<Element> fg(L.size());
        for (Element a = 0; a < L.size(); ++a) fg[a] = f(g(a));
        EXPECT_TRUE(all.count(fg)) << spec.name;
      }
    }
  }
}

TEST(FindIsomorphism, Examples) {
  const auto c3 = fixtures::three_chain().build();
  const auto id = find_isomorphism(c3, c3);
  ASSERT_TRUE(id);
  EXPECT_EQ(id->assignment, (std::vector<Element>{0, 1, 2}));
  EXPECT_FALSE(find_isomorphism(fixtures::boolean_square().build(), fixtures::mo2().build()));
  EXPECT_FALSE(find_isomorphism(fixtures::o6().build(), fixtures::mo2().build()));
}

TEST(FindIsomorphism, RelabelledHexagon) {
  // Same hexagon entered with a different element order: 1 a' b 0 b' a.
  const auto original = fixtures::o6().build();
  const auto relabelled =
      build_lattice(6, {{3, 5}, {5, 2}, {2, 0}, {3, 4}, {4, 1}, {1, 0}}, {"1", "a'", "b", "0", "b'", "a"});
  const auto iso = find_isomorphism(original, relabelled);
  ASSERT_TRUE(iso);
  EXPECT_TRUE(is_order_isomorphism(original, relabelled, iso->assignment));

  // Lexicographically least among all permutations that work.
  std::vector<Element> perm{0, 1, 2, 3, 4, 5};
  std::optional<std::vector<Element>> least;
  do {
    if (is_order_isomorphism(original, relabelled, perm)) {
      least = perm;
      break;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  EXPECT_EQ(iso->assignment, *least);
  EXPECT_TRUE(find_isomorphism(relabelled, original));
}

// Random bounded posets up to 8 elements, filtered to lattices by the oracle.
TEST(LatticeProperties, TablesMatchBruteForceOnRandomLattices) {
  fixtures::Rng rng(20261019);
  std::size_t lattices = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const auto pairs = fixtures::random_bounded_poset(rng, n, 0.35);
    const auto ref = oracle::make_lattice(n, pairs);
    if (!ref) {
      EXPECT_THROW(build_lattice(n, pairs), LatticeError);
      continue;
    }
    ++lattices;
    const auto L = build_lattice(n, pairs);
    EXPECT_EQ(L.bottom(), ref->bot);
    EXPECT_EQ(L.top(), ref->top);
    EXPECT_EQ(L.atoms(), ref->atoms);
    for (Element a = 0; a < n; ++a) {
      for (Element b = 0; b < n; ++b) {
        ASSERT_EQ(L.leq(a, b), ref->le[a][b]);
        ASSERT_EQ(L.meet(a, b), ref->meet[a][b]);
        ASSERT_EQ(L.join(a, b), ref->join[a][b]);
        // absorption, idempotence, commutativity
        EXPECT_EQ(L.meet(a, L.join(a, b)), a);
        EXPECT_EQ(L.join(a, L.meet(a, b)), a);
        EXPECT_EQ(L.meet(a, b), L.meet(b, a));
      }
      EXPECT_EQ(L.meet(a, a), a);
      EXPECT_EQ(L.join(a, a), a);
    }
    // Every subset meet equals the greatest common lower bound by scan.
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      ElementSet subset;
      for (Element i = 0; i < n; ++i)
        if (mask >> i & 1u) subset.push_back(i);
      std::vector<Element> lower, upper;
      for (Element x = 0; x < n; ++x) {
        bool lo = true, up = true;
        for (auto s : subset) lo = lo && ref->le[x][s], up = up && ref->le[s][x];
        if (lo) lower.push_back(x);
        if (up) upper.push_back(x);
      }
      Element g = n, l = n;
      for (auto x : lower)
        if (std::all_of(lower.begin(), lower.end(), [&](Element y) { return ref->le[y][x]; })) g = x;
      for (auto x : upper)
        if (std::all_of(upper.begin(), upper.end(), [&](Element y) { return ref->le[x][y]; })) l = x;
      ASSERT_EQ(L.meet(subset), g);
      ASSERT_EQ(L.join(subset), l);
    }
  }
  EXPECT_GT(lattices, 50u);
}

TEST(LatticeProperties, IsomorphismIsSymmetricOnRandomPairs) {
  fixtures::Rng rng(7);
  std::vector<FiniteLattice> pool;
  while (pool.size() < 30) {
    const std::size_t n = 4 + pool.size() % 4;
    const auto pairs = fixtures::random_bounded_poset(rng, n, 0.3);
    if (oracle::make_lattice(n, pairs)) pool.push_back(build_lattice(n, pairs));
  }
  for (const auto& a : pool) {
    for (const auto& b : pool) {
      const auto ab = find_isomorphism(a, b);
      const auto ba = find_isomorphism(b, a);
      EXPECT_EQ(ab.has_value(), ba.has_value());
      if (ab) {
        EXPECT_TRUE(is_order_isomorphism(a, b, ab->assignment));
      }
    }
  }
}
