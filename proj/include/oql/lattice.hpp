#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oql {

/// Elements of a finite lattice are dense indices 0..size-1.
using Element = std::size_t;
using ElementSet = std::vector<Element>;

class LatticeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The closed order relation contains a cycle between two distinct elements.
class NotAPartialOrder : public LatticeError {
public:
  NotAPartialOrder(Element a, Element b);
  Element first, second;
};

/// Some pair lacks a unique greatest lower bound or least upper bound.
class NotALattice : public LatticeError {
public:
  NotALattice(Element a, Element b, bool missing_meet);
  Element first, second;
  bool missing_meet;
};

class EmptyInterval : public LatticeError {
public:
  EmptyInterval(Element lo, Element hi);
};

/// Finite complete lattice over dense element indices.
///
/// The order is stored transitively closed; meet and join tables are built
/// eagerly. Instances are immutable once built.
class FiniteLattice {
public:
  std::size_t size() const { return size_; }
  bool leq(Element a, Element b) const { return order_[a * size_ + b] != 0; }
  bool lt(Element a, Element b) const { return a != b && leq(a, b); }
  Element meet(Element a, Element b) const { return meet_[a * size_ + b]; }
  Element join(Element a, Element b) const { return join_[a * size_ + b]; }
  Element bottom() const { return bottom_; }
  Element top() const { return top_; }
  const ElementSet& atoms() const { return atoms_; }
  bool is_atom(Element a) const;

  /// Greatest lower bound of a subset; the empty meet is top.
  Element meet(const ElementSet& subset) const;
  /// Least upper bound of a subset; the empty join is bottom.
  Element join(const ElementSet& subset) const;

  /// All x with lo <= x <= hi, ascending.
  ElementSet interval(Element lo, Element hi) const;

  /// Length of the longest chain from bottom to a.
  std::size_t rank(Element a) const { return rank_[a]; }

  const std::vector<std::string>& labels() const { return labels_; }
  std::string label(Element a) const;
  /// Element with the given label, if any.
  std::optional<Element> find(const std::string& label) const;

  /// Pairs (a, b) with a < b in the closed order, lexicographically sorted.
  std::vector<std::pair<Element, Element>> order_pairs() const;

  friend FiniteLattice build_lattice(std::size_t size,
                                     const std::vector<std::pair<Element, Element>>& order_pairs,
                                     std::vector<std::string> labels);

private:
  FiniteLattice() = default;

  std::size_t size_ = 0;
  std::vector<char> order_;
  std::vector<Element> meet_;
  std::vector<Element> join_;
  Element bottom_ = 0;
  Element top_ = 0;
  ElementSet atoms_;
  std::vector<std::size_t> rank_;
  std::vector<std::string> labels_;
};

/// Builds a lattice from generating order pairs (a <= b). The pairs are closed
/// reflexively and transitively before validation. Labels default to indices.
FiniteLattice build_lattice(std::size_t size,
                            const std::vector<std::pair<Element, Element>>& order_pairs,
                            std::vector<std::string> labels = {});

enum class MapKind { isomorphism, automorphism };

struct LatticeMap {
  MapKind kind = MapKind::isomorphism;
  std::vector<Element> assignment;

  Element operator()(Element a) const { return assignment[a]; }
  bool operator==(const LatticeMap&) const = default;
};

/// Lexicographically least order isomorphism from `a` onto `b`, if one exists.
std::optional<LatticeMap> find_isomorphism(const FiniteLattice& a, const FiniteLattice& b);

/// Every order automorphism, lexicographically sorted. Identity is always first.
std::vector<LatticeMap> automorphisms(const FiniteLattice& lattice);

/// Checks that `map` is a bijection preserving and reflecting the order.
bool is_order_isomorphism(const FiniteLattice& a, const FiniteLattice& b,
                          const std::vector<Element>& map);

ElementSet interval(const FiniteLattice& lattice, Element lo, Element hi);

}  // namespace oql
