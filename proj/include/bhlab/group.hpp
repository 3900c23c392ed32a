#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bhlab/rational.hpp"

namespace bhlab {

// Finite abelian group presented as a product of cyclic factors
//   Z_{n1} x ... x Z_{nk},   each ni >= 2 (the empty product is the trivial
// group).  The factor list is the working coordinate system and is preserved
// as given; the canonical invariant-factor chain (d1 | d2 | ... ) is computed
// on demand.  Elements and characters are indexed 0..order-1 in mixed-radix
// order with the last factor varying fastest.
class Group {
 public:
  Group() = default;
  explicit Group(std::vector<long> factors);

  // Parses "Z12" or "Z2xZ4x Z8" (case-insensitive, optional spaces).
  static Group parse(std::string_view text);

  const std::vector<long>& factors() const { return factors_; }
  std::size_t num_factors() const { return factors_.size(); }
  long factor(std::size_t i) const { return factors_[i]; }
  std::uint64_t order() const { return order_; }

  std::string spec_string() const;  // "Z2xZ4"

  // Mixed-radix index <-> coordinate conversions.  Coordinates are reduced
  // mod the factor sizes.
  std::uint32_t index_of(const std::vector<long>& coords) const;
  std::vector<long> coords_of(std::uint32_t index) const;

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t neg(std::uint32_t a) const;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
  std::uint32_t scale(std::uint32_t a, long k) const;  // k*a

  // <x, gamma> as an exact point of R/Z: sum_i x_i g_i / n_i.  Element and
  // character indices share the same mixed-radix scheme.
  TorusValue pairing_fraction(std::uint32_t elem, std::uint32_t chr) const;
  std::complex<double> pairing(std::uint32_t elem, std::uint32_t chr) const;

  // Canonical invariant factors d1 | d2 | ... | dr (each > 1) of the group,
  // independent of the coordinate presentation.
  std::vector<long> invariant_factors() const;

  bool operator==(const Group& o) const { return factors_ == o.factors_; }
  bool operator!=(const Group& o) const { return !(*this == o); }

 private:
  std::vector<long> factors_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t order_ = 1;
};

// An element carried together with its coordinates; the thin value type used
// at API boundaries (hot loops work with indices).
struct GroupElement {
  std::vector<long> coords;
};

// A character gamma = (g1, ..., gk), acting by x -> e(sum x_i g_i / n_i).
struct Character {
  std::vector<long> coords;
};

// Fixed-size bitset over group indices; cheap intersection counts are what
// the structure-finding routines spend their time on.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t bits) : bits_(bits), w_((bits + 63) / 64, 0) {}

  void set(std::size_t i) { w_[i >> 6] |= std::uint64_t(1) << (i & 63); }
  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  std::size_t size() const { return bits_; }
  std::size_t count() const;
  const std::vector<std::uint64_t>& words() const { return w_; }

  bool operator==(const Bitset& o) const { return bits_ == o.bits_ && w_ == o.w_; }

  static std::size_t intersection_count(const Bitset& a, const Bitset& b);
  std::size_t hash() const;

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> w_;
};

// Subgroup of a parent group: sorted element indices, a membership bitset,
// and a canonical generator list (greedy smallest-index generators).
struct Subgroup {
  Group parent;
  std::vector<std::uint32_t> elements;
  std::vector<std::uint32_t> generators;
  Bitset mask;

  std::size_t order() const { return elements.size(); }
  bool contains(std::uint32_t i) const { return mask.test(i); }
};

// Coset g + H, identified by its smallest member.
struct Coset {
  Subgroup subgroup;
  std::uint32_t representative = 0;

  std::vector<std::uint32_t> members() const;  // sorted indices
  Bitset mask() const;
};

struct SubgroupEnumCaps {
  std::uint64_t max_order_cyclic = 1u << 14;
  std::uint64_t max_order_general = 1u << 10;
  // Safety valve: groups inside the order caps can still have astronomically
  // many subgroups (elementary abelian 2-groups); refuse past this count.
  std::size_t max_subgroups = 200000;
};

// All subgroups, sorted by (order, generator list lexicographically).
// Cyclic groups take the divisor shortcut; products are enumerated by
// generator closure with bitset deduplication.
std::vector<Subgroup> enumerate_subgroups(const Group& g,
                                          const SubgroupEnumCaps& caps = {});

// Subgroup generated by the given element indices.
Subgroup span_of(const Group& g, const std::vector<std::uint32_t>& gens);

// Membership test plus closure verification for an explicit element list;
// throws input_error when the list is not closed under the group operations.
Subgroup subgroup_from_elements(const Group& g, std::vector<std::uint32_t> elems);

// Abstract structure of a subgroup: H ~ Z_{d1} x ... x Z_{dr} together with
// basis elements of the parent realising the isomorphism.  Computed from the
// Smith normal form of the relation lattice of the generators.
struct SubgroupDecomposition {
  Group shape;                        // Z_{d1} x ... x Z_{dr}, each di > 1
  std::vector<std::uint32_t> basis;   // parent indices, basis[i] has order di
  // embed(t) = sum_i t_i * basis[i]; defined for all shape indices and a
  // bijection onto the subgroup's elements.
  std::uint32_t embed(const std::vector<long>& shape_coords) const;
  const Group* parent = nullptr;  // set by decompose; points into the Subgroup
};

SubgroupDecomposition decompose(const Subgroup& h);

// All abelian groups of order <= max_order, one per isomorphism class, as
// factor lists of prime powers (e.g. order 12 -> Z4xZ3 and Z2xZ2xZ3).
std::vector<Group> all_abelian_groups(std::uint64_t max_order);

}  // namespace bhlab
