#pragma once

#include <cstdint>
#include <vector>

#include "bhlab/fourier.hpp"
#include "bhlab/group.hpp"
#include "bhlab/rational.hpp"

namespace bhlab {

// Number of quadruples (x, y, z, w) in A^4 with x + y = z + w, computed
// exactly as sum_s r_A(s)^2.
long long additive_energy(const Group& g, const std::vector<std::uint32_t>& a);

struct EnergyReport {
  long long energy = 0;
  double bound = 0.0;  // |A|^3 / M^2
  double m_norm = 0.0;
  bool pass = false;  // energy >= bound - 1e-6
};
EnergyReport energy_lower_bound_check(const Group& g, const std::vector<std::uint32_t>& a);

// Small-doubling subset search.  Exhaustive mode scans every nonempty
// S subset of A and picks the minimizer of the normalised objective
//   J(S) = |S+S| * |A| / |S|^2
// (doubling of S weighted by how much of A it keeps), tie-broken toward
// larger |S| and then lexicographically smaller sorted element list; greedy
// mode ranks elements by how often they participate in popular sums and
// scans prefix sets, never returning doubling worse than |A+A|/|A|.
enum class DoublingMode { kExhaustive, kGreedy };

struct DoublingResult {
  std::vector<std::uint32_t> subset;
  Rational doubling;  // |S+S|/|S|
  bool optimal = false;
};
DoublingResult small_doubling_subset(const Group& g, const std::vector<std::uint32_t>& a,
                                     DoublingMode mode);

// Bohr system: frequency list with exact positive widths.
struct BohrSystem {
  Group group;
  std::vector<std::uint32_t> frequencies;  // character indices
  std::vector<Rational> widths;            // delta(lambda) > 0, same length
};

// { x : ||<x, lambda>||_T < eta * delta(lambda) for all lambda }, strict
// boundary, evaluated exactly.
std::vector<std::uint32_t> bohr_set(const BohrSystem& b, const Rational& eta);

struct CoveringResult {
  long value = 0;
  bool exact = true;  // false when the greedy fallback was used
};

// Minimal number of translates of T needed to cover S, via branch and bound
// over deduplicated translates (exact for |S| <= 64, greedy beyond).
CoveringResult covering_number(const Group& g, const std::vector<std::uint32_t>& s,
                               const std::vector<std::uint32_t>& t);

// max over the grid of log2 C(B_eta ; B_{eta/2}); a lower estimate of the
// supremum over all scales.
double doubling_dimension(const BohrSystem& b, const std::vector<Rational>& eta_grid);

struct StructureReport {
  Subgroup v;
  std::uint32_t witness = 0;  // element where 1_A * mu_V attains its sup
  double sup_value = 0.0;
  Rational sup_exact;
  double size_ratio = 0.0;  // |V| / |A|
};

// Precomputed per-group scan tables: all subgroups plus, for each, the coset
// id of every element.  Build once per group when calling
// find_invariant_subgroup or coset_fit many times.
struct SubgroupScanContext {
  Group group;
  std::vector<Subgroup> subgroups;              // ascending (order, gens)
  std::vector<std::vector<std::uint32_t>> coset_id;    // per subgroup, size |G|
  std::vector<std::vector<std::uint32_t>> coset_reps;  // per subgroup, per coset id
  std::vector<std::uint64_t> element_mask;  // per subgroup bitmask, |G| <= 64 only
};
SubgroupScanContext make_scan_context(const Group& g, const SubgroupEnumCaps& caps = {});

// Exhaustive realization of the invariant-subgroup conclusion: among all
// subgroups V whose coset-averaged indicator exceeds 1 - eta somewhere
// (strictly, in exact arithmetic), return one of maximal order, ties broken
// lexicographically by generator list.  {0} always qualifies, so a report is
// always produced.
StructureReport find_invariant_subgroup(const Group& g, const std::vector<std::uint32_t>& a,
                                        const Rational& eta);
StructureReport find_invariant_subgroup(const SubgroupScanContext& ctx,
                                        const std::vector<std::uint32_t>& a,
                                        const Rational& eta);

struct CosetFitResult {
  Coset w;
  long long symdiff = 0;
};

// Coset minimizing |Gamma triangle W| over all subgroups and offsets;
// ties prefer smaller |V|, then lexicographic generators, then the smallest
// offset representative.
CosetFitResult coset_fit(const Group& g, const std::vector<std::uint32_t>& gamma);
CosetFitResult coset_fit(const SubgroupScanContext& ctx, const std::vector<std::uint32_t>& gamma);

}  // namespace bhlab
