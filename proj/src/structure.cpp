#include "bhlab/structure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <unordered_set>
#include <vector>

#include "bhlab/errors.hpp"
#include "bhlab/parallel.hpp"

namespace bhlab {
namespace {

// gmpxx has no long long overloads; funnel 64-bit counts through long.
inline mpz_class to_mpz(long long v) { return mpz_class(static_cast<long>(v)); }


constexpr std::size_t kEnergySetCap = 4096;
constexpr std::size_t kExhaustiveDoublingCap = 18;
constexpr std::size_t kExactCoveringCap = 64;

std::vector<std::uint32_t> validated_sorted(const Group& g,
                                            const std::vector<std::uint32_t>& a) {
  std::vector<std::uint32_t> s = a;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (!s.empty() && s.back() >= g.order())
    throw input_error("set element " + std::to_string(s.back()) + " outside the group");
  return s;
}

// |S+S| for S given as indices, using a stamped scratch array.
long long sumset_size(const Group& g, const std::vector<std::uint32_t>& s,
                      std::vector<std::uint32_t>& stamp, std::uint32_t tick) {
  long long count = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i; j < s.size(); ++j) {
      const std::uint32_t sum = g.add(s[i], s[j]);
      if (stamp[sum] != tick) {
        stamp[sum] = tick;
        ++count;
      }
    }
  }
  return count;
}

}  // namespace

long long additive_energy(const Group& g, const std::vector<std::uint32_t>& a) {
  const std::vector<std::uint32_t> s = validated_sorted(g, a);
  if (s.size() > kEnergySetCap)
    throw cap_error("additive energy capped at |A| <= " + std::to_string(kEnergySetCap));
  std::vector<long long> r(g.order(), 0);
  for (std::uint32_t x : s)
    for (std::uint32_t y : s) ++r[g.add(x, y)];
  long long energy = 0;
  for (long long v : r) energy += v * v;
  return energy;
}

EnergyReport energy_lower_bound_check(const Group& g, const std::vector<std::uint32_t>& a) {
  const std::vector<std::uint32_t> s = validated_sorted(g, a);
  if (s.empty()) throw input_error("set must be nonempty");
  EnergyReport rep;
  rep.energy = additive_energy(g, s);
  rep.m_norm = algebra_norm(indicator(g, s));
  const double size = static_cast<double>(s.size());
  rep.bound = size * size * size / (rep.m_norm * rep.m_norm);
  rep.pass = static_cast<double>(rep.energy) >= rep.bound - 1e-6;
  return rep;
}

DoublingResult small_doubling_subset(const Group& g, const std::vector<std::uint32_t>& a,
                                     DoublingMode mode) {
  const std::vector<std::uint32_t> set = validated_sorted(g, a);
  if (set.empty()) throw input_error("set must be nonempty");
  const long long asize = static_cast<long long>(set.size());

  std::vector<std::uint32_t> stamp(g.order(), 0);
  std::uint32_t tick = 0;

  DoublingResult res;
  if (mode == DoublingMode::kExhaustive) {
    if (set.size() > kExhaustiveDoublingCap)
      throw cap_error("exhaustive subset scan capped at |A| <= " +
                      std::to_string(kExhaustiveDoublingCap));
    const std::uint32_t m = static_cast<std::uint32_t>(set.size());
    // J(S) = |S+S| |A| / |S|^2, compared by cross-multiplication.
    long long best_ss = 0, best_size = 0;
    std::vector<std::uint32_t> best;
    std::vector<std::uint32_t> cur;
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << m); ++mask) {
      cur.clear();
      for (std::uint32_t i = 0; i < m; ++i)
        if ((mask >> i) & 1) cur.push_back(set[i]);
      const long long k = static_cast<long long>(cur.size());
      const long long ss = sumset_size(g, cur, stamp, ++tick);
      bool better = false;
      if (best.empty()) {
        better = true;
      } else {
        const long long lhs = ss * best_size * best_size;
        const long long rhs = best_ss * k * k;
        if (lhs != rhs) {
          better = lhs < rhs;
        } else if (k != best_size) {
          better = k > best_size;
        } else {
          better = cur < best;
        }
      }
      if (better) {
        best = cur;
        best_ss = ss;
        best_size = k;
      }
    }
    res.subset = best;
    res.doubling = Rational(to_mpz(best_ss), to_mpz(best_size));
    res.doubling.canonicalize();
    res.optimal = true;
    return res;
  }

  // Greedy: seed S with the participants of the densest representation value
  // s* = argmax r_A, then grow by participation weight, keeping the stage of
  // smallest J among those no looser than A's own doubling.
  std::vector<long long> r(g.order(), 0);
  for (std::uint32_t x : set)
    for (std::uint32_t y : set) ++r[g.add(x, y)];
  std::uint32_t densest = 0;
  long long densest_r = -1;
  for (std::uint32_t s2 = 0; s2 < g.order(); ++s2) {
    if (r[s2] > densest_r) {
      densest_r = r[s2];
      densest = s2;
    }
  }
  std::vector<char> in_set(g.order(), 0);
  for (std::uint32_t x : set) in_set[x] = 1;
  std::vector<std::uint32_t> stage;
  std::vector<char> in_stage(g.order(), 0);
  for (std::uint32_t x : set) {
    if (in_set[g.sub(densest, x)] && !in_stage[x]) {
      stage.push_back(x);
      in_stage[x] = 1;
    }
  }
  std::vector<std::pair<long long, std::uint32_t>> ranked;
  for (std::uint32_t x : set) {
    if (in_stage[x]) continue;
    long long w = 0;
    for (std::uint32_t y : set) w += r[g.add(x, y)];
    ranked.emplace_back(-w, x);  // descending weight, ascending element
  }
  std::sort(ranked.begin(), ranked.end());

  const long long aa = sumset_size(g, set, stamp, ++tick);
  bool have_best = false;
  long long best_ss = 0, best_size = 0;
  std::vector<std::uint32_t> best;
  auto consider = [&](const std::vector<std::uint32_t>& cand) {
    const long long k = static_cast<long long>(cand.size());
    if (k == 0) return;
    const long long ss = sumset_size(g, cand, stamp, ++tick);
    // never return something looser than A's own doubling
    if (ss * asize > aa * k) return;
    bool better = false;
    if (!have_best) {
      better = true;
    } else {
      const long long lhs = ss * best_size * best_size;
      const long long rhs = best_ss * k * k;
      better = lhs != rhs ? lhs < rhs : k > best_size;
    }
    if (better) {
      have_best = true;
      best = cand;
      best_ss = ss;
      best_size = k;
    }
  };
  consider(stage);
  for (const auto& [negw, x] : ranked) {
    stage.push_back(x);
    consider(stage);
  }
  if (!have_best) {
    best = set;
    best_ss = aa;
    best_size = asize;
  }
  std::sort(best.begin(), best.end());
  res.subset = best;
  res.doubling = Rational(to_mpz(best_ss), to_mpz(best_size));
  res.doubling.canonicalize();
  res.optimal = false;
  return res;
}

std::vector<std::uint32_t> bohr_set(const BohrSystem& b, const Rational& eta) {
  if (eta <= 0) throw input_error("Bohr radius eta must be positive");
  if (b.frequencies.size() != b.widths.size())
    throw input_error("frequency and width lists differ in length");
  for (const Rational& w : b.widths)
    if (w <= 0) throw input_error("Bohr widths must be positive");
  for (std::uint32_t f : b.frequencies)
    if (f >= b.group.order()) throw input_error("frequency index outside the dual group");

  std::vector<Rational> thresholds;
  thresholds.reserve(b.widths.size());
  for (const Rational& w : b.widths) {
    Rational t = eta * w;
    t.canonicalize();
    thresholds.push_back(t);
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t x = 0; x < b.group.order(); ++x) {
    bool in = true;
    for (std::size_t i = 0; i < b.frequencies.size() && in; ++i) {
      const Rational dist = b.group.pairing_fraction(x, b.frequencies[i]).norm_exact();
      in = dist < thresholds[i];  // strict boundary
    }
    if (in) out.push_back(x);
  }
  return out;
}

namespace {

// Exact set cover by branch and bound over deduplicated translate masks.
struct CoverSolver {
  const std::vector<std::uint64_t>& masks;
  std::vector<std::vector<int>> covering_bit;  // per bit, mask indices hitting it
  int best;
  int max_cover = 1;

  CoverSolver(const std::vector<std::uint64_t>& m, int nbits, int greedy_best)
      : masks(m), covering_bit(static_cast<std::size_t>(nbits)), best(greedy_best) {
    for (int b = 0; b < nbits; ++b)
      for (int i = 0; i < static_cast<int>(masks.size()); ++i)
        if ((masks[static_cast<std::size_t>(i)] >> b) & 1)
          covering_bit[static_cast<std::size_t>(b)].push_back(i);
    for (std::uint64_t m2 : masks)
      max_cover = std::max(max_cover, static_cast<int>(__builtin_popcountll(m2)));
  }

  void solve(std::uint64_t remaining, int used) {
    if (remaining == 0) {
      best = std::min(best, used);
      return;
    }
    const int rem_bits = __builtin_popcountll(remaining);
    if (used + (rem_bits + max_cover - 1) / max_cover >= best) return;
    const int bit = __builtin_ctzll(remaining);
    for (int i : covering_bit[static_cast<std::size_t>(bit)])
      solve(remaining & ~masks[static_cast<std::size_t>(i)], used + 1);
  }
};

}  // namespace

CoveringResult covering_number(const Group& g, const std::vector<std::uint32_t>& s_in,
                               const std::vector<std::uint32_t>& t_in) {
  const std::vector<std::uint32_t> s = validated_sorted(g, s_in);
  const std::vector<std::uint32_t> t = validated_sorted(g, t_in);
  CoveringResult res;
  if (s.empty()) return res;  // zero translates cover nothing
  if (t.empty()) throw input_error("cannot cover a nonempty set by translates of an empty set");

  std::vector<int> pos(g.order(), -1);
  for (std::size_t i = 0; i < s.size(); ++i) pos[s[i]] = static_cast<int>(i);

  if (s.size() <= kExactCoveringCap) {
    std::vector<std::uint64_t> masks;
    std::unordered_set<std::uint64_t> seen;
    for (std::uint32_t x = 0; x < g.order(); ++x) {
      std::uint64_t m = 0;
      for (std::uint32_t e : t) {
        const int p = pos[g.add(x, e)];
        if (p >= 0) m |= std::uint64_t(1) << p;
      }
      if (m != 0 && seen.insert(m).second) masks.push_back(m);
    }
    const std::uint64_t full =
        s.size() == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << s.size()) - 1;
    // greedy upper bound seeds the search
    int greedy = 0;
    std::uint64_t rem = full;
    while (rem != 0) {
      std::uint64_t pick = 0;
      int pick_sz = -1;
      for (std::uint64_t m : masks) {
        const int c = __builtin_popcountll(m & rem);
        if (c > pick_sz) {
          pick_sz = c;
          pick = m;
        }
      }
      rem &= ~pick;
      ++greedy;
    }
    CoverSolver solver(masks, static_cast<int>(s.size()), greedy);
    solver.solve(full, 0);
    res.value = solver.best;
    res.exact = true;
    return res;
  }

  // Greedy fallback for large sets; translates indexed by x in ascending
  // order so argmax ties resolve deterministically.
  std::vector<Bitset> masks;
  for (std::uint32_t x = 0; x < g.order(); ++x) {
    Bitset m(s.size());
    bool any = false;
    for (std::uint32_t e : t) {
      const int p = pos[g.add(x, e)];
      if (p >= 0) {
        m.set(static_cast<std::size_t>(p));
        any = true;
      }
    }
    if (any) masks.push_back(m);
  }
  std::vector<char> covered(s.size(), 0);
  std::size_t left = s.size();
  long count = 0;
  while (left > 0) {
    std::size_t pick = 0, pick_gain = 0;
    for (std::size_t i = 0; i < masks.size(); ++i) {
      std::size_t gain = 0;
      for (std::size_t b = 0; b < s.size(); ++b)
        if (!covered[b] && masks[i].test(b)) ++gain;
      if (gain > pick_gain) {
        pick_gain = gain;
        pick = i;
      }
    }
    if (pick_gain == 0) throw input_error("translates cannot cover the set");
    for (std::size_t b = 0; b < s.size(); ++b)
      if (masks[pick].test(b)) covered[b] = 1;
    left -= pick_gain;
    ++count;
  }
  res.value = count;
  res.exact = false;
  return res;
}

double doubling_dimension(const BohrSystem& b, const std::vector<Rational>& eta_grid) {
  if (eta_grid.empty()) throw input_error("eta grid must be nonempty");
  double best = 0.0;
  for (const Rational& eta : eta_grid) {
    if (eta <= 0) throw input_error("Bohr radius eta must be positive");
    Rational half = eta / 2;
    half.canonicalize();
    const std::vector<std::uint32_t> outer = bohr_set(b, eta);
    const std::vector<std::uint32_t> inner = bohr_set(b, half);
    const CoveringResult c = covering_number(b.group, outer, inner);
    if (c.value >= 1) best = std::max(best, std::log2(static_cast<double>(c.value)));
  }
  return best;
}

SubgroupScanContext make_scan_context(const Group& g, const SubgroupEnumCaps& caps) {
  SubgroupScanContext ctx;
  ctx.group = g;
  ctx.subgroups = enumerate_subgroups(g, caps);
  ctx.coset_id.resize(ctx.subgroups.size());
  ctx.coset_reps.resize(ctx.subgroups.size());
  const std::uint32_t n = static_cast<std::uint32_t>(g.order());
  parallel_for_chunks(ctx.subgroups.size(), [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t si = lo; si < hi; ++si) {
      const Subgroup& v = ctx.subgroups[si];
      std::vector<std::uint32_t>& ids = ctx.coset_id[si];
      std::vector<std::uint32_t>& reps = ctx.coset_reps[si];
      ids.assign(n, UINT32_MAX);
      for (std::uint32_t x = 0; x < n; ++x) {
        if (ids[x] != UINT32_MAX) continue;
        const std::uint32_t id = static_cast<std::uint32_t>(reps.size());
        reps.push_back(x);  // x is the smallest member: earlier ones are assigned
        for (std::uint32_t e : v.elements) ids[g.add(x, e)] = id;
      }
    }
  });
  if (n <= 64) {
    ctx.element_mask.resize(ctx.subgroups.size());
    for (std::size_t si = 0; si < ctx.subgroups.size(); ++si) {
      std::uint64_t m = 0;
      for (std::uint32_t e : ctx.subgroups[si].elements) m |= std::uint64_t(1) << e;
      ctx.element_mask[si] = m;
    }
  }
  return ctx;
}

StructureReport find_invariant_subgroup(const Group& g, const std::vector<std::uint32_t>& a,
                                        const Rational& eta) {
  return find_invariant_subgroup(make_scan_context(g), a, eta);
}

StructureReport find_invariant_subgroup(const SubgroupScanContext& ctx,
                                        const std::vector<std::uint32_t>& a,
                                        const Rational& eta) {
  const Group& g = ctx.group;
  const std::vector<std::uint32_t> set = validated_sorted(g, a);
  if (set.empty()) throw input_error("set must be nonempty");
  if (eta <= 0) throw input_error("eta must be positive");
  const mpz_class den = eta.get_den();
  const mpz_class shortfall = den - eta.get_num();  // (1 - eta) = shortfall / den
  const long long asize = static_cast<long long>(set.size());

  // Qualification needs a coset count > (1 - eta)|V| and counts are at most
  // |A|, so only subgroups with shortfall*|V| < |A|*den can qualify; they form
  // a prefix of the order-ascending context list.
  std::size_t cut = ctx.subgroups.size();
  if (shortfall > 0) {
    const mpz_class budget = to_mpz(asize) * den - 1;
    mpz_class bound;  // largest |V| with shortfall*|V| < |A|*den
    mpz_fdiv_q(bound.get_mpz_t(), budget.get_mpz_t(), shortfall.get_mpz_t());
    std::uint64_t max_order = g.order();
    if (mpz_cmp_ui(bound.get_mpz_t(), static_cast<unsigned long>(g.order())) < 0)
      max_order = mpz_get_ui(bound.get_mpz_t());
    cut = static_cast<std::size_t>(
        std::partition_point(
            ctx.subgroups.begin(), ctx.subgroups.end(),
            [max_order](const Subgroup& s) { return s.order() <= max_order; }) -
        ctx.subgroups.begin());
  }

  // Smallest integer count with count*den > shortfall*|V|.
  const auto block_need = [&](long long vsize) -> long long {
    if (shortfall <= 0) return 1;
    const mpz_class prod = shortfall * to_mpz(vsize);
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), prod.get_mpz_t(), den.get_mpz_t());
    const long long need = mpz_get_si(q.get_mpz_t()) + 1;
    return need < 1 ? 1 : need;
  };

  const auto build_report = [&](std::size_t si) {
    const Subgroup& v = ctx.subgroups[si];
    const std::vector<std::uint32_t>& ids = ctx.coset_id[si];
    std::vector<long long> counts(ctx.coset_reps[si].size(), 0);
    long long best_count = 0;
    for (std::uint32_t x : set) {
      const long long c = ++counts[ids[x]];
      if (c > best_count) best_count = c;
    }
    std::uint32_t best_coset = UINT32_MAX;
    for (std::uint32_t x : set) {
      const std::uint32_t id = ids[x];
      if (counts[id] == best_count && id < best_coset) best_coset = id;
    }
    StructureReport rep;
    rep.v = v;
    rep.witness = ctx.coset_reps[si][best_coset];
    rep.sup_exact = Rational(to_mpz(best_count), to_mpz(static_cast<long long>(v.order())));
    rep.sup_exact.canonicalize();
    rep.sup_value = rep.sup_exact.get_d();
    rep.size_ratio = static_cast<double>(v.order()) / static_cast<double>(set.size());
    return rep;
  };

  // Scan order: subgroup order descending, generator list ascending.  The
  // context is sorted ascending by (order, generators), so walk the contiguous
  // equal-order blocks of [0, cut) from the back, each block left to right.
  const bool fast = !ctx.element_mask.empty();

  // Fast path for |G| <= 64: the coset of x holds popcount(dm[x] & V) points
  // of A, where dm[x] is the bitmask of differences y - x over y in A.
  std::vector<std::uint64_t> dm;
  std::uint64_t dall = 0;  // union of all pairwise differences
  if (fast) {
    dm.resize(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) {
      std::uint64_t m = 0;
      for (std::uint32_t y : set) m |= std::uint64_t(1) << g.sub(y, set[i]);
      dm[i] = m;
      dall |= m;
    }
  }
  std::vector<long long> counts;
  std::vector<std::uint32_t> stamps;
  std::uint32_t tick = 0;
  if (!fast) {
    counts.assign(static_cast<std::size_t>(g.order()), 0);
    stamps.assign(static_cast<std::size_t>(g.order()), 0);
  }

  std::size_t hi = cut;
  while (hi > 0) {
    std::size_t lo = hi;
    while (lo > 0 && ctx.subgroups[lo - 1].order() == ctx.subgroups[hi - 1].order()) --lo;
    const long long need = block_need(static_cast<long long>(ctx.subgroups[hi - 1].order()));
    if (need <= asize) {
      if (fast) {
        for (std::size_t si = lo; si < hi; ++si) {
          const std::uint64_t vm = ctx.element_mask[si];
          if (__builtin_popcountll(dall & vm) < need) continue;
          for (const std::uint64_t m : dm)
            if (__builtin_popcountll(m & vm) >= need) return build_report(si);
        }
      } else {
        for (std::size_t si = lo; si < hi; ++si) {
          const std::vector<std::uint32_t>& ids = ctx.coset_id[si];
          ++tick;
          long long best_count = 0;
          for (std::uint32_t x : set) {
            const std::uint32_t id = ids[x];
            if (stamps[id] != tick) {
              stamps[id] = tick;
              counts[id] = 0;
            }
            if (++counts[id] > best_count) best_count = counts[id];
          }
          if (best_count >= need) return build_report(si);
        }
      }
    }
    hi = lo;
  }
  throw input_error("no qualifying subgroup; eta may be degenerate");
}

CosetFitResult coset_fit(const Group& g, const std::vector<std::uint32_t>& gamma) {
  return coset_fit(make_scan_context(g), gamma);
}

CosetFitResult coset_fit(const SubgroupScanContext& ctx,
                         const std::vector<std::uint32_t>& gamma) {
  const Group& g = ctx.group;
  const std::vector<std::uint32_t> set = validated_sorted(g, gamma);

  CosetFitResult res;
  bool have = false;
  long long best_symdiff = 0;
  std::vector<long long> counts;
  // ascending (order, generators): strict improvement keeps the preferred tie
  for (std::size_t si = 0; si < ctx.subgroups.size(); ++si) {
    const Subgroup& v = ctx.subgroups[si];
    const std::vector<std::uint32_t>& ids = ctx.coset_id[si];
    counts.assign(ctx.coset_reps[si].size(), 0);
    for (std::uint32_t x : set) ++counts[ids[x]];
    long long best_count = -1;
    std::uint32_t best_coset = 0;
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (counts[c] > best_count) {
        best_count = counts[c];
        best_coset = static_cast<std::uint32_t>(c);
      }
    }
    const long long symdiff = static_cast<long long>(set.size()) +
                              static_cast<long long>(v.order()) - 2 * best_count;
    if (!have || symdiff < best_symdiff) {
      have = true;
      best_symdiff = symdiff;
      res.w.subgroup = v;
      res.w.representative = ctx.coset_reps[si][best_coset];
      res.symdiff = symdiff;
    }
  }
  if (!have) throw input_error("no subgroups available for fitting");
  return res;
}

}  // namespace bhlab
