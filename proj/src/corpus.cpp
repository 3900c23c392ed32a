#include "bhlab/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bhlab/dissociation.hpp"
#include "bhlab/errors.hpp"
#include "bhlab/fourier.hpp"
#include "bhlab/group.hpp"
#include "bhlab/limitcheck.hpp"
#include "bhlab/parallel.hpp"
#include "bhlab/phase.hpp"
#include "bhlab/rational.hpp"
#include "bhlab/structure.hpp"

namespace bhlab {
namespace {

// Platform-stable uniform draw in [0, n); std::mt19937_64 output is pinned by
// the standard, and rejection avoids distribution-object variance.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

std::string fmt(double x) { return real_string(x); }

struct CriterionContext {
  const CorpusOptions& opts;
  // algebra norms computed by the corpus go through this knob so the
  // fault-injection self-test can skew them
  double norm(const DenseFunction& f) const {
    return algebra_norm(f) + opts.norm_perturbation;
  }
};

// 1. Indicators of subgroups have algebra norm exactly 1 (up to float).
CriterionResult run_subgroup_indicator_norm(const CriterionContext& cc) {
  CriterionResult r{1, "subgroup_indicator_norm", "PASS", "", 0.0};
  if (cc.opts.max_group_order > 0 && cc.opts.max_group_order < 64) {
    r.status = "SKIP";
    r.detail = "requires group sweep up to order 64";
    return r;
  }
  double worst = 0.0;
  long long checked = 0;
  const std::vector<Group> groups = all_abelian_groups(64);
  for (const Group& g : groups) {
    for (const Subgroup& v : enumerate_subgroups(g)) {
      const double n = cc.norm(indicator(g, v.elements));
      worst = std::max(worst, std::abs(n - 1.0));
      ++checked;
    }
  }
  r.detail = std::to_string(checked) + " subgroups over " + std::to_string(groups.size()) +
             " groups, max |norm-1| = " + fmt(worst);
  if (worst > 1e-9) r.status = "FAIL";
  return r;
}

// 2. Quadratic phases on Z_p have Gauss-sum norm profile sqrt(p).
CriterionResult run_gauss_sum_profile(const CriterionContext& cc) {
  CriterionResult r{2, "gauss_sum_profile", "PASS", "", 0.0};
  double worst = 0.0;
  for (long p : {17L, 101L}) {
    const PhaseFunction quad = make_quadratic_phase(p);
    const GrowthProfile prof = norm_profile(quad, p - 1);
    const double target = std::sqrt(static_cast<double>(p));
    for (const ProfileEntry& e : prof.entries)
      worst = std::max(worst, std::abs(e.norm + cc.opts.norm_perturbation - target));
  }
  r.detail = "max |norm - sqrt(p)| = " + fmt(worst);
  if (worst > 1e-6) r.status = "FAIL";
  return r;
}

// 3. Two-slope piecewise-linear phases grow like a power of log; linear
// phases stay flat at 1.
CriterionResult run_growth_fit(const CriterionContext& cc) {
  CriterionResult r{3, "growth_fit", "PASS", "", 0.0};
  const long n = 2048;
  // zigzag alternating slopes +1 / -1 on sixteen equal segments: exactly two
  // distinct slopes, but enough corners that the log term dominates the
  // additive constant inside the z <= 256 window
  std::vector<PwlSegment> segs;
  for (long k = 0; k < 16; ++k) {
    Rational start(k, 16);
    start.canonicalize();
    segs.push_back({start, k % 2 == 0 ? 1 : -1});
  }
  const PhaseFunction zigzag = make_piecewise_linear_phase(segs, n);
  const GrowthProfile full = norm_profile(zigzag, 256);
  GrowthProfile window;
  for (const ProfileEntry& e : full.entries)
    if (e.z >= 2) window.entries.push_back({e.z, e.norm + cc.opts.norm_perturbation});
  const GrowthFit fit = fit_growth(window);

  const PhaseFunction lin = make_linear_phase(1, Rational(0), n);
  const GrowthProfile lin_prof = norm_profile(lin, 256);
  double lin_worst = 0.0;
  for (const ProfileEntry& e : lin_prof.entries)
    if (e.z >= 2)
      lin_worst = std::max(lin_worst,
                           std::abs(e.norm + cc.opts.norm_perturbation - 1.0));

  r.detail = "fit c = " + fmt(fit.c) + " (C = " + fmt(fit.C) + ", residual " +
             fmt(fit.residual) + "), max |linear norm - 1| = " + fmt(lin_worst);
  if (fit.c < 0.8 || fit.c > 1.2 || fit.degenerate || lin_worst > 1e-9) r.status = "FAIL";
  return r;
}

// 4. Dirichlet approximation contract on random instances, exact arithmetic.
CriterionResult run_dirichlet_contract(const CriterionContext&) {
  CriterionResult r{4, "dirichlet_contract", "PASS", "", 0.0};
  std::mt19937_64 rng(0xD1818C7ULL);
  long failures = 0;
  long long max_q = 0;
  for (int i = 0; i < 1000; ++i) {
    const int d = 1 + static_cast<int>(uniform_below(rng, 3));
    const long k = 2 + static_cast<long>(uniform_below(rng, 5));
    std::vector<TorusValue> vals;
    for (int j = 0; j < d; ++j) {
      const long den = 1 + static_cast<long>(uniform_below(rng, 64));
      const long nm = static_cast<long>(uniform_below(rng, static_cast<std::uint64_t>(den)));
      Rational v(nm, den);
      v.canonicalize();
      vals.emplace_back(v);
    }
    const DirichletResult dr = dirichlet_approx(vals, k);
    max_q = std::max(max_q, dr.Q);
    mpz_class kd;
    mpz_ui_pow_ui(kd.get_mpz_t(), static_cast<unsigned long>(k),
                  static_cast<unsigned long>(d));
    Rational cap(1);
    cap /= Rational(mpz_class(k) * mpz_class(static_cast<long>(dr.Q)));
    if (mpz_class(static_cast<long>(dr.Q)) > kd || dr.max_error_exact > cap) ++failures;
  }
  r.detail = "1000 instances, failures = " + std::to_string(failures) +
             ", max Q = " + std::to_string(max_q);
  if (failures != 0) r.status = "FAIL";
  return r;
}

// 5. Maximal dissociated tuples on linear phases have near-log2 N length and
// satisfy the dimension bound with C1 = 2.
CriterionResult run_dimension_calibration(const CriterionContext&) {
  CriterionResult r{5, "dimension_calibration", "PASS", "", 0.0};
  std::ostringstream detail;
  bool ok = true;
  for (long n : {16L, 64L, 256L}) {
    Rational eta(1, 2 * n);
    eta.canonicalize();
    const PhaseFunction phi = make_linear_phase(1, Rational(0), n);
    const DissociatedTuple tuple = extract_maximal(phi, eta);
    const int d = tuple.d();
    const int lo = static_cast<int>(std::floor(std::log2(static_cast<double>(n))));
    const int hi = static_cast<int>(std::ceil(std::log2(2.0 * static_cast<double>(n)))) + 1;
    const KsBoundReport ks = ks_bound_report(phi, eta, 2.0);
    if (d < lo || d > hi || !ks.pass) ok = false;
    detail << "N=" << n << ": d=" << d << " in [" << lo << "," << hi
           << "], ratio=" << fmt(ks.ratio) << "; ";
  }
  r.detail = detail.str();
  if (!ok) r.status = "FAIL";
  return r;
}

// 6. The full approximation pipeline meets its exact error certificate.
CriterionResult run_approximation_certificate(const CriterionContext&) {
  CriterionResult r{6, "approximation_certificate", "PASS", "", 0.0};
  long failures = 0;
  int max_d = 0;
  long long max_q = 0;
  double max_h = 0.0;
  int count = 0;
  for (long n : {8L, 16L, 24L, 32L}) {
    std::vector<PhaseFunction> phis;
    phis.push_back(make_linear_phase(1, Rational(0), n));
    Rational quarter(1, 4);
    quarter.canonicalize();
    phis.push_back(make_linear_phase(0, quarter, n));  // constant
    Rational eighth(1, 8);
    eighth.canonicalize();
    phis.push_back(make_linear_phase(3, eighth, n));
    phis.push_back(make_quadratic_phase(n));
    phis.push_back(make_random_phase(static_cast<std::uint64_t>(n), n));
    for (const PhaseFunction& phi : phis) {
      ++count;
      const ApproxResult res = build_phi_star(phi);
      // re-verify the certificate here rather than trusting the builder
      Rational bound(res.d + 1);
      bound /= Rational(mpz_class(n) * n * mpz_class(static_cast<long>(res.Q)));
      if (res.achieved_error > bound) ++failures;
      max_d = std::max(max_d, res.d);
      max_q = std::max(max_q, res.Q);
      max_h = std::max(max_h, res.h_measured);
    }
  }
  r.detail = std::to_string(count) + " phases, failures = " + std::to_string(failures) +
             ", max d = " + std::to_string(max_d) + ", max Q = " + std::to_string(max_q) +
             ", max h = " + fmt(max_h);
  if (failures != 0) r.status = "FAIL";
  return r;
}

// 7. On unions of up to three cosets of V0, the invariant-subgroup search
// returns a supergroup of V0 with sup exactly 1.
CriterionResult run_invariant_subgroup_oracle(const CriterionContext& cc) {
  CriterionResult r{7, "invariant_subgroup_oracle", "PASS", "", 0.0};
  if (cc.opts.max_group_order > 0 && cc.opts.max_group_order < 64) {
    r.status = "SKIP";
    r.detail = "requires group sweep up to order 64";
    return r;
  }
  Rational quarter(1, 4);
  quarter.canonicalize();
  std::atomic<long long> unions_checked{0};
  std::atomic<long long> failures{0};
  for (const Group& g : all_abelian_groups(64)) {
    const SubgroupScanContext ctx = make_scan_context(g);
    parallel_for_chunks(ctx.subgroups.size(), [&](std::size_t, std::size_t lo, std::size_t hi) {
      long long local_checked = 0, local_failures = 0;
      for (std::size_t si = lo; si < hi; ++si) {
        const Subgroup& v0 = ctx.subgroups[si];
        const std::vector<std::uint32_t>& reps = ctx.coset_reps[si];
        const std::size_t m = reps.size();
        // members of each coset of v0
        std::vector<std::vector<std::uint32_t>> coset_members(m);
        for (std::uint32_t x = 0; x < g.order(); ++x)
          coset_members[ctx.coset_id[si][x]].push_back(x);
        std::vector<std::uint32_t> a;
        auto check = [&](std::initializer_list<std::size_t> picks) {
          a.clear();
          for (std::size_t c : picks)
            a.insert(a.end(), coset_members[c].begin(), coset_members[c].end());
          const StructureReport rep = find_invariant_subgroup(ctx, a, quarter);
          ++local_checked;
          bool good = rep.sup_exact == 1;
          if (good)
            for (std::uint32_t e : v0.elements)
              if (!rep.v.contains(e)) {
                good = false;
                break;
              }
          if (!good) ++local_failures;
        };
        for (std::size_t i = 0; i < m; ++i) {
          check({i});
          for (std::size_t j = i + 1; j < m; ++j) {
            check({i, j});
            for (std::size_t k2 = j + 1; k2 < m; ++k2) check({i, j, k2});
          }
        }
      }
      unions_checked += local_checked;
      failures += local_failures;
    });
  }
  r.detail = std::to_string(unions_checked.load()) + " unions checked, failures = " +
             std::to_string(failures.load());
  if (failures.load() != 0) r.status = "FAIL";
  return r;
}

// 8. Graph norm equals the average of row norms.
CriterionResult run_graph_norm_identity(const CriterionContext&) {
  CriterionResult r{8, "graph_norm_identity", "PASS", "", 0.0};
  std::mt19937_64 rng(0x6A08813ULL);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const long n = 2 + static_cast<long>(uniform_below(rng, 31));
    const long q = 2 + static_cast<long>(uniform_below(rng, 31));
    PhaseFunction phi;
    phi.N = n;
    phi.values.reserve(static_cast<std::size_t>(n));
    for (long x = 0; x < n; ++x) {
      Rational v(static_cast<long>(uniform_below(rng, static_cast<std::uint64_t>(q))), q);
      v.canonicalize();
      phi.values.emplace_back(v);
    }
    const GraphNormReport rep = graph_norm_identity_check(phi, q);
    worst = std::max(worst, rep.gap);
  }
  r.detail = "100 random graphs, max gap = " + fmt(worst);
  if (worst > 1e-8) r.status = "FAIL";
  return r;
}

// 9. Bad-triple counting chain on corrupted-affine graphs plus the kappa
// cross-checks.
CriterionResult run_triple_counting(const CriterionContext&) {
  CriterionResult r{9, "triple_counting", "PASS", "", 0.0};
  std::ostringstream detail;
  bool ok = true;

  const long n = 16;
  Rational zero(0);
  const PhaseFunction affine = make_linear_phase(3, zero, n);
  for (long k = 1; k <= 2; ++k) {
    PhaseFunction phi = affine;
    Rational half(1, 2);
    half.canonicalize();
    for (long j = 0; j < k; ++j) {
      const std::size_t at = static_cast<std::size_t>(5 + 6 * j);
      phi.values[at] = TorusValue(phi.values[at].fraction() + half);
    }
    // graphs inside Z_16 x Z_16: index = x*16 + 16*phi(x)
    auto graph_of = [&](const PhaseFunction& f) {
      std::vector<std::uint32_t> idx;
      for (long x = 0; x < n; ++x) {
        const Rational& v = f.values[static_cast<std::size_t>(x)].fraction();
        const mpz_class q = v.get_num() * (n / mpz_class(v.get_den()));
        idx.push_back(static_cast<std::uint32_t>(x * n + q.get_si()));
      }
      return idx;
    };
    Rational eta(k, n);
    eta.canonicalize();
    const TripleCheckReport rep =
        bad_triple_inequality_check(phi, graph_of(phi), graph_of(affine), eta);
    detail << "k=" << k << ": symdiff=" << rep.symdiff << ", bad=" << rep.bad_triples
           << " <= " << fmt(rep.bound) << "; ";
    if (!rep.pass) ok = false;
  }

  const KappaReport ka = kappa_statistic(affine);
  if (ka.kappa != 0.0 || ka.bad_triples != 0) ok = false;
  detail << "kappa(affine)=" << fmt(ka.kappa) << "; ";

  const KappaReport kq = kappa_statistic(make_quadratic_phase(101));
  // closed form: y != 0 makes 2yz equidistributed mod 101
  double closed = 0.0, comp = 0.0;
  for (long u = 0; u < 101; ++u) {
    const double term =
        2.0 * std::abs(std::sin(M_PI * static_cast<double>(u) / 101.0)) - comp;
    const double next = closed + term;
    comp = (next - closed) - term;
    closed = next;
  }
  closed *= 100.0 / (101.0 * 101.0);
  const double gap = std::abs(kq.kappa - closed);
  detail << "kappa(quadratic,101)=" << fmt(kq.kappa) << " vs closed " << fmt(closed);
  if (gap > 1e-9) ok = false;

  r.detail = detail.str();
  if (!ok) r.status = "FAIL";
  return r;
}

// 10. Additive energy dominates the Parseval lower bound |A|^3 / M^2.
CriterionResult run_energy_lower_bound(const CriterionContext& cc) {
  CriterionResult r{10, "energy_lower_bound", "PASS", "", 0.0};
  if (cc.opts.max_group_order > 0 && cc.opts.max_group_order < 128) {
    r.status = "SKIP";
    r.detail = "requires group sweep up to order 128";
    return r;
  }
  const std::vector<Group> groups = all_abelian_groups(128);
  std::mt19937_64 rng(0xE4E26ULL);
  long failures = 0;
  double min_slack = 0.0;
  bool have_slack = false;
  for (int i = 0; i < 500; ++i) {
    const Group& g = groups[uniform_below(rng, groups.size())];
    const std::uint64_t order = g.order();
    const std::uint64_t size = 1 + uniform_below(rng, order);
    // size distinct elements by partial Fisher-Yates
    std::vector<std::uint32_t> pool(order);
    for (std::uint64_t j = 0; j < order; ++j) pool[j] = static_cast<std::uint32_t>(j);
    std::vector<std::uint32_t> a;
    for (std::uint64_t j = 0; j < size; ++j) {
      const std::uint64_t pick = j + uniform_below(rng, order - j);
      std::swap(pool[j], pool[pick]);
      a.push_back(pool[j]);
    }
    const long long energy = additive_energy(g, a);
    const double m = algebra_norm(indicator(g, a)) - cc.opts.norm_perturbation;
    const double sz = static_cast<double>(size);
    const double bound = sz * sz * sz / (m * m);
    const double slack = static_cast<double>(energy) - bound;
    if (!have_slack || slack < min_slack) {
      min_slack = slack;
      have_slack = true;
    }
    if (static_cast<double>(energy) < bound - 1e-6) ++failures;
  }
  r.detail = "500 sets, failures = " + std::to_string(failures) +
             ", min (energy - bound) = " + fmt(min_slack);
  if (failures != 0) r.status = "FAIL";
  return r;
}

}  // namespace

std::vector<CriterionResult> run_corpus(const CorpusOptions& opts) {
  const CriterionContext cc{opts};
  std::vector<std::function<CriterionResult(const CriterionContext&)>> runners = {
      run_subgroup_indicator_norm, run_gauss_sum_profile,   run_growth_fit,
      run_dirichlet_contract,      run_dimension_calibration, run_approximation_certificate,
      run_invariant_subgroup_oracle, run_graph_norm_identity, run_triple_counting,
      run_energy_lower_bound,
  };
  std::vector<CriterionResult> out;
  out.reserve(runners.size());
  for (std::size_t i = 0; i < runners.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult res;
    try {
      res = runners[i](cc);
    } catch (const std::exception& e) {
      res.id = static_cast<int>(i) + 1;
      res.name = "criterion_" + std::to_string(i + 1);
      res.status = "FAIL";
      res.detail = std::string("exception: ") + e.what();
    }
    res.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(res));
  }
  return out;
}

}  // namespace bhlab
