#include "bhlab/dissociation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "bhlab/errors.hpp"
#include "bhlab/fourier.hpp"
#include "bhlab/parallel.hpp"

namespace bhlab {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Common exact representation for sign-pattern scans: when every phase
// denominator divides a modulus L that fits in int64, sigma-sums of phases
// are plain residues mod L; otherwise exact rationals are used.
struct ScanData {
  long N = 0;
  int d = 0;
  bool int_path = false;
  std::int64_t modulus = 0;        // common denominator L
  std::vector<std::int64_t> nums;  // phi_i = nums[i] / L
  bool eta_below_grid = false;     // eta < 1/L: ||s/L|| <= eta iff s == 0
  std::int64_t eta_num = 0, eta_den = 0;
  std::vector<long> elements;            // reduced mod N
  std::vector<Rational> phases;          // rational path
  Rational eta;

  // ||s/L|| <= eta for s in [0, L)
  bool phase_ok_int(std::int64_t s) const {
    if (eta_below_grid) return s == 0;
    const std::int64_t near = std::min(s, modulus - s);
    return static_cast<__int128>(near) * eta_den <=
           static_cast<__int128>(eta_num) * modulus;
  }
};

// extra_den_lcm folds in denominators of phases compared against later
// (targets of RepresentScan), so the integer path stays exact for them too.
ScanData make_scan_data(long N, const std::vector<long>& elements,
                        const std::vector<TorusValue>& phase_values, const Rational& eta,
                        const mpz_class& extra_den_lcm = mpz_class(1)) {
  ScanData sd;
  sd.N = N;
  sd.d = static_cast<int>(elements.size());
  sd.eta = eta;
  sd.elements.reserve(elements.size());
  for (long e : elements) sd.elements.push_back(((e % N) + N) % N);
  sd.phases.reserve(phase_values.size());
  for (const TorusValue& t : phase_values) sd.phases.push_back(t.fraction());

  mpz_class lcm_z = extra_den_lcm;
  for (const TorusValue& t : phase_values)
    mpz_lcm(lcm_z.get_mpz_t(), lcm_z.get_mpz_t(), t.fraction().get_den_mpz_t());
  if (!lcm_z.fits_slong_p() || lcm_z.get_si() > (1LL << 62)) return sd;

  sd.modulus = lcm_z.get_si();
  sd.nums.reserve(phase_values.size());
  for (const TorusValue& t : phase_values) {
    const mpz_class scaled = t.fraction().get_num() * (lcm_z / t.fraction().get_den());
    sd.nums.push_back(scaled.get_si());
  }
  sd.eta_below_grid = (eta.get_num() * lcm_z < eta.get_den());
  if (!sd.eta_below_grid) {
    if (!eta.get_num().fits_slong_p() || !eta.get_den().fits_slong_p()) return sd;
    sd.eta_num = eta.get_num().get_si();
    sd.eta_den = eta.get_den().get_si();
    if (sd.eta_num >= sd.eta_den) {  // eta >= 1 accepts every phase sum
      sd.eta_num = sd.eta_den = 1;
    }
  }
  sd.int_path = true;
  return sd;
}

// Scan for a nonzero sigma with sigma . a == 0 (N) and ||sigma . phi|| <= eta,
// trying components in order -1 < 0 < +1 so the first hit is lexicographically
// least.
struct WitnessScan {
  const ScanData& sd;
  std::vector<int> sigma;
  bool found = false;

  explicit WitnessScan(const ScanData& s) : sd(s), sigma(s.d, 0) {}

  void run() {
    if (sd.int_path) dfs_int(0, 0, 0, true);
    else dfs_rat(0, 0, Rational(0), true);
  }

  void dfs_int(int i, long sa, std::int64_t sp, bool all_zero) {
    if (found) return;
    if (i == sd.d) {
      found = !all_zero && sa % sd.N == 0 && sd.phase_ok_int(sp);
      return;
    }
    const long a = sd.elements[i];
    const std::int64_t p = sd.nums[i];
    sigma[i] = -1;
    {
      std::int64_t s = sp - p;
      if (s < 0) s += sd.modulus;
      dfs_int(i + 1, sa - a, s, false);
    }
    if (found) return;
    sigma[i] = 0;
    dfs_int(i + 1, sa, sp, all_zero);
    if (found) return;
    sigma[i] = 1;
    {
      std::int64_t s = sp + p;
      if (s >= sd.modulus) s -= sd.modulus;
      dfs_int(i + 1, sa + a, s, false);
    }
    if (!found) sigma[i] = 0;
  }

  void dfs_rat(int i, long sa, const Rational& sp, bool all_zero) {
    if (found) return;
    if (i == sd.d) {
      found = !all_zero && sa % sd.N == 0 && TorusValue(sp).norm_exact() <= sd.eta;
      return;
    }
    const long a = sd.elements[i];
    const Rational& p = sd.phases[i];
    sigma[i] = -1;
    dfs_rat(i + 1, sa - a, sp - p, false);
    if (found) return;
    sigma[i] = 0;
    dfs_rat(i + 1, sa, sp, all_zero);
    if (found) return;
    sigma[i] = 1;
    dfs_rat(i + 1, sa + a, sp + p, false);
    if (!found) sigma[i] = 0;
  }
};

// Scan for the lexicographically first sigma representing a target:
// sigma . a == x (N) and ||sigma . phi - phi(x)|| <= eta.
struct RepresentScan {
  const ScanData& sd;
  long target_a = 0;
  std::int64_t target_num = 0;  // phi(x) as target_num / L on the int path
  Rational target_phase;
  std::vector<int> sigma;
  bool found = false;

  RepresentScan(const ScanData& s, long ta) : sd(s), target_a(ta), sigma(s.d, 0) {}

  void run() {
    if (sd.int_path) dfs_int(0, 0, 0);
    else dfs_rat(0, 0, Rational(0));
  }

  void dfs_int(int i, long sa, std::int64_t sp) {
    if (found) return;
    if (i == sd.d) {
      std::int64_t diff = sp - target_num;
      if (diff < 0) diff += sd.modulus;
      found = (sa - target_a) % sd.N == 0 && sd.phase_ok_int(diff);
      return;
    }
    const long a = sd.elements[i];
    const std::int64_t p = sd.nums[i];
    sigma[i] = -1;
    {
      std::int64_t s = sp - p;
      if (s < 0) s += sd.modulus;
      dfs_int(i + 1, sa - a, s);
    }
    if (found) return;
    sigma[i] = 0;
    dfs_int(i + 1, sa, sp);
    if (found) return;
    sigma[i] = 1;
    {
      std::int64_t s = sp + p;
      if (s >= sd.modulus) s -= sd.modulus;
      dfs_int(i + 1, sa + a, s);
    }
    if (!found) sigma[i] = 0;
  }

  void dfs_rat(int i, long sa, const Rational& sp) {
    if (found) return;
    if (i == sd.d) {
      found = (sa - target_a) % sd.N == 0 &&
              TorusValue(sp - target_phase).norm_exact() <= sd.eta;
      return;
    }
    const long a = sd.elements[i];
    const Rational& p = sd.phases[i];
    sigma[i] = -1;
    dfs_rat(i + 1, sa - a, sp - p);
    if (found) return;
    sigma[i] = 0;
    dfs_rat(i + 1, sa, sp);
    if (found) return;
    sigma[i] = 1;
    dfs_rat(i + 1, sa + a, sp + p);
    if (!found) sigma[i] = 0;
  }
};

// floor(eta^{-1} / 2): the Fejer z-truncation radius.
mpz_class fejer_truncation_z(const Rational& eta) {
  mpz_class q;
  const mpz_class two_num = 2 * eta.get_num();
  mpz_fdiv_q(q.get_mpz_t(), eta.get_den_mpz_t(), two_num.get_mpz_t());
  if (q < 0) q = 0;
  return q;
}

long long fejer_truncation(const Rational& eta) {
  const mpz_class q = fejer_truncation_z(eta);
  if (!q.fits_slong_p() || q.get_si() > (1LL << 40))
    throw cap_error("Fejer truncation radius exceeds 2^40; eta too small");
  return q.get_si();
}

}  // namespace

DissociationCheck is_dissociated(long N, const std::vector<long>& elements,
                                 const std::vector<TorusValue>& phase_values,
                                 const Rational& eta, int d_cap) {
  if (N < 1) throw input_error("modulus N must be positive");
  if (elements.size() != phase_values.size())
    throw input_error("element and phase lists differ in length");
  if (eta <= 0) throw input_error("dissociation threshold eta must be positive");
  const int d = static_cast<int>(elements.size());
  if (d > d_cap)
    throw cap_error("tuple length " + std::to_string(d) + " exceeds the 3^d scan cap of " +
                    std::to_string(d_cap));

  const ScanData sd = make_scan_data(N, elements, phase_values, eta);
  WitnessScan scan(sd);
  scan.run();
  DissociationCheck out;
  out.dissociated = !scan.found;
  if (scan.found) out.witness = scan.sigma;
  return out;
}

DissociatedTuple extract_maximal(const PhaseFunction& phi, const Rational& eta, int d_cap) {
  if (eta <= 0) throw input_error("dissociation threshold eta must be positive");
  DissociatedTuple t;
  t.N = phi.N;
  t.eta = eta;
  for (long x = 0; x < phi.N; ++x) {
    std::vector<long> cand = t.elements;
    std::vector<TorusValue> cph = t.phase_values;
    cand.push_back(x);
    cph.push_back(phi.values[static_cast<std::size_t>(x)]);
    if (!is_dissociated(t.N, cand, cph, eta, d_cap + 1).dissociated) continue;
    if (t.d() == d_cap) {
      std::string els;
      for (long e : t.elements) els += (els.empty() ? "" : ",") + std::to_string(e);
      throw cap_error("dissociated tuple exceeds d_cap = " + std::to_string(d_cap) +
                      "; current elements [" + els + "]");
    }
    t.elements = std::move(cand);
    t.phase_values = std::move(cph);
  }
  // Greedy rejections are permanent (a violating sigma survives extension),
  // so the result is maximal; re-verify by attempting every extension anyway.
  for (long x = 0; x < phi.N; ++x) {
    if (std::find(t.elements.begin(), t.elements.end(), x) != t.elements.end()) continue;
    std::vector<long> cand = t.elements;
    std::vector<TorusValue> cph = t.phase_values;
    cand.push_back(x);
    cph.push_back(phi.values[static_cast<std::size_t>(x)]);
    if (is_dissociated(t.N, cand, cph, eta, d_cap + 1).dissociated)
      throw cap_error("maximality re-verification failed at element " + std::to_string(x));
  }
  return t;
}

double fejer_weight(long long z, const Rational& eta) {
  const double e = eta.get_d();
  if (z == 0) return e;
  const double u = kPi * e * static_cast<double>(z);
  const double s = std::sin(u) / u;
  return e * s * s;
}

double fejer_tau(const Rational& eta) {
  if (eta <= 0) throw input_error("eta must be positive");
  const long long zmax = fejer_truncation(eta);
  double sum = fejer_weight(0, eta), comp = 0.0;
  for (long long z = 1; z <= zmax; ++z) {
    const double term = 2.0 * fejer_weight(z, eta) - comp;
    const double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
  }
  return sum;
}

FejerInversionReport fejer_inversion_check(const Rational& eta, long grid_size,
                                           long long truncation) {
  if (eta <= 0 || eta > 1) throw input_error("eta must lie in (0, 1]");
  if (grid_size < 1) throw input_error("grid size must be positive");
  if (truncation < 1) throw input_error("truncation must be positive");
  const double e = eta.get_d();
  FejerInversionReport rep;
  rep.truncation = truncation;
  rep.tail_bound = 2.0 / (kPi * kPi * e * static_cast<double>(truncation));

  std::vector<double> gaps(static_cast<std::size_t>(grid_size), 0.0);
  parallel_for_chunks(static_cast<std::size_t>(grid_size),
                      [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) {
      const double x = static_cast<double>(k) / static_cast<double>(grid_size);
      // symmetric series: F(0) + 2 sum_{z>=1} F(z) cos(2 pi z x)
      double sum = fejer_weight(0, eta), comp = 0.0;
      for (long long z = 1; z <= truncation; ++z) {
        const double term =
            2.0 * fejer_weight(z, eta) * std::cos(2.0 * kPi * static_cast<double>(z) * x) -
            comp;
        const double next = sum + term;
        comp = (next - sum) - term;
        sum = next;
      }
      // periodized tent: for eta <= 1 only x and x - 1 can land in the support
      const double tent =
          std::max(0.0, 1.0 - x / e) + std::max(0.0, 1.0 - (1.0 - x) / e);
      gaps[k] = std::abs(sum - tent);
    }
  });
  for (double g : gaps) rep.max_gap = std::max(rep.max_gap, g);
  return rep;
}

double orthogonality_check(long N, const std::vector<long>& elements,
                           const std::vector<TorusValue>& phase_values, const Rational& eta) {
  if (N < 1) throw input_error("modulus N must be positive");
  if (eta <= 0) throw input_error("eta must be positive");
  if (elements.size() != phase_values.size())
    throw input_error("element and phase lists differ in length");
  const int d = static_cast<int>(elements.size());
  if (d > 12) throw input_error("orthogonality check limited to tuples of length <= 12");
  const long long zmax = fejer_truncation(eta);
  const double tau = fejer_tau(eta);

  double max_dev = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const bool same_a = ((elements[i] - elements[j]) % N) == 0;
      const bool same_point = same_a && phase_values[i] == phase_values[j];
      const double expected = same_point ? 1.0 : 0.0;
      double value = 0.0;  // the exact r-sum vanishes unless a_i = a_j
      if (same_a) {
        const double dphi =
            (phase_values[i] - phase_values[j]).fraction().get_d();
        double re = fejer_weight(0, eta), comp = 0.0;
        for (long long z = 1; z <= zmax; ++z) {
          const double term = 2.0 * fejer_weight(z, eta) *
                                  std::cos(2.0 * kPi * static_cast<double>(z) * dphi) -
                              comp;
          const double next = re + term;
          comp = (next - re) - term;
          re = next;
        }
        value = re / tau;
      }
      max_dev = std::max(max_dev, std::abs(value - expected));
    }
  }
  return max_dev;
}

KsBoundReport ks_bound_report(const PhaseFunction& phi, const Rational& eta, double c1,
                              long z_cap) {
  if (z_cap < 0) throw input_error("z cap must be nonnegative");
  KsBoundReport rep;
  const DissociatedTuple tuple = extract_maximal(phi, eta);
  rep.d_found = tuple.d();
  rep.log_2n = std::log(2.0 * static_cast<double>(phi.N));

  const mpz_class trunc = fejer_truncation_z(eta);
  long long zmax = z_cap;
  if (trunc < z_cap) zmax = trunc.get_si();

  const std::size_t n = static_cast<std::size_t>(zmax) + 1;
  std::vector<double> sups(chunk_count(n), 1.0);
  // z = 0 contributes ||1||_A = 1; z and -z give equal norms.
  parallel_for_chunks(n, [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
    double best = 1.0;
    for (std::size_t z = std::max<std::size_t>(lo, 1); z < hi; ++z) {
      const double norm = algebra_norm(exp_phase(phi, mpz_class(static_cast<long>(z))));
      best = std::max(best, norm * norm);
    }
    sups[chunk] = best;
  });
  rep.sup_norm_sq = 1.0;
  for (double s : sups) rep.sup_norm_sq = std::max(rep.sup_norm_sq, s);
  rep.ratio = static_cast<double>(rep.d_found) / (rep.log_2n * rep.sup_norm_sq);
  rep.pass = rep.ratio <= c1;
  return rep;
}

ApproxResult build_phi_star(const PhaseFunction& phi, const PhiStarConfig& cfg) {
  const long N = phi.N;
  if (N > cfg.n_cap)
    throw cap_error("phase approximation capped at N <= " + std::to_string(cfg.n_cap));

  // eta = N^{-(2d+2)} where d is the tuple length extracted at that eta:
  // iterate to a fixed point.
  auto eta_for = [&](int d) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(N),
                  static_cast<unsigned long>(2 * d + 2));
    Rational r(1);
    r /= Rational(p);
    return r;
  };
  int d = 0;
  Rational eta = eta_for(0);
  DissociatedTuple tuple;
  bool stable = false;
  for (int round = 0; round < cfg.max_eta_rounds; ++round) {
    tuple = extract_maximal(phi, eta, cfg.d_cap);
    if (round > 0 && tuple.d() == d) {
      stable = true;
      break;
    }
    d = tuple.d();
    eta = eta_for(d);
  }
  if (!stable) {
    tuple = extract_maximal(phi, eta, cfg.d_cap);
    if (tuple.d() != d) throw cap_error("eta/d fixed-point iteration did not stabilize");
  }
  tuple.eta = eta;

  ApproxResult res;
  res.d = d;
  res.eta = eta;
  res.tuple = tuple;

  // Simultaneous rational approximation of the tuple phases with K = N^2.
  DirichletResult dir;
  if (d > 0) {
    dir = dirichlet_approx(tuple.phase_values, N * N, cfg.dirichlet);
  } else {
    dir.Q = 1;
    dir.K = N * N;
  }
  res.Q = dir.Q;
  res.approximants = dir.approximants;

  res.phi_star.N = N;
  res.phi_star.values.assign(static_cast<std::size_t>(N), TorusValue());
  res.representations.assign(static_cast<std::size_t>(N), {});

  // Admissibility of a sign pattern is judged against the original phases;
  // phi_star is then assembled from the approximants.
  mpz_class all_dens(1);
  for (const TorusValue& t : phi.values)
    mpz_lcm(all_dens.get_mpz_t(), all_dens.get_mpz_t(), t.fraction().get_den_mpz_t());
  const ScanData sd = make_scan_data(N, tuple.elements, tuple.phase_values, eta, all_dens);
  std::vector<std::string> failures(chunk_count(static_cast<std::size_t>(N)));
  parallel_for_chunks(static_cast<std::size_t>(N),
                      [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
    for (std::size_t xi = lo; xi < hi; ++xi) {
      const long x = static_cast<long>(xi);
      RepresentScan scan(sd, x);
      if (sd.int_path) {
        const Rational& f = phi.values[xi].fraction();
        const mpz_class scaled = f.get_num() * (mpz_class(sd.modulus) / f.get_den());
        scan.target_num = scaled.get_si();
      } else {
        scan.target_phase = phi.values[xi].fraction();
      }
      scan.run();
      if (!scan.found) {
        if (failures[chunk].empty()) failures[chunk] = std::to_string(x);
        continue;
      }
      res.representations[xi] = scan.sigma;
      Rational v(0);
      for (int i = 0; i < sd.d; ++i) {
        if (scan.sigma[static_cast<std::size_t>(i)] == 1)
          v += res.approximants[static_cast<std::size_t>(i)].fraction();
        else if (scan.sigma[static_cast<std::size_t>(i)] == -1)
          v -= res.approximants[static_cast<std::size_t>(i)].fraction();
      }
      res.phi_star.values[xi] = TorusValue(v);
    }
  });
  for (const std::string& f : failures)
    if (!f.empty())
      throw input_error("no sign representation for element " + f +
                        ": tuple maximality violated");

  Rational worst(0);
  for (long x = 0; x < N; ++x) {
    const Rational dev =
        (phi.values[static_cast<std::size_t>(x)] - res.phi_star.values[static_cast<std::size_t>(x)])
            .norm_exact();
    if (dev > worst) worst = dev;
  }
  res.achieved_error = worst;
  res.certificate_bound = Rational(d + 1);
  res.certificate_bound /= Rational(mpz_class(N) * N * mpz_class(static_cast<long>(res.Q)));
  if (res.achieved_error > res.certificate_bound)
    throw input_error("approximation certificate violated: achieved " +
                      rational_string(res.achieved_error) + " > bound " +
                      rational_string(res.certificate_bound));
  res.h_measured = res.achieved_error.get_d() * static_cast<double>(N) *
                   static_cast<double>(res.Q);
  return res;
}

}  // namespace bhlab
