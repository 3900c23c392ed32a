#include "bhlab/limitcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "bhlab/errors.hpp"
#include "bhlab/parallel.hpp"

namespace bhlab {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr long kKappaCap = 128;
constexpr long kC5 = 10;

long reduce(long x, long n) { return ((x % n) + n) % n; }

}  // namespace

TorusValue second_difference_fraction(const PhaseFunction& phi, long x, long y, long z) {
  const long n = phi.N;
  const Rational sum = phi.values[static_cast<std::size_t>(reduce(x + y + z, n))].fraction() -
                       phi.values[static_cast<std::size_t>(reduce(x + y, n))].fraction() -
                       phi.values[static_cast<std::size_t>(reduce(x + z, n))].fraction() +
                       phi.values[static_cast<std::size_t>(reduce(x, n))].fraction();
  return TorusValue(sum);
}

std::complex<double> phi_second_difference(const PhaseFunction& phi, long x, long y, long z) {
  const double f = second_difference_fraction(phi, x, y, z).fraction().get_d();
  return {std::cos(2.0 * kPi * f), std::sin(2.0 * kPi * f)};
}

KappaReport kappa_statistic(const PhaseFunction& phi) {
  const long n = phi.N;
  if (n > kKappaCap)
    throw cap_error("kappa statistic capped at N <= " + std::to_string(kKappaCap));
  KappaReport rep;
  rep.total = static_cast<long long>(n) * n * n;

  // Common denominator keeping 4-term residue combinations inside int64.
  mpz_class lcm_z(1);
  for (const TorusValue& t : phi.values)
    mpz_lcm(lcm_z.get_mpz_t(), lcm_z.get_mpz_t(), t.fraction().get_den_mpz_t());
  const bool int_path = lcm_z.fits_slong_p() && lcm_z.get_si() <= (1LL << 61);

  std::vector<std::int64_t> nums;
  if (int_path) {
    nums.reserve(phi.values.size());
    for (const TorusValue& t : phi.values) {
      const mpz_class scaled = t.fraction().get_num() * (lcm_z / t.fraction().get_den());
      nums.push_back(scaled.get_si());
    }
  }
  const std::int64_t mod = int_path ? lcm_z.get_si() : 0;

  const std::size_t chunks = chunk_count(static_cast<std::size_t>(n));
  std::vector<double> sums(chunks, 0.0);
  std::vector<long long> bads(chunks, 0);
  parallel_for_chunks(static_cast<std::size_t>(n),
                      [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
    double sum = 0.0, comp = 0.0;
    long long bad = 0;
    for (std::size_t x = lo; x < hi; ++x) {
      for (long y = 0; y < n; ++y) {
        const long xy = reduce(static_cast<long>(x) + y, n);
        for (long z = 0; z < n; ++z) {
          const long xz = reduce(static_cast<long>(x) + z, n);
          const long xyz = reduce(xy + z, n);
          double dist;  // ||mixed difference||_T
          bool nonzero;
          if (int_path) {
            std::int64_t s = nums[static_cast<std::size_t>(xyz)] -
                             nums[static_cast<std::size_t>(xy)] -
                             nums[static_cast<std::size_t>(xz)] + nums[x];
            s %= mod;
            if (s < 0) s += mod;
            nonzero = s != 0;
            const std::int64_t near = std::min(s, mod - s);
            dist = static_cast<double>(near) / static_cast<double>(mod);
          } else {
            const TorusValue tv = second_difference_fraction(phi, static_cast<long>(x), y, z);
            nonzero = !tv.is_zero();
            dist = tv.norm();
          }
          if (nonzero) ++bad;
          // |e(t) - 1| = 2 |sin(pi t)|
          const double term = 2.0 * std::abs(std::sin(kPi * dist)) - comp;
          const double next = sum + term;
          comp = (next - sum) - term;
          sum = next;
        }
      }
    }
    sums[chunk] = sum;
    bads[chunk] = bad;
  });
  double total = 0.0, comp = 0.0;
  for (double s : sums) {
    const double term = s - comp;
    const double next = total + term;
    comp = (next - total) - term;
    total = next;
  }
  for (long long b : bads) rep.bad_triples += b;
  rep.kappa = total / static_cast<double>(rep.total);
  return rep;
}

TripleCheckReport bad_triple_inequality_check(const PhaseFunction& phi_star,
                                              const std::vector<std::uint32_t>& gamma,
                                              const std::vector<std::uint32_t>& w,
                                              const Rational& eta, double hypothesis_factor) {
  const long n = phi_star.N;
  if (eta <= 0) throw input_error("eta must be positive");
  if (hypothesis_factor <= 0) throw input_error("hypothesis factor must be positive");

  std::vector<std::uint32_t> gs = gamma, ws = w;
  std::sort(gs.begin(), gs.end());
  gs.erase(std::unique(gs.begin(), gs.end()), gs.end());
  std::sort(ws.begin(), ws.end());
  ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
  std::vector<std::uint32_t> sym;
  std::set_symmetric_difference(gs.begin(), gs.end(), ws.begin(), ws.end(),
                                std::back_inserter(sym));
  const long long symdiff = static_cast<long long>(sym.size());

  // hypothesis: symdiff <= hypothesis_factor * eta * N, exactly (the factor
  // converts exactly from double)
  Rational hyp(hypothesis_factor);
  hyp *= eta;
  hyp *= n;
  hyp.canonicalize();
  if (Rational(mpz_class(static_cast<long>(symdiff))) > hyp)
    throw input_error("symmetric difference " + std::to_string(symdiff) +
                      " exceeds the hypothesis bound " + rational_string(hyp));

  TripleCheckReport rep;
  rep.symdiff = symdiff;
  rep.hypothesis_bound = hyp.get_d();
  const KappaReport kr = kappa_statistic(phi_star);
  rep.bad_triples = kr.bad_triples;
  // count <= 10 eta N^3, exact: count * den <= 10 * num * N^3
  Rational budget = Rational(kC5) * eta;
  budget *= Rational(mpz_class(n) * n * n);
  budget.canonicalize();
  rep.bound = budget.get_d();
  rep.pass = Rational(mpz_class(static_cast<long>(rep.bad_triples))) <= budget;
  return rep;
}

AffineFit detect_affine(const PhaseFunction& phi, double tolerance) {
  const long n = phi.N;
  if (tolerance < 0) throw input_error("tolerance must be nonnegative");
  AffineFit fit;
  fit.t = phi.values[0];

  bool have = false;
  Rational best_dev;
  long best_w = 0;
  // frequencies in (-N/2, N/2], visited 0, 1, -1, 2, -2, ...
  std::vector<long> order;
  order.push_back(0);
  for (long k = 1;; ++k) {
    const bool pos_in = 2 * k <= n;
    const bool neg_in = 2 * k < n;
    if (!pos_in && !neg_in) break;
    if (pos_in) order.push_back(k);
    if (neg_in) order.push_back(-k);
  }

  for (long wfreq : order) {
    Rational dev(0);
    for (long x = 0; x < n; ++x) {
      Rational lin(wfreq * x, n);
      lin.canonicalize();
      lin += fit.t.fraction();
      const Rational d =
          (phi.values[static_cast<std::size_t>(x)] - TorusValue(lin)).norm_exact();
      if (d > dev) dev = d;
    }
    if (!have || dev < best_dev) {  // strictly smaller keeps; earlier wins ties
      have = true;
      best_dev = dev;
      best_w = wfreq;
    }
  }
  fit.w = best_w;
  fit.max_deviation = best_dev;
  fit.found = best_dev.get_d() <= tolerance;
  return fit;
}

}  // namespace bhlab
