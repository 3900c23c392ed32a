#include "bhlab/diophantine.hpp"

#include <cstdlib>

#include "bhlab/errors.hpp"

namespace bhlab {

namespace {

// round(t/q) with ties broken toward the candidate m for which (m mod Q)/Q,
// reduced into [0,1), has the smaller numerator.
mpz_class round_quotient(const mpz_class& t, const mpz_class& q, const mpz_class& Q) {
  mpz_class m0;
  mpz_fdiv_q(m0.get_mpz_t(), t.get_mpz_t(), q.get_mpz_t());
  const mpz_class frac = t - m0 * q;
  const mpz_class diff = 2 * frac - q;
  if (diff < 0) return m0;
  if (diff > 0) return m0 + 1;
  // Exact tie: compare the two canonical approximants.
  const auto numerator_of = [&](const mpz_class& m) {
    const mpz_class mm = m % Q >= 0 ? mpz_class(m % Q) : mpz_class(m % Q + Q);
    Rational r(mm, Q);
    r.canonicalize();
    return r.get_num();
  };
  return numerator_of(m0) <= numerator_of(m0 + 1) ? m0 : mpz_class(m0 + 1);
}

}  // namespace

DirichletResult dirichlet_approx(const std::vector<TorusValue>& a, long K,
                                 const DirichletCaps& caps) {
  const int d = static_cast<int>(a.size());
  if (d == 0) throw input_error("dirichlet_approx: need at least one value");
  if (K < 1) throw input_error("dirichlet_approx: K must be >= 1");

  // Scan bound: the pigeonhole guarantee K^d, clamped to the budget.
  mpz_class guarantee;
  mpz_ui_pow_ui(guarantee.get_mpz_t(), static_cast<unsigned long>(K),
                static_cast<unsigned long>(d));
  mpz_class bound = guarantee;
  const mpz_class budget(static_cast<long>(caps.scan_budget));
  if (bound > budget) bound = budget;
  const long long scan_end = bound.get_si() > 0 ? bound.get_si() : 1;

  // Residues r_i = Q * p_i mod q_i advance by p_i per step; admissibility of
  // Q is min(r_i, q_i - r_i) * K <= q_i, all exact.  int64 fast path when
  // every product stays far from overflow, mpz otherwise.
  std::vector<mpz_class> nums(d), dens(d);
  bool small = true;
  for (int i = 0; i < d; ++i) {
    nums[i] = a[i].fraction().get_num();
    dens[i] = a[i].fraction().get_den();
    if (!dens[i].fits_slong_p() || dens[i].get_si() > (1LL << 31)) small = false;
  }
  if (K > (1L << 31)) small = false;

  long long found = -1;
  if (small) {
    std::vector<long long> p(d), q(d), r(d, 0);
    for (int i = 0; i < d; ++i) {
      p[i] = nums[i].get_si();
      q[i] = dens[i].get_si();
    }
    for (long long Q = 1; Q <= scan_end; ++Q) {
      bool ok = true;
      for (int i = 0; i < d; ++i) {
        r[i] += p[i];
        if (r[i] >= q[i]) r[i] -= q[i];
        const long long dist = r[i] < q[i] - r[i] ? r[i] : q[i] - r[i];
        if (dist * K > q[i]) ok = false;
      }
      if (ok) {
        found = Q;
        break;
      }
    }
  } else {
    std::vector<mpz_class> r(d, mpz_class(0));
    for (long long Q = 1; Q <= scan_end; ++Q) {
      bool ok = true;
      for (int i = 0; i < d; ++i) {
        r[i] += nums[i];
        if (r[i] >= dens[i]) r[i] -= dens[i];
        const mpz_class dist = r[i] < dens[i] - r[i] ? r[i] : dens[i] - r[i];
        if (dist * K > dens[i]) ok = false;
      }
      if (ok) {
        found = Q;
        break;
      }
    }
  }

  if (found < 0)
    throw cap_error("dirichlet_approx: no admissible Q within scan budget " +
                    std::to_string(scan_end));

  DirichletResult res;
  res.Q = found;
  res.K = K;
  res.d = d;
  res.max_error_exact = Rational(0);
  for (int i = 0; i < d; ++i) {
    const mpz_class zq(static_cast<long>(found));
    const mpz_class t = zq * nums[i];
    const mpz_class m = round_quotient(t, dens[i], zq);
    mpz_class mm = m % zq;
    if (mm < 0) mm += zq;
    Rational approx(mm, zq);
    approx.canonicalize();
    res.approximants.emplace_back(approx);
    const Rational err = (TorusValue(a[i].fraction() - approx)).norm_exact();
    if (err > res.max_error_exact) res.max_error_exact = err;
  }
  res.max_error = res.max_error_exact.get_d();
  return res;
}

}  // namespace bhlab
