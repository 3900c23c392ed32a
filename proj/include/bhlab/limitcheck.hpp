#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "bhlab/phase.hpp"
#include "bhlab/rational.hpp"

namespace bhlab {

// The mixed second difference phi(x+y+z) - phi(x+y) - phi(x+z) + phi(x),
// computed exactly in rationals mod 1.  Vanishes identically iff phi is
// affine on the grid.
TorusValue second_difference_fraction(const PhaseFunction& phi, long x, long y, long z);

// exp(2 pi i (phi(x+y+z) - phi(x+y) - phi(x+z) + phi(x))), the inner
// combination evaluated exactly before exponentiating.
std::complex<double> phi_second_difference(const PhaseFunction& phi, long x, long y, long z);

struct KappaReport {
  double kappa = 0.0;         // mean over all N^3 triples of |Phi - 1|
  long long bad_triples = 0;  // triples whose mixed difference is nonzero (exact)
  long long total = 0;        // N^3
};

// Exact enumeration of all N^3 triples; kappa is the mean of |Phi - 1| and
// bad_triples counts exact nonzero mixed differences.  Capped at N <= 128.
KappaReport kappa_statistic(const PhaseFunction& phi);

struct TripleCheckReport {
  long long bad_triples = 0;
  double bound = 0.0;      // 10 eta N^3
  bool pass = false;       // bad_triples <= 10 eta N^3, compared exactly
  long long symdiff = 0;   // |Gamma triangle W|
  double hypothesis_bound = 0.0;  // hypothesis_factor * eta * N
};

// Checks the counting consequence of almost-additivity: when
// |Gamma triangle W| <= hypothesis_factor * eta * N (exactly), the triples
// (x, y, z) whose mixed second difference of phi_star is nonzero number at
// most 10 eta N^3.  Gamma and W are index sets over any common universe; only
// their symmetric difference enters.  Throws input_error when the hypothesis
// fails.  The factor defaults to 2 (the form produced by graph/coset fitting;
// the tighter statement uses 1).
TripleCheckReport bad_triple_inequality_check(const PhaseFunction& phi_star,
                                              const std::vector<std::uint32_t>& gamma,
                                              const std::vector<std::uint32_t>& w,
                                              const Rational& eta,
                                              double hypothesis_factor = 2.0);

struct AffineFit {
  bool found = false;
  long w = 0;     // frequency, in (-N/2, N/2]
  TorusValue t;   // offset phi(0)
  Rational max_deviation;  // max_x ||phi(x) - (w x / N + t)||, exact
};

// Scans every integer frequency w in (-N/2, N/2] (order 0, 1, -1, 2, -2, ...)
// with offset t = phi(0), keeping the strictly smallest exact maximal
// deviation; found is set when that deviation is <= tolerance.
AffineFit detect_affine(const PhaseFunction& phi, double tolerance);

}  // namespace bhlab
