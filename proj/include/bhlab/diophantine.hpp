#pragma once

#include <cstdint>
#include <vector>

#include "bhlab/rational.hpp"

namespace bhlab {

// Simultaneous rational approximation: the smallest Q >= 1 with
//   max_i || Q * a_i || <= 1/K        (closed boundary, exact arithmetic),
// together with the approximants p_i/Q = round(Q * a_i)/Q.  The classical
// box argument guarantees such a Q <= K^d exists; rounding ties are broken
// toward the candidate whose canonical representative in [0,1) has the
// smaller numerator.
struct DirichletResult {
  long long Q = 1;
  std::vector<TorusValue> approximants;
  Rational max_error_exact;  // max_i |a_i - p_i/Q| as a circle distance
  double max_error = 0.0;
  long K = 0;
  int d = 0;
};

struct DirichletCaps {
  // Upper bound on the Q scan.  The guaranteed bound K^d is used when it is
  // smaller; a scan that exhausts the budget without finding an admissible Q
  // raises cap_error.  2^40 keeps the d*log2(K) <= 40 contract while letting
  // well-behaved instances far beyond it (whose true Q is small) succeed.
  long long scan_budget = 1LL << 40;
};

DirichletResult dirichlet_approx(const std::vector<TorusValue>& a, long K,
                                 const DirichletCaps& caps = {});

}  // namespace bhlab
