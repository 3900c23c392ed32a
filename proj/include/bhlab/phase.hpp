#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bhlab/fourier.hpp"
#include "bhlab/rational.hpp"

namespace bhlab {

// A map T_N -> R/Z sampled on the grid {0, 1/N, ..., (N-1)/N}, with every
// value held exactly.  values[k] = phi(k/N).
struct PhaseFunction {
  long N = 0;
  std::vector<TorusValue> values;
};

// phi(x) = w*x + t with integer winding w.
PhaseFunction make_linear_phase(long w, const Rational& t, long N);

// Piecewise-linear phase from breakpoints (ascending, starting at 0, each on
// the 1/N grid) with integer slopes; phi(0) = 0 and each grid step adds the
// active slope / N, so phi matches the segment formula pointwise.
struct PwlSegment {
  Rational start;  // breakpoint in [0, 1)
  long slope;
};
PhaseFunction make_piecewise_linear_phase(const std::vector<PwlSegment>& segments, long N);

// phi(k/N) = k^2/N mod 1.
PhaseFunction make_quadratic_phase(long N);

// Independent uniform grid values from a named seeded 64-bit generator
// (mt19937_64 with rejection sampling, so the stream is platform-stable).
PhaseFunction make_random_phase(std::uint64_t seed, long N);

// Mini-grammar used by the CLI and bindings:
//   linear:w,t | pwl:x1=s1,x2=s2,... | quadratic | random:seed | file:PATH
// where t, xi are rational literals and file:PATH reads a JSON array of
// rational strings of length N.
PhaseFunction parse_phase_spec(std::string_view spec, long N);

// e_z(x) = exp(-2*pi*i * z * phi(x)) as a dense function on Z_N; the product
// z*phi(x) is reduced mod 1 exactly before rendering.
DenseFunction exp_phase(const PhaseFunction& phi, const mpz_class& z);

struct ProfileEntry {
  long z;
  double norm;
};
struct GrowthProfile {
  std::vector<ProfileEntry> entries;  // z = 1..z_max in order
};

// ||e_z||_A for z = 1..z_max.
GrowthProfile norm_profile(const PhaseFunction& phi, long z_max);

// Least-squares fit of norm(z) ~ C * (log(3+z))^c in log-log coordinates.
// residual is the root-mean-square misfit in norm units.  Profiles that are
// constant to machine precision short-circuit to (C=norm, c=0, residual=0).
struct GrowthFit {
  double C = 0.0;
  double c = 0.0;
  double residual = 0.0;
  bool degenerate = false;
};
GrowthFit fit_growth(const GrowthProfile& profile);

// Indicator of the graph {(x, phi(x))} inside Z_N x Z_Q.  Every value of phi
// must have denominator dividing Q.
DenseFunction graph_indicator(const PhaseFunction& phi, long Q);

// Exact decomposition of the graph norm into row norms:
//   ||1_Gamma||_A = (1/Q) * sum_{s=1..Q} ||exp(-2 pi i s phi)||_A.
// Returns both sides and their absolute gap (pure floating-point noise).
struct GraphNormReport {
  double graph_norm = 0.0;
  double row_average = 0.0;
  double gap = 0.0;
};
GraphNormReport graph_norm_identity_check(const PhaseFunction& phi, long Q);

}  // namespace bhlab
