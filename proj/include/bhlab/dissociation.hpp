#pragma once

#include <cstdint>
#include <vector>

#include "bhlab/diophantine.hpp"
#include "bhlab/phase.hpp"
#include "bhlab/rational.hpp"

namespace bhlab {

// A tuple a_1, ..., a_d of grid points of T_N (stored as integers k, meaning
// k/N) together with the exact phase values phi(a_i), such that no nonzero
// sign pattern sigma in {-1,0,1}^d has both
//   sigma . a = 0 in T_N   and   ||sigma . phi(a)||_T <= eta   (closed, exact).
struct DissociatedTuple {
  long N = 0;
  std::vector<long> elements;
  std::vector<TorusValue> phase_values;
  Rational eta;
  int d() const { return static_cast<int>(elements.size()); }
};

struct DissociationCheck {
  bool dissociated = true;
  std::vector<int> witness;  // first violating sigma in lexicographic order
};

inline constexpr int kDissociationDCap = 22;

// Exhaustive 3^d check.  The witness, when present, is the lexicographically
// first violating sigma (component order -1 < 0 < 1).
DissociationCheck is_dissociated(long N, const std::vector<long>& elements,
                                 const std::vector<TorusValue>& phase_values,
                                 const Rational& eta, int d_cap = kDissociationDCap);

// Greedy growth over candidates x = 0, 1/N, 2/N, ...; an element joins when
// the extended tuple stays dissociated.  Rejections are permanent (violations
// survive extension), so the greedy result is maximal; maximality is still
// re-verified by attempting every extension.
DissociatedTuple extract_maximal(const PhaseFunction& phi, const Rational& eta,
                                 int d_cap = kDissociationDCap);

// Fejer weights: F(0) = eta, F(z) = eta * (sin(pi eta z)/(pi eta z))^2; their
// Fourier series is the tent max(0, 1 - ||x||_T/eta).
double fejer_weight(long long z, const Rational& eta);

// tau = sum over |z| <= (1/2) eta^{-1} of F(z); always >= 2/pi^2.
double fejer_tau(const Rational& eta);

struct FejerInversionReport {
  double max_gap = 0.0;     // sup over the x grid of |truncated sum - tent|
  double tail_bound = 0.0;  // 2 / (pi^2 eta Z)
  long long truncation = 0;
};

// Compares the truncated series sum_{|z|<=Z} F(z) e(zx) against the
// (periodised) tent on the grid {k/grid_size}.
FejerInversionReport fejer_inversion_check(const Rational& eta, long grid_size,
                                           long long truncation);

// Pairwise orthogonality of lambda_a(r, z) = e(a r + phi(a) z) against the
// probability measure mu({r, z}) = F(z) / (tau N) supported on
// Z_N x {|z| <= eta^{-1}/2}:
//   inner(a_i, a_j) = integral of lambda_{a_i} conj(lambda_{a_j}) d mu.
// The r-sum is evaluated exactly (it vanishes unless a_i = a_j), leaving
// (1/tau) sum_z F(z) e(z (phi_i - phi_j)); returns max |inner - delta_ij|.
double orthogonality_check(long N, const std::vector<long>& elements,
                           const std::vector<TorusValue>& phase_values,
                           const Rational& eta);

// Dimension-bound calibration: d <= C1 * log(2N) * sup_z ||e_z||_A^2.
struct KsBoundReport {
  int d_found = 0;
  double sup_norm_sq = 0.0;
  double log_2n = 0.0;  // natural log of 2N
  double ratio = 0.0;   // d / (log(2N) * sup_norm_sq)
  bool pass = false;
};
KsBoundReport ks_bound_report(const PhaseFunction& phi, const Rational& eta, double c1,
                              long z_cap = 4096);

// Full rational-approximation pipeline output: phi_star maps into T_Q, each
// x in T_N carries the sign vector sigma^x with x = sigma^x . a, and the
// certificate achieved_error <= (d+1)/(N^2 Q) is checked exactly.
struct ApproxResult {
  long long Q = 1;
  PhaseFunction phi_star;
  std::vector<std::vector<int>> representations;  // per x, length d
  Rational achieved_error;
  Rational certificate_bound;  // (d+1)/(N^2 Q)
  int d = 0;
  Rational eta;
  DissociatedTuple tuple;
  std::vector<TorusValue> approximants;  // phi~ values for the tuple
  double h_measured = 0.0;               // achieved_error * N * Q
};

struct PhiStarConfig {
  int d_cap = kDissociationDCap;
  long n_cap = 64;
  int max_eta_rounds = 24;
  DirichletCaps dirichlet;
};

ApproxResult build_phi_star(const PhaseFunction& phi, const PhiStarConfig& cfg = {});

}  // namespace bhlab
