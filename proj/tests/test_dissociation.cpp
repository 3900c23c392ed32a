#include "doctest.h"

#include <cmath>
#include <vector>

#include "bhlab/dissociation.hpp"
#include "bhlab/errors.hpp"
#include "bhlab/phase.hpp"

using namespace bhlab;

namespace {

std::vector<TorusValue> grid_phases(const std::vector<long>& elements, long n) {
  std::vector<TorusValue> out;
  for (long a : elements) out.emplace_back(a, n);
  return out;
}

}  // namespace

TEST_CASE("independent elements are dissociated regardless of phases") {
  const std::vector<long> elems{1, 2, 4};
  const DissociationCheck chk =
      is_dissociated(8, elems, grid_phases(elems, 8), Rational(1, 4));
  CHECK(chk.dissociated);
  CHECK(chk.witness.empty());
}

TEST_CASE("a vanishing signed combination is caught with the lex-first witness") {
  const std::vector<long> elems{2, 4, 6};  // 2 + 4 - 6 = 0 in Z_8, phases match
  const DissociationCheck chk =
      is_dissociated(8, elems, grid_phases(elems, 8), Rational(1, 16));
  CHECK_FALSE(chk.dissociated);
  CHECK(chk.witness == std::vector<int>{-1, -1, 1});  // -(2) - (4) + (6)
}

TEST_CASE("the phase leg of the test is exact and closed") {
  // 1 + 7 = 8 = 0 in Z_8; phases 1/8 + 7/8 = 1 = 0 on the torus
  const std::vector<long> elems{1, 7};
  CHECK_FALSE(is_dissociated(8, elems, grid_phases(elems, 8), Rational(1, 100)).dissociated);
  // same elements, phases perturbed off the relation: || 1/8 + 6/8 || = 1/8
  const std::vector<TorusValue> phases{TorusValue(1, 8), TorusValue(6, 8)};
  CHECK(is_dissociated(8, elems, phases, Rational(1, 16)).dissociated);
  // closed comparison: eta exactly 1/8 re-admits the violation
  CHECK_FALSE(is_dissociated(8, elems, phases, Rational(1, 8)).dissociated);
}

TEST_CASE("validation of is_dissociated inputs") {
  CHECK_THROWS_AS(is_dissociated(8, {1}, {}, Rational(1, 4)), input_error);
  CHECK_THROWS_AS(is_dissociated(8, {1}, grid_phases({1}, 8), Rational(-1, 4)), input_error);
  // elements are grid points of T_N and reduce mod N
  CHECK(is_dissociated(8, {9}, grid_phases({1}, 8), Rational(1, 4)).dissociated ==
        is_dissociated(8, {1}, grid_phases({1}, 8), Rational(1, 4)).dissociated);
  CHECK_THROWS_AS(is_dissociated(0, {}, {}, Rational(1, 4)), input_error);
  std::vector<long> many;
  for (long i = 0; i < 23; ++i) many.push_back(i);
  CHECK_THROWS_AS(is_dissociated(64, many, grid_phases(many, 64), Rational(1, 4), 22),
                  cap_error);
}

TEST_CASE("greedy extraction on a linear phase finds the binary scale") {
  const PhaseFunction phi = make_linear_phase(1, Rational(0), 16);
  const DissociatedTuple tuple = extract_maximal(phi, Rational(1, 32));
  CHECK(tuple.elements == std::vector<long>{1, 2, 4, 8});
  CHECK(tuple.d() == 4);

  // maximality: every extension violates dissociativity
  for (long x = 0; x < 16; ++x) {
    std::vector<long> ext = tuple.elements;
    std::vector<TorusValue> phx = tuple.phase_values;
    ext.push_back(x);
    phx.push_back(phi.values[x]);
    CHECK_FALSE(is_dissociated(16, ext, phx, tuple.eta).dissociated);
  }
}

TEST_CASE("extraction on the trivial grid gives the empty tuple") {
  const PhaseFunction phi = make_linear_phase(0, Rational(0), 1);
  CHECK(extract_maximal(phi, Rational(1, 4)).d() == 0);
}

TEST_CASE("extraction respects the length cap") {
  const PhaseFunction phi = make_linear_phase(1, Rational(0), 16);
  CHECK_THROWS_AS(extract_maximal(phi, Rational(1, 32), 2), cap_error);
}

TEST_CASE("Fejer weights and their mass") {
  const Rational half(1, 2);
  CHECK(fejer_weight(0, half) == doctest::Approx(0.5));
  CHECK(fejer_weight(3, half) == fejer_weight(-3, half));
  // tau(1/2) = F(0) + 2 F(1) = 1/2 + 4/pi^2
  const double pi = std::acos(-1.0);
  CHECK(fejer_tau(half) == doctest::Approx(0.5 + 4.0 / (pi * pi)).epsilon(1e-12));
  for (const Rational& eta : {Rational(1, 3), Rational(1, 7), Rational(1, 64)})
    CHECK(fejer_tau(eta) >= 2.0 / (pi * pi) - 1e-12);
}

TEST_CASE("truncated Fejer series approaches the tent within the tail bound") {
  for (const Rational& eta : {Rational(1, 2), Rational(1, 4)}) {
    const FejerInversionReport rep = fejer_inversion_check(eta, 128, 2000);
    CHECK(rep.truncation == 2000);
    CHECK(rep.max_gap <= rep.tail_bound);
    // and the bound itself is 2/(pi^2 eta Z)
    const double pi = std::acos(-1.0);
    CHECK(rep.tail_bound ==
          doctest::Approx(2.0 / (pi * pi * eta.get_d() * 2000.0)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(fejer_inversion_check(Rational(3, 2), 64, 100), input_error);
}

TEST_CASE("lambda functions are near-orthogonal under the Fejer measure") {
  const PhaseFunction phi = make_linear_phase(1, Rational(0), 8);
  const DissociatedTuple tuple = extract_maximal(phi, Rational(1, 16));
  REQUIRE(tuple.d() >= 2);
  CHECK(orthogonality_check(tuple.N, tuple.elements, tuple.phase_values, tuple.eta) <= 1e-8);

  std::vector<long> many;
  for (long i = 0; i < 13; ++i) many.push_back(i);
  CHECK_THROWS_AS(
      orthogonality_check(16, many, grid_phases(many, 16), Rational(1, 1000)),
      input_error);
}

TEST_CASE("dimension calibration on the linear phase") {
  const KsBoundReport rep =
      ks_bound_report(make_linear_phase(1, Rational(0), 64), Rational(1, 128), 2.0);
  CHECK(rep.d_found == 6);
  CHECK(rep.sup_norm_sq == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.log_2n == doctest::Approx(std::log(128.0)).epsilon(1e-12));
  CHECK(rep.ratio == doctest::Approx(6.0 / std::log(128.0)).epsilon(1e-6));
  CHECK(rep.pass);
}

TEST_CASE("build_phi_star recovers a grid phase exactly") {
  const PhaseFunction phi = make_linear_phase(1, Rational(0), 4);
  const ApproxResult res = build_phi_star(phi);
  CHECK(res.d == 2);
  CHECK(res.tuple.elements == std::vector<long>{1, 2});
  CHECK(res.eta == Rational(1, 4096));  // 1/N^(2d+2) at the fixed point
  CHECK(res.Q == 4);
  CHECK(res.achieved_error == 0);
  CHECK(res.h_measured == 0.0);
  CHECK(res.certificate_bound == Rational(3, 64));  // (d+1)/(N^2 Q)
  REQUIRE(res.phi_star.values.size() == 4);
  for (int x = 0; x < 4; ++x) CHECK(res.phi_star.values[x] == phi.values[x]);
  // each sign vector is the lexicographically first (-1 < 0 < 1) pattern with
  // sigma . a = x in Z_N and || sigma . phi(a) - phi(x) || <= eta, exactly
  for (long x = 0; x < 4; ++x) {
    std::vector<int> expect;
    for (int s0 = -1; s0 <= 1 && expect.empty(); ++s0)
      for (int s1 = -1; s1 <= 1 && expect.empty(); ++s1) {
        const long sum = s0 * res.tuple.elements[0] + s1 * res.tuple.elements[1];
        if (((sum - x) % 4 + 4) % 4 != 0) continue;
        const TorusValue combo =
            res.tuple.phase_values[0].times(s0) + res.tuple.phase_values[1].times(s1);
        if ((combo - phi.values[static_cast<std::size_t>(x)]).norm_exact() <= res.eta)
          expect = {s0, s1};
      }
    REQUIRE_FALSE(expect.empty());
    CHECK(res.representations[static_cast<std::size_t>(x)] == expect);
  }
}

TEST_CASE("build_phi_star representations reconstruct phi_star") {
  const PhaseFunction phi = make_random_phase(3, 8);
  const ApproxResult res = build_phi_star(phi);
  CHECK(res.achieved_error <= res.certificate_bound);
  for (long x = 0; x < 8; ++x) {
    TorusValue acc;
    for (int j = 0; j < res.d; ++j)
      acc = acc + res.approximants[static_cast<std::size_t>(j)].times(
                      res.representations[static_cast<std::size_t>(x)][static_cast<std::size_t>(j)]);
    CHECK(acc == res.phi_star.values[static_cast<std::size_t>(x)]);
    // phi_star lands on the 1/Q grid
    CHECK(mpz_class(static_cast<long>(res.Q)) %
              res.phi_star.values[static_cast<std::size_t>(x)].fraction().get_den() ==
          0);
    // the sign vector also represents x itself in Z_N
    long sum = 0;
    for (int j = 0; j < res.d; ++j)
      sum += res.representations[static_cast<std::size_t>(x)][static_cast<std::size_t>(j)] *
             res.tuple.elements[static_cast<std::size_t>(j)];
    CHECK(((sum % 8) + 8) % 8 == x);
  }
}

TEST_CASE("build_phi_star enforces the grid-size cap") {
  CHECK_THROWS_AS(build_phi_star(make_linear_phase(1, Rational(0), 128)), cap_error);
}
