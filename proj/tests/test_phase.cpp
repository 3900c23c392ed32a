#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <vector>

#include "bhlab/errors.hpp"
#include "bhlab/fourier.hpp"
#include "bhlab/phase.hpp"

using namespace bhlab;

TEST_CASE("linear phase values") {
  const PhaseFunction phi = make_linear_phase(2, Rational(0), 4);
  REQUIRE(phi.values.size() == 4);
  CHECK(phi.values[0].is_zero());
  CHECK(phi.values[1].fraction() == Rational(1, 2));
  CHECK(phi.values[2].is_zero());
  CHECK(phi.values[3].fraction() == Rational(1, 2));

  const PhaseFunction aff = make_linear_phase(1, parse_rational("3/10"), 5);
  CHECK(aff.values[0].fraction() == Rational(3, 10));
  CHECK(aff.values[2].fraction() == Rational(7, 10));  // 2/5 + 3/10
}

TEST_CASE("quadratic phase values") {
  const PhaseFunction q3 = make_quadratic_phase(3);
  CHECK(q3.values[0].is_zero());
  CHECK(q3.values[1].fraction() == Rational(1, 3));
  CHECK(q3.values[2].fraction() == Rational(1, 3));
  const PhaseFunction q5 = make_quadratic_phase(5);
  CHECK(q5.values[3].fraction() == Rational(4, 5));  // 9/5 mod 1
}

TEST_CASE("piecewise-linear phase accumulates slopes per grid step") {
  std::vector<PwlSegment> segs{{Rational(0), 1}, {parse_rational("1/2"), 2}};
  const PhaseFunction phi = make_piecewise_linear_phase(segs, 8);
  const std::vector<Rational> want{Rational(0),      Rational(1, 8), Rational(1, 4),
                                   Rational(3, 8),   Rational(1, 2), Rational(3, 4),
                                   Rational(0),      Rational(1, 4)};
  for (int i = 0; i < 8; ++i) CHECK(phi.values[i].fraction() == want[i]);
}

TEST_CASE("piecewise-linear validation") {
  // breakpoints must start at 0, ascend, and sit on the grid
  CHECK_THROWS_AS(
      make_piecewise_linear_phase({{parse_rational("1/4"), 1}}, 8), input_error);
  CHECK_THROWS_AS(make_piecewise_linear_phase(
                      {{Rational(0), 1}, {parse_rational("1/3"), 2}}, 8),
                  input_error);
  CHECK_THROWS_AS(make_piecewise_linear_phase(
                      {{Rational(0), 1}, {parse_rational("1/2"), 2},
                       {parse_rational("1/4"), 1}}, 8),
                  input_error);
}

TEST_CASE("random phase is deterministic and on the grid") {
  const PhaseFunction a = make_random_phase(42, 64);
  const PhaseFunction b = make_random_phase(42, 64);
  const PhaseFunction c = make_random_phase(43, 64);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  for (const TorusValue& v : a.values) CHECK(v.fraction().get_den() <= 64);
}

TEST_CASE("phase spec mini-grammar") {
  CHECK(parse_phase_spec("linear:2,0", 4).values == make_linear_phase(2, Rational(0), 4).values);
  CHECK(parse_phase_spec("linear:1,3/10", 5).values ==
        make_linear_phase(1, Rational(3, 10), 5).values);
  CHECK(parse_phase_spec("quadratic", 7).values == make_quadratic_phase(7).values);
  CHECK(parse_phase_spec("random:42", 16).values == make_random_phase(42, 16).values);
  CHECK(parse_phase_spec("pwl:0=1,1/2=2", 8).values ==
        make_piecewise_linear_phase({{Rational(0), 1}, {Rational(1, 2), 2}}, 8).values);

  const char* path = "phase_spec_test.json";
  {
    std::ofstream f(path);
    f << "[\"0\", \"1/4\", \"1/2\", \"3/4\"]\n";
  }
  const PhaseFunction file_phi = parse_phase_spec(std::string("file:") + path, 4);
  CHECK(file_phi.values == make_linear_phase(1, Rational(0), 4).values);
  std::remove(path);

  CHECK_THROWS_AS(parse_phase_spec("bogus", 4), input_error);
  CHECK_THROWS_AS(parse_phase_spec("linear:", 4), input_error);
  CHECK_THROWS_AS(parse_phase_spec("file:/nonexistent/x.json", 4), input_error);
}

TEST_CASE("exp_phase renders e(-2 pi i z phi) exactly on the grid") {
  const PhaseFunction phi = make_linear_phase(1, Rational(0), 4);
  const DenseFunction e1 = exp_phase(phi, 1);
  REQUIRE(e1.group.order() == 4);
  CHECK(std::abs(e1.values[0] - std::complex<double>(1, 0)) <= 1e-15);
  CHECK(std::abs(e1.values[1] - std::complex<double>(0, -1)) <= 1e-15);
  CHECK(std::abs(e1.values[2] - std::complex<double>(-1, 0)) <= 1e-15);
  CHECK(std::abs(e1.values[3] - std::complex<double>(0, 1)) <= 1e-15);
  // z reduces through the exact torus product: z=5 acts like z=1
  const DenseFunction e5 = exp_phase(phi, 5);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(e5.values[i] - e1.values[i]) <= 1e-15);
}

TEST_CASE("norm profile of a linear phase is flat at 1") {
  const GrowthProfile prof = norm_profile(make_linear_phase(3, Rational(1, 8), 32), 24);
  REQUIRE(prof.entries.size() == 24);
  for (const ProfileEntry& e : prof.entries) {
    CHECK(std::abs(e.norm - 1.0) <= 1e-9);
  }
  CHECK(prof.entries.front().z == 1);
  CHECK(prof.entries.back().z == 24);
}

TEST_CASE("norm profile is translation invariant") {
  const PhaseFunction base = make_quadratic_phase(17);
  PhaseFunction shifted = base;
  const TorusValue t(3, 10);
  for (TorusValue& v : shifted.values) v = v + t;
  const GrowthProfile a = norm_profile(base, 16);
  const GrowthProfile b = norm_profile(shifted, 16);
  for (std::size_t i = 0; i < a.entries.size(); ++i)
    CHECK(std::abs(a.entries[i].norm - b.entries[i].norm) <= 1e-9);
}

TEST_CASE("quadratic phase norms are Gauss sums") {
  const GrowthProfile prof = norm_profile(make_quadratic_phase(17), 16);
  for (const ProfileEntry& e : prof.entries)
    CHECK(std::abs(e.norm - std::sqrt(17.0)) <= 1e-9);
}

TEST_CASE("fit_growth degenerate and model-recovery cases") {
  GrowthProfile flat;
  for (long z = 1; z <= 64; ++z) flat.entries.push_back({z, 1.0});
  const GrowthFit f0 = fit_growth(flat);
  CHECK(f0.degenerate);
  CHECK(f0.C == doctest::Approx(1.0));
  CHECK(f0.c == 0.0);
  CHECK(f0.residual == 0.0);

  GrowthProfile model;
  for (long z = 1; z <= 128; ++z)
    model.entries.push_back({z, 2.0 * std::log(3.0 + static_cast<double>(z))});
  const GrowthFit f1 = fit_growth(model);
  CHECK(std::abs(f1.c - 1.0) <= 0.05);
  CHECK(std::abs(f1.C - 2.0) <= 0.1);
  CHECK(f1.residual <= 1e-9);
}

TEST_CASE("graph indicator marks exactly the graph") {
  const PhaseFunction phi = make_linear_phase(1, Rational(0), 4);
  const DenseFunction g = graph_indicator(phi, 4);
  REQUIRE(g.group.order() == 16);
  int ones = 0;
  for (std::uint32_t i = 0; i < 16; ++i) {
    const double v = g.values[i].real();
    if (v > 0.5) ++ones;
  }
  CHECK(ones == 4);
  for (long x = 0; x < 4; ++x) CHECK(g.values[x * 4 + x].real() == doctest::Approx(1.0));
  // denominators must divide Q
  CHECK_THROWS_AS(graph_indicator(make_linear_phase(1, Rational(1, 3), 4), 4), input_error);
}

TEST_CASE("graph norm equals the average of row norms") {
  // exact known case: constant zero phase -> graph is Z_N x {0}, norm 1
  const GraphNormReport flat = graph_norm_identity_check(make_linear_phase(0, Rational(0), 4), 2);
  CHECK(flat.graph_norm == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(flat.row_average == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(flat.gap <= 1e-9);

  const GraphNormReport rnd = graph_norm_identity_check(make_random_phase(5, 8), 8);
  CHECK(rnd.gap <= 1e-9);
  CHECK(rnd.graph_norm == doctest::Approx(rnd.row_average).epsilon(1e-9));
}
