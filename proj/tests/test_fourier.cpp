#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "bhlab/fourier.hpp"
#include "bhlab/group.hpp"

using namespace bhlab;

namespace {

// Independent O(|G|^2) oracle for the normalised transform.
Spectrum naive_transform(const DenseFunction& f) {
  const std::uint64_t n = f.group.order();
  Spectrum s{f.group, std::vector<std::complex<double>>(n)};
  for (std::uint32_t chr = 0; chr < n; ++chr) {
    std::complex<double> acc = 0.0;
    for (std::uint32_t x = 0; x < n; ++x)
      acc += f.values[x] * std::conj(f.group.pairing(x, chr));
    s.coeffs[chr] = acc / static_cast<double>(n);
  }
  return s;
}

DenseFunction random_function(const Group& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  DenseFunction f{g, {}};
  f.values.reserve(g.order());
  for (std::uint64_t i = 0; i < g.order(); ++i) {
    const double re = static_cast<double>(rng()) / static_cast<double>(UINT64_MAX) - 0.5;
    const double im = static_cast<double>(rng()) / static_cast<double>(UINT64_MAX) - 0.5;
    f.values.emplace_back(re, im);
  }
  return f;
}

double max_gap(const std::vector<std::complex<double>>& a,
               const std::vector<std::complex<double>>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("fourier_transform matches the naive oracle") {
  // covers the direct kernel (<64), Bluestein (>=64, prime 101), and products
  for (const Group& g : {Group({16}), Group({2, 4}), Group({5, 5}), Group({64}),
                         Group({101}), Group({8, 8})}) {
    const DenseFunction f = random_function(g, 0xF00 + g.order());
    const Spectrum fast = fourier_transform(f);
    const Spectrum slow = naive_transform(f);
    CHECK(max_gap(fast.coeffs, slow.coeffs) <= 1e-9);
  }
}

TEST_CASE("inverse transform round-trips") {
  for (const Group& g : {Group({12}), Group({64}), Group({3, 9})}) {
    const DenseFunction f = random_function(g, 0xABC + g.order());
    const DenseFunction back = inverse_transform(fourier_transform(f));
    CHECK(max_gap(f.values, back.values) <= 1e-9);
  }
}

TEST_CASE("Parseval: sum |fhat|^2 = (1/|G|) sum |f|^2") {
  for (const Group& g : {Group({17}), Group({2, 2, 2}), Group({128})}) {
    const DenseFunction f = random_function(g, 0x9E + g.order());
    const Spectrum s = fourier_transform(f);
    double lhs = 0.0, rhs = 0.0;
    for (const auto& c : s.coeffs) lhs += std::norm(c);
    for (const auto& v : f.values) rhs += std::norm(v);
    rhs /= static_cast<double>(g.order());
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("algebra norm of 1_{0,1} on Z_4 is 1/2 + sqrt(2)/2") {
  const double n = algebra_norm(indicator(Group({4}), {0, 1}));
  CHECK(n == doctest::Approx(0.5 + std::sqrt(2.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("subgroup indicators have algebra norm 1") {
  CHECK(algebra_norm(indicator(Group({8}), {0, 4})) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(algebra_norm(indicator(Group({2, 2}), {0, 1})) ==
        doctest::Approx(1.0).epsilon(1e-12));
  const Group g({16});
  CHECK(algebra_norm(indicator(g, {0, 4, 8, 12})) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spectrum_l1 agrees with algebra_norm") {
  const DenseFunction f = random_function(Group({24}), 77);
  CHECK(algebra_norm(f) == doctest::Approx(spectrum_l1(fourier_transform(f))).epsilon(1e-13));
}

TEST_CASE("convolution theorem: transform is multiplicative") {
  const Group g({12});
  const DenseFunction f = random_function(g, 1);
  const DenseFunction h = random_function(g, 2);
  const Spectrum sf = fourier_transform(f);
  const Spectrum sh = fourier_transform(h);
  const Spectrum sc = fourier_transform(convolve(f, h));
  for (std::size_t i = 0; i < sc.coeffs.size(); ++i)
    CHECK(std::abs(sc.coeffs[i] - sf.coeffs[i] * sh.coeffs[i]) <= 1e-12);
}

TEST_CASE("normalised convolution counts representations") {
  const Group g({8});
  const DenseFunction c = convolve(indicator(g, {0, 1}), indicator(g, {0, 2}));
  // (1_A * 1_B)(x) = |{(a,b): a+b=x}| / |G|
  CHECK(c.values[0].real() == doctest::Approx(1.0 / 8.0));
  CHECK(c.values[1].real() == doctest::Approx(1.0 / 8.0));
  CHECK(c.values[2].real() == doctest::Approx(1.0 / 8.0));
  CHECK(c.values[3].real() == doctest::Approx(1.0 / 8.0));
  CHECK(std::abs(c.values[5]) <= 1e-14);
}

TEST_CASE("coset-measure convolution averages over cosets") {
  const Group g({8});
  const Subgroup h = subgroup_from_elements(g, {0, 4});
  const Coset w{h, 0};
  const DenseFunction f = indicator(g, {0, 1, 4});
  const DenseFunction avg = convolve_with_coset_measure(f, w);
  // (f * mu_W)(x) = |A cap (x + W)| / |W| when W is a subgroup coset measure
  CHECK(avg.values[0].real() == doctest::Approx(1.0));   // {0,4} both in A
  CHECK(avg.values[1].real() == doctest::Approx(0.5));   // {1,5}: only 1
  CHECK(std::abs(avg.values[2]) <= 1e-12);               // {2,6}: none
  // invariance under translation by W
  for (std::uint32_t x = 0; x < 8; ++x)
    CHECK(std::abs(avg.values[x] - avg.values[g.add(x, 4)]) <= 1e-12);
}

TEST_CASE("restriction pulls back along the decomposition embedding") {
  const Group g({2, 4});
  const Subgroup h = span_of(g, {g.index_of({0, 1})});  // {0} x Z4
  const DenseFunction f = random_function(g, 99);
  const DenseFunction r = restrict_to(f, h);
  const SubgroupDecomposition dec = decompose(h);
  REQUIRE(r.group.order() == h.order());
  for (std::uint32_t t = 0; t < r.group.order(); ++t)
    CHECK(std::abs(r.values[t] - f.values[dec.embed(r.group.coords_of(t))]) <= 1e-15);
}
