#pragma once

#include <complex>
#include <vector>

#include "bhlab/group.hpp"

namespace bhlab {

// A function G -> C stored densely in index order, and its spectrum under the
// normalised transform
//   fhat(gamma) = (1/|G|) * sum_x f(x) * conj<x, gamma>,
// so that f(x) = sum_gamma fhat(gamma) <x, gamma> with no further factor, and
// Parseval reads sum_gamma |fhat|^2 = (1/|G|) sum_x |f|^2.
struct DenseFunction {
  Group group;
  std::vector<std::complex<double>> values;
};

struct Spectrum {
  Group group;
  std::vector<std::complex<double>> coeffs;
};

Spectrum fourier_transform(const DenseFunction& f);
DenseFunction inverse_transform(const Spectrum& s);

// The algebra norm ||f||_A = sum_gamma |fhat(gamma)|, accumulated with
// compensated summation in index order.
double algebra_norm(const DenseFunction& f);
double spectrum_l1(const Spectrum& s);

// Indicator of an index set as a DenseFunction.
DenseFunction indicator(const Group& g, const std::vector<std::uint32_t>& set);

// Normalised convolution (f * g)(x) = (1/|G|) sum_y f(y) g(x - y), so that
// the transform is multiplicative: (f*g)^ = fhat * ghat.
DenseFunction convolve(const DenseFunction& f, const DenseFunction& g);

// f * mu_W for the normalised coset measure mu_W (mass |G|/|W| on each point
// of W so that mu_W integrates to 1 under the (1/|G|)-sum convention).
DenseFunction convolve_with_coset_measure(const DenseFunction& f, const Coset& w);

// Restriction of f to a subgroup, returned as a dense function on H's
// abstract shape (see decompose()).
DenseFunction restrict_to(const DenseFunction& f, const Subgroup& h);

}  // namespace bhlab
