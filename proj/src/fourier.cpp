#include "bhlab/fourier.hpp"

#include <cmath>

#include "bhlab/errors.hpp"
#include "bhlab/parallel.hpp"
#include "fft.hpp"

namespace bhlab {

namespace {

void check_sized(const Group& g, std::size_t n, const char* what) {
  if (n != g.order())
    throw input_error(std::string(what) + ": value count does not match group order");
}

// Applies the length-n kernel along one mixed-radix axis of a dense array.
void transform_axis(std::vector<std::complex<double>>& data, std::size_t axis_len,
                    std::size_t stride, int sign) {
  if (axis_len <= 1) return;
  const auto plan = detail::plan_for(axis_len);
  const std::size_t total = data.size();
  const std::size_t block = axis_len * stride;
  const std::size_t slices = total / axis_len;

  parallel_for_chunks(slices, [&](std::size_t, std::size_t lo, std::size_t hi) {
    std::vector<std::complex<double>> buf(axis_len);
    for (std::size_t s = lo; s < hi; ++s) {
      // Slice s enumerates (outer block, inner offset) pairs.
      const std::size_t outer = s / stride;
      const std::size_t inner = s % stride;
      const std::size_t base = outer * block + inner;
      for (std::size_t k = 0; k < axis_len; ++k) buf[k] = data[base + k * stride];
      detail::dft(*plan, buf.data(), sign);
      for (std::size_t k = 0; k < axis_len; ++k) data[base + k * stride] = buf[k];
    }
  });
}

void transform_all_axes(const Group& g, std::vector<std::complex<double>>& data, int sign) {
  std::size_t stride = 1;
  for (std::size_t i = g.num_factors(); i-- > 0;) {
    const std::size_t n = static_cast<std::size_t>(g.factor(i));
    transform_axis(data, n, stride, sign);
    stride *= n;
  }
}

}  // namespace

Spectrum fourier_transform(const DenseFunction& f) {
  check_sized(f.group, f.values.size(), "fourier_transform");
  Spectrum s;
  s.group = f.group;
  s.coeffs = f.values;
  transform_all_axes(f.group, s.coeffs, -1);
  const double inv = 1.0 / static_cast<double>(f.group.order());
  for (auto& c : s.coeffs) c *= inv;
  return s;
}

DenseFunction inverse_transform(const Spectrum& s) {
  check_sized(s.group, s.coeffs.size(), "inverse_transform");
  DenseFunction f;
  f.group = s.group;
  f.values = s.coeffs;
  transform_all_axes(s.group, f.values, +1);
  return f;
}

double spectrum_l1(const Spectrum& s) {
  // Kahan summation in coefficient-index order: the result is independent of
  // chunking because the merge below is sequential over fixed chunks.
  const std::size_t chunks = chunk_count(s.coeffs.size());
  std::vector<double> partial(chunks, 0.0);
  parallel_for_chunks(s.coeffs.size(), [&](std::size_t c, std::size_t lo, std::size_t hi) {
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double y = std::abs(s.coeffs[i]) - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    partial[c] = sum;
  });
  double sum = 0.0, comp = 0.0;
  for (double p : partial) {
    const double y = p - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double algebra_norm(const DenseFunction& f) { return spectrum_l1(fourier_transform(f)); }

DenseFunction indicator(const Group& g, const std::vector<std::uint32_t>& set) {
  DenseFunction f;
  f.group = g;
  f.values.assign(g.order(), 0.0);
  for (std::uint32_t i : set) {
    if (i >= g.order()) throw input_error("indicator: element index out of range");
    f.values[i] = 1.0;
  }
  return f;
}

DenseFunction convolve(const DenseFunction& f, const DenseFunction& g) {
  if (f.group != g.group) throw input_error("convolve: group mismatch");
  check_sized(f.group, f.values.size(), "convolve");
  check_sized(g.group, g.values.size(), "convolve");
  // Pointwise product of spectra, then inversion: exactly the normalisation
  // (f*g)(x) = (1/|G|) sum_y f(y) g(x-y).
  Spectrum sf = fourier_transform(f);
  const Spectrum sg = fourier_transform(g);
  for (std::size_t i = 0; i < sf.coeffs.size(); ++i) sf.coeffs[i] *= sg.coeffs[i];
  return inverse_transform(sf);
}

DenseFunction convolve_with_coset_measure(const DenseFunction& f, const Coset& w) {
  if (f.group != w.subgroup.parent)
    throw input_error("convolve_with_coset_measure: group mismatch");
  check_sized(f.group, f.values.size(), "convolve_with_coset_measure");
  // Direct averaging: (f * mu_W)(x) = (1/|W|) sum_{y in W} f(x - y).
  const Group& g = f.group;
  const auto members = w.members();
  DenseFunction out;
  out.group = g;
  out.values.assign(g.order(), 0.0);
  parallel_for_chunks(g.order(), [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t x = lo; x < hi; ++x) {
      std::complex<double> acc(0.0, 0.0);
      for (std::uint32_t y : members)
        acc += f.values[g.sub(static_cast<std::uint32_t>(x), y)];
      out.values[x] = acc / static_cast<double>(members.size());
    }
  });
  return out;
}

DenseFunction restrict_to(const DenseFunction& f, const Subgroup& h) {
  if (f.group != h.parent) throw input_error("restrict_to: group mismatch");
  check_sized(f.group, f.values.size(), "restrict_to");
  const SubgroupDecomposition dec = decompose(h);
  DenseFunction out;
  out.group = dec.shape;
  out.values.resize(dec.shape.order());
  for (std::uint32_t t = 0; t < dec.shape.order(); ++t)
    out.values[t] = f.values[dec.embed(dec.shape.coords_of(t))];
  return out;
}

}  // namespace bhlab
