#pragma once

// Internal DFT kernels.  One complex length-n transform:
//   X_j = sum_k x_k exp(sign * 2*pi*i * j*k / n)
// with no normalisation.  Sizes below kDirectCutoff use the quadratic kernel
// with an exact twiddle table; larger sizes use Bluestein's chirp reduction
// to a power-of-two convolution, so every length (prime or not) runs in
// O(n log n) with O(1e-13) accuracy at the sizes this project touches.

#include <complex>
#include <memory>
#include <vector>

namespace bhlab::detail {

inline constexpr std::size_t kDirectCutoff = 64;

struct DftPlan {
  std::size_t n;
  // direct path
  std::vector<std::complex<double>> twiddle;  // e(2*pi*i*t/n), t in [0,n)
  // bluestein path
  std::size_t m = 0;                        // padded power-of-two length
  std::vector<std::complex<double>> chirp;  // e(pi*i*k^2/n) via k^2 mod 2n
  std::vector<std::complex<double>> filter_fft_pos;  // filter FFT, sign=+1
  std::vector<std::complex<double>> filter_fft_neg;  // filter FFT, sign=-1
};

std::shared_ptr<const DftPlan> plan_for(std::size_t n);

// In-place transform of xs (length plan->n), sign = +1 or -1.
void dft(const DftPlan& plan, std::complex<double>* xs, int sign);

}  // namespace bhlab::detail
