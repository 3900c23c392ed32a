#include "fft.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <unordered_map>

namespace bhlab::detail {

namespace {

std::complex<double> unit(double turns) {
  const double theta = 2.0 * std::numbers::pi * turns;
  return {std::cos(theta), std::sin(theta)};
}

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

// Iterative radix-2 FFT, sign = -1 forward / +1 inverse (no scaling).
void fft_pow2(std::vector<std::complex<double>>& a, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::complex<double> wlen = unit(sign / static_cast<double>(len));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

std::mutex g_plan_mutex;
std::unordered_map<std::size_t, std::shared_ptr<const DftPlan>> g_plans;

std::shared_ptr<const DftPlan> build_plan(std::size_t n) {
  auto plan = std::make_shared<DftPlan>();
  plan->n = n;
  if (n < kDirectCutoff) {
    plan->twiddle.resize(n);
    for (std::size_t t = 0; t < n; ++t)
      plan->twiddle[t] = unit(static_cast<double>(t) / static_cast<double>(n));
    return plan;
  }
  // Bluestein: with chirp c_k = e(sign * pi*i * k^2 / n),
  //   X_j = c_j * sum_k (x_k c_k) * conj(c_{j-k}),
  // a linear convolution against conj(c) evaluated at |t| <= n-1, computed
  // as a circular convolution at power-of-two length m >= 2n-1.  The chirp
  // exponent is reduced exactly via k^2 mod 2n so large k loses no accuracy.
  plan->m = next_pow2(2 * n - 1);
  plan->chirp.resize(n);
  const std::size_t two_n = 2 * n;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t e = (k * k) % two_n;
    plan->chirp[k] = unit(static_cast<double>(e) / static_cast<double>(two_n));
  }
  const auto filter_fft = [&](int sign) {
    std::vector<std::complex<double>> filt(plan->m, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      const std::complex<double> c =
          sign > 0 ? plan->chirp[t] : std::conj(plan->chirp[t]);
      filt[t] = std::conj(c);
      if (t != 0) filt[plan->m - t] = std::conj(c);
    }
    fft_pow2(filt, -1);
    return filt;
  };
  plan->filter_fft_pos = filter_fft(+1);
  plan->filter_fft_neg = filter_fft(-1);
  return plan;
}

}  // namespace

std::shared_ptr<const DftPlan> plan_for(std::size_t n) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto it = g_plans.find(n);
  if (it != g_plans.end()) return it->second;
  auto plan = build_plan(n);
  g_plans.emplace(n, plan);
  return plan;
}

void dft(const DftPlan& plan, std::complex<double>* xs, int sign) {
  const std::size_t n = plan.n;
  if (n <= 1) return;

  if (n < kDirectCutoff) {
    std::vector<std::complex<double>> out(n);
    for (std::size_t j = 0; j < n; ++j) {
      std::complex<double> acc(0.0, 0.0);
      std::size_t t = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const std::complex<double> w = plan.twiddle[t];
        acc += xs[k] * (sign > 0 ? w : std::conj(w));
        t += j;
        if (t >= n) t -= n;
      }
      out[j] = acc;
    }
    std::copy(out.begin(), out.end(), xs);
    return;
  }

  const auto chirp_at = [&](std::size_t k) {
    return sign > 0 ? plan.chirp[k] : std::conj(plan.chirp[k]);
  };
  const auto& filt = sign > 0 ? plan.filter_fft_pos : plan.filter_fft_neg;

  std::vector<std::complex<double>> a(plan.m, 0.0);
  for (std::size_t k = 0; k < n; ++k) a[k] = xs[k] * chirp_at(k);
  fft_pow2(a, -1);
  for (std::size_t k = 0; k < plan.m; ++k) a[k] *= filt[k];
  fft_pow2(a, +1);
  const double scale = 1.0 / static_cast<double>(plan.m);
  for (std::size_t j = 0; j < n; ++j) xs[j] = a[j] * scale * chirp_at(j);
}

}  // namespace bhlab::detail
