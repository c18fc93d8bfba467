#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "hermes/util/error.hpp"

namespace hermes::qap {

/// In-place radix-2 NTT over a power-of-two length; `inverse` includes the 1/n scaling.
template <typename F>
void ntt(std::vector<F>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  if (!std::has_single_bit(n)) throw UsageError("NTT length must be a power of two");
  const auto log_n = static_cast<std::uint32_t>(std::countr_zero(n));
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  F root = F::root_of_unity(log_n);
  if (inverse) root = root.inverse();
  // Twiddles for the largest stage; smaller stages stride through them.
  std::vector<F> tw(n / 2);
  tw[0] = F::one();
  for (std::size_t i = 1; i < n / 2; ++i) tw[i] = tw[i - 1] * root;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        F u = a[start + k];
        F v = a[start + k + half] * tw[k * stride];
        a[start + k] = u + v;
        a[start + k + half] = u - v;
      }
    }
  }
  if (inverse) {
    F scale = F::from_u64(n).inverse();
    for (auto& x : a) x *= scale;
  }
}

/// Linear convolution; NTT above a small-size cutoff, schoolbook below.
template <typename F>
std::vector<F> convolve(const std::vector<F>& a, const std::vector<F>& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  if (std::min(a.size(), b.size()) < 48) {
    std::vector<F> out(out_len);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
  }
  const std::size_t n = std::bit_ceil(out_len);
  std::vector<F> fa(a), fb(b);
  fa.resize(n);
  fb.resize(n);
  ntt(fa, false);
  ntt(fb, false);
  for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
  ntt(fa, true);
  fa.resize(out_len);
  return fa;
}

}  // namespace hermes::qap
