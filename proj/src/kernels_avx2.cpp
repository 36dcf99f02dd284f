// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <cstddef>
#include <cstdint>

#include "difnet/kernels.hpp"

namespace difnet::kernels {

namespace {

inline __m256d polevl5(__m256d x, const double* c) {
  __m256d y = _mm256_set1_pd(c[0]);
  for (int i = 1; i < 6; ++i) y = _mm256_fmadd_pd(y, x, _mm256_set1_pd(c[i]));
  return y;
}

inline __m256d p1evl5(__m256d x, const double* c) {
  __m256d y = _mm256_add_pd(x, _mm256_set1_pd(c[0]));
  for (int i = 1; i < 5; ++i) y = _mm256_fmadd_pd(y, x, _mm256_set1_pd(c[i]));
  return y;
}

// Natural log for positive, finite, normal inputs. Cephes reduction:
// x = m * 2^e with m in [sqrt(1/2), sqrt(2)), log(1 + f) by a degree 5/5
// rational approximation, ln 2 split in two parts for the exponent term.
inline __m256d log_pd(__m256d x) {
  alignas(32) static constexpr double kP[6] = {
      1.01875663804580931796e-4, 4.97494994976747001425e-1, 4.70579119878881725854e0,
      1.44989225341610930846e1,  1.79368678507819816313e1,  7.70838733755885391666e0};
  alignas(32) static constexpr double kQ[5] = {
      1.12873587189167450590e1, 4.52279145837532221105e1, 8.29875266912776603211e1,
      7.11544750618563894466e1, 2.31251620126765340583e1};

  const __m256i bits = _mm256_castpd_si256(x);
  // Biased exponent as double via the 2^52 magic constant.
  const __m256i exp_bits = _mm256_srli_epi64(bits, 52);
  const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(exp_bits, magic)),
                            _mm256_set1_pd(4503599627370496.0));
  e = _mm256_sub_pd(e, _mm256_set1_pd(1022.0));

  // Mantissa in [0.5, 1).
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i half_bits = _mm256_set1_epi64x(0x3FE0000000000000LL);
  const __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), half_bits));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d small = _mm256_cmp_pd(m, _mm256_set1_pd(0.70710678118654752440), _CMP_LT_OQ);
  e = _mm256_sub_pd(e, _mm256_and_pd(small, one));
  const __m256d f = _mm256_sub_pd(_mm256_blendv_pd(m, _mm256_add_pd(m, m), small), one);

  const __m256d z = _mm256_mul_pd(f, f);
  __m256d y = _mm256_div_pd(_mm256_mul_pd(z, polevl5(f, kP)), p1evl5(f, kQ));
  y = _mm256_mul_pd(f, y);
  y = _mm256_fnmadd_pd(e, _mm256_set1_pd(2.121944400546905827679e-4), y);
  y = _mm256_fnmadd_pd(z, _mm256_set1_pd(0.5), y);
  __m256d r = _mm256_add_pd(f, y);
  return _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), r);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline __m256d load_tail(const double* p, std::size_t n, double fill) {
  alignas(32) double buf[4] = {fill, fill, fill, fill};
  for (std::size_t i = 0; i < n; ++i) buf[i] = p[i];
  return _mm256_load_pd(buf);
}

inline __m256d gather_tail(const double* s, const std::uint32_t* slots, std::size_t n, double fill) {
  alignas(32) double buf[4] = {fill, fill, fill, fill};
  for (std::size_t i = 0; i < n; ++i) buf[i] = s[slots[i]];
  return _mm256_load_pd(buf);
}

template <bool kMax>
double sum_log_ratio_impl(const double* s, const std::uint32_t* slots, const double* weights,
                          std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(slots + i));
    const __m256d base = _mm256_i32gather_pd(s, idx, 8);
    const __m256d w = _mm256_loadu_pd(weights + i);
    const __m256d top = kMax ? _mm256_max_pd(base, w) : _mm256_add_pd(base, w);
    acc = _mm256_add_pd(acc, _mm256_sub_pd(log_pd(top), log_pd(base)));
  }
  if (i < n) {
    // Padding lanes compute log(1) - log(1) = 0.
    const __m256d base = gather_tail(s, slots + i, n - i, 1.0);
    const __m256d w = load_tail(weights + i, n - i, 0.0);
    const __m256d top = kMax ? _mm256_max_pd(base, w) : _mm256_add_pd(base, w);
    acc = _mm256_add_pd(acc, _mm256_sub_pd(log_pd(top), log_pd(base)));
  }
  return hsum(acc);
}

}  // namespace

namespace detail {
const GainKernels kAvx2{&sum_log_ratio_impl<false>, &sum_log_ratio_impl<true>};
}  // namespace detail

}  // namespace difnet::kernels
