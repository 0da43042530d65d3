#include "qctl/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define QCTL_HAVE_X86 1
#include <immintrin.h>
#endif

namespace qctl::kernels::avx2 {

#ifdef QCTL_HAVE_X86

#define QCTL_AVX2 __attribute__((target("avx2,fma")))

namespace {

// (a.re, a.im) * (b0, b1) for two packed complex values in b.
QCTL_AVX2 inline __m256d cmul(__m256d are, __m256d aim, __m256d b) {
  const __m256d bswap = _mm256_permute_pd(b, 0b0101);
  return _mm256_fmaddsub_pd(are, b, _mm256_mul_pd(aim, bswap));
}

}  // namespace

QCTL_AVX2 void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t n) {
  const std::size_t pairs = n / 2;
  auto* cd = reinterpret_cast<double*>(c);
  const auto* bd = reinterpret_cast<const double*>(b);
  for (std::size_t i = 0; i < n * n; ++i) c[i] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double* crow = cd + 2 * i * n;
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a[i * n + k];
      if (aik == cplx{}) continue;
      const __m256d are = _mm256_set1_pd(aik.real());
      const __m256d aim = _mm256_set1_pd(aik.imag());
      const double* brow = bd + 2 * k * n;
      for (std::size_t p = 0; p < pairs; ++p) {
        __m256d acc = _mm256_loadu_pd(crow + 4 * p);
        acc = _mm256_add_pd(acc, cmul(are, aim, _mm256_loadu_pd(brow + 4 * p)));
        _mm256_storeu_pd(crow + 4 * p, acc);
      }
      if (n % 2) {
        const std::size_t j = n - 1;
        c[i * n + j] += aik * b[k * n + j];
      }
    }
  }
}

QCTL_AVX2 cplx dot_conj(const cplx* a, const cplx* b, std::size_t len) {
  const auto* ad = reinterpret_cast<const double*>(a);
  const auto* bd = reinterpret_cast<const double*>(b);
  // re: sum a.re*b.re + a.im*b.im ; im: sum a.re*b.im - a.im*b.re
  __m256d re_acc = _mm256_setzero_pd();
  __m256d im_acc = _mm256_setzero_pd();
  const std::size_t pairs = len / 2;
  for (std::size_t p = 0; p < pairs; ++p) {
    const __m256d va = _mm256_loadu_pd(ad + 4 * p);
    const __m256d vb = _mm256_loadu_pd(bd + 4 * p);
    re_acc = _mm256_fmadd_pd(va, vb, re_acc);
    im_acc = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0b0101), im_acc);
  }
  alignas(32) double r[4], m[4];
  _mm256_store_pd(r, re_acc);
  _mm256_store_pd(m, im_acc);
  // m holds (a.re*b.im, a.im*b.re, ...) per complex element.
  double re = r[0] + r[1] + r[2] + r[3];
  double im = (m[0] - m[1]) + (m[2] - m[3]);
  if (len % 2) {
    const cplx x = a[len - 1], y = b[len - 1];
    re += x.real() * y.real() + x.imag() * y.imag();
    im += x.real() * y.imag() - x.imag() * y.real();
  }
  return {re, im};
}

QCTL_AVX2 void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t len) {
  const auto* xd = reinterpret_cast<const double*>(x);
  auto* yd = reinterpret_cast<double*>(y);
  const __m256d are = _mm256_set1_pd(alpha.real());
  const __m256d aim = _mm256_set1_pd(alpha.imag());
  const std::size_t pairs = len / 2;
  for (std::size_t p = 0; p < pairs; ++p) {
    const __m256d v = cmul(are, aim, _mm256_loadu_pd(xd + 4 * p));
    _mm256_storeu_pd(yd + 4 * p, _mm256_add_pd(_mm256_loadu_pd(yd + 4 * p), v));
  }
  if (len % 2) y[len - 1] += alpha * x[len - 1];
}

#else

// Non-x86 builds never select this backend; forward to the reference code.
void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t n) { scalar::matmul(a, b, c, n); }
cplx dot_conj(const cplx* a, const cplx* b, std::size_t len) { return scalar::dot_conj(a, b, len); }
void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t len) { scalar::axpy(alpha, x, y, len); }

#endif

}  // namespace qctl::kernels::avx2
