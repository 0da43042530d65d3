#pragma once

// Dense complex inner loops. Every kernel has a portable scalar reference
// implementation and an AVX2/FMA variant; the variant is chosen once at
// startup from CPUID and can be overridden with QCTL_SIMD=scalar|avx2 or
// set_backend().

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace qctl::kernels {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

bool avx2_available();
Backend active_backend();
/// Throws InvalidInput when the requested backend is not supported by the CPU.
void set_backend(Backend b);
std::string_view backend_name(Backend b);

/// c = a * b for n x n row-major matrices. c must not alias a or b.
void matmul(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c, std::size_t n);
/// sum_i conj(a_i) * b_i
cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b);
/// y += alpha * x
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);

// Explicit variants, for equivalence tests and benchmarking.
namespace scalar {
void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t n);
cplx dot_conj(const cplx* a, const cplx* b, std::size_t len);
void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t len);
}  // namespace scalar

namespace avx2 {
void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t n);
cplx dot_conj(const cplx* a, const cplx* b, std::size_t len);
void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t len);
}  // namespace avx2

}  // namespace qctl::kernels
