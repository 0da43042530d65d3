#include <atomic>
#include <cstdlib>
#include <string>

#include "qctl/errors.hpp"
#include "qctl/kernels.hpp"

namespace qctl::kernels {

namespace {

Backend detect() {
  if (const char* env = std::getenv("QCTL_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2" && avx2_available()) return Backend::avx2;
  }
  return avx2_available() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{detect()};
  return b;
}

void check_same(std::size_t a, std::size_t b) {
  if (a != b) throw InvalidInput("kernel operands differ in length");
}

}  // namespace

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_available()) throw InvalidInput("AVX2/FMA not supported on this CPU");
  current().store(b, std::memory_order_relaxed);
}

std::string_view backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

void matmul(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c, std::size_t n) {
  check_same(a.size(), n * n);
  check_same(b.size(), n * n);
  check_same(c.size(), n * n);
  if (active_backend() == Backend::avx2)
    avx2::matmul(a.data(), b.data(), c.data(), n);
  else
    scalar::matmul(a.data(), b.data(), c.data(), n);
}

cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b) {
  check_same(a.size(), b.size());
  if (active_backend() == Backend::avx2) return avx2::dot_conj(a.data(), b.data(), a.size());
  return scalar::dot_conj(a.data(), b.data(), a.size());
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  check_same(x.size(), y.size());
  if (active_backend() == Backend::avx2)
    avx2::axpy(alpha, x.data(), y.data(), x.size());
  else
    scalar::axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace qctl::kernels
