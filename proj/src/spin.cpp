#include "qctl/spin.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qctl/errors.hpp"

namespace qctl::spin {

void ChainSpec::validate() const {
  if (E.empty()) throw InvalidInput("chain needs at least one site");
  if (d.size() + 1 != E.size())
    throw InvalidInput("chain: len(d) must be N-1 (N=" + std::to_string(E.size()) + ", len(d)=" +
                       std::to_string(d.size()) + ")");
  for (double e : E)
    if (!std::isfinite(e)) throw InvalidInput("chain: non-finite on-site energy");
  for (double c : d)
    if (!std::isfinite(c) || c <= 0.0) throw InvalidInput("chain: couplings d must be finite and > 0");
}

HermitianOperator build_chain_hamiltonian(const ChainSpec& spec) {
  spec.validate();
  const std::size_t n = spec.sites();
  ComplexMatrix h(n);
  for (std::size_t i = 0; i < n; ++i) h(i, i) = spec.E[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h(i, i + 1) = spec.d[i];
    h(i + 1, i) = spec.d[i];
  }
  return HermitianOperator(std::move(h));
}

ChainSpec heisenberg_to_chain(const std::vector<double>& J, std::size_t N, Coupling coupling) {
  if (N < 1 || J.size() + 1 != N) throw InvalidInput("heisenberg_to_chain: need N-1 couplings");
  for (double j : J)
    if (!std::isfinite(j) || j <= 0.0) throw InvalidInput("heisenberg_to_chain: couplings J must be > 0");
  ChainSpec spec;
  spec.d = J;  // (J/2)(XX+YY) hops one excitation with amplitude J
  spec.E.assign(N, 0.0);
  if (coupling == Coupling::heisenberg) {
    // (J_n/2) Z_n Z_{n+1} is -J_n/2 on bonds touching the flipped site, +J_n/2 elsewhere.
    for (std::size_t p = 0; p < N; ++p)
      for (std::size_t b = 0; b + 1 < N; ++b) spec.E[p] += (b == p || b + 1 == p) ? -0.5 * J[b] : 0.5 * J[b];
  }
  return spec;
}

HermitianOperator full_chain_hamiltonian(const std::vector<double>& J, Coupling coupling) {
  const std::size_t N = J.size() + 1;
  const std::size_t dim = std::size_t{1} << N;
  auto site_op = [&](std::size_t site, const ComplexMatrix& p, std::size_t site2, const ComplexMatrix& q) {
    ComplexMatrix acc = ComplexMatrix::identity(1);
    for (std::size_t s = 0; s < N; ++s) {
      const ComplexMatrix& f = (s == site) ? p : (s == site2) ? q : pauli_i();
      acc = tensor_product(acc, f);
    }
    return acc;
  };
  ComplexMatrix h(dim);
  const ComplexMatrix x = pauli_x(), y = pauli_y(), z = pauli_z();
  for (std::size_t b = 0; b + 1 < N; ++b) {
    h.add_scaled(0.5 * J[b], site_op(b, x, b + 1, x));
    h.add_scaled(0.5 * J[b], site_op(b, y, b + 1, y));
    if (coupling == Coupling::heisenberg) h.add_scaled(0.5 * J[b], site_op(b, z, b + 1, z));
  }
  return HermitianOperator(std::move(h));
}

SwitchPair build_switch_pair(const ChainSpec& spec, std::size_t r) {
  spec.validate();
  const std::size_t n = spec.sites();
  if (r < 1 || r + 1 > n)
    throw InvalidInput("actuator index r=" + std::to_string(r) + " outside 1.." + std::to_string(n - 1));
  HermitianOperator off = build_chain_hamiltonian(spec);
  ComplexMatrix on = off.matrix();
  on(r - 1, r) = 0.0;
  on(r, r - 1) = 0.0;
  return {std::move(off), HermitianOperator(std::move(on))};
}

HyperfineSystem build_1e1n_hamiltonian(const HyperfineParams& p, Frame frame) {
  for (double v : {p.nu_s_GHz, p.nu_n_MHz, p.A_zx_MHz, p.A_zz_MHz})
    if (!std::isfinite(v)) throw InvalidInput("hyperfine parameters must be finite");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const ComplexMatrix id = pauli_i();
  const ComplexMatrix sx = 0.5 * tensor_product(pauli_x(), id);
  const ComplexMatrix sy = 0.5 * tensor_product(pauli_y(), id);
  const ComplexMatrix sz = 0.5 * tensor_product(pauli_z(), id);
  const ComplexMatrix ix = 0.5 * tensor_product(id, pauli_x());
  const ComplexMatrix iz = 0.5 * tensor_product(id, pauli_z());

  // internal units: time ns, frequency GHz
  const double nu_n = p.nu_n_MHz * 1e-3, a_zx = p.A_zx_MHz * 1e-3, a_zz = p.A_zz_MHz * 1e-3;
  ComplexMatrix h(4);
  if (frame == Frame::lab) h.add_scaled(p.nu_s_GHz, sz);
  h.add_scaled(nu_n, iz);
  h.add_scaled(a_zx, sz * ix);
  h.add_scaled(a_zz, sz * iz);
  h *= two_pi;

  HyperfineSystem sys{HermitianOperator(std::move(h)), {}};
  sys.controls.emplace_back(two_pi * sx);
  sys.controls.emplace_back(two_pi * sy);
  return sys;
}

}  // namespace qctl::spin
