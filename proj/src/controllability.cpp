#include "qctl/controllability.hpp"

#include <cmath>

#include "qctl/errors.hpp"

namespace qctl::lie {

namespace {

class OrthonormalBasis {
 public:
  OrthonormalBasis(double tol) : tol_(tol) {}

  /// Adds the component of c orthogonal to the span; returns false if it is negligible.
  bool try_add(ComplexMatrix c) {
    const double norm0 = c.frobenius_norm();
    if (norm0 == 0.0) return false;
    // two passes of Gram-Schmidt against the real inner product Re Tr(A^dagger B)
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis_) c.add_scaled(-hilbert_schmidt_inner(b, c).real(), b);
    const double residual = c.frobenius_norm();
    if (residual <= tol_ * norm0) return false;
    c *= 1.0 / residual;
    basis_.push_back(std::move(c));
    return true;
  }

  std::size_t size() const { return basis_.size(); }
  const ComplexMatrix& operator[](std::size_t i) const { return basis_[i]; }

 private:
  double tol_;
  std::vector<ComplexMatrix> basis_;
};

struct Closure {
  std::size_t dimension = 0;
  bool capped = false;
};

Closure close(const std::vector<ComplexMatrix>& seeds, double rank_tol, std::size_t cap) {
  OrthonormalBasis basis(rank_tol);
  for (const auto& g : seeds) {
    if (basis.size() >= cap) break;
    basis.try_add(g);
  }
  // Pairs (i, j), i < j, visited in order of j then i; new elements extend the sweep.
  bool capped = false;
  for (std::size_t j = 1; j < basis.size() && !capped; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (basis.size() >= cap) {
        capped = true;
        break;
      }
      basis.try_add(commutator(basis[i], basis[j]));
    }
  }
  return {basis.size(), capped};
}

}  // namespace

LieClosureReport lie_closure(const std::vector<HermitianOperator>& generators, double rank_tol,
                             std::size_t dim_cap) {
  if (generators.empty()) throw InvalidInput("lie_closure: no generators");
  if (!(rank_tol > 0.0)) throw InvalidInput("lie_closure: rank_tol must be positive");
  const std::size_t n = generators.front().dim();
  for (const auto& g : generators)
    if (g.dim() != n) throw InvalidInput("lie_closure: generators differ in dimension");

  LieClosureReport report;
  report.n = n;
  report.max_dimension = n * n;
  report.traceless_dimension = n * n - 1;
  report.rank_tolerance = rank_tol;
  const std::size_t cap = dim_cap == 0 ? n * n : std::min(dim_cap, n * n);

  const cplx i_unit{0.0, 1.0};
  std::vector<ComplexMatrix> full, projected;
  for (const auto& g : generators) {
    ComplexMatrix m = i_unit * g.matrix();
    full.push_back(m);
    // identity is central, so dropping it commutes with taking brackets
    const cplx mean = m.trace() / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) -= mean;
    projected.push_back(std::move(m));
  }
  const Closure su = close(projected, rank_tol, std::min(cap, n * n - 1));
  const Closure u = close(full, rank_tol, cap);
  report.dimension = su.dimension;
  report.full_dimension = u.dimension;
  // Hitting the ambient dimension is a fixed point; any smaller cap may have cut generation short.
  report.truncated = (su.capped && su.dimension < n * n - 1) || (u.capped && u.dimension < n * n);
  return report;
}

bool is_controllable(const LieClosureReport& report) {
  return report.n > 0 && report.dimension + 1 >= report.n * report.n;
}

}  // namespace qctl::lie
