#pragma once

#include <cstddef>
#include <vector>

#include "qctl/linalg.hpp"

namespace qctl::lie {

struct LieClosureReport {
  std::size_t n = 0;                    ///< Hilbert space dimension
  /// Real dimension of the generated algebra modulo the identity (its image in su(n)).
  /// Global phase is unobservable, so this is the number that decides controllability.
  std::size_t dimension = 0;
  std::size_t full_dimension = 0;       ///< including the identity direction, at most n^2
  std::size_t max_dimension = 0;        ///< n^2, dim u(n)
  std::size_t traceless_dimension = 0;  ///< n^2 - 1, dim su(n)
  double rank_tolerance = 0.0;
  bool truncated = false;  ///< generation stopped at dim_cap before reaching a fixed point
};

inline constexpr double kDefaultRankTol = 1e-10;

/// Dynamical Lie algebra generated by {i H_m}. Keeps a Hilbert-Schmidt
/// orthonormal basis of skew-Hermitian matrices and adjoins commutators of
/// basis pairs (breadth-first in pair order) whose residual after projection
/// exceeds rank_tol times their norm. Run once on the generators and once on
/// their traceless parts. dim_cap = 0 means n^2.
LieClosureReport lie_closure(const std::vector<HermitianOperator>& generators, double rank_tol = kDefaultRankTol,
                             std::size_t dim_cap = 0);

/// Closure contains su(n): dimension >= n^2 - 1.
bool is_controllable(const LieClosureReport& report);

}  // namespace qctl::lie
