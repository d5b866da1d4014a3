#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "indra/types.hpp"

namespace indra {

// Default tolerances at 64-bit precision, sized from the arccos conditioning
// near 0 and pi (clamped cosine error ~1e-16 maps to ~1e-8 in angle).
inline constexpr double kTriangleTol = 1e-7;
inline constexpr double kFaithfulnessTol = 1e-6;
inline constexpr double kT0Tol = 1e-9;

// Triple enumeration is O(n^3); refuse beyond this unless overridden.
inline constexpr std::size_t kVerifyMaxN = 512;

struct IdentityViolation {
  std::size_t i;
  double value;
};
struct SymmetryViolation {
  std::size_t i, j;
  double gap;
};
// Reported triple (i, j, k) reads: d(i,k) > d(i,j) + d(j,k) by `slack`.
struct TriangleViolation {
  std::size_t i, j, k;
  double slack;
};

struct VerificationReport {
  std::vector<IdentityViolation> identity_violations;
  std::vector<SymmetryViolation> symmetry_violations;
  std::vector<TriangleViolation> triangle_violations;
  std::vector<std::pair<std::size_t, std::size_t>> t0_duplicates;
  // Stored lists are capped (max_records); totals keep the full counts.
  std::size_t identity_total = 0;
  std::size_t symmetry_total = 0;
  std::size_t triangle_total = 0;
  double yoneda_max_error = 0.0;
  double structure_max_error = 0.0;
  double triangle_tol = kTriangleTol;
  double faithfulness_tol = kFaithfulnessTol;
  double t0_tol = kT0Tol;
  bool passed = false;
};

struct VerifyOptions {
  double triangle_tol = kTriangleTol;
  double faithfulness_tol = kFaithfulnessTol;
  double t0_tol = kT0Tol;
  std::size_t max_n = kVerifyMaxN;
  bool force = false;               // override the size cap
  std::size_t max_records = 1000;   // per violation list
};

// Lawvere axioms on a square matrix: diagonal exactly zero, symmetry exact,
// triangle inequality over all ordered triples within tol. Violations are
// recorded in index order regardless of thread count.
// Throws NotSquare / MatrixTooLarge.
VerificationReport verify_lawvere(const CostMatrix& m,
                                  const VerifyOptions& opts = {});

// Enriched natural-transformation distance from row a's functor to row b's:
// max over columns j of max(0, m[b][j] - m[a][j]). For a Lawvere-valid
// matrix this equals m[b][a], the supremum attained at j = a.
CostValue yoneda_hom(const CostMatrix& m, std::size_t a, std::size_t b);

// Yoneda faithfulness: max over pairs (a,b) of |yoneda_hom(m,a,b) - m[b][a]|.
std::pair<double, bool> check_faithfulness(const CostMatrix& m,
                                           double tol = kFaithfulnessTol);

// Pairs the cost structure cannot separate: rows equal entrywise within tol
// and mutual costs within tol. With angular cost these are exactly the
// positively collinear embedding pairs.
std::vector<std::pair<std::size_t, std::size_t>> find_t0_duplicates(
    const CostMatrix& m, double tol = kT0Tol);

// Object-level costs vs representation-level homs, both directions:
// yoneda_hom(m,a,b) == m[b][a] and yoneda_hom(m,b,a) == m[a][b] for all
// pairs; returns the max absolute gap.
std::pair<double, bool> check_structure_preservation(
    const CostMatrix& m, double tol = kFaithfulnessTol);

// Full certification used by the CLI: Lawvere + faithfulness + structure
// preservation + T0 duplicates in one report.
VerificationReport verify_all(const CostMatrix& m,
                              const VerifyOptions& opts = {});

}  // namespace indra
