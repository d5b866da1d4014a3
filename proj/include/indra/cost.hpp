#pragma once

#include "indra/types.hpp"

namespace indra {

// Cost functions must satisfy the Lawvere axioms: d(x,x) = 0 and the
// triangle inequality. Angular distance is the only kind shipped; any future
// kind has to pass the enriched-verify suite before it is trusted.
enum class CostKind { Angular };

struct CostFunction {
  CostKind kind = CostKind::Angular;
};

const char* cost_kind_name(CostKind kind);

// arccos of the cosine similarity of u and v, cosine clamped to [-1, 1]
// before arccos so near-duplicate vectors cannot produce NaN. Result in
// [0, pi], exactly symmetric, invariant to positive scaling of either
// argument (bit-for-bit for power-of-two scales).
// Throws ZeroNormInput / DimensionMismatch.
CostValue angular_distance(const Vec& u, const Vec& v);

// Raw-pointer form used by the matrix kernels; norms precomputed by caller.
CostValue angular_distance_raw(const double* u, double u_norm, const double* v,
                               double v_norm, std::size_t dim);

// n_a x n_b matrix with entry (i,j) = fn(a[i], b[j]). When a and b are the
// same object each unordered pair is computed once and mirrored, giving an
// exactly symmetric matrix with an exactly zero diagonal. Row blocks are
// computed in parallel; every entry is pure, so the result is identical for
// any worker count.
CostMatrix pairwise_costs(const EmbeddingSet& a, const EmbeddingSet& b,
                          const CostFunction& fn = {});

}  // namespace indra
