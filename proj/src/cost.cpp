#include "indra/cost.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "indra/errors.hpp"
#include "indra/kernels.hpp"
#include "indra/parallel.hpp"

namespace indra {

const char* cost_kind_name(CostKind kind) {
  switch (kind) {
    case CostKind::Angular:
      return "angular";
  }
  return "unknown";
}

CostValue angular_distance_raw(const double* u, double u_norm, const double* v,
                               double v_norm, std::size_t dim) {
  // Identity axiom first: bit-identical inputs return exactly 0 instead of
  // the ~1e-8 arccos noise floor at cosine 1. Anchored profiles of a sample
  // against itself then agree bit-for-bit with the forced full-mode diagonal.
  if (u == v || std::memcmp(u, v, dim * sizeof(double)) == 0) return 0.0;
  const double cosine = kernels::dot(u, v, dim) / (u_norm * v_norm);
  // Clamp before arccos: rounding can push |cosine| past 1 for
  // near-collinear vectors, and arccos would return NaN.
  const double clamped = cosine > 1.0 ? 1.0 : (cosine < -1.0 ? -1.0 : cosine);
  return std::acos(clamped);
}

namespace {

double checked_norm(const double* v, std::size_t dim, std::size_t row_index,
                    const char* side) {
  const double norm = std::sqrt(kernels::sumsq(v, dim));
  if (norm == 0.0) {
    std::ostringstream msg;
    msg << "zero-norm vector (" << side << " row " << row_index
        << "): angular distance undefined";
    throw ZeroNormInput(msg.str());
  }
  return norm;
}

}  // namespace

CostValue angular_distance(const Vec& u, const Vec& v) {
  if (u.size() != v.size()) {
    std::ostringstream msg;
    msg << "vector dimensions differ: " << u.size() << " vs " << v.size();
    throw DimensionMismatch(msg.str());
  }
  const auto dim = static_cast<std::size_t>(u.size());
  const double nu = checked_norm(u.data(), dim, 0, "lhs");
  const double nv = checked_norm(v.data(), dim, 0, "rhs");
  return angular_distance_raw(u.data(), nu, v.data(), nv, dim);
}

CostMatrix pairwise_costs(const EmbeddingSet& a, const EmbeddingSet& b,
                          const CostFunction& fn) {
  if (a.dim() != b.dim()) {
    std::ostringstream msg;
    msg << "embedding dimensions differ: " << a.dim() << " vs " << b.dim();
    throw DimensionMismatch(msg.str());
  }
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const std::size_t dim = a.dim();
  const bool self = (&a == &b);

  // Norms once per row, before require_valid so a zero row surfaces as
  // ZeroNormInput with its index; all throws happen before worker threads.
  std::vector<double> norms_a(na);
  for (std::size_t i = 0; i < na; ++i)
    norms_a[i] = checked_norm(a.data.row(static_cast<Eigen::Index>(i)).data(), dim, i, "lhs");
  std::vector<double> norms_b;
  if (self) {
    norms_b = norms_a;
  } else {
    norms_b.resize(nb);
    for (std::size_t j = 0; j < nb; ++j)
      norms_b[j] = checked_norm(b.data.row(static_cast<Eigen::Index>(j)).data(), dim, j, "rhs");
  }
  require_valid(a, "pairwise lhs");
  if (!self) require_valid(b, "pairwise rhs");

  CostMatrix out;
  out.row_ids = a.ids;
  out.col_ids = b.ids;
  out.cost_kind = cost_kind_name(fn.kind);
  out.anchored = false;
  out.values.resize(static_cast<Eigen::Index>(na), static_cast<Eigen::Index>(nb));

  Mat& m = out.values;
  const double* adata = a.data.data();
  const double* bdata = b.data.data();

  if (self) {
    // Each unordered pair once, mirrored: symmetry and the zero diagonal are
    // exact by construction.
    parallel_for(na, [&](std::size_t i) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 0.0;
      for (std::size_t j = i + 1; j < nb; ++j) {
        const double d = angular_distance_raw(adata + i * dim, norms_a[i],
                                              bdata + j * dim, norms_b[j], dim);
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d;
        m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = d;
      }
    });
  } else {
    parallel_for(na, [&](std::size_t i) {
      for (std::size_t j = 0; j < nb; ++j) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            angular_distance_raw(adata + i * dim, norms_a[i], bdata + j * dim,
                                 norms_b[j], dim);
      }
    });
  }
  return out;
}

}  // namespace indra
