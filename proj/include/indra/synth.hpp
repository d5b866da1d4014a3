#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "indra/rng.hpp"
#include "indra/types.hpp"

namespace indra {

// Desk-scale stand-ins for real encoder exports. Everything is deterministic
// per seed and independent of evaluation order.

// C isotropic unit-variance Gaussian clusters, centers pairwise `separation`
// apart (simplex on the first `classes` axes; requires classes <= dim).
struct BlobsSpec {
  std::size_t classes = 2;
  std::size_t per_class = 100;
  std::size_t dim = 8;
  double separation = 6.0;
};

// Q modality = U modality times a random orthogonal matrix, plus optional
// Gaussian noise. With noise = 0 the two Indra matrices agree to rounding.
struct PairedOrthogonalSpec {
  std::size_t n = 100;
  std::size_t dim = 16;
  double noise = 0.0;
};

// Shared latent Gaussians pushed through two independent random linear maps
// and an elementwise odd nonlinearity (tanh), plus noise.
struct PairedNonlinearSpec {
  std::size_t n = 100;
  std::size_t latent_dim = 8;
  std::size_t dim_u = 16;
  std::size_t dim_q = 12;
  double noise = 0.0;
};

struct SyntheticSpec {
  std::variant<BlobsSpec, PairedOrthogonalSpec, PairedNonlinearSpec> generator;
  std::uint64_t seed = 0;
};

struct LabeledEmbeddings {
  EmbeddingSet embeddings;
  std::vector<int> labels;
};

LabeledEmbeddings generate_blobs(const BlobsSpec& spec, std::uint64_t seed);
PairedDataset generate_paired_orthogonal(const PairedOrthogonalSpec& spec,
                                         std::uint64_t seed);
PairedDataset generate_paired_nonlinear(const PairedNonlinearSpec& spec,
                                        std::uint64_t seed);

// Haar-ish random orthogonal matrix: Householder QR of a Gaussian matrix
// with the R diagonal forced positive. Deterministic per stream.
Mat random_orthogonal(std::size_t dim, const CounterRng& rng);

}  // namespace indra
