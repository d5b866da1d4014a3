#pragma once

#include <cstdint>
#include <utility>

#include "indra/cost.hpp"
#include "indra/types.hpp"

namespace indra {

// Reference set for relational profiles: the whole dataset, an explicit id
// list, or a seeded random subset of k samples.
struct AnchorSpec {
  enum class Mode { All, ExplicitIds, RandomK };
  Mode mode = Mode::All;
  std::size_t k = 0;                  // random-k only
  std::uint64_t seed = 0;             // random-k only
  std::vector<std::string> ids;       // explicit-ids only
  // When anchored, drop the anchor samples from the profile rows so a query
  // never carries its own zero coordinate into matching.
  bool exclude_from_queries = true;
};

// Anchor row indices, ascending. Throws UnknownAnchorId / KOutOfRange.
std::vector<std::size_t> resolve_anchors(const EmbeddingSet& e,
                                         const AnchorSpec& anchors);

// Indra representation of e: row i is the cost profile of sample i against
// the anchor set. mode = All yields the square matrix with zero diagonal;
// anchored output equals the column slice of the full matrix at the anchor
// indices (bit-for-bit, same kernels on both paths).
CostMatrix build_indra(const EmbeddingSet& e, const CostFunction& fn = {},
                       const AnchorSpec& anchors = {});

// Profiles for both modalities of a paired dataset. Anchor indices are drawn
// once and shared, so rows of the two outputs live in the same anchor
// coordinate system; both outputs carry the u-side anchor ids as columns.
std::pair<CostMatrix, CostMatrix> build_paired_indra(
    const PairedDataset& p, const CostFunction& fn = {},
    const AnchorSpec& anchors = {});

}  // namespace indra
