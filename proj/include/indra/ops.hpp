#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "indra/types.hpp"

namespace indra {

// One post-processing step. Steps compose left to right; the applied list is
// recorded in CostMatrix::op_history so a written matrix documents its own
// provenance.
struct OpStep {
  enum class Kind { Sparsify, CenterRows, ZscoreRows, MinmaxRows };
  Kind kind = Kind::CenterRows;
  std::size_t k = 0;        // sparsify only
  CostValue fill = 0.0;     // sparsify only; pi keeps angular rows finite

  std::string str() const;
};

using OperatorSpec = std::vector<OpStep>;

// Grammar: comma-separated steps, "sparsify:K[:FILL]" (FILL = pi | inf |
// float, default pi), "center", "zscore", "minmax". Empty string = identity.
OperatorSpec parse_operator_spec(const std::string& text);
std::string format_operator_spec(const OperatorSpec& spec);

// Keeps the k smallest costs per row (ties to the lower column index) and
// sets the rest to fill. Kept entries are untouched. Throws KOutOfRange.
CostMatrix sparsify_topk(const CostMatrix& m, std::size_t k, CostValue fill);

enum class RowNorm { Center, Zscore, Minmax };

// Per-row transform. +inf entries are excluded from the statistics and pass
// through unchanged. Throws DegenerateRow when a row is constant under
// zscore/minmax.
CostMatrix normalize_rows(const CostMatrix& m, RowNorm scheme);

CostMatrix apply_operators(const CostMatrix& m, const OperatorSpec& spec);

struct NoiseSpec {
  double sigma = 0.0;       // stddev, embedding units
  std::uint64_t seed = 0;
};

// Adds an independent Normal(0, sigma^2) draw to every entry. Draw (row,col)
// is a pure function of (seed, row, col) via the counter RNG, so the result
// is reproducible and independent of evaluation order. sigma = 0 returns the
// input bit-identically.
EmbeddingSet inject_noise(const EmbeddingSet& e, const NoiseSpec& spec);

}  // namespace indra
