#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "indra/types.hpp"

namespace indra {

// How Indra rows are compared across modalities. The rows live in a shared
// anchor coordinate system, so cosine (scale-free) is the default.
struct MatchConfig {
  enum class RowSimilarity { Cosine, CenteredCosine, NegativeEuclidean };
  // Full (square) mode only: row i of both matrices carries an exact 0 at
  // column i, trivially favoring the correct match. ExcludePair drops
  // columns i and j from both rows when scoring query i against candidate j.
  // Ignored for anchored matrices.
  enum class DiagonalHandling { Include, ExcludePair };

  RowSimilarity row_similarity = RowSimilarity::Cosine;
  DiagonalHandling diagonal_handling = DiagonalHandling::ExcludePair;
  std::vector<std::size_t> k_list = {5, 10, 30, 50};
};

const char* row_similarity_name(MatchConfig::RowSimilarity s);
const char* diagonal_handling_name(MatchConfig::DiagonalHandling d);

struct RetrievalReport {
  std::string direction;                    // "U->Q" or "Q->U"
  std::vector<std::size_t> rank_of_truth;   // 1-based, per query
  std::vector<std::size_t> top1_index;      // argmax candidate per query
  std::map<std::size_t, double> topk_accuracy;
  MatchConfig config;
};

// 1-based rank of truth_index under descending sort with ties broken toward
// the lower index. Throws IndexOutOfRange.
std::size_t rank_of_truth(const std::vector<double>& similarities,
                          std::size_t truth_index);

// For each query row of iu, ranks the rows of iq by row similarity
// (descending, ties to the lower index); ground truth is the equal-index
// pairing. Returns reports for U->Q and Q->U.
// Throws ColumnMismatch / DimensionMismatch / NonFiniteRow.
std::pair<RetrievalReport, RetrievalReport> match(const CostMatrix& iu,
                                                  const CostMatrix& iq,
                                                  const MatchConfig& cfg = {});

}  // namespace indra
