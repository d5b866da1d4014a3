#include "indra/match.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "indra/errors.hpp"
#include "indra/kernels.hpp"
#include "indra/parallel.hpp"

namespace indra {

const char* row_similarity_name(MatchConfig::RowSimilarity s) {
  switch (s) {
    case MatchConfig::RowSimilarity::Cosine:
      return "cosine";
    case MatchConfig::RowSimilarity::CenteredCosine:
      return "centered-cosine";
    case MatchConfig::RowSimilarity::NegativeEuclidean:
      return "negative-euclidean";
  }
  return "?";
}

const char* diagonal_handling_name(MatchConfig::DiagonalHandling d) {
  return d == MatchConfig::DiagonalHandling::Include ? "include" : "exclude-pair";
}

std::size_t rank_of_truth(const std::vector<double>& similarities,
                          std::size_t truth_index) {
  if (truth_index >= similarities.size()) {
    std::ostringstream msg;
    msg << "truth index " << truth_index << " out of range for "
        << similarities.size() << " candidates";
    throw IndexOutOfRange(msg.str());
  }
  // Rank under descending sort with ties to the lower index, without sorting.
  const double truth = similarities[truth_index];
  std::size_t rank = 1;
  for (std::size_t j = 0; j < similarities.size(); ++j) {
    if (similarities[j] > truth) ++rank;
    else if (similarities[j] == truth && j < truth_index) ++rank;
  }
  return rank;
}

namespace {

// Sims that are undefined (zero-norm row under cosine) sort last but stay
// finite so ranking arithmetic is total.
constexpr double kDegenerate = -std::numeric_limits<double>::max();

struct RowAggregates {
  std::vector<double> sum;
  std::vector<double> sumsq;
};

RowAggregates aggregates(const Mat& m) {
  const auto n = static_cast<std::size_t>(m.rows());
  const auto cols = static_cast<std::size_t>(m.cols());
  RowAggregates agg;
  agg.sum.resize(n);
  agg.sumsq.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = m.row(static_cast<Eigen::Index>(i)).data();
    agg.sum[i] = kernels::sum(row, cols);
    agg.sumsq[i] = kernels::sumsq(row, cols);
  }
  return agg;
}

void require_finite(const CostMatrix& m, const char* side) {
  const auto rows = static_cast<std::size_t>(m.values.rows());
  const auto cols = static_cast<std::size_t>(m.values.cols());
  const double* data = m.values.data();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (!std::isfinite(data[i * cols + j])) {
        std::ostringstream msg;
        msg << side << " matrix has a non-finite entry at row " << i << " col "
            << j << "; apply a finite sparsification fill before matching";
        throw NonFiniteRow(msg.str());
      }
    }
  }
}

struct DirectionInputs {
  const Mat* queries;
  const Mat* candidates;
  const RowAggregates* q_agg;
  const RowAggregates* c_agg;
  // dot(i, j) = canonical dot of query row i and candidate row j.
  const Mat* gram;
  bool transpose_gram;
};

double masked_similarity(const DirectionInputs& in, MatchConfig::RowSimilarity sim,
                         bool exclude_pair, std::size_t i, std::size_t j) {
  const Mat& Q = *in.queries;
  const Mat& C = *in.candidates;
  const auto cols = static_cast<std::size_t>(Q.cols());
  const auto ei = static_cast<Eigen::Index>(i);
  const auto ej = static_cast<Eigen::Index>(j);

  double dot = in.transpose_gram ? (*in.gram)(ej, ei) : (*in.gram)(ei, ej);
  double q_sum = in.q_agg->sum[i], q_sumsq = in.q_agg->sumsq[i];
  double c_sum = in.c_agg->sum[j], c_sumsq = in.c_agg->sumsq[j];
  double count = static_cast<double>(cols);

  if (exclude_pair) {
    // Drop columns i and j from both rows (one column when i == j). O(1)
    // updates off the precomputed aggregates; exact up to last-ulp rounding.
    const double qi = Q(ei, static_cast<Eigen::Index>(i));
    const double ci = C(ej, static_cast<Eigen::Index>(i));
    dot -= qi * ci;
    q_sum -= qi;
    q_sumsq -= qi * qi;
    c_sum -= ci;
    c_sumsq -= ci * ci;
    count -= 1.0;
    if (i != j) {
      const double qj = Q(ei, static_cast<Eigen::Index>(j));
      const double cj = C(ej, static_cast<Eigen::Index>(j));
      dot -= qj * cj;
      q_sum -= qj;
      q_sumsq -= qj * qj;
      c_sum -= cj;
      c_sumsq -= cj * cj;
      count -= 1.0;
    }
  }
  if (count < 1.0) return kDegenerate;
  // Cancellation in the updates can leave tiny negatives.
  q_sumsq = std::max(q_sumsq, 0.0);
  c_sumsq = std::max(c_sumsq, 0.0);

  switch (sim) {
    case MatchConfig::RowSimilarity::Cosine: {
      if (q_sumsq == 0.0 || c_sumsq == 0.0) return kDegenerate;
      return dot / std::sqrt(q_sumsq * c_sumsq);
    }
    case MatchConfig::RowSimilarity::CenteredCosine: {
      const double mq = q_sum / count;
      const double mc = c_sum / count;
      const double dot_c = dot - count * mq * mc;
      const double q_c = std::max(q_sumsq - count * mq * mq, 0.0);
      const double c_c = std::max(c_sumsq - count * mc * mc, 0.0);
      if (q_c == 0.0 || c_c == 0.0) return kDegenerate;
      return dot_c / std::sqrt(q_c * c_c);
    }
    case MatchConfig::RowSimilarity::NegativeEuclidean: {
      const double sq = std::max(q_sumsq + c_sumsq - 2.0 * dot, 0.0);
      return -std::sqrt(sq);
    }
  }
  return kDegenerate;
}

RetrievalReport match_direction(const DirectionInputs& in, const MatchConfig& cfg,
                                bool exclude_pair, const char* direction) {
  const auto n_queries = static_cast<std::size_t>(in.queries->rows());
  const auto n_candidates = static_cast<std::size_t>(in.candidates->rows());

  RetrievalReport report;
  report.direction = direction;
  report.config = cfg;
  report.rank_of_truth.resize(n_queries);
  report.top1_index.resize(n_queries);

  parallel_for(n_queries, [&](std::size_t i) {
    std::vector<double> sims(n_candidates);
    for (std::size_t j = 0; j < n_candidates; ++j)
      sims[j] = masked_similarity(in, cfg.row_similarity, exclude_pair, i, j);
    report.rank_of_truth[i] = rank_of_truth(sims, i);
    std::size_t best = 0;
    for (std::size_t j = 1; j < n_candidates; ++j)
      if (sims[j] > sims[best]) best = j;  // ties stay at the lower index
    report.top1_index[i] = best;
  });

  for (std::size_t k : cfg.k_list) {
    std::size_t hits = 0;
    for (std::size_t r : report.rank_of_truth)
      if (r <= k) ++hits;
    report.topk_accuracy[k] =
        static_cast<double>(hits) / static_cast<double>(n_queries);
  }
  return report;
}

}  // namespace

std::pair<RetrievalReport, RetrievalReport> match(const CostMatrix& iu,
                                                  const CostMatrix& iq,
                                                  const MatchConfig& cfg) {
  if (iu.cols() != iq.cols() || iu.col_ids != iq.col_ids) {
    throw ColumnMismatch(
        "Indra matrices have different anchor columns; rows are not "
        "comparable across modalities");
  }
  if (iu.rows() != iq.rows()) {
    std::ostringstream msg;
    msg << "query counts differ (" << iu.rows() << " vs " << iq.rows()
        << "); equal-index ground truth needs aligned rows";
    throw DimensionMismatch(msg.str());
  }
  require_finite(iu, "u");
  require_finite(iq, "q");
  const std::size_t n_candidates = iq.rows();
  for (std::size_t k : cfg.k_list) {
    if (k < 1 || k > n_candidates) {
      std::ostringstream msg;
      msg << "top-k value " << k << " outside [1, " << n_candidates << "]";
      throw KOutOfRange(msg.str());
    }
  }

  // Pair exclusion only makes sense when row i and column i are the same
  // sample, i.e. both matrices are square full-mode profiles.
  const bool exclude_pair =
      cfg.diagonal_handling == MatchConfig::DiagonalHandling::ExcludePair &&
      iu.full_mode() && iq.full_mode();

  const auto nu = static_cast<std::size_t>(iu.values.rows());
  const auto cols = static_cast<std::size_t>(iu.values.cols());
  const auto nq = static_cast<std::size_t>(iq.values.rows());

  // Gram matrix of canonical dots, computed once; the reverse direction
  // reads it transposed (dot is exactly symmetric).
  Mat gram(static_cast<Eigen::Index>(nu), static_cast<Eigen::Index>(nq));
  parallel_for(nu, [&](std::size_t i) {
    const double* qrow = iu.values.row(static_cast<Eigen::Index>(i)).data();
    for (std::size_t j = 0; j < nq; ++j) {
      gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          kernels::dot(qrow, iq.values.row(static_cast<Eigen::Index>(j)).data(), cols);
    }
  });

  const RowAggregates u_agg = aggregates(iu.values);
  const RowAggregates q_agg = aggregates(iq.values);

  const DirectionInputs forward{&iu.values, &iq.values, &u_agg, &q_agg, &gram, false};
  const DirectionInputs reverse{&iq.values, &iu.values, &q_agg, &u_agg, &gram, true};

  return {match_direction(forward, cfg, exclude_pair, "U->Q"),
          match_direction(reverse, cfg, exclude_pair, "Q->U")};
}

}  // namespace indra
