#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace indra {

// Row-major everywhere: a sample's relational profile is a contiguous row.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

// A cost lives in [0, +inf]. +inf is only ever produced by sparsification
// masking; cost functions on valid inputs return finite values (angular
// distance stays in [0, pi]).
using CostValue = double;

// n x d matrix of encoder outputs with stable per-row identifiers.
// Values are held at 64-bit precision regardless of the on-disk width;
// arccos amplifies rounding near cos = +-1, and the verification tolerances
// assume double arithmetic end to end.
struct EmbeddingSet {
  std::vector<std::string> ids;  // unique, order defines row order
  Mat data;                      // n x d, finite, no all-zero rows
  std::string provenance;        // free text: source model, layer, export tool

  std::size_t size() const { return static_cast<std::size_t>(data.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(data.cols()); }
};

struct Violation {
  enum class Code { Empty, NonFinite, ZeroNormRow, DuplicateId, IdCountMismatch };
  Code code;
  std::size_t row = 0;
  std::size_t col = 0;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Report-only check of every EmbeddingSet invariant (finiteness, nonzero
// rows, unique ids, id/row count agreement).
ValidationReport validate_embeddings(const EmbeddingSet& e);

// Throws ValidationError with all violations joined when the set is invalid.
void require_valid(const EmbeddingSet& e, const std::string& context = {});

// n x m matrix of pairwise costs. Row i is the relational profile of sample
// row_ids[i] against the reference set col_ids (the whole dataset when
// anchored == false, an anchor subset otherwise).
struct CostMatrix {
  std::vector<std::string> row_ids;
  std::vector<std::string> col_ids;
  Mat values;                          // n x m
  bool anchored = false;               // true iff cols are an anchor subset
  std::string cost_kind = "angular";
  std::vector<std::string> op_history; // post-processing steps, in order

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values.cols()); }
  bool square() const { return values.rows() == values.cols(); }
  // Full mode: square profile of a set against itself (Eq-style n x n view).
  bool full_mode() const { return !anchored && square(); }
};

// Index-aligned pair of embedding sets from two modalities: row i of u and
// row i of q describe the same underlying sample.
struct PairedDataset {
  EmbeddingSet u;
  EmbeddingSet q;
};

// Throws ValidationError / DimensionMismatch when either side is invalid or
// the row counts differ.
void require_valid(const PairedDataset& p);

}  // namespace indra
