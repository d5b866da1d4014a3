#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "indra/build.hpp"
#include "indra/types.hpp"

namespace indra {

struct LabeledSplit {
  Mat features;                     // n x m (raw embeddings or Indra rows)
  std::vector<int> labels;          // class indices in [0, C)
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

struct ProbeConfig {
  double l2_penalty = 1e-4;
  std::size_t max_iterations = 500;
  double convergence_tol = 1e-6;    // on the full gradient norm
  std::uint64_t seed = 0;           // recorded; training is deterministic
};

// Multinomial logistic regression, weights C x m plus bias.
struct ProbeModel {
  Mat weights;
  Vec bias;
  std::size_t n_classes() const { return static_cast<std::size_t>(weights.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(weights.cols()); }
};

// L2-regularized multinomial cross-entropy and its analytic gradient at
// (weights, bias) over the given rows. Public so the finite-difference
// gradient check can probe arbitrary points.
struct ProbeObjective {
  double loss;
  Mat grad_weights;
  Vec grad_bias;
};
ProbeObjective probe_objective(const Mat& features, const std::vector<int>& labels,
                               const std::vector<std::size_t>& rows,
                               const Mat& weights, const Vec& bias,
                               double l2_penalty);

// Class probabilities for one feature matrix; rows sum to 1.
Mat predict_proba(const ProbeModel& model, const Mat& features);

// Full-batch gradient descent with backtracking line search from zero init;
// stops at gradient norm <= tol or max_iterations. Deterministic.
// Throws SingleClassData / NonFiniteFeature.
ProbeModel train_probe(const LabeledSplit& data, const ProbeConfig& cfg = {});

// Accuracy over data.test: fraction whose argmax class (ties to the lower
// class index) equals the label. Throws DimensionMismatch / EmptySplit.
double evaluate_probe(const ProbeModel& model, const LabeledSplit& data);

// Per-class split: round(train_fraction * count) per class, at least 1,
// shuffled by the seeded stream. Every class is present in train.
struct TrainTestSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};
TrainTestSplit stratified_split(const std::vector<int>& labels,
                                double train_fraction, std::uint64_t seed);

// Feature source for the sweep: raw embeddings, or anchored Indra rows with
// anchors drawn from the train split only (test rows are profiles against
// those same train anchors).
struct ReprSpec {
  enum class Kind { Raw, Indra };
  Kind kind = Kind::Raw;
  std::size_t anchor_k = 0;          // Indra only
  std::uint64_t anchor_seed = 0;
};

const char* repr_kind_name(ReprSpec::Kind k);

struct SweepRow {
  double sigma;
  std::string repr_kind;
  double accuracy;
  std::uint64_t seed;
};

// For each sigma: perturb the embeddings (inject_noise), build the chosen
// representation, train on the train split, evaluate on the test split.
std::vector<SweepRow> noise_sweep(const EmbeddingSet& e,
                                  const std::vector<int>& labels,
                                  const std::vector<double>& sigmas,
                                  const ReprSpec& repr,
                                  const ProbeConfig& cfg,
                                  const TrainTestSplit& split,
                                  std::uint64_t noise_seed);

}  // namespace indra
