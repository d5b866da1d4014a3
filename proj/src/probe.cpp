#include "indra/probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "indra/errors.hpp"
#include "indra/kernels.hpp"
#include "indra/ops.hpp"
#include "indra/parallel.hpp"
#include "indra/rng.hpp"

namespace indra {

const char* repr_kind_name(ReprSpec::Kind k) {
  return k == ReprSpec::Kind::Raw ? "raw" : "indra";
}

namespace {

void require_finite_features(const Mat& features) {
  const double* data = features.data();
  const auto total = static_cast<std::size_t>(features.size());
  for (std::size_t i = 0; i < total; ++i) {
    if (!std::isfinite(data[i])) {
      std::ostringstream msg;
      msg << "non-finite feature at row " << i / features.cols() << " col "
          << i % features.cols();
      throw NonFiniteFeature(msg.str());
    }
  }
}

std::size_t infer_classes(const std::vector<int>& labels) {
  int max_label = -1;
  for (int y : labels) {
    if (y < 0) throw IndexOutOfRange("negative class label");
    max_label = std::max(max_label, y);
  }
  return static_cast<std::size_t>(max_label + 1);
}

void check_split(const LabeledSplit& data) {
  const auto n = static_cast<std::size_t>(data.features.rows());
  if (data.labels.size() != n) {
    std::ostringstream msg;
    msg << "label count " << data.labels.size() << " != feature rows " << n;
    throw DimensionMismatch(msg.str());
  }
  for (std::size_t idx : data.train)
    if (idx >= n) throw IndexOutOfRange("train index out of range");
  for (std::size_t idx : data.test)
    if (idx >= n) throw IndexOutOfRange("test index out of range");
}

}  // namespace

ProbeObjective probe_objective(const Mat& features, const std::vector<int>& labels,
                               const std::vector<std::size_t>& rows,
                               const Mat& weights, const Vec& bias,
                               double l2_penalty) {
  const auto n = rows.size();
  const auto classes = static_cast<std::size_t>(weights.rows());
  const auto dim = static_cast<std::size_t>(weights.cols());
  const double inv_n = 1.0 / static_cast<double>(n);

  // Forward pass: probabilities and per-sample losses, sample-parallel.
  Mat coeff(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(classes));
  std::vector<double> losses(n);
  parallel_for(n, [&](std::size_t s) {
    const double* x = features.row(static_cast<Eigen::Index>(rows[s])).data();
    const int y = labels[rows[s]];
    double* out = coeff.row(static_cast<Eigen::Index>(s)).data();
    double zmax = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < classes; ++c) {
      out[c] = kernels::dot(weights.row(static_cast<Eigen::Index>(c)).data(), x, dim) +
               bias(static_cast<Eigen::Index>(c));
      zmax = std::max(zmax, out[c]);
    }
    double norm = 0.0;
    for (std::size_t c = 0; c < classes; ++c) norm += std::exp(out[c] - zmax);
    const double lse = zmax + std::log(norm);
    losses[s] = lse - out[static_cast<std::size_t>(y)];
    for (std::size_t c = 0; c < classes; ++c) {
      out[c] = std::exp(out[c] - lse);  // p(c | x)
      if (static_cast<int>(c) == y) out[c] -= 1.0;
    }
  });

  ProbeObjective obj;
  obj.loss = kernels::sum(losses.data(), n) * inv_n;
  obj.grad_weights = Mat::Zero(static_cast<Eigen::Index>(classes),
                               static_cast<Eigen::Index>(dim));
  obj.grad_bias = Vec::Zero(static_cast<Eigen::Index>(classes));

  // Backward pass, class-parallel; per class the sample order is fixed.
  parallel_for(classes, [&](std::size_t c) {
    double* grad_row = obj.grad_weights.row(static_cast<Eigen::Index>(c)).data();
    double gb = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      const double w = coeff(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(c));
      gb += w;
      const double* x = features.row(static_cast<Eigen::Index>(rows[s])).data();
      for (std::size_t f = 0; f < dim; ++f) grad_row[f] += w * x[f];
    }
    for (std::size_t f = 0; f < dim; ++f) {
      grad_row[f] = grad_row[f] * inv_n +
                    l2_penalty * weights(static_cast<Eigen::Index>(c),
                                         static_cast<Eigen::Index>(f));
    }
    obj.grad_bias(static_cast<Eigen::Index>(c)) = gb * inv_n;  // bias unpenalized
  });

  obj.loss += 0.5 * l2_penalty *
              kernels::sumsq(weights.data(), static_cast<std::size_t>(weights.size()));
  return obj;
}

namespace {

double loss_only(const Mat& features, const std::vector<int>& labels,
                 const std::vector<std::size_t>& rows, const Mat& weights,
                 const Vec& bias, double l2_penalty) {
  const auto n = rows.size();
  const auto classes = static_cast<std::size_t>(weights.rows());
  const auto dim = static_cast<std::size_t>(weights.cols());
  std::vector<double> losses(n);
  parallel_for(n, [&](std::size_t s) {
    const double* x = features.row(static_cast<Eigen::Index>(rows[s])).data();
    const int y = labels[rows[s]];
    double zy = 0.0;
    double zmax = -std::numeric_limits<double>::infinity();
    std::vector<double> z(classes);
    for (std::size_t c = 0; c < classes; ++c) {
      z[c] = kernels::dot(weights.row(static_cast<Eigen::Index>(c)).data(), x, dim) +
             bias(static_cast<Eigen::Index>(c));
      zmax = std::max(zmax, z[c]);
      if (static_cast<int>(c) == y) zy = z[c];
    }
    double norm = 0.0;
    for (std::size_t c = 0; c < classes; ++c) norm += std::exp(z[c] - zmax);
    losses[s] = zmax + std::log(norm) - zy;
  });
  return kernels::sum(losses.data(), n) / static_cast<double>(n) +
         0.5 * l2_penalty *
             kernels::sumsq(weights.data(), static_cast<std::size_t>(weights.size()));
}

}  // namespace

ProbeModel train_probe(const LabeledSplit& data, const ProbeConfig& cfg) {
  check_split(data);
  require_finite_features(data.features);
  if (data.train.empty()) throw EmptySplit("train split is empty");

  std::set<int> train_classes;
  for (std::size_t idx : data.train) train_classes.insert(data.labels[idx]);
  if (train_classes.size() < 2)
    throw SingleClassData("training split contains a single class");

  const std::size_t classes = infer_classes(data.labels);
  const auto dim = static_cast<std::size_t>(data.features.cols());

  ProbeModel model;
  model.weights = Mat::Zero(static_cast<Eigen::Index>(classes),
                            static_cast<Eigen::Index>(dim));
  model.bias = Vec::Zero(static_cast<Eigen::Index>(classes));

  // Armijo backtracking from the previous accepted step. Zero init keeps the
  // whole trajectory deterministic; the convex objective needs no restarts.
  constexpr double kArmijo = 1e-4;
  double step = 1.0;
  ProbeObjective obj = probe_objective(data.features, data.labels, data.train,
                                       model.weights, model.bias, cfg.l2_penalty);
  for (std::size_t iter = 0; iter < cfg.max_iterations; ++iter) {
    const double grad_sq =
        kernels::sumsq(obj.grad_weights.data(),
                       static_cast<std::size_t>(obj.grad_weights.size())) +
        kernels::sumsq(obj.grad_bias.data(),
                       static_cast<std::size_t>(obj.grad_bias.size()));
    if (std::sqrt(grad_sq) <= cfg.convergence_tol) break;

    bool accepted = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      Mat w_next = model.weights - step * obj.grad_weights;
      Vec b_next = model.bias - step * obj.grad_bias;
      const double f_next = loss_only(data.features, data.labels, data.train,
                                      w_next, b_next, cfg.l2_penalty);
      if (f_next <= obj.loss - kArmijo * step * grad_sq) {
        model.weights = std::move(w_next);
        model.bias = std::move(b_next);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // step underflow: nothing left to gain
    step = std::min(step * 2.0, 1e6);
    obj = probe_objective(data.features, data.labels, data.train, model.weights,
                          model.bias, cfg.l2_penalty);
  }
  return model;
}

Mat predict_proba(const ProbeModel& model, const Mat& features) {
  if (features.cols() != model.weights.cols()) {
    std::ostringstream msg;
    msg << "feature dimension " << features.cols() << " != model dimension "
        << model.weights.cols();
    throw DimensionMismatch(msg.str());
  }
  const auto n = static_cast<std::size_t>(features.rows());
  const auto classes = model.n_classes();
  const auto dim = model.dim();
  Mat probs(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(classes));
  parallel_for(n, [&](std::size_t s) {
    const double* x = features.row(static_cast<Eigen::Index>(s)).data();
    double* out = probs.row(static_cast<Eigen::Index>(s)).data();
    double zmax = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < classes; ++c) {
      out[c] = kernels::dot(model.weights.row(static_cast<Eigen::Index>(c)).data(),
                            x, dim) +
               model.bias(static_cast<Eigen::Index>(c));
      zmax = std::max(zmax, out[c]);
    }
    double norm = 0.0;
    for (std::size_t c = 0; c < classes; ++c) norm += std::exp(out[c] - zmax);
    const double lse = zmax + std::log(norm);
    for (std::size_t c = 0; c < classes; ++c) out[c] = std::exp(out[c] - lse);
  });
  return probs;
}

double evaluate_probe(const ProbeModel& model, const LabeledSplit& data) {
  check_split(data);
  if (data.test.empty()) throw EmptySplit("test split is empty");
  if (data.features.cols() != model.weights.cols()) {
    std::ostringstream msg;
    msg << "feature dimension " << data.features.cols() << " != model dimension "
        << model.weights.cols();
    throw DimensionMismatch(msg.str());
  }
  const auto classes = model.n_classes();
  const auto dim = model.dim();
  std::size_t correct = 0;
  for (std::size_t idx : data.test) {
    const double* x = data.features.row(static_cast<Eigen::Index>(idx)).data();
    std::size_t best = 0;
    double best_z = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < classes; ++c) {
      const double z =
          kernels::dot(model.weights.row(static_cast<Eigen::Index>(c)).data(), x, dim) +
          model.bias(static_cast<Eigen::Index>(c));
      if (z > best_z) {  // ties stay at the lower class index
        best_z = z;
        best = c;
      }
    }
    if (static_cast<int>(best) == data.labels[idx]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.test.size());
}

TrainTestSplit stratified_split(const std::vector<int>& labels,
                                double train_fraction, std::uint64_t seed) {
  if (train_fraction <= 0.0 || train_fraction >= 1.0)
    throw IndexOutOfRange("train fraction must lie in (0, 1)");
  const std::size_t classes = infer_classes(labels);
  const CounterRng rng = CounterRng(seed).stream(streams::kSplit);

  TrainTestSplit split;
  for (std::size_t c = 0; c < classes; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == static_cast<int>(c)) members.push_back(i);
    if (members.empty()) continue;
    counter_shuffle(members, rng.stream(c));
    const auto want = static_cast<std::size_t>(std::lround(
        train_fraction * static_cast<double>(members.size())));
    const std::size_t n_train = std::clamp<std::size_t>(want, 1, members.size());
    for (std::size_t i = 0; i < members.size(); ++i)
      (i < n_train ? split.train : split.test).push_back(members[i]);
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::vector<SweepRow> noise_sweep(const EmbeddingSet& e,
                                  const std::vector<int>& labels,
                                  const std::vector<double>& sigmas,
                                  const ReprSpec& repr,
                                  const ProbeConfig& cfg,
                                  const TrainTestSplit& split,
                                  std::uint64_t noise_seed) {
  require_valid(e, "noise_sweep");
  if (!std::is_sorted(sigmas.begin(), sigmas.end()))
    throw IndexOutOfRange("sigmas must be sorted ascending");

  // Anchor ids come from the train split only, drawn once so every sigma
  // level sees the same anchor coordinate system.
  std::vector<std::string> anchor_ids;
  if (repr.kind == ReprSpec::Kind::Indra) {
    if (repr.anchor_k < 1 || repr.anchor_k > split.train.size())
      throw KOutOfRange("indra anchor count outside [1, train size]");
    const CounterRng rng = CounterRng(repr.anchor_seed).stream(streams::kAnchors);
    for (std::size_t pos :
         sample_without_replacement(split.train.size(), repr.anchor_k, rng))
      anchor_ids.push_back(e.ids[split.train[pos]]);
  }

  std::vector<SweepRow> rows;
  for (double sigma : sigmas) {
    const EmbeddingSet noisy = inject_noise(e, {sigma, noise_seed});

    LabeledSplit data;
    data.labels = labels;
    data.train = split.train;
    data.test = split.test;
    if (repr.kind == ReprSpec::Kind::Raw) {
      data.features = noisy.data;
    } else {
      AnchorSpec anchors;
      anchors.mode = AnchorSpec::Mode::ExplicitIds;
      anchors.ids = anchor_ids;
      anchors.exclude_from_queries = false;  // every sample keeps a profile row
      data.features = build_indra(noisy, {}, anchors).values;
    }

    const ProbeModel model = train_probe(data, cfg);
    rows.push_back(
        {sigma, repr_kind_name(repr.kind), evaluate_probe(model, data), cfg.seed});
  }
  return rows;
}

}  // namespace indra
