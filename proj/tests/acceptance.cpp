// Acceptance suite. Each criterion prints one PASS/FAIL line; the process
// exits nonzero if any criterion fails. Criterion 10 drives the CLI binary
// (path in INDRA_CLI_BIN) through full pipelines and byte-compares reruns.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "indra/indra.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace indra;

namespace {

struct Outcome {
  bool passed = true;
  std::string details;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

EmbeddingSet gaussian_set(std::size_t n, std::size_t d, std::uint64_t seed,
                          const std::string& prefix) {
  EmbeddingSet e;
  e.provenance = "acceptance:gaussian";
  e.data.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  const CounterRng rng(seed);
  for (std::size_t i = 0; i < n * d; ++i) e.data.data()[i] = rng.gaussian(i);
  for (std::size_t i = 0; i < n; ++i) e.ids.push_back(prefix + std::to_string(i));
  return e;
}

// --------------------------------------------------------------- criterion 1
Outcome metric_validity(std::vector<CostMatrix>& corpus) {
  const auto start = std::chrono::steady_clock::now();
  corpus.clear();
  corpus.reserve(100);
  std::size_t triangle = 0, identity = 0, symmetry = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto e = gaussian_set(64, 16, 1000 + seed, "m");
    auto m = build_indra(e);
    const auto report = verify_lawvere(m, {.triangle_tol = 1e-7});
    identity += report.identity_total;
    symmetry += report.symmetry_total;
    triangle += report.triangle_total;
    corpus.push_back(std::move(m));
  }
  const double elapsed = seconds_since(start);
  std::ostringstream details;
  details << "100 seeds, n=64: " << identity << " identity, " << symmetry
          << " symmetry, " << triangle << " triangle violations at 1e-7; "
          << elapsed << " s";
  return {identity == 0 && symmetry == 0 && triangle == 0 && elapsed < 10.0,
          details.str()};
}

// --------------------------------------------------------------- criterion 2
Outcome yoneda_faithfulness(const std::vector<CostMatrix>& corpus) {
  double worst = 0.0;
  for (const auto& m : corpus)
    worst = std::max(worst, check_faithfulness(m, 1e-6).first);

  CostMatrix hand;
  hand.row_ids = {"a", "b", "c"};
  hand.col_ids = hand.row_ids;
  hand.values.resize(3, 3);
  hand.values << 0, 1, 2, 1, 0, 1, 2, 1, 0;
  const double hand_err = check_faithfulness(hand, 1e-6).first;

  std::ostringstream details;
  details << "max error " << worst << " over corpus (tol 1e-6); hand 3x3 error "
          << hand_err;
  return {worst <= 1e-6 && hand_err == 0.0, details.str()};
}

// --------------------------------------------------------------- criterion 3
Outcome structure_preservation(const std::vector<CostMatrix>& corpus) {
  double worst = 0.0;
  for (const auto& m : corpus)
    worst = std::max(worst, check_structure_preservation(m, 1e-6).first);
  std::ostringstream details;
  details << "max error " << worst << " over corpus (tol 1e-6)";
  return {worst <= 1e-6, details.str()};
}

// ------------------------------------------------------------ criteria 4 & 5
struct MatchFixture {
  CostMatrix iu, iq;
};

Outcome orthogonal_invariance(MatchFixture& fixture) {
  const auto start = std::chrono::steady_clock::now();
  const auto p =
      generate_paired_orthogonal({.n = 500, .dim = 32, .noise = 0.0}, 4242);
  AnchorSpec anchors;
  anchors.mode = AnchorSpec::Mode::RandomK;
  anchors.k = 64;
  anchors.seed = 4242;
  anchors.exclude_from_queries = true;
  auto [iu, iq] = build_paired_indra(p, {}, anchors);

  const double gap = (iu.values - iq.values).cwiseAbs().maxCoeff();
  MatchConfig cfg;
  cfg.k_list = {1};
  const auto [u2q, q2u] = match(iu, iq, cfg);
  const double top1_fwd = u2q.topk_accuracy.at(1);
  const double top1_rev = q2u.topk_accuracy.at(1);
  const double elapsed = seconds_since(start);

  fixture.iu = std::move(iu);
  fixture.iq = std::move(iq);

  std::ostringstream details;
  details << "entrywise gap " << gap << " (tol 1e-10); top-1 " << top1_fwd << " / "
          << top1_rev << "; " << elapsed << " s";
  return {gap <= 1e-10 && top1_fwd == 1.0 && top1_rev == 1.0 && elapsed < 5.0,
          details.str()};
}

Outcome permutation_recovery(const MatchFixture& fixture) {
  const auto n = fixture.iq.rows();
  std::vector<std::size_t> src(n);
  for (std::size_t i = 0; i < n; ++i) src[i] = i;
  counter_shuffle(src, CounterRng(777));
  std::vector<std::size_t> inverse(n);
  for (std::size_t j = 0; j < n; ++j) inverse[src[j]] = j;

  CostMatrix shuffled = fixture.iq;
  for (std::size_t j = 0; j < n; ++j) {
    shuffled.values.row(static_cast<Eigen::Index>(j)) =
        fixture.iq.values.row(static_cast<Eigen::Index>(src[j]));
    shuffled.row_ids[j] = fixture.iq.row_ids[src[j]];
  }

  MatchConfig cfg;
  cfg.k_list = {1};
  const auto [u2q, q2u] = match(fixture.iu, shuffled, cfg);
  std::size_t recovered = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (u2q.top1_index[i] == inverse[i]) ++recovered;

  std::ostringstream details;
  details << recovered << "/" << n << " argmax hits on the permuted pairing";
  return {recovered == n, details.str()};
}

// --------------------------------------------------------------- criterion 6
Outcome null_model() {
  const std::size_t n = 500;
  const std::size_t seeds = 100;
  std::size_t hits = 0;
  MatchConfig cfg;
  cfg.k_list = {1};  // full mode, exclude-pair: candidate count stays n
  for (std::uint64_t s = 0; s < seeds; ++s) {
    PairedDataset p;
    p.u = gaussian_set(n, 32, 50000 + 2 * s, "u");
    p.q = gaussian_set(n, 32, 50001 + 2 * s, "q");
    p.q.ids = p.u.ids;
    const auto [iu, iq] = build_paired_indra(p);
    const auto [u2q, q2u] = match(iu, iq, cfg);
    for (std::size_t r : u2q.rank_of_truth)
      if (r == 1) ++hits;
  }
  const double total = static_cast<double>(seeds * n);
  const double mean = static_cast<double>(hits) / total;
  const double p0 = 1.0 / static_cast<double>(n);
  const double sigma = std::sqrt(p0 * (1.0 - p0) / total);
  std::ostringstream details;
  details << "mean top-1 " << mean << " vs null " << p0 << " (3 sigma = "
          << 3.0 * sigma << ")";
  return {std::abs(mean - p0) <= 3.0 * sigma, details.str()};
}

// --------------------------------------------------------------- criterion 7
Outcome sweep_analogue() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> sigmas = {0.0, 3.0, 5.0, 7.0};
  const std::size_t n_seeds = 5;

  auto run_repr = [&](const ReprSpec& repr, std::vector<double>& medians) {
    std::vector<std::vector<double>> per_sigma(sigmas.size());
    for (std::uint64_t seed = 0; seed < n_seeds; ++seed) {
      const auto blobs = generate_blobs(
          {.classes = 10, .per_class = 200, .dim = 64, .separation = 10.0},
          9000 + seed);
      const auto split = stratified_split(blobs.labels, 0.8, 9000 + seed);
      ProbeConfig cfg;
      cfg.seed = 9000 + seed;
      ReprSpec seeded = repr;
      seeded.anchor_seed = 9000 + seed;
      const auto rows = noise_sweep(blobs.embeddings, blobs.labels, sigmas, seeded,
                                    cfg, split, 9000 + seed);
      for (std::size_t i = 0; i < sigmas.size(); ++i)
        per_sigma[i].push_back(rows[i].accuracy);
    }
    medians.clear();
    for (auto& accs : per_sigma) {
      std::sort(accs.begin(), accs.end());
      medians.push_back(accs[accs.size() / 2]);
    }
  };

  std::vector<double> raw_medians, indra_medians;
  ReprSpec raw;
  run_repr(raw, raw_medians);
  ReprSpec indra_repr;
  indra_repr.kind = ReprSpec::Kind::Indra;
  indra_repr.anchor_k = 256;
  run_repr(indra_repr, indra_medians);

  bool ok = raw_medians[0] >= 0.95 && indra_medians[0] >= 0.95;
  for (std::size_t i = 1; i < sigmas.size(); ++i) {
    if (raw_medians[i] > raw_medians[i - 1] + 0.02) ok = false;
    if (indra_medians[i] > indra_medians[i - 1] + 0.02) ok = false;
  }
  if (std::abs(raw_medians[0] - indra_medians[0]) > 0.02) ok = false;
  const double elapsed = seconds_since(start);
  if (elapsed >= 120.0) ok = false;

  std::ostringstream details;
  details << "raw medians";
  for (double a : raw_medians) details << " " << a;
  details << "; indra medians";
  for (double a : indra_medians) details << " " << a;
  details << "; " << elapsed << " s";
  return {ok, details.str()};
}

// --------------------------------------------------------------- criterion 8
Outcome gradient_check() {
  const CounterRng rng(31337);
  std::uint64_t ctr = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t classes = 2 + rng.bounded(ctr++, 3);
    const std::size_t dim = 2 + rng.bounded(ctr++, 7);
    const std::size_t n = 8 + rng.bounded(ctr++, 12);

    Mat features(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < features.size(); ++i)
      features.data()[i] = rng.gaussian(ctr++);
    std::vector<int> labels(n);
    for (auto& y : labels) y = static_cast<int>(rng.bounded(ctr++, classes));
    std::vector<std::size_t> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = i;
    Mat weights(static_cast<Eigen::Index>(classes), static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < weights.size(); ++i)
      weights.data()[i] = 0.4 * rng.gaussian(ctr++);
    Vec bias(static_cast<Eigen::Index>(classes));
    for (Eigen::Index i = 0; i < bias.size(); ++i)
      bias(i) = 0.4 * rng.gaussian(ctr++);

    const double l2 = 1e-3;
    const auto obj = probe_objective(features, labels, rows, weights, bias, l2);
    const double h = 1e-5;
    auto loss_at = [&](const Mat& w, const Vec& b) {
      return probe_objective(features, labels, rows, w, b, l2).loss;
    };
    for (Eigen::Index r = 0; r < weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < weights.cols(); ++c) {
        Mat wp = weights, wm = weights;
        wp(r, c) += h;
        wm(r, c) -= h;
        const double fd = (loss_at(wp, bias) - loss_at(wm, bias)) / (2 * h);
        worst = std::max(worst,
                         std::abs(fd - obj.grad_weights(r, c)) /
                             std::max(1.0, std::abs(obj.grad_weights(r, c))));
      }
    }
    for (Eigen::Index c = 0; c < bias.size(); ++c) {
      Vec bp = bias, bm = bias;
      bp(c) += h;
      bm(c) -= h;
      const double fd = (loss_at(weights, bp) - loss_at(weights, bm)) / (2 * h);
      worst = std::max(worst, std::abs(fd - obj.grad_bias(c)) /
                                  std::max(1.0, std::abs(obj.grad_bias(c))));
    }
  }
  std::ostringstream details;
  details << "max relative error " << worst << " over 20 problems (tol 1e-4)";
  return {worst <= 1e-4, details.str()};
}

// --------------------------------------------------------------- criterion 9
Outcome oracle_equivalence() {
  const CounterRng rng(60601);
  std::uint64_t ctr = 0;
  std::size_t checked = 0;
  for (int instance = 0; instance < 50; ++instance) {
    const std::size_t n = 8 + rng.bounded(ctr++, 121);  // n <= 128
    PairedDataset p;
    p.u = gaussian_set(n, 6, rng.bits(ctr++), "u");
    p.q = gaussian_set(n, 6, rng.bits(ctr++), "q");
    p.q.ids = p.u.ids;
    const auto [iu, iq] = build_paired_indra(p);

    // sparsify_topk vs the full-sort reference.
    const std::size_t k = 1 + rng.bounded(ctr++, n);
    const auto sparse = sparsify_topk(iu, k, std::numbers::pi);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row(n);
      for (std::size_t j = 0; j < n; ++j)
        row[j] =
            iu.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const auto keep = oracle::topk_keep(row, k);
      for (std::size_t j = 0; j < n; ++j) {
        const double got = sparse.values(static_cast<Eigen::Index>(i),
                                         static_cast<Eigen::Index>(j));
        if (got != (keep[j] ? row[j] : std::numbers::pi)) {
          std::ostringstream details;
          details << "sparsify mismatch at instance " << instance << " row " << i;
          return {false, details.str()};
        }
      }
    }

    // match rankings vs the naive masked-recompute + full-sort reference.
    const auto simkind = static_cast<int>(rng.bounded(ctr++, 3));
    MatchConfig cfg;
    cfg.row_similarity =
        simkind == 0   ? MatchConfig::RowSimilarity::Cosine
        : simkind == 1 ? MatchConfig::RowSimilarity::CenteredCosine
                       : MatchConfig::RowSimilarity::NegativeEuclidean;
    cfg.k_list = {1};
    const auto [u2q, q2u] = match(iu, iq, cfg);
    const auto sim = simkind == 0   ? oracle::Sim::Cosine
                     : simkind == 1 ? oracle::Sim::CenteredCosine
                                    : oracle::Sim::NegativeEuclidean;
    const auto sims = oracle::all_similarities(iu.values, iq.values, sim, true);
    for (std::size_t i = 0; i < n; ++i) {
      if (u2q.rank_of_truth[i] != oracle::rank_of(sims[i], i) ||
          u2q.top1_index[i] != oracle::ranking(sims[i])[0]) {
        std::ostringstream details;
        details << "ranking mismatch at instance " << instance << " query " << i;
        return {false, details.str()};
      }
    }
    ++checked;
  }
  std::ostringstream details;
  details << checked << "/50 instances agree exactly with the references";
  return {checked == 50, details.str()};
}

// -------------------------------------------------------------- criterion 10
std::string shell_quote(const std::string& s) { return "'" + s + "'"; }

int run_cli(const std::string& cli, const std::string& args) {
  const std::string cmd = shell_quote(cli) + " " + args + " >/dev/null 2>&1";
  return std::system(cmd.c_str());
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome cli_determinism() {
  const char* cli = std::getenv("INDRA_CLI_BIN");
  if (cli == nullptr) return {false, "INDRA_CLI_BIN not set; cannot drive the CLI"};

  const fs::path root =
      fs::temp_directory_path() / ("indra_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);

  // Two full pipeline replays, different worker counts, same seeds.
  auto pipeline = [&](const std::string& tag, int threads) -> bool {
    const std::string t = " --threads " + std::to_string(threads) + " ";
    const fs::path base = root / tag;
    fs::create_directories(base);
    const auto at = [&](const std::string& leaf) {
      return shell_quote((base / leaf).string());
    };
    int rc = 0;
    rc |= run_cli(cli, "synth" + t +
                           "--gen ortho:n=120,d=16,noise=0 --seed 11 --out " +
                           at("synth"));
    rc |= run_cli(cli, "build" + t + "--input " + at("synth/u.indr") +
                           " --paired " + at("synth/q.indr") +
                           " --anchors random:24 --seed 11 --out " + at("built"));
    rc |= run_cli(cli, "build" + t + "--input " + at("synth/u.indr") + " --out " +
                           at("full"));
    rc |= run_cli(cli, "ops" + t + "--input " + at("full/indra.indr") +
                           " --ops sparsify:16:pi,zscore --out " + at("ops"));
    rc |= run_cli(cli, "verify" + t + "--input " + at("full/indra.indr") +
                           " --out " + at("verify"));
    rc |= run_cli(cli, "match" + t + "--input " + at("built/indra_u.indr") +
                           " --paired " + at("built/indra_q.indr") +
                           " --k 1,5,10 --out " + at("match"));
    rc |= run_cli(cli, "synth" + t + "--gen blobs:c=3,n=40,d=8,sep=8 --seed 12 --out " +
                           at("blobs"));
    rc |= run_cli(cli, "sweep" + t + "--input " + at("blobs/embeddings.indr") +
                           " --labels " + at("blobs/labels.csv") +
                           " --sigma 0,2 --repr indra:16 --max-iter 80 --seed 12 "
                           "--out " + at("sweep"));
    return rc == 0;
  };

  if (!pipeline("run_a", 1)) return {false, "pipeline failed with --threads 1"};
  if (!pipeline("run_b", 3)) return {false, "pipeline failed with --threads 3"};

  // Byte-compare every data artifact; manifests may differ in environment only.
  std::size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "run_a")) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().filename() == "manifest.json") continue;
    const auto rel = fs::relative(entry.path(), root / "run_a");
    const fs::path twin = root / "run_b" / rel;
    if (!fs::exists(twin)) return {false, "missing twin output " + twin.string()};
    if (slurp(entry.path()) != slurp(twin))
      return {false, "outputs differ: " + rel.string()};
    if (entry.path().extension() == ".indr" &&
        payload_crc32(entry.path().string()) != payload_crc32(twin.string()))
      return {false, "payload CRC differs: " + rel.string()};
    ++compared;
  }
  fs::remove_all(root);
  std::ostringstream details;
  details << compared << " artifacts bit-identical across --threads 1 vs 3";
  return {compared >= 12, details.str()};
}

// -------------------------------------------------------------- criterion 11
Outcome format_roundtrip() {
  const fs::path dir =
      fs::temp_directory_path() / ("indra_roundtrip_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string epath = (dir / "e.indr").string();
  const std::string mpath = (dir / "m.indr").string();

  const CounterRng rng(101);
  std::uint64_t ctr = 0;
  std::size_t cycles = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.bounded(ctr++, 24);
    const std::size_t d = 1 + rng.bounded(ctr++, 12);
    auto e = gaussian_set(n, d, rng.bits(ctr++), "r");
    for (Eigen::Index i = 0; i < e.data.size(); ++i)
      e.data.data()[i] = static_cast<float>(e.data.data()[i]);  // f32 on disk
    e.provenance = "roundtrip trial " + std::to_string(trial);
    save_embeddings(e, epath);
    const auto eb = load_embeddings(epath);
    if (eb.data != e.data || eb.ids != e.ids || eb.provenance != e.provenance)
      return {false,
              "embedding round-trip diverged at trial " + std::to_string(trial)};
    ++cycles;

    auto m = build_indra(e);
    if (n > 1 && rng.uniform(ctr++) < 0.5)
      m = sparsify_topk(m, 1 + rng.bounded(ctr++, n), std::numbers::pi);
    if (rng.uniform(ctr++) < 0.3) m = normalize_rows(m, RowNorm::Center);
    save_matrix(m, mpath);
    const auto mb = load_matrix(mpath);
    if (mb.values != m.values || mb.row_ids != m.row_ids ||
        mb.col_ids != m.col_ids || mb.anchored != m.anchored ||
        mb.cost_kind != m.cost_kind || mb.op_history != m.op_history)
      return {false,
              "matrix round-trip diverged at trial " + std::to_string(trial)};
    ++cycles;
  }
  fs::remove_all(dir);
  std::ostringstream details;
  details << cycles << " save/load cycles lossless, metadata included";
  return {cycles == 1000, details.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string only = argc > 1 ? argv[1] : "";
  std::vector<CostMatrix> corpus;
  MatchFixture fixture;

  struct Criterion {
    std::string name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"metric validity (Lawvere axioms, 100 seeds)",
       [&] { return metric_validity(corpus); }},
      {"yoneda faithfulness", [&] { return yoneda_faithfulness(corpus); }},
      {"structure preservation", [&] { return structure_preservation(corpus); }},
      {"orthogonal-invariance matching",
       [&] { return orthogonal_invariance(fixture); }},
      {"permutation recovery", [&] { return permutation_recovery(fixture); }},
      {"null model", null_model},
      {"noise-sweep protocol analogue", sweep_analogue},
      {"probe gradient check", gradient_check},
      {"oracle equivalence (sparsify + match)", oracle_equivalence},
      {"CLI determinism across thread counts", cli_determinism},
      {"format round-trip", format_roundtrip},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    if (!only.empty() && c.name.find(only) == std::string::npos) continue;
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (outcome.passed ? "[PASS]" : "[FAIL]") << " criterion " << i + 1
              << ": " << c.name << " - " << outcome.details << "\n"
              << std::flush;
    if (!outcome.passed) ++failures;
  }
  if (failures > 0) {
    std::cout << failures << " criteria failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
