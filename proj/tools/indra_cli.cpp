// Command-line surface: synth, build, ops, verify, match, probe, sweep, info.
// Every run writes its outputs plus a manifest (config echo, seeds, input and
// output checksums) under --out, so results can be reproduced bit-for-bit.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "indra/indra.hpp"
#include "indra/parallel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Small parsing helpers for the CLI mini-grammars.

std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw indra::ParseError("expected key=value, got \"" + item + "\"");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return kv;
}

double want_num(const std::map<std::string, std::string>& kv, const std::string& key,
                std::optional<double> fallback = std::nullopt) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    if (fallback) return *fallback;
    throw indra::ParseError("missing generator parameter \"" + key + "\"");
  }
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw indra::ParseError("bad number for \"" + key + "\": " + it->second);
  }
}

indra::SyntheticSpec parse_synth_spec(const std::string& text, std::uint64_t seed) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const auto kv = parse_kv(colon == std::string::npos ? "" : text.substr(colon + 1));
  indra::SyntheticSpec spec;
  spec.seed = seed;
  if (name == "blobs") {
    spec.generator = indra::BlobsSpec{
        static_cast<std::size_t>(want_num(kv, "c")),
        static_cast<std::size_t>(want_num(kv, "n")),
        static_cast<std::size_t>(want_num(kv, "d")),
        want_num(kv, "sep")};
  } else if (name == "ortho") {
    spec.generator = indra::PairedOrthogonalSpec{
        static_cast<std::size_t>(want_num(kv, "n")),
        static_cast<std::size_t>(want_num(kv, "d")),
        want_num(kv, "noise", 0.0)};
  } else if (name == "nonlinear") {
    spec.generator = indra::PairedNonlinearSpec{
        static_cast<std::size_t>(want_num(kv, "n")),
        static_cast<std::size_t>(want_num(kv, "latent")),
        static_cast<std::size_t>(want_num(kv, "du")),
        static_cast<std::size_t>(want_num(kv, "dq")),
        want_num(kv, "noise", 0.0)};
  } else {
    throw indra::ParseError("unknown generator \"" + name +
                            "\" (expected blobs | ortho | nonlinear)");
  }
  return spec;
}

indra::AnchorSpec parse_anchor_spec(const std::string& text, std::uint64_t seed,
                                    bool exclude_from_queries) {
  indra::AnchorSpec anchors;
  anchors.seed = seed;
  anchors.exclude_from_queries = exclude_from_queries;
  if (text == "all") {
    anchors.mode = indra::AnchorSpec::Mode::All;
  } else if (text.rfind("random:", 0) == 0) {
    anchors.mode = indra::AnchorSpec::Mode::RandomK;
    try {
      anchors.k = static_cast<std::size_t>(std::stoull(text.substr(7)));
    } catch (const std::exception&) {
      throw indra::ParseError("bad anchor count in \"" + text + "\"");
    }
  } else if (text.rfind("ids:", 0) == 0) {
    anchors.mode = indra::AnchorSpec::Mode::ExplicitIds;
    const std::string path = text.substr(4);
    std::ifstream in(path);
    if (!in) throw indra::ParseError("cannot open anchor id file \"" + path + "\"");
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) anchors.ids.push_back(line);
    }
    if (anchors.ids.empty())
      throw indra::ParseError("anchor id file \"" + path + "\" is empty");
  } else {
    throw indra::ParseError("bad --anchors value \"" + text +
                            "\" (expected all | random:K | ids:FILE)");
  }
  return anchors;
}

indra::MatchConfig::RowSimilarity parse_sim(const std::string& text) {
  if (text == "cosine") return indra::MatchConfig::RowSimilarity::Cosine;
  if (text == "centered") return indra::MatchConfig::RowSimilarity::CenteredCosine;
  if (text == "negeuclid")
    return indra::MatchConfig::RowSimilarity::NegativeEuclidean;
  throw indra::ParseError("bad --sim value \"" + text +
                          "\" (expected cosine | centered | negeuclid)");
}

std::vector<std::size_t> parse_k_list(const std::string& text) {
  std::vector<std::size_t> ks;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      ks.push_back(std::stoull(item));
    } catch (const std::exception&) {
      throw indra::ParseError("bad --k entry \"" + item + "\"");
    }
  }
  if (ks.empty()) throw indra::ParseError("--k lists no values");
  return ks;
}

std::vector<double> parse_sigma_list(const std::string& text) {
  std::vector<double> sigmas;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      sigmas.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw indra::ParseError("bad --sigma entry \"" + item + "\"");
    }
    if (sigmas.back() < 0.0)
      throw indra::ParseError("--sigma entries must be >= 0, got \"" + item + "\"");
  }
  if (sigmas.empty()) throw indra::ParseError("--sigma lists no values");
  return sigmas;
}

indra::ReprSpec parse_repr(const std::string& text, std::uint64_t seed) {
  indra::ReprSpec repr;
  repr.anchor_seed = seed;
  if (text == "raw") return repr;
  if (text.rfind("indra:", 0) == 0) {
    repr.kind = indra::ReprSpec::Kind::Indra;
    try {
      repr.anchor_k = std::stoull(text.substr(6));
    } catch (const std::exception&) {
      throw indra::ParseError("bad anchor count in --repr \"" + text + "\"");
    }
    return repr;
  }
  throw indra::ParseError("bad --repr value \"" + text +
                          "\" (expected raw | indra:K)");
}

// ---------------------------------------------------------------------------
// Manifest: one JSON per run directory.

class RunManifest {
 public:
  RunManifest(std::string command, std::string out_dir)
      : command_(std::move(command)), out_dir_(std::move(out_dir)) {
    fs::create_directories(out_dir_);
  }

  json& config() { return config_; }

  void add_input(const std::string& path) {
    inputs_.push_back({{"path", path}, {"crc32", indra::file_crc32(path)}});
  }

  std::string path_for(const std::string& name) const {
    return (fs::path(out_dir_) / name).string();
  }

  void add_output(const std::string& path) {
    json entry{{"path", path}, {"crc32", indra::file_crc32(path)}};
    if (path.size() > 5 && path.substr(path.size() - 5) == ".indr")
      entry["payload_crc32"] = indra::payload_crc32(path);
    outputs_.push_back(entry);
  }

  void write() const {
    json doc;
    doc["tool"] = "indra";
    doc["version"] = indra::kVersion;
    doc["command"] = command_;
    doc["config"] = config_;
    doc["inputs"] = inputs_;
    doc["outputs"] = outputs_;
    // Environment facts never affect output bytes; kept out of config so a
    // rerun with a different thread count yields an identical config echo.
    doc["environment"] = {{"threads", indra::thread_count()}};
    std::ofstream out(path_for("manifest.json"), std::ios::trunc);
    out << doc.dump(2) << "\n";
  }

 private:
  std::string command_;
  std::string out_dir_;
  json config_ = json::object();
  json inputs_ = json::array();
  json outputs_ = json::array();
};

// ---------------------------------------------------------------------------
// Report serialization.

json verification_to_json(const indra::VerificationReport& r) {
  json doc;
  doc["passed"] = r.passed;
  doc["tolerances"] = {{"triangle", r.triangle_tol},
                       {"faithfulness", r.faithfulness_tol},
                       {"t0", r.t0_tol}};
  doc["identity_total"] = r.identity_total;
  doc["symmetry_total"] = r.symmetry_total;
  doc["triangle_total"] = r.triangle_total;
  doc["yoneda_max_error"] = r.yoneda_max_error;
  doc["structure_max_error"] = r.structure_max_error;
  json idv = json::array();
  for (const auto& v : r.identity_violations)
    idv.push_back({{"i", v.i}, {"value", v.value}});
  doc["identity_violations"] = idv;
  json symv = json::array();
  for (const auto& v : r.symmetry_violations)
    symv.push_back({{"i", v.i}, {"j", v.j}, {"gap", v.gap}});
  doc["symmetry_violations"] = symv;
  json triv = json::array();
  for (const auto& v : r.triangle_violations)
    triv.push_back({{"i", v.i}, {"j", v.j}, {"k", v.k}, {"slack", v.slack}});
  doc["triangle_violations"] = triv;
  json t0 = json::array();
  for (const auto& [i, j] : r.t0_duplicates) t0.push_back({{"i", i}, {"j", j}});
  doc["t0_duplicates"] = t0;
  return doc;
}

json retrieval_to_json(const indra::RetrievalReport& r) {
  json doc;
  doc["direction"] = r.direction;
  doc["config"] = {
      {"row_similarity", indra::row_similarity_name(r.config.row_similarity)},
      {"diagonal_handling",
       indra::diagonal_handling_name(r.config.diagonal_handling)},
      {"k_list", r.config.k_list}};
  json topk = json::object();
  for (const auto& [k, acc] : r.topk_accuracy) topk[std::to_string(k)] = acc;
  doc["topk_accuracy"] = topk;
  doc["rank_of_truth"] = r.rank_of_truth;
  doc["top1_index"] = r.top1_index;
  return doc;
}

void write_json(const std::string& path, const json& doc) {
  std::ofstream out(path, std::ios::trunc);
  out << doc.dump(2) << "\n";
}

void write_retrieval_csv(const std::string& path, const indra::RetrievalReport& r,
                         const std::vector<std::string>& query_ids,
                         const std::vector<std::string>& candidate_ids) {
  std::ofstream out(path, std::ios::trunc);
  out << "query_index,query_id,rank_of_truth,top1_index,top1_id\n";
  for (std::size_t i = 0; i < r.rank_of_truth.size(); ++i) {
    out << i << "," << query_ids[i] << "," << r.rank_of_truth[i] << ","
        << r.top1_index[i] << "," << candidate_ids[r.top1_index[i]] << "\n";
  }
}

// ---------------------------------------------------------------------------
// Subcommand workers. Each returns the process exit code.

struct CommonArgs {
  std::string out_dir;
  std::uint64_t seed = 0;
};

int run_synth(const CommonArgs& common, const std::string& gen) {
  RunManifest manifest("synth", common.out_dir);
  manifest.config() = {{"gen", gen}, {"seed", common.seed}};
  const auto spec = parse_synth_spec(gen, common.seed);

  if (std::holds_alternative<indra::BlobsSpec>(spec.generator)) {
    const auto blobs =
        indra::generate_blobs(std::get<indra::BlobsSpec>(spec.generator), spec.seed);
    const auto epath = manifest.path_for("embeddings.indr");
    const auto lpath = manifest.path_for("labels.csv");
    indra::save_embeddings(blobs.embeddings, epath);
    indra::save_labels_csv(blobs.embeddings.ids, blobs.labels, lpath);
    manifest.add_output(epath);
    manifest.add_output(lpath);
    std::cout << "wrote " << epath << " (" << blobs.embeddings.size() << "x"
              << blobs.embeddings.dim() << ") and labels\n";
  } else {
    indra::PairedDataset p;
    if (std::holds_alternative<indra::PairedOrthogonalSpec>(spec.generator)) {
      p = indra::generate_paired_orthogonal(
          std::get<indra::PairedOrthogonalSpec>(spec.generator), spec.seed);
    } else {
      p = indra::generate_paired_nonlinear(
          std::get<indra::PairedNonlinearSpec>(spec.generator), spec.seed);
    }
    const auto upath = manifest.path_for("u.indr");
    const auto qpath = manifest.path_for("q.indr");
    indra::save_embeddings(p.u, upath);
    indra::save_embeddings(p.q, qpath);
    manifest.add_output(upath);
    manifest.add_output(qpath);
    std::cout << "wrote " << upath << " and " << qpath << " (" << p.u.size()
              << " pairs)\n";
  }
  manifest.write();
  return 0;
}

int run_build(const CommonArgs& common, const std::string& input,
              const std::string& paired, const std::string& anchors_text,
              bool include_anchor_queries, std::size_t max_n) {
  RunManifest manifest("build", common.out_dir);
  manifest.config() = {{"input", input},
                       {"paired", paired},
                       {"anchors", anchors_text},
                       {"seed", common.seed},
                       {"include_anchor_queries", include_anchor_queries},
                       {"max_n", max_n}};
  const auto anchors =
      parse_anchor_spec(anchors_text, common.seed, !include_anchor_queries);

  const auto u = indra::load_embeddings(input);
  manifest.add_input(input);
  if (anchors.mode == indra::AnchorSpec::Mode::All && u.size() > max_n) {
    throw indra::MatrixTooLarge(
        "full mode would materialize " + std::to_string(u.size()) + "x" +
        std::to_string(u.size()) +
        " costs; use --anchors random:K for a landmark profile or raise --max-n");
  }

  if (paired.empty()) {
    const auto m = indra::build_indra(u, {}, anchors);
    const auto path = manifest.path_for("indra.indr");
    indra::save_matrix(m, path);
    manifest.add_output(path);
    std::cout << "wrote " << path << " (" << m.rows() << "x" << m.cols() << ")\n";
  } else {
    indra::PairedDataset p;
    p.u = u;
    p.q = indra::load_embeddings(paired);
    manifest.add_input(paired);
    const auto [iu, iq] = indra::build_paired_indra(p, {}, anchors);
    const auto upath = manifest.path_for("indra_u.indr");
    const auto qpath = manifest.path_for("indra_q.indr");
    indra::save_matrix(iu, upath);
    indra::save_matrix(iq, qpath);
    manifest.add_output(upath);
    manifest.add_output(qpath);
    std::cout << "wrote " << upath << " and " << qpath << " (" << iu.rows() << "x"
              << iu.cols() << ")\n";
  }
  manifest.write();
  return 0;
}

int run_ops(const CommonArgs& common, const std::string& input,
            const std::string& ops_text) {
  RunManifest manifest("ops", common.out_dir);
  manifest.config() = {{"input", input}, {"ops", ops_text}};
  const auto spec = indra::parse_operator_spec(ops_text);
  auto m = indra::load_matrix(input);
  manifest.add_input(input);
  m = indra::apply_operators(m, spec);
  const auto path = manifest.path_for("processed.indr");
  indra::save_matrix(m, path);
  manifest.add_output(path);
  manifest.write();
  std::cout << "wrote " << path << " (history:";
  if (m.op_history.empty()) std::cout << " none";
  for (const auto& h : m.op_history) std::cout << " " << h;
  std::cout << ")\n";
  return 0;
}

int run_verify(const CommonArgs& common, const std::string& input,
               const indra::VerifyOptions& opts) {
  RunManifest manifest("verify", common.out_dir);
  manifest.config() = {{"input", input},
                       {"triangle_tol", opts.triangle_tol},
                       {"faithfulness_tol", opts.faithfulness_tol},
                       {"t0_tol", opts.t0_tol},
                       {"max_n", opts.max_n},
                       {"force", opts.force}};
  const auto m = indra::load_matrix(input);
  manifest.add_input(input);
  const auto report = indra::verify_all(m, opts);
  const auto path = manifest.path_for("verify.json");
  write_json(path, verification_to_json(report));
  manifest.add_output(path);
  manifest.write();
  std::cout << (report.passed ? "PASS" : "FAIL") << ": " << m.rows() << "x"
            << m.cols() << " matrix, yoneda max error " << report.yoneda_max_error
            << ", " << report.triangle_total << " triangle violations, "
            << report.t0_duplicates.size() << " t0 duplicates\n";
  return report.passed ? 0 : 1;
}

int run_match(const CommonArgs& common, const std::string& input,
              const std::string& paired, const std::string& sim,
              const std::string& diag, const std::string& k_text) {
  RunManifest manifest("match", common.out_dir);
  manifest.config() = {{"input", input},
                       {"paired", paired},
                       {"sim", sim},
                       {"diag", diag},
                       {"k", k_text}};
  indra::MatchConfig cfg;
  cfg.row_similarity = parse_sim(sim);
  if (diag == "include") {
    cfg.diagonal_handling = indra::MatchConfig::DiagonalHandling::Include;
  } else if (diag == "exclude-pair") {
    cfg.diagonal_handling = indra::MatchConfig::DiagonalHandling::ExcludePair;
  } else {
    throw indra::ParseError("bad --diag value \"" + diag +
                            "\" (expected include | exclude-pair)");
  }
  cfg.k_list = parse_k_list(k_text);

  const auto iu = indra::load_matrix(input);
  const auto iq = indra::load_matrix(paired);
  manifest.add_input(input);
  manifest.add_input(paired);
  const auto [u2q, q2u] = indra::match(iu, iq, cfg);

  const auto ujson = manifest.path_for("match_u2q.json");
  const auto qjson = manifest.path_for("match_q2u.json");
  const auto ucsv = manifest.path_for("match_u2q.csv");
  const auto qcsv = manifest.path_for("match_q2u.csv");
  write_json(ujson, retrieval_to_json(u2q));
  write_json(qjson, retrieval_to_json(q2u));
  write_retrieval_csv(ucsv, u2q, iu.row_ids, iq.row_ids);
  write_retrieval_csv(qcsv, q2u, iq.row_ids, iu.row_ids);
  for (const auto& p : {ujson, qjson, ucsv, qcsv}) manifest.add_output(p);
  manifest.write();

  for (const auto* r : {&u2q, &q2u}) {
    std::cout << r->direction << ":";
    for (const auto& [k, acc] : r->topk_accuracy)
      std::cout << " top-" << k << " " << acc;
    std::cout << "\n";
  }
  return 0;
}

int run_probe_or_sweep(const CommonArgs& common, const std::string& command,
                       const std::string& input, const std::string& labels_path,
                       const std::string& repr_text, const std::string& sigma_text,
                       double train_frac, const indra::ProbeConfig& cfg) {
  RunManifest manifest(command, common.out_dir);
  manifest.config() = {{"input", input},           {"labels", labels_path},
                       {"repr", repr_text},        {"sigma", sigma_text},
                       {"train_frac", train_frac}, {"seed", common.seed},
                       {"l2", cfg.l2_penalty},     {"max_iter", cfg.max_iterations},
                       {"tol", cfg.convergence_tol}};
  const auto e = indra::load_embeddings(input);
  const auto labels = indra::load_labels_csv(labels_path, e.ids);
  manifest.add_input(input);
  manifest.add_input(labels_path);

  const auto repr = parse_repr(repr_text, common.seed);
  const auto sigmas = parse_sigma_list(sigma_text);
  const auto split = indra::stratified_split(labels, train_frac, common.seed);
  const auto rows =
      indra::noise_sweep(e, labels, sigmas, repr, cfg, split, common.seed);

  if (command == "probe") {
    json doc;
    doc["accuracy"] = rows.front().accuracy;
    doc["repr_kind"] = rows.front().repr_kind;
    doc["sigma"] = rows.front().sigma;
    doc["seed"] = common.seed;
    doc["train_size"] = split.train.size();
    doc["test_size"] = split.test.size();
    const auto path = manifest.path_for("probe.json");
    write_json(path, doc);
    manifest.add_output(path);
    std::cout << "accuracy " << rows.front().accuracy << " ("
              << rows.front().repr_kind << ", sigma " << rows.front().sigma << ")\n";
  } else {
    const auto path = manifest.path_for("sweep.csv");
    std::ofstream out(path, std::ios::trunc);
    out << "sigma,repr_kind,accuracy,seed\n";
    out.precision(17);
    for (const auto& row : rows)
      out << row.sigma << "," << row.repr_kind << "," << row.accuracy << ","
          << row.seed << "\n";
    out.close();
    manifest.add_output(path);
    for (const auto& row : rows)
      std::cout << "sigma " << row.sigma << ": accuracy " << row.accuracy << "\n";
  }
  manifest.write();
  return 0;
}

int run_info(const std::string& input) {
  std::ifstream probe(input, std::ios::binary);
  if (!probe) throw indra::ParseError("cannot open \"" + input + "\"");
  char magic[4] = {};
  probe.read(magic, 4);
  const bool binary = probe.gcount() == 4 && std::string(magic, 4) == indra::kFormatMagic;
  probe.close();

  if (!binary) {
    const auto e = indra::load_embeddings(input);
    std::cout << "embeddings (csv): n=" << e.size() << " d=" << e.dim() << "\n";
    return 0;
  }
  try {
    const auto m = indra::load_matrix(input);
    std::cout << "cost matrix: " << m.rows() << "x" << m.cols()
              << (m.anchored ? " (anchored)" : " (full)") << " kind=" << m.cost_kind
              << "\n";
    if (!m.op_history.empty()) {
      std::cout << "op history:";
      for (const auto& h : m.op_history) std::cout << " " << h;
      std::cout << "\n";
    }
  } catch (const indra::ParseError&) {
    const auto e = indra::load_embeddings(input);
    std::cout << "embeddings: n=" << e.size() << " d=" << e.dim();
    if (!e.provenance.empty()) std::cout << " provenance=\"" << e.provenance << "\"";
    std::cout << "\n";
  }
  std::cout << "payload crc32: " << indra::payload_crc32(input) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Indra representations: relational profiles from embedding exports"};
  app.require_subcommand(1);

  unsigned threads = 0;
  app.add_option("--threads", threads,
                 "worker threads (0 = INDRA_THREADS env or hardware)");

  CommonArgs common;
  std::string input, paired, labels_path;

  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  std::string gen;
  synth->add_option("--gen", gen,
                    "blobs:c=,n=,d=,sep= | ortho:n=,d=,noise= | "
                    "nonlinear:n=,latent=,du=,dq=,noise=")
      ->required();
  synth->add_option("--seed", common.seed, "master seed");
  synth->add_option("--out", common.out_dir, "output directory")->required();

  auto* build = app.add_subcommand("build", "build Indra cost matrices");
  std::string anchors_text = "all";
  bool include_anchor_queries = false;
  std::size_t build_max_n = 20000;
  build->add_option("--input", input, "embeddings (.indr or .csv)")->required();
  build->add_option("--paired", paired, "second-modality embeddings");
  build->add_option("--anchors", anchors_text, "all | random:K | ids:FILE");
  build->add_option("--seed", common.seed, "master seed (random anchors)");
  build->add_flag("--include-anchor-queries", include_anchor_queries,
                  "keep anchor samples as profile rows");
  build->add_option("--max-n", build_max_n, "full-mode size cap");
  build->add_option("--out", common.out_dir, "output directory")->required();

  auto* ops = app.add_subcommand("ops", "apply post-processing operators");
  std::string ops_text;
  ops->add_option("--input", input, "cost matrix (.indr)")->required();
  ops->add_option("--ops", ops_text, "e.g. sparsify:8:pi,zscore")->required();
  ops->add_option("--out", common.out_dir, "output directory")->required();

  auto* verify = app.add_subcommand("verify",
                                    "certify the enriched-category properties");
  indra::VerifyOptions vopts;
  verify->add_option("--input", input, "cost matrix (.indr)")->required();
  verify->add_option("--tol-triangle", vopts.triangle_tol,
                     "triangle slack tolerance");
  verify->add_option("--tol-faithfulness", vopts.faithfulness_tol,
                     "Yoneda faithfulness tolerance");
  verify->add_option("--tol-t0", vopts.t0_tol, "T0 duplicate tolerance");
  verify->add_option("--max-n", vopts.max_n, "size cap for O(n^3) enumeration");
  verify->add_flag("--force", vopts.force, "override the size cap");
  verify->add_option("--out", common.out_dir, "output directory")->required();

  auto* match_cmd = app.add_subcommand("match", "cross-modal relational matching");
  std::string sim = "cosine", diag = "exclude-pair", k_text = "5,10,30,50";
  match_cmd->add_option("--input", input, "modality-U Indra matrix")->required();
  match_cmd->add_option("--paired", paired, "modality-Q Indra matrix")->required();
  match_cmd->add_option("--sim", sim, "cosine | centered | negeuclid");
  match_cmd->add_option("--diag", diag, "include | exclude-pair (full mode)");
  match_cmd->add_option("--k", k_text, "top-k list, e.g. 5,10,30,50");
  match_cmd->add_option("--out", common.out_dir, "output directory")->required();

  indra::ProbeConfig pcfg;
  std::string repr_text = "raw", sigma_text = "0";
  double train_frac = 0.8;
  auto add_probe_opts = [&](CLI::App* cmd, bool with_sigma) {
    cmd->add_option("--input", input, "embeddings (.indr or .csv)")->required();
    cmd->add_option("--labels", labels_path, "labels csv (id,label)")->required();
    cmd->add_option("--repr", repr_text, "raw | indra:K");
    if (with_sigma)
      cmd->add_option("--sigma", sigma_text, "noise levels, e.g. 0,3,5,7")
          ->required();
    cmd->add_option("--train-frac", train_frac, "train fraction (stratified)");
    cmd->add_option("--l2", pcfg.l2_penalty, "L2 penalty");
    cmd->add_option("--max-iter", pcfg.max_iterations, "max optimizer iterations");
    cmd->add_option("--tol", pcfg.convergence_tol, "gradient-norm tolerance");
    cmd->add_option("--seed", common.seed, "master seed (split, noise, anchors)");
    cmd->add_option("--out", common.out_dir, "output directory")->required();
  };
  auto* probe = app.add_subcommand("probe", "linear probe on one representation");
  add_probe_opts(probe, false);
  auto* sweep = app.add_subcommand("sweep", "noise-robustness sweep");
  add_probe_opts(sweep, true);

  auto* info = app.add_subcommand("info", "describe a data file");
  info->add_option("--input", input, "file to describe")->required();

  // Let `indra <sub> --threads N` reach the global option.
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage errors
  }

  indra::set_thread_count(threads);
  pcfg.seed = common.seed;

  try {
    if (synth->parsed()) return run_synth(common, gen);
    if (build->parsed())
      return run_build(common, input, paired, anchors_text, include_anchor_queries,
                       build_max_n);
    if (ops->parsed()) return run_ops(common, input, ops_text);
    if (verify->parsed()) return run_verify(common, input, vopts);
    if (match_cmd->parsed())
      return run_match(common, input, paired, sim, diag, k_text);
    if (probe->parsed())
      return run_probe_or_sweep(common, "probe", input, labels_path, repr_text, "0",
                                train_frac, pcfg);
    if (sweep->parsed())
      return run_probe_or_sweep(common, "sweep", input, labels_path, repr_text,
                                sigma_text, train_frac, pcfg);
    if (info->parsed()) return run_info(input);
  } catch (const indra::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;  // data errors
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
