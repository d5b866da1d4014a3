// Python bindings. Matrices cross the boundary as numpy arrays (row-major
// doubles); everything else maps 1:1 onto the C++ surface.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "indra/indra.hpp"
#include "indra/parallel.hpp"

namespace py = pybind11;
using namespace indra;

namespace {

EmbeddingSet make_embedding_set(const Mat& data, std::vector<std::string> ids,
                                std::string provenance) {
  EmbeddingSet e;
  e.data = data;
  if (ids.empty()) {
    for (Eigen::Index i = 0; i < data.rows(); ++i)
      ids.push_back("row" + std::to_string(i));
  }
  e.ids = std::move(ids);
  e.provenance = std::move(provenance);
  return e;
}

std::vector<std::string> validation_messages(const EmbeddingSet& e) {
  std::vector<std::string> out;
  for (const auto& v : validate_embeddings(e).violations) out.push_back(v.message);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Indra representations: relational angular-distance profiles of "
            "embedding sets, cross-modal matching, linear probes and "
            "enriched-metric verification";
  m.attr("__version__") = kVersion;

  // Base first: translators run newest-first, so the subclasses must be
  // registered after their base to win.
  py::register_exception<Error>(m, "IndraError");
  py::register_exception<DimensionMismatch>(m, "DimensionMismatchError");
  py::register_exception<ZeroNormInput>(m, "ZeroNormInputError");
  py::register_exception<ValidationError>(m, "ValidationError");
  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<ChecksumMismatch>(m, "ChecksumMismatchError");

  // ---- core types -------------------------------------------------------

  py::class_<EmbeddingSet>(m, "EmbeddingSet")
      .def(py::init(&make_embedding_set), py::arg("data"),
           py::arg("ids") = std::vector<std::string>{},
           py::arg("provenance") = std::string{})
      .def_readwrite("ids", &EmbeddingSet::ids)
      .def_readwrite("data", &EmbeddingSet::data)
      .def_readwrite("provenance", &EmbeddingSet::provenance)
      .def_property_readonly("n", &EmbeddingSet::size)
      .def_property_readonly("dim", &EmbeddingSet::dim)
      .def("__repr__", [](const EmbeddingSet& e) {
        return "<EmbeddingSet " + std::to_string(e.size()) + "x" +
               std::to_string(e.dim()) + ">";
      });

  py::class_<CostMatrix>(m, "CostMatrix")
      .def_readwrite("row_ids", &CostMatrix::row_ids)
      .def_readwrite("col_ids", &CostMatrix::col_ids)
      .def_readwrite("values", &CostMatrix::values)
      .def_readwrite("anchored", &CostMatrix::anchored)
      .def_readwrite("cost_kind", &CostMatrix::cost_kind)
      .def_readwrite("op_history", &CostMatrix::op_history)
      .def_property_readonly("shape",
                             [](const CostMatrix& c) {
                               return py::make_tuple(c.rows(), c.cols());
                             })
      .def("__repr__", [](const CostMatrix& c) {
        return "<CostMatrix " + std::to_string(c.rows()) + "x" +
               std::to_string(c.cols()) + (c.anchored ? " anchored" : " full") + ">";
      });

  py::class_<PairedDataset>(m, "PairedDataset")
      .def(py::init([](EmbeddingSet u, EmbeddingSet q) {
             PairedDataset p;
             p.u = std::move(u);
             p.q = std::move(q);
             return p;
           }),
           py::arg("u"), py::arg("q"))
      .def_readwrite("u", &PairedDataset::u)
      .def_readwrite("q", &PairedDataset::q);

  m.def("validate_embeddings", &validation_messages, py::arg("embeddings"),
        "Invariant violations as human-readable strings; empty means valid.");

  // ---- cost & build ------------------------------------------------------

  m.def("angular_distance", &angular_distance, py::arg("u"), py::arg("v"),
        "arccos of the clamped cosine similarity, in [0, pi].");

  m.def(
      "pairwise_costs",
      [](const EmbeddingSet& a, const EmbeddingSet& b) {
        return pairwise_costs(a, b);
      },
      py::arg("a"), py::arg("b"));

  py::class_<AnchorSpec> anchor_spec(m, "AnchorSpec");
  py::enum_<AnchorSpec::Mode>(anchor_spec, "Mode")
      .value("ALL", AnchorSpec::Mode::All)
      .value("EXPLICIT_IDS", AnchorSpec::Mode::ExplicitIds)
      .value("RANDOM_K", AnchorSpec::Mode::RandomK);
  anchor_spec
      .def(py::init([](AnchorSpec::Mode mode, std::size_t k, std::uint64_t seed,
                       std::vector<std::string> ids, bool exclude_from_queries) {
             AnchorSpec a;
             a.mode = mode;
             a.k = k;
             a.seed = seed;
             a.ids = std::move(ids);
             a.exclude_from_queries = exclude_from_queries;
             return a;
           }),
           py::arg("mode") = AnchorSpec::Mode::All, py::arg("k") = 0,
           py::arg("seed") = 0, py::arg("ids") = std::vector<std::string>{},
           py::arg("exclude_from_queries") = true)
      .def_readwrite("mode", &AnchorSpec::mode)
      .def_readwrite("k", &AnchorSpec::k)
      .def_readwrite("seed", &AnchorSpec::seed)
      .def_readwrite("ids", &AnchorSpec::ids)
      .def_readwrite("exclude_from_queries", &AnchorSpec::exclude_from_queries);

  m.def(
      "build_indra",
      [](const EmbeddingSet& e, const AnchorSpec& anchors) {
        return build_indra(e, {}, anchors);
      },
      py::arg("embeddings"), py::arg("anchors") = AnchorSpec{},
      "Relational profile matrix: row i holds the angular distances from "
      "sample i to every anchor.");

  m.def(
      "build_paired_indra",
      [](const PairedDataset& p, const AnchorSpec& anchors) {
        return build_paired_indra(p, {}, anchors);
      },
      py::arg("paired"), py::arg("anchors") = AnchorSpec{},
      "Profiles for both modalities over one shared anchor draw.");

  m.def("resolve_anchors", &resolve_anchors, py::arg("embeddings"),
        py::arg("anchors"));

  // ---- ops ---------------------------------------------------------------

  m.def("sparsify_topk", &sparsify_topk, py::arg("matrix"), py::arg("k"),
        py::arg("fill"));
  m.def(
      "normalize_rows",
      [](const CostMatrix& c, const std::string& scheme) {
        if (scheme == "center") return normalize_rows(c, RowNorm::Center);
        if (scheme == "zscore") return normalize_rows(c, RowNorm::Zscore);
        if (scheme == "minmax") return normalize_rows(c, RowNorm::Minmax);
        throw ParseError("unknown normalization scheme \"" + scheme + "\"");
      },
      py::arg("matrix"), py::arg("scheme"));
  m.def(
      "apply_operators",
      [](const CostMatrix& c, const std::string& spec) {
        return apply_operators(c, parse_operator_spec(spec));
      },
      py::arg("matrix"), py::arg("spec"),
      "Spec grammar: \"sparsify:K[:FILL],center,zscore,minmax\".");
  m.def(
      "inject_noise",
      [](const EmbeddingSet& e, double sigma, std::uint64_t seed) {
        return inject_noise(e, {sigma, seed});
      },
      py::arg("embeddings"), py::arg("sigma"), py::arg("seed") = 0);

  // ---- verification ------------------------------------------------------

  py::class_<VerificationReport>(m, "VerificationReport")
      .def_readonly("passed", &VerificationReport::passed)
      .def_readonly("identity_total", &VerificationReport::identity_total)
      .def_readonly("symmetry_total", &VerificationReport::symmetry_total)
      .def_readonly("triangle_total", &VerificationReport::triangle_total)
      .def_readonly("yoneda_max_error", &VerificationReport::yoneda_max_error)
      .def_readonly("structure_max_error", &VerificationReport::structure_max_error)
      .def_readonly("t0_duplicates", &VerificationReport::t0_duplicates)
      .def_property_readonly("triangle_violations", [](const VerificationReport& r) {
        py::list out;
        for (const auto& v : r.triangle_violations)
          out.append(py::make_tuple(v.i, v.j, v.k, v.slack));
        return out;
      });

  m.def(
      "verify_lawvere",
      [](const CostMatrix& c, double tol, std::size_t max_n, bool force) {
        VerifyOptions opts;
        opts.triangle_tol = tol;
        opts.max_n = max_n;
        opts.force = force;
        return verify_lawvere(c, opts);
      },
      py::arg("matrix"), py::arg("tol") = kTriangleTol,
      py::arg("max_n") = kVerifyMaxN, py::arg("force") = false);
  m.def("yoneda_hom", &yoneda_hom, py::arg("matrix"), py::arg("a"), py::arg("b"),
        "max over columns j of max(0, m[b][j] - m[a][j]).");
  m.def("check_faithfulness", &check_faithfulness, py::arg("matrix"),
        py::arg("tol") = kFaithfulnessTol);
  m.def("find_t0_duplicates", &find_t0_duplicates, py::arg("matrix"),
        py::arg("tol") = kT0Tol);
  m.def("check_structure_preservation", &check_structure_preservation,
        py::arg("matrix"), py::arg("tol") = kFaithfulnessTol);
  m.def(
      "verify_all",
      [](const CostMatrix& c, bool force) {
        VerifyOptions opts;
        opts.force = force;
        return verify_all(c, opts);
      },
      py::arg("matrix"), py::arg("force") = false);

  // ---- matching ----------------------------------------------------------

  py::class_<MatchConfig> match_config(m, "MatchConfig");
  py::enum_<MatchConfig::RowSimilarity>(match_config, "RowSimilarity")
      .value("COSINE", MatchConfig::RowSimilarity::Cosine)
      .value("CENTERED_COSINE", MatchConfig::RowSimilarity::CenteredCosine)
      .value("NEGATIVE_EUCLIDEAN", MatchConfig::RowSimilarity::NegativeEuclidean);
  py::enum_<MatchConfig::DiagonalHandling>(match_config, "DiagonalHandling")
      .value("INCLUDE", MatchConfig::DiagonalHandling::Include)
      .value("EXCLUDE_PAIR", MatchConfig::DiagonalHandling::ExcludePair);
  match_config
      .def(py::init([](MatchConfig::RowSimilarity sim,
                       MatchConfig::DiagonalHandling diag,
                       std::vector<std::size_t> k_list) {
             MatchConfig cfg;
             cfg.row_similarity = sim;
             cfg.diagonal_handling = diag;
             cfg.k_list = std::move(k_list);
             return cfg;
           }),
           py::arg("row_similarity") = MatchConfig::RowSimilarity::Cosine,
           py::arg("diagonal_handling") = MatchConfig::DiagonalHandling::ExcludePair,
           py::arg("k_list") = std::vector<std::size_t>{5, 10, 30, 50})
      .def_readwrite("row_similarity", &MatchConfig::row_similarity)
      .def_readwrite("diagonal_handling", &MatchConfig::diagonal_handling)
      .def_readwrite("k_list", &MatchConfig::k_list);

  py::class_<RetrievalReport>(m, "RetrievalReport")
      .def_readonly("direction", &RetrievalReport::direction)
      .def_readonly("rank_of_truth", &RetrievalReport::rank_of_truth)
      .def_readonly("top1_index", &RetrievalReport::top1_index)
      .def_readonly("topk_accuracy", &RetrievalReport::topk_accuracy);

  m.def("match", &match, py::arg("iu"), py::arg("iq"),
        py::arg("config") = MatchConfig{},
        "Rank candidates by Indra-row similarity; returns (U->Q, Q->U) reports.");
  m.def("rank_of_truth", &rank_of_truth, py::arg("similarities"),
        py::arg("truth_index"));

  // ---- probe -------------------------------------------------------------

  py::class_<LabeledSplit>(m, "LabeledSplit")
      .def(py::init([](Mat features, std::vector<int> labels,
                       std::vector<std::size_t> train, std::vector<std::size_t> test) {
             LabeledSplit s;
             s.features = std::move(features);
             s.labels = std::move(labels);
             s.train = std::move(train);
             s.test = std::move(test);
             return s;
           }),
           py::arg("features"), py::arg("labels"), py::arg("train"), py::arg("test"))
      .def_readwrite("features", &LabeledSplit::features)
      .def_readwrite("labels", &LabeledSplit::labels)
      .def_readwrite("train", &LabeledSplit::train)
      .def_readwrite("test", &LabeledSplit::test);

  py::class_<ProbeConfig>(m, "ProbeConfig")
      .def(py::init([](double l2, std::size_t max_iterations, double tol,
                       std::uint64_t seed) {
             ProbeConfig cfg;
             cfg.l2_penalty = l2;
             cfg.max_iterations = max_iterations;
             cfg.convergence_tol = tol;
             cfg.seed = seed;
             return cfg;
           }),
           py::arg("l2_penalty") = 1e-4, py::arg("max_iterations") = 500,
           py::arg("convergence_tol") = 1e-6, py::arg("seed") = 0)
      .def_readwrite("l2_penalty", &ProbeConfig::l2_penalty)
      .def_readwrite("max_iterations", &ProbeConfig::max_iterations)
      .def_readwrite("convergence_tol", &ProbeConfig::convergence_tol)
      .def_readwrite("seed", &ProbeConfig::seed);

  py::class_<ProbeModel>(m, "ProbeModel")
      .def_readonly("weights", &ProbeModel::weights)
      .def_readonly("bias", &ProbeModel::bias);

  m.def("train_probe", &train_probe, py::arg("data"),
        py::arg("config") = ProbeConfig{});
  m.def("evaluate_probe", &evaluate_probe, py::arg("model"), py::arg("data"));
  m.def("predict_proba", &predict_proba, py::arg("model"), py::arg("features"));
  m.def(
      "stratified_split",
      [](const std::vector<int>& labels, double train_fraction, std::uint64_t seed) {
        const auto s = stratified_split(labels, train_fraction, seed);
        return py::make_tuple(s.train, s.test);
      },
      py::arg("labels"), py::arg("train_fraction") = 0.8, py::arg("seed") = 0);

  // ---- synthetic data ----------------------------------------------------

  m.def(
      "generate_blobs",
      [](std::size_t classes, std::size_t per_class, std::size_t dim,
         double separation, std::uint64_t seed) {
        const auto out = generate_blobs({classes, per_class, dim, separation}, seed);
        return py::make_tuple(out.embeddings, out.labels);
      },
      py::arg("classes"), py::arg("per_class"), py::arg("dim"),
      py::arg("separation"), py::arg("seed") = 0);
  m.def(
      "generate_paired_orthogonal",
      [](std::size_t n, std::size_t dim, double noise, std::uint64_t seed) {
        return generate_paired_orthogonal({n, dim, noise}, seed);
      },
      py::arg("n"), py::arg("dim"), py::arg("noise") = 0.0, py::arg("seed") = 0);
  m.def(
      "generate_paired_nonlinear",
      [](std::size_t n, std::size_t latent_dim, std::size_t dim_u, std::size_t dim_q,
         double noise, std::uint64_t seed) {
        return generate_paired_nonlinear({n, latent_dim, dim_u, dim_q, noise}, seed);
      },
      py::arg("n"), py::arg("latent_dim"), py::arg("dim_u"), py::arg("dim_q"),
      py::arg("noise") = 0.0, py::arg("seed") = 0);

  // ---- io ----------------------------------------------------------------

  m.def("load_embeddings", &load_embeddings, py::arg("path"));
  m.def("save_embeddings", &save_embeddings, py::arg("embeddings"), py::arg("path"));
  m.def("save_embeddings_csv", &save_embeddings_csv, py::arg("embeddings"),
        py::arg("path"));
  m.def("load_matrix", &load_matrix, py::arg("path"));
  m.def("save_matrix", &save_matrix, py::arg("matrix"), py::arg("path"));
  m.def("load_labels_csv", &load_labels_csv, py::arg("path"), py::arg("ids"));
  m.def("save_labels_csv", &save_labels_csv, py::arg("ids"), py::arg("labels"),
        py::arg("path"));
  m.def("file_crc32", &file_crc32, py::arg("path"));
  m.def("payload_crc32", &payload_crc32, py::arg("path"));

  m.def("set_thread_count", &set_thread_count, py::arg("n"),
        "Worker threads for parallel sections; results never depend on it.");
  m.def("thread_count", &thread_count);
}
