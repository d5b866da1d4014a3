#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "indra/build.hpp"
#include "indra/errors.hpp"
#include "indra/ops.hpp"
#include "indra/rng.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace indra;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

TEST_CASE("sparsify keeps the k smallest and fills the rest") {
  auto m = testutil::square_matrix({{0, kPi / 2, kPi / 4},
                                    {kPi / 2, 0, kPi / 4},
                                    {kPi / 4, kPi / 4, 0}});
  const auto s = sparsify_topk(m, 2, kPi);
  CHECK(s.values(0, 0) == 0.0);
  CHECK(s.values(0, 1) == kPi);
  CHECK(s.values(0, 2) == kPi / 4);
  CHECK(s.op_history.size() == 1);
  CHECK(s.op_history[0].rfind("sparsify:2", 0) == 0);
}

TEST_CASE("sparsify with k = cols is the identity") {
  const auto e = testutil::random_set(12, 5, 3);
  const auto m = build_indra(e);
  const auto s = sparsify_topk(m, m.cols(), kPi);
  CHECK(s.values == m.values);
}

TEST_CASE("sparsify k=1 on a full-mode matrix keeps only the diagonal zeros") {
  const auto e = testutil::random_set(10, 6, 5);
  const auto m = build_indra(e);
  const auto s = sparsify_topk(m, 1, kInf);
  for (Eigen::Index i = 0; i < s.values.rows(); ++i)
    for (Eigen::Index j = 0; j < s.values.cols(); ++j)
      CHECK(s.values(i, j) == (i == j ? 0.0 : kInf));
}

TEST_CASE("sparsify agrees with the full-sort oracle on random rows") {
  const CounterRng rng(61);
  std::uint64_t ctr = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.bounded(ctr++, 12);
    const auto e = testutil::random_set(n, 4, rng.bits(ctr++));
    const auto m = build_indra(e);
    const std::size_t k = 1 + rng.bounded(ctr++, n);
    const auto s = sparsify_topk(m, k, kPi);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row(n);
      for (std::size_t j = 0; j < n; ++j)
        row[j] = m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const auto keep = oracle::topk_keep(row, k);
      for (std::size_t j = 0; j < n; ++j) {
        const double got =
            s.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        CHECK(got == (keep[j] ? row[j] : kPi));
      }
    }
  }
}

TEST_CASE("sparsify k out of range") {
  const auto m = testutil::square_matrix({{0, 1}, {1, 0}});
  CHECK_THROWS_AS(sparsify_topk(m, 0, kPi), KOutOfRange);
  CHECK_THROWS_AS(sparsify_topk(m, 3, kPi), KOutOfRange);
}

TEST_CASE("row normalization schemes") {
  const auto m = testutil::square_matrix({{0, 2, 4}, {4, 0, 2}, {2, 4, 0}});
  const auto centered = normalize_rows(m, RowNorm::Center);
  CHECK(centered.values(0, 0) == -2.0);
  CHECK(centered.values(0, 1) == 0.0);
  CHECK(centered.values(0, 2) == 2.0);

  const auto scaled = normalize_rows(m, RowNorm::Minmax);
  CHECK(scaled.values(0, 0) == 0.0);
  CHECK(scaled.values(0, 1) == 0.5);
  CHECK(scaled.values(0, 2) == 1.0);

  const auto z = normalize_rows(m, RowNorm::Zscore);
  CHECK(std::abs(z.values.row(0).sum()) < 1e-12);
}

TEST_CASE("constant rows are degenerate under zscore and minmax") {
  const auto m = testutil::square_matrix({{1, 1}, {1, 1}});
  CHECK_THROWS_AS(normalize_rows(m, RowNorm::Zscore), DegenerateRow);
  CHECK_THROWS_AS(normalize_rows(m, RowNorm::Minmax), DegenerateRow);
  CHECK_NOTHROW(normalize_rows(m, RowNorm::Center));
}

TEST_CASE("infinite entries pass through normalization untouched") {
  auto m = testutil::square_matrix({{0, 2, 4}, {4, 0, 2}, {2, 4, 0}});
  m.values(0, 1) = kInf;
  const auto centered = normalize_rows(m, RowNorm::Center);
  CHECK(centered.values(0, 1) == kInf);
  // Stats over the finite entries {0, 4} only.
  CHECK(centered.values(0, 0) == -2.0);
  CHECK(centered.values(0, 2) == 2.0);
}

TEST_CASE("operator spec grammar round-trips") {
  const auto spec = parse_operator_spec("sparsify:8,zscore,center,minmax");
  REQUIRE(spec.size() == 4);
  CHECK(spec[0].kind == OpStep::Kind::Sparsify);
  CHECK(spec[0].k == 8);
  CHECK(spec[0].fill == kPi);
  const auto spec2 = parse_operator_spec("sparsify:3:inf");
  CHECK(spec2[0].fill == kInf);
  const auto spec3 = parse_operator_spec("sparsify:3:0.5");
  CHECK(spec3[0].fill == 0.5);
  CHECK(parse_operator_spec("").empty());
  CHECK_THROWS_AS(parse_operator_spec("sprsify:3"), ParseError);
  CHECK_THROWS_AS(parse_operator_spec("sparsify:x"), ParseError);

  const auto echoed = parse_operator_spec(format_operator_spec(spec2));
  CHECK(echoed[0].fill == kInf);
}

TEST_CASE("empty operator spec is the identity; history accumulates in order") {
  const auto e = testutil::random_set(8, 4, 19);
  const auto m = build_indra(e);
  const auto same = apply_operators(m, {});
  CHECK(same.values == m.values);
  CHECK(same.op_history.empty());

  const auto chained =
      apply_operators(m, parse_operator_spec("sparsify:4,center"));
  REQUIRE(chained.op_history.size() == 2);
  CHECK(chained.op_history[1] == "center");
}

TEST_CASE("noise: sigma 0 is bit-identical, reruns agree, shape preserved") {
  const auto e = testutil::random_set(20, 6, 404);
  const auto same = inject_noise(e, {0.0, 42});
  CHECK(same.data == e.data);

  const auto a = inject_noise(e, {3.0, 42});
  const auto b = inject_noise(e, {3.0, 42});
  CHECK(a.data == b.data);
  CHECK(a.ids == e.ids);
  CHECK_FALSE(a.data == e.data);
  CHECK(a.data.allFinite());

  const auto c = inject_noise(e, {3.0, 43});
  CHECK_FALSE(a.data == c.data);
}

TEST_CASE("noise moments match sigma on a large sample") {
  // Law-of-large-numbers check on the generator's own draws: n*d = 1e6.
  const auto e = testutil::random_set(1000, 1000, 8);
  const auto noisy = inject_noise(e, {3.0, 9});
  const Mat delta = noisy.data - e.data;
  const double n = static_cast<double>(delta.size());
  const double mean = delta.sum() / n;
  const double sd = std::sqrt((delta.array() - mean).square().sum() / n);
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(sd - 3.0) < 0.02);
}
