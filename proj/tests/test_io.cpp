#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "indra/build.hpp"
#include "indra/errors.hpp"
#include "indra/io.hpp"
#include "indra/ops.hpp"
#include "indra/rng.hpp"
#include "test_helpers.hpp"

using namespace indra;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("indra_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("csv embeddings: the two-line fixture") {
  TempDir dir;
  spit(dir.file("tiny.csv"), "id,x0,x1\na,1,0\nb,0,1\n");
  const auto e = load_embeddings(dir.file("tiny.csv"));
  CHECK(e.size() == 2);
  CHECK(e.dim() == 2);
  CHECK(e.ids == std::vector<std::string>{"a", "b"});
  CHECK(e.data(0, 0) == 1.0);
  CHECK(e.data(1, 1) == 1.0);
}

TEST_CASE("csv parse errors carry byte offsets") {
  TempDir dir;
  spit(dir.file("bad.csv"), "id,x0,x1\na,1,zebra\n");
  CHECK_THROWS_WITH_AS(load_embeddings(dir.file("bad.csv")),
                       doctest::Contains("byte offset"), ParseError);
  spit(dir.file("ragged.csv"), "id,x0,x1\na,1,2\nb,3\n");
  CHECK_THROWS_AS(load_embeddings(dir.file("ragged.csv")), ParseError);
  spit(dir.file("empty.csv"), "id,x0\n");
  CHECK_THROWS_AS(load_embeddings(dir.file("empty.csv")), ParseError);
}

TEST_CASE("csv with a NaN fails validation with location") {
  TempDir dir;
  spit(dir.file("nan.csv"), "id,x0,x1\na,1,0\nb,nan,1\n");
  CHECK_THROWS_WITH_AS(load_embeddings(dir.file("nan.csv")),
                       doctest::Contains("non-finite at row 1 col 0"),
                       ValidationError);
}

TEST_CASE("binary embeddings round-trip bit-exactly at f32") {
  TempDir dir;
  auto e = testutil::random_set(17, 5, 33, "unit-test:widget-v2");
  // Quantize to f32 first: the file format stores 32-bit payloads.
  for (Eigen::Index i = 0; i < e.data.size(); ++i)
    e.data.data()[i] = static_cast<float>(e.data.data()[i]);
  save_embeddings(e, dir.file("e.indr"));
  const auto back = load_embeddings(dir.file("e.indr"));
  CHECK(back.data == e.data);
  CHECK(back.ids == e.ids);
  CHECK(back.provenance == e.provenance);
}

TEST_CASE("matrix round-trip preserves values and metadata exactly") {
  TempDir dir;
  const auto e = testutil::random_set(9, 4, 21);
  AnchorSpec anchors;
  anchors.mode = AnchorSpec::Mode::RandomK;
  anchors.k = 3;
  anchors.seed = 1;
  auto m = build_indra(e, {}, anchors);
  m = apply_operators(m, parse_operator_spec("sparsify:2:pi,center"));

  save_matrix(m, dir.file("m.indr"));
  const auto back = load_matrix(dir.file("m.indr"));
  CHECK(back.values == m.values);
  CHECK(back.row_ids == m.row_ids);
  CHECK(back.col_ids == m.col_ids);
  CHECK(back.anchored == m.anchored);
  CHECK(back.cost_kind == m.cost_kind);
  CHECK(back.op_history == m.op_history);
}

TEST_CASE("matrix round-trip preserves +inf fills") {
  TempDir dir;
  const auto e = testutil::random_set(6, 3, 2);
  auto m = sparsify_topk(build_indra(e), 1,
                         std::numeric_limits<double>::infinity());
  save_matrix(m, dir.file("inf.indr"));
  CHECK(load_matrix(dir.file("inf.indr")).values == m.values);
}

TEST_CASE("randomized round-trip property") {
  TempDir dir;
  const CounterRng rng(505);
  std::uint64_t ctr = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng.bounded(ctr++, 12);
    const std::size_t d = 1 + rng.bounded(ctr++, 6);
    auto e = testutil::random_set(n, d, rng.bits(ctr++));
    for (Eigen::Index i = 0; i < e.data.size(); ++i)
      e.data.data()[i] = static_cast<float>(e.data.data()[i]);
    const auto path = dir.file("rt.indr");
    save_embeddings(e, path);
    const auto back = load_embeddings(path);
    REQUIRE(back.data == e.data);
    REQUIRE(back.ids == e.ids);

    const auto m = build_indra(e);
    save_matrix(m, path);
    REQUIRE(load_matrix(path).values == m.values);
  }
}

TEST_CASE("truncation is a ParseError, payload corruption a ChecksumMismatch") {
  TempDir dir;
  const auto e = testutil::random_set(8, 4, 77);
  const auto path = dir.file("m.indr");
  save_matrix(build_indra(e), path);
  const std::string good = slurp(path);

  spit(path, good.substr(0, good.size() / 2));
  CHECK_THROWS_AS(load_matrix(path), ParseError);

  std::string corrupted = good;
  corrupted[good.size() - 20] ^= 0x01;  // payload byte, ahead of the CRC
  spit(path, corrupted);
  CHECK_THROWS_AS(load_matrix(path), ChecksumMismatch);

  spit(path, std::string("JUNKJUNKJUNK"));
  CHECK_THROWS_AS(load_matrix(path), ParseError);
}

TEST_CASE("kind mixups are parse errors") {
  TempDir dir;
  const auto e = testutil::random_set(4, 3, 1);
  save_embeddings(e, dir.file("e.indr"));
  save_matrix(build_indra(e), dir.file("m.indr"));
  CHECK_THROWS_AS(load_matrix(dir.file("e.indr")), ParseError);
  CHECK_THROWS_AS(load_embeddings(dir.file("m.indr")), ParseError);
}

TEST_CASE("labels csv round-trip and missing-id error") {
  TempDir dir;
  const std::vector<std::string> ids = {"a", "b", "c"};
  save_labels_csv(ids, {0, 1, 0}, dir.file("labels.csv"));
  CHECK(load_labels_csv(dir.file("labels.csv"), ids) == std::vector<int>{0, 1, 0});
  CHECK_THROWS_AS(load_labels_csv(dir.file("labels.csv"), {"a", "zzz"}), ParseError);
}

TEST_CASE("payload crc matches a recomputation of the stored payload") {
  TempDir dir;
  const auto e = testutil::random_set(5, 3, 9);
  const auto path = dir.file("e.indr");
  save_embeddings(e, path);
  const std::string bytes = slurp(path);
  const std::size_t payload_len = 5 * 3 * 4;
  const std::size_t payload_start = bytes.size() - 4 - payload_len;
  CHECK(payload_crc32(path) ==
        crc32_bytes(bytes.data() + payload_start, payload_len));
}

TEST_CASE("csv export/import keeps full double precision") {
  TempDir dir;
  const auto e = testutil::random_set(7, 3, 55);
  save_embeddings_csv(e, dir.file("e.csv"));
  const auto back = load_embeddings(dir.file("e.csv"));
  CHECK(back.data == e.data);  // 17 significant digits round-trip
}
