#include <doctest.h>

#include <cmath>

#include "indra/build.hpp"
#include "indra/rng.hpp"
#include "indra/synth.hpp"
#include "indra/types.hpp"

using namespace indra;

TEST_CASE("random orthogonal matrices are orthogonal") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const Mat q = random_orthogonal(16, CounterRng(seed));
    const Mat gram = q * q.transpose();
    CHECK((gram - Mat::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(std::abs(std::abs(q.determinant()) - 1.0) < 1e-12);
  }
}

TEST_CASE("blobs: counts, labels, center geometry") {
  const auto blobs = generate_blobs({4, 25, 8, 10.0}, 42);
  CHECK(blobs.embeddings.size() == 100);
  CHECK(blobs.embeddings.dim() == 8);
  CHECK(validate_embeddings(blobs.embeddings).ok());
  REQUIRE(blobs.labels.size() == 100);
  for (std::size_t i = 0; i < 100; ++i) CHECK(blobs.labels[i] == static_cast<int>(i / 25));

  // Class means approximate simplex centers spaced `separation` apart.
  Mat means = Mat::Zero(4, 8);
  for (std::size_t i = 0; i < 100; ++i)
    means.row(blobs.labels[i]) += blobs.embeddings.data.row(static_cast<Eigen::Index>(i));
  means /= 25.0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      CHECK((means.row(a) - means.row(b)).norm() == doctest::Approx(10.0).epsilon(0.25));
}

TEST_CASE("blobs reject impossible geometry") {
  CHECK_THROWS(generate_blobs({10, 5, 4, 1.0}, 1));   // classes > dim
  CHECK_THROWS(generate_blobs({2, 5, 4, 0.0}, 1));    // separation <= 0
}

TEST_CASE("generators are deterministic per seed") {
  const auto a = generate_paired_orthogonal({.n = 30, .dim = 8, .noise = 0.1}, 7);
  const auto b = generate_paired_orthogonal({.n = 30, .dim = 8, .noise = 0.1}, 7);
  CHECK(a.u.data == b.u.data);
  CHECK(a.q.data == b.q.data);
  const auto c = generate_paired_orthogonal({.n = 30, .dim = 8, .noise = 0.1}, 8);
  CHECK_FALSE(a.u.data == c.u.data);

  const auto n1 = generate_paired_nonlinear({.n = 20, .latent_dim = 4, .dim_u = 9,
                                             .dim_q = 7, .noise = 0.05}, 3);
  const auto n2 = generate_paired_nonlinear({.n = 20, .latent_dim = 4, .dim_u = 9,
                                             .dim_q = 7, .noise = 0.05}, 3);
  CHECK(n1.u.data == n2.u.data);
  CHECK(n1.q.data == n2.q.data);
  CHECK(n1.u.dim() == 9);
  CHECK(n1.q.dim() == 7);
  CHECK(validate_embeddings(n1.u).ok());
  CHECK(validate_embeddings(n1.q).ok());
}

TEST_CASE("noise-free orthogonal pairs give matching Indra matrices") {
  const auto p = generate_paired_orthogonal({.n = 50, .dim = 16, .noise = 0.0}, 99);
  const auto [iu, iq] = build_paired_indra(p);
  CHECK((iu.values - iq.values).cwiseAbs().maxCoeff() < 1e-10);
}
