#include "indra/synth.hpp"

#include <cmath>
#include <sstream>

#include "indra/errors.hpp"
#include "indra/kernels.hpp"

namespace indra {

namespace {

std::string padded_id(const char* prefix, std::size_t i, std::size_t width = 6) {
  std::ostringstream os;
  os << prefix;
  std::string digits = std::to_string(i);
  if (digits.size() < width) os << std::string(width - digits.size(), '0');
  os << digits;
  return os.str();
}

Mat gaussian_matrix(std::size_t n, std::size_t d, const CounterRng& rng) {
  Mat m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  double* data = m.data();
  for (std::size_t i = 0; i < n * d; ++i) data[i] = rng.gaussian(i);
  return m;
}

}  // namespace

Mat random_orthogonal(std::size_t dim, const CounterRng& rng) {
  Mat a = gaussian_matrix(dim, dim, rng);
  const auto n = static_cast<Eigen::Index>(dim);

  // Householder QR, reflectors applied in place; accumulate Q against the
  // identity afterwards. Orthogonality error stays at rounding level
  // independent of the conditioning of a.
  std::vector<Vec> reflectors;
  std::vector<double> signs;
  for (Eigen::Index k = 0; k < n; ++k) {
    Vec v = Vec::Zero(n);
    double norm_sq = 0.0;
    for (Eigen::Index i = k; i < n; ++i) {
      v(i) = a(i, k);
      norm_sq += v(i) * v(i);
    }
    const double alpha = -std::copysign(std::sqrt(norm_sq), v(k) == 0.0 ? 1.0 : v(k));
    v(k) -= alpha;
    const double vnorm_sq = kernels::sumsq(v.data(), dim);
    if (vnorm_sq > 0.0) {
      for (Eigen::Index j = k; j < n; ++j) {
        double proj = 0.0;
        for (Eigen::Index i = k; i < n; ++i) proj += v(i) * a(i, j);
        const double scale = 2.0 * proj / vnorm_sq;
        for (Eigen::Index i = k; i < n; ++i) a(i, j) -= scale * v(i);
      }
    }
    reflectors.push_back(v);
    // Force the R diagonal positive so the distribution has no sign bias.
    signs.push_back(a(k, k) >= 0.0 ? 1.0 : -1.0);
  }

  Mat q = Mat::Identity(n, n);
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    const Vec& v = reflectors[static_cast<std::size_t>(k)];
    const double vnorm_sq = kernels::sumsq(v.data(), dim);
    if (vnorm_sq == 0.0) continue;
    for (Eigen::Index j = 0; j < n; ++j) {
      double proj = 0.0;
      for (Eigen::Index i = k; i < n; ++i) proj += v(i) * q(i, j);
      const double scale = 2.0 * proj / vnorm_sq;
      for (Eigen::Index i = k; i < n; ++i) q(i, j) -= scale * v(i);
    }
  }
  for (Eigen::Index k = 0; k < n; ++k) q.col(k) *= signs[static_cast<std::size_t>(k)];
  return q;
}

LabeledEmbeddings generate_blobs(const BlobsSpec& spec, std::uint64_t seed) {
  if (spec.classes < 1 || spec.per_class < 1 || spec.dim < 1)
    throw KOutOfRange("blobs: all counts must be >= 1");
  if (spec.separation <= 0.0) throw KOutOfRange("blobs: separation must be > 0");
  if (spec.classes > spec.dim)
    throw KOutOfRange("blobs: simplex centers need classes <= dim");

  const CounterRng rng = CounterRng(seed).stream(streams::kSynthData);
  const std::size_t n = spec.classes * spec.per_class;

  LabeledEmbeddings out;
  out.embeddings.provenance = "synthetic:gaussian-blobs";
  out.embeddings.data = gaussian_matrix(n, spec.dim, rng);
  out.labels.resize(n);
  // Centers at (separation/sqrt(2)) * e_c: all pairwise center distances
  // equal `separation` exactly.
  const double scale = spec.separation / std::numbers::sqrt2;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i / spec.per_class;
    out.labels[i] = static_cast<int>(c);
    out.embeddings.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) +=
        scale;
    out.embeddings.ids.push_back(padded_id("blob", i));
  }
  return out;
}

PairedDataset generate_paired_orthogonal(const PairedOrthogonalSpec& spec,
                                         std::uint64_t seed) {
  if (spec.n < 1 || spec.dim < 1)
    throw KOutOfRange("paired-orthogonal: all counts must be >= 1");
  if (spec.noise < 0.0) throw KOutOfRange("paired-orthogonal: noise must be >= 0");

  const CounterRng master(seed);
  PairedDataset p;
  p.u.provenance = "synthetic:paired-orthogonal:u";
  p.q.provenance = "synthetic:paired-orthogonal:q";
  p.u.data = gaussian_matrix(spec.n, spec.dim, master.stream(streams::kSynthData));

  const Mat rotation = random_orthogonal(spec.dim, master.stream(streams::kOrthogonal));
  p.q.data = p.u.data * rotation;
  if (spec.noise > 0.0) {
    const Mat g = gaussian_matrix(spec.n, spec.dim, master.stream(streams::kSynthNoise));
    p.q.data += spec.noise * g;
  }
  for (std::size_t i = 0; i < spec.n; ++i) {
    p.u.ids.push_back(padded_id("pair", i));
    p.q.ids.push_back(padded_id("pair", i));
  }
  return p;
}

PairedDataset generate_paired_nonlinear(const PairedNonlinearSpec& spec,
                                        std::uint64_t seed) {
  if (spec.n < 1 || spec.latent_dim < 1 || spec.dim_u < 1 || spec.dim_q < 1)
    throw KOutOfRange("paired-nonlinear: all counts must be >= 1");
  if (spec.noise < 0.0) throw KOutOfRange("paired-nonlinear: noise must be >= 0");

  const CounterRng master(seed);
  const Mat latent =
      gaussian_matrix(spec.n, spec.latent_dim, master.stream(streams::kLatent));
  // Column-scaled maps keep tanh inputs O(1) regardless of latent_dim.
  const double map_scale = 1.0 / std::sqrt(static_cast<double>(spec.latent_dim));
  const Mat map_u =
      map_scale * gaussian_matrix(spec.latent_dim, spec.dim_u,
                                  master.stream(streams::kSynthData).stream(0));
  const Mat map_q =
      map_scale * gaussian_matrix(spec.latent_dim, spec.dim_q,
                                  master.stream(streams::kSynthData).stream(1));

  PairedDataset p;
  p.u.provenance = "synthetic:paired-nonlinear:u";
  p.q.provenance = "synthetic:paired-nonlinear:q";
  p.u.data = (latent * map_u).array().tanh().matrix();
  p.q.data = (latent * map_q).array().tanh().matrix();
  if (spec.noise > 0.0) {
    p.u.data += spec.noise * gaussian_matrix(spec.n, spec.dim_u,
                                             master.stream(streams::kSynthNoise).stream(0));
    p.q.data += spec.noise * gaussian_matrix(spec.n, spec.dim_q,
                                             master.stream(streams::kSynthNoise).stream(1));
  }
  for (std::size_t i = 0; i < spec.n; ++i) {
    p.u.ids.push_back(padded_id("pair", i));
    p.q.ids.push_back(padded_id("pair", i));
  }
  return p;
}

}  // namespace indra
