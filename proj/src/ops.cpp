#include "indra/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "indra/errors.hpp"
#include "indra/kernels.hpp"
#include "indra/parallel.hpp"
#include "indra/rng.hpp"

namespace indra {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_fill(CostValue fill) {
  if (fill == kInf) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << fill;
  return os.str();
}

}  // namespace

std::string OpStep::str() const {
  switch (kind) {
    case Kind::Sparsify: {
      std::ostringstream os;
      os << "sparsify:" << k << ":" << format_fill(fill);
      return os.str();
    }
    case Kind::CenterRows:
      return "center";
    case Kind::ZscoreRows:
      return "zscore";
    case Kind::MinmaxRows:
      return "minmax";
  }
  return "?";
}

OperatorSpec parse_operator_spec(const std::string& text) {
  OperatorSpec spec;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    if (token == "center") {
      spec.push_back({OpStep::Kind::CenterRows, 0, 0.0});
    } else if (token == "zscore") {
      spec.push_back({OpStep::Kind::ZscoreRows, 0, 0.0});
    } else if (token == "minmax") {
      spec.push_back({OpStep::Kind::MinmaxRows, 0, 0.0});
    } else if (token.rfind("sparsify:", 0) == 0) {
      std::string rest = token.substr(9);
      const auto colon = rest.find(':');
      std::string k_str = rest.substr(0, colon);
      std::string fill_str =
          colon == std::string::npos ? "pi" : rest.substr(colon + 1);
      OpStep step{OpStep::Kind::Sparsify, 0, std::numbers::pi};
      try {
        step.k = static_cast<std::size_t>(std::stoull(k_str));
      } catch (const std::exception&) {
        throw ParseError("bad sparsify count in operator step \"" + token + "\"");
      }
      if (fill_str == "pi") {
        step.fill = std::numbers::pi;
      } else if (fill_str == "inf") {
        step.fill = kInf;
      } else {
        try {
          step.fill = std::stod(fill_str);
        } catch (const std::exception&) {
          throw ParseError("bad sparsify fill in operator step \"" + token + "\"");
        }
        if (step.fill < 0.0)
          throw ParseError("sparsify fill must be >= 0 in \"" + token + "\"");
      }
      spec.push_back(step);
    } else {
      throw ParseError("unknown operator step \"" + token + "\"");
    }
  }
  return spec;
}

std::string format_operator_spec(const OperatorSpec& spec) {
  std::string out;
  for (const auto& step : spec) {
    if (!out.empty()) out += ",";
    out += step.str();
  }
  return out;
}

CostMatrix sparsify_topk(const CostMatrix& m, std::size_t k, CostValue fill) {
  const std::size_t cols = m.cols();
  if (k < 1 || k > cols) {
    std::ostringstream msg;
    msg << "sparsify k=" << k << " outside [1, " << cols << "]";
    throw KOutOfRange(msg.str());
  }
  CostMatrix out = m;
  out.op_history.push_back(OpStep{OpStep::Kind::Sparsify, k, fill}.str());
  if (k == cols) return out;  // keep-all identity

  parallel_for(m.rows(), [&](std::size_t i) {
    const auto row = m.values.row(static_cast<Eigen::Index>(i));
    std::vector<std::size_t> order(cols);
    for (std::size_t j = 0; j < cols; ++j) order[j] = j;
    // k smallest; ties go to the lower column index.
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     order.end(), [&](std::size_t x, std::size_t y) {
                       const double vx = row(static_cast<Eigen::Index>(x));
                       const double vy = row(static_cast<Eigen::Index>(y));
                       return vx < vy || (vx == vy && x < y);
                     });
    std::vector<bool> keep(cols, false);
    for (std::size_t j = 0; j < k; ++j) keep[order[j]] = true;
    for (std::size_t j = 0; j < cols; ++j)
      if (!keep[j])
        out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = fill;
  });
  return out;
}

namespace {

struct RowStats {
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t finite = 0;
};

RowStats finite_row_stats(const double* row, std::size_t cols) {
  RowStats s;
  s.min = kInf;
  s.max = -kInf;
  double acc = 0.0;
  for (std::size_t j = 0; j < cols; ++j) {
    const double v = row[j];
    if (!std::isfinite(v)) continue;
    ++s.finite;
    acc += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  if (s.finite == 0) return s;
  s.mean = acc / static_cast<double>(s.finite);
  double sq = 0.0;
  for (std::size_t j = 0; j < cols; ++j) {
    const double v = row[j];
    if (!std::isfinite(v)) continue;
    sq += (v - s.mean) * (v - s.mean);
  }
  s.stddev = std::sqrt(sq / static_cast<double>(s.finite));
  return s;
}

}  // namespace

CostMatrix normalize_rows(const CostMatrix& m, RowNorm scheme) {
  CostMatrix out = m;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();

  // Degenerate-row detection happens up front so the parallel pass never throws.
  std::vector<RowStats> stats(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    stats[i] = finite_row_stats(m.values.row(static_cast<Eigen::Index>(i)).data(), cols);
    if (stats[i].finite == 0) {
      std::ostringstream msg;
      msg << "row " << i << " has no finite entries";
      throw DegenerateRow(msg.str());
    }
    const bool constant = stats[i].min == stats[i].max;
    if (constant && (scheme == RowNorm::Zscore || scheme == RowNorm::Minmax)) {
      std::ostringstream msg;
      msg << "constant row " << i << " cannot be "
          << (scheme == RowNorm::Zscore ? "z-scored" : "min-max scaled");
      throw DegenerateRow(msg.str());
    }
  }

  const char* name = scheme == RowNorm::Center   ? "center"
                     : scheme == RowNorm::Zscore ? "zscore"
                                                 : "minmax";
  out.op_history.push_back(name);

  parallel_for(rows, [&](std::size_t i) {
    const RowStats& s = stats[i];
    for (std::size_t j = 0; j < cols; ++j) {
      double& v = out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (!std::isfinite(v)) continue;  // masked entries pass through
      switch (scheme) {
        case RowNorm::Center:
          v -= s.mean;
          break;
        case RowNorm::Zscore:
          v = (v - s.mean) / s.stddev;
          break;
        case RowNorm::Minmax:
          v = (v - s.min) / (s.max - s.min);
          break;
      }
    }
  });
  return out;
}

CostMatrix apply_operators(const CostMatrix& m, const OperatorSpec& spec) {
  CostMatrix out = m;
  for (const auto& step : spec) {
    switch (step.kind) {
      case OpStep::Kind::Sparsify:
        out = sparsify_topk(out, step.k, step.fill);
        break;
      case OpStep::Kind::CenterRows:
        out = normalize_rows(out, RowNorm::Center);
        break;
      case OpStep::Kind::ZscoreRows:
        out = normalize_rows(out, RowNorm::Zscore);
        break;
      case OpStep::Kind::MinmaxRows:
        out = normalize_rows(out, RowNorm::Minmax);
        break;
    }
  }
  return out;
}

EmbeddingSet inject_noise(const EmbeddingSet& e, const NoiseSpec& spec) {
  require_valid(e, "inject_noise");
  if (spec.sigma == 0.0) return e;  // bit-identical

  EmbeddingSet out = e;
  const std::size_t d = e.dim();
  const CounterRng rng = CounterRng(spec.seed).stream(streams::kNoise);
  double* data = out.data.data();
  parallel_for(e.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < d; ++j) {
      // Draw (i,j) depends only on (seed, i, j): order- and thread-free.
      data[i * d + j] += spec.sigma * rng.gaussian(i * d + j);
    }
  });
  return out;
}

}  // namespace indra
