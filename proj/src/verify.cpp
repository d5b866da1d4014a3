#include "indra/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "indra/errors.hpp"
#include "indra/parallel.hpp"

namespace indra {

namespace {

void require_square(const CostMatrix& m, const char* op) {
  if (!m.square()) {
    std::ostringstream msg;
    msg << op << " requires a square (full-mode) matrix, got " << m.rows()
        << "x" << m.cols();
    throw NotSquare(msg.str());
  }
}

void require_size(const CostMatrix& m, const VerifyOptions& opts) {
  if (!opts.force && m.rows() > opts.max_n) {
    std::ostringstream msg;
    msg << "matrix size " << m.rows() << " exceeds the verification cap "
        << opts.max_n << " (triple enumeration is O(n^3)); pass force to override";
    throw MatrixTooLarge(msg.str());
  }
}

}  // namespace

VerificationReport verify_lawvere(const CostMatrix& m, const VerifyOptions& opts) {
  require_square(m, "verify_lawvere");
  require_size(m, opts);

  VerificationReport report;
  report.triangle_tol = opts.triangle_tol;
  report.faithfulness_tol = opts.faithfulness_tol;
  report.t0_tol = opts.t0_tol;

  const std::size_t n = m.rows();
  const Mat& v = m.values;

  for (std::size_t i = 0; i < n; ++i) {
    const double d = v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
    if (d != 0.0) {
      ++report.identity_total;
      if (report.identity_violations.size() < opts.max_records)
        report.identity_violations.push_back({i, d});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double gap = v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                         v(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
      if (gap != 0.0) {
        ++report.symmetry_total;
        if (report.symmetry_violations.size() < opts.max_records)
          report.symmetry_violations.push_back({i, j, std::abs(gap)});
      }
    }
  }

  // All ordered triples (i, j, k): d(i,k) <= d(i,j) + d(j,k) + tol.
  // Outer index parallel; per-thread hits merged in index order so reports
  // are identical for any worker count.
  std::vector<std::vector<TriangleViolation>> hits(n);
  std::vector<std::size_t> counts(n, 0);
  parallel_for(n, [&](std::size_t i) {
    const double* row_i = v.row(static_cast<Eigen::Index>(i)).data();
    for (std::size_t j = 0; j < n; ++j) {
      const double* row_j = v.row(static_cast<Eigen::Index>(j)).data();
      const double d_ij = row_i[j];
      for (std::size_t k = 0; k < n; ++k) {
        const double slack = row_i[k] - d_ij - row_j[k];
        if (slack > opts.triangle_tol) {
          ++counts[i];
          if (hits[i].size() < opts.max_records)
            hits[i].push_back({i, j, k, slack});
        }
      }
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    report.triangle_total += counts[i];
    for (const auto& h : hits[i]) {
      if (report.triangle_violations.size() >= opts.max_records) break;
      report.triangle_violations.push_back(h);
    }
  }

  report.passed = report.identity_total == 0 && report.symmetry_total == 0 &&
                  report.triangle_total == 0;
  return report;
}

CostValue yoneda_hom(const CostMatrix& m, std::size_t a, std::size_t b) {
  require_square(m, "yoneda_hom");
  const std::size_t n = m.rows();
  if (a >= n || b >= n) {
    std::ostringstream msg;
    msg << "yoneda_hom indices (" << a << ", " << b << ") out of range for n=" << n;
    throw IndexOutOfRange(msg.str());
  }
  // Truncated-subtraction supremum: the internal hom of the cost category.
  const double* row_a = m.values.row(static_cast<Eigen::Index>(a)).data();
  const double* row_b = m.values.row(static_cast<Eigen::Index>(b)).data();
  double sup = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double diff = row_b[j] - row_a[j];
    if (diff > sup) sup = diff;
  }
  return sup;
}

std::pair<double, bool> check_faithfulness(const CostMatrix& m, double tol) {
  require_square(m, "check_faithfulness");
  const std::size_t n = m.rows();
  std::vector<double> row_max(n, 0.0);
  parallel_for(n, [&](std::size_t a) {
    double worst = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      const double err = std::abs(
          yoneda_hom(m, a, b) -
          m.values(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)));
      worst = std::max(worst, err);
    }
    row_max[a] = worst;
  });
  const double max_error = *std::max_element(row_max.begin(), row_max.end());
  return {max_error, max_error <= tol};
}

std::vector<std::pair<std::size_t, std::size_t>> find_t0_duplicates(
    const CostMatrix& m, double tol) {
  require_square(m, "find_t0_duplicates");
  const std::size_t n = m.rows();
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row_i = m.values.row(static_cast<Eigen::Index>(i)).data();
    for (std::size_t j = i + 1; j < n; ++j) {
      if (row_i[j] > tol) continue;
      if (m.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) > tol)
        continue;
      const double* row_j = m.values.row(static_cast<Eigen::Index>(j)).data();
      bool equal = true;
      for (std::size_t c = 0; c < n; ++c) {
        if (std::abs(row_i[c] - row_j[c]) > tol) {
          equal = false;
          break;
        }
      }
      if (equal) out.emplace_back(i, j);
    }
  }
  return out;
}

std::pair<double, bool> check_structure_preservation(const CostMatrix& m,
                                                     double tol) {
  require_square(m, "check_structure_preservation");
  const std::size_t n = m.rows();
  std::vector<double> row_max(n, 0.0);
  parallel_for(n, [&](std::size_t a) {
    double worst = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      const double forward = std::abs(
          yoneda_hom(m, a, b) -
          m.values(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)));
      const double reverse = std::abs(
          yoneda_hom(m, b, a) -
          m.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
      worst = std::max({worst, forward, reverse});
    }
    row_max[a] = worst;
  });
  const double max_error = *std::max_element(row_max.begin(), row_max.end());
  return {max_error, max_error <= tol};
}

VerificationReport verify_all(const CostMatrix& m, const VerifyOptions& opts) {
  VerificationReport report = verify_lawvere(m, opts);
  const auto [yoneda_err, yoneda_ok] = check_faithfulness(m, opts.faithfulness_tol);
  const auto [structure_err, structure_ok] =
      check_structure_preservation(m, opts.faithfulness_tol);
  report.yoneda_max_error = yoneda_err;
  report.structure_max_error = structure_err;
  report.t0_duplicates = find_t0_duplicates(m, opts.t0_tol);
  report.passed = report.passed && yoneda_ok && structure_ok &&
                  report.t0_duplicates.empty();
  return report;
}

}  // namespace indra
