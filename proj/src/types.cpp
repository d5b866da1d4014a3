#include "indra/types.hpp"

#include <cmath>
#include <sstream>
#include <unordered_set>

#include "indra/errors.hpp"
#include "indra/kernels.hpp"

namespace indra {

ValidationReport validate_embeddings(const EmbeddingSet& e) {
  ValidationReport report;
  const auto n = static_cast<std::size_t>(e.data.rows());
  const auto d = static_cast<std::size_t>(e.data.cols());

  if (n == 0 || d == 0) {
    report.violations.push_back(
        {Violation::Code::Empty, 0, 0, "empty embedding set (n >= 1 and d >= 1 required)"});
    return report;
  }
  if (e.ids.size() != n) {
    std::ostringstream msg;
    msg << "id count " << e.ids.size() << " does not match row count " << n;
    report.violations.push_back({Violation::Code::IdCountMismatch, 0, 0, msg.str()});
  }

  for (std::size_t i = 0; i < n; ++i) {
    bool row_reported_nonfinite = false;
    for (std::size_t j = 0; j < d; ++j) {
      const double v = e.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (!std::isfinite(v) && !row_reported_nonfinite) {
        std::ostringstream msg;
        msg << "non-finite at row " << i << " col " << j;
        report.violations.push_back({Violation::Code::NonFinite, i, j, msg.str()});
        row_reported_nonfinite = true;  // one hit per row keeps reports readable
      }
    }
    if (!row_reported_nonfinite &&
        kernels::sumsq(e.data.row(static_cast<Eigen::Index>(i)).data(), d) == 0.0) {
      std::ostringstream msg;
      msg << "zero-norm row at index " << i;
      report.violations.push_back({Violation::Code::ZeroNormRow, i, 0, msg.str()});
    }
  }

  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < e.ids.size(); ++i) {
    if (!seen.insert(e.ids[i]).second) {
      std::ostringstream msg;
      msg << "duplicate id \"" << e.ids[i] << "\" at index " << i;
      report.violations.push_back({Violation::Code::DuplicateId, i, 0, msg.str()});
    }
  }
  return report;
}

void require_valid(const EmbeddingSet& e, const std::string& context) {
  const ValidationReport report = validate_embeddings(e);
  if (report.ok()) return;
  std::ostringstream msg;
  if (!context.empty()) msg << context << ": ";
  msg << "invalid embedding set:";
  for (const auto& v : report.violations) msg << " [" << v.message << "]";
  throw ValidationError(msg.str());
}

void require_valid(const PairedDataset& p) {
  require_valid(p.u, "modality u");
  require_valid(p.q, "modality q");
  if (p.u.size() != p.q.size()) {
    std::ostringstream msg;
    msg << "paired dataset row counts differ: u has " << p.u.size() << ", q has "
        << p.q.size();
    throw DimensionMismatch(msg.str());
  }
}

}  // namespace indra
