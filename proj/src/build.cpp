#include "indra/build.hpp"

#include <sstream>
#include <unordered_map>

#include "indra/errors.hpp"
#include "indra/rng.hpp"

namespace indra {

std::vector<std::size_t> resolve_anchors(const EmbeddingSet& e,
                                         const AnchorSpec& anchors) {
  const std::size_t n = e.size();
  switch (anchors.mode) {
    case AnchorSpec::Mode::All: {
      std::vector<std::size_t> all(n);
      for (std::size_t i = 0; i < n; ++i) all[i] = i;
      return all;
    }
    case AnchorSpec::Mode::RandomK: {
      if (anchors.k < 1 || anchors.k > n) {
        std::ostringstream msg;
        msg << "anchor count k=" << anchors.k << " outside [1, " << n << "]";
        throw KOutOfRange(msg.str());
      }
      const CounterRng rng =
          CounterRng(anchors.seed).stream(streams::kAnchors);
      return sample_without_replacement(n, anchors.k, rng);
    }
    case AnchorSpec::Mode::ExplicitIds: {
      std::unordered_map<std::string, std::size_t> index;
      for (std::size_t i = 0; i < e.ids.size(); ++i) index.emplace(e.ids[i], i);
      std::vector<std::size_t> out;
      out.reserve(anchors.ids.size());
      for (const auto& id : anchors.ids) {
        const auto it = index.find(id);
        if (it == index.end())
          throw UnknownAnchorId("unknown anchor id \"" + id + "\"");
        out.push_back(it->second);
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      if (out.empty()) throw KOutOfRange("anchor id list resolves to no rows");
      return out;
    }
  }
  throw Error("unreachable anchor mode");
}

namespace {

EmbeddingSet take_rows(const EmbeddingSet& e,
                       const std::vector<std::size_t>& rows) {
  EmbeddingSet out;
  out.provenance = e.provenance;
  out.data.resize(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(e.dim()));
  out.ids.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.data.row(static_cast<Eigen::Index>(r)) =
        e.data.row(static_cast<Eigen::Index>(rows[r]));
    out.ids.push_back(e.ids[rows[r]]);
  }
  return out;
}

CostMatrix build_against_anchors(const EmbeddingSet& e, const CostFunction& fn,
                                 const std::vector<std::size_t>& anchor_rows,
                                 bool exclude_from_queries) {
  const EmbeddingSet anchors = take_rows(e, anchor_rows);

  std::vector<bool> is_anchor(e.size(), false);
  for (std::size_t a : anchor_rows) is_anchor[a] = true;

  CostMatrix out;
  if (exclude_from_queries) {
    std::vector<std::size_t> queries;
    queries.reserve(e.size() - anchor_rows.size());
    for (std::size_t i = 0; i < e.size(); ++i)
      if (!is_anchor[i]) queries.push_back(i);
    if (queries.empty())
      throw KOutOfRange("anchor set covers every sample; no query rows remain");
    const EmbeddingSet query_set = take_rows(e, queries);
    out = pairwise_costs(query_set, anchors, fn);
  } else {
    out = pairwise_costs(e, anchors, fn);
  }
  out.anchored = true;
  return out;
}

}  // namespace

CostMatrix build_indra(const EmbeddingSet& e, const CostFunction& fn,
                       const AnchorSpec& anchors) {
  require_valid(e, "build_indra");
  if (anchors.mode == AnchorSpec::Mode::All) {
    return pairwise_costs(e, e, fn);
  }
  return build_against_anchors(e, fn, resolve_anchors(e, anchors),
                               anchors.exclude_from_queries);
}

std::pair<CostMatrix, CostMatrix> build_paired_indra(const PairedDataset& p,
                                                     const CostFunction& fn,
                                                     const AnchorSpec& anchors) {
  require_valid(p);
  if (anchors.mode == AnchorSpec::Mode::All) {
    return {pairwise_costs(p.u, p.u, fn), pairwise_costs(p.q, p.q, fn)};
  }
  // One draw, shared by both modalities: Indra rows are only comparable
  // across modalities when column j means the same underlying sample.
  const std::vector<std::size_t> anchor_rows = resolve_anchors(p.u, anchors);
  CostMatrix iu = build_against_anchors(p.u, fn, anchor_rows,
                                        anchors.exclude_from_queries);
  CostMatrix iq = build_against_anchors(p.q, fn, anchor_rows,
                                        anchors.exclude_from_queries);
  iq.col_ids = iu.col_ids;  // anchors are positional pairs; label with u ids
  return {std::move(iu), std::move(iq)};
}

}  // namespace indra
