#pragma once

#include <string>
#include <unordered_map>

#include "discrank/corpus.hpp"
#include "discrank/ranker.hpp"

namespace discrank {

// Smoothed inverse document frequencies where every report version counts as
// one document: idf(t) = ln((N + 1) / (df(t) + 1)) + 1.
struct IdfTable {
  std::unordered_map<std::string, double> idf;
  int document_count = 0;

  // Unseen tokens fall back to df = 0 smoothing.
  double idf_or_default(const std::string& token) const;
};

IdfTable build_idf(const Dataset& train);

// 1 - cosine between the raw-tf x idf vectors of the two report versions.
// Ranges over [0, 1]; an empty side scores the maximum discrepancy of 1.
double vsm_discrepancy(const Report& report, const IdfTable& table);

// Ranks every set by vsm_discrepancy, descending, ties by ascending
// report_id.
RankedDataset vsm_rank_dataset(const Dataset& ds, const IdfTable& table);

}  // namespace discrank
