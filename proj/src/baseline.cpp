#include "discrank/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "discrank/textproc.hpp"

namespace discrank {

double IdfTable::idf_or_default(const std::string& token) const {
  auto it = idf.find(token);
  if (it != idf.end()) return it->second;
  return std::log(static_cast<double>(document_count) + 1.0) + 1.0;
}

IdfTable build_idf(const Dataset& train) {
  IdfTable table;
  std::unordered_map<std::string, int> df;
  auto count_doc = [&](const std::string& text) {
    std::set<std::string> seen;
    for (auto& tok : tokenize(text).tokens) seen.insert(std::move(tok));
    for (const auto& tok : seen) ++df[tok];
    ++table.document_count;
  };
  for (const auto& set : train.sets) {
    for (const auto& r : set.reports) {
      count_doc(r.preliminary);
      count_doc(r.final_text);
    }
  }
  const double n = static_cast<double>(table.document_count);
  table.idf.reserve(df.size());
  for (const auto& [tok, count] : df)
    table.idf.emplace(tok, std::log((n + 1.0) / (static_cast<double>(count) + 1.0)) + 1.0);
  return table;
}

namespace {

std::unordered_map<std::string, double> tfidf(const std::string& text, const IdfTable& table) {
  std::unordered_map<std::string, double> weights;
  for (auto& tok : tokenize(text).tokens) weights[std::move(tok)] += 1.0;
  for (auto& [tok, w] : weights) w *= table.idf_or_default(tok);
  return weights;
}

}  // namespace

double vsm_discrepancy(const Report& report, const IdfTable& table) {
  const auto p = tfidf(report.preliminary, table);
  const auto f = tfidf(report.final_text, table);
  if (p.empty() || f.empty()) return 1.0;

  double dot = 0.0, np = 0.0, nf = 0.0;
  for (const auto& [tok, w] : p) {
    np += w * w;
    auto it = f.find(tok);
    if (it != f.end()) dot += w * it->second;
  }
  for (const auto& [tok, w] : f) nf += w * w;
  if (np == 0.0 || nf == 0.0) return 1.0;
  const double cos = std::clamp(dot / (std::sqrt(np) * std::sqrt(nf)), -1.0, 1.0);
  return 1.0 - cos;
}

RankedDataset vsm_rank_dataset(const Dataset& ds, const IdfTable& table) {
  RankedDataset out;
  out.reserve(ds.sets.size());
  for (const auto& set : ds.sets) {
    std::vector<RankedReport> scored;
    scored.reserve(set.reports.size());
    for (const auto& r : set.reports) scored.push_back({r.report_id, vsm_discrepancy(r, table), 0});
    std::sort(scored.begin(), scored.end(), [](const RankedReport& a, const RankedReport& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.report_id < b.report_id;
    });
    for (std::size_t i = 0; i < scored.size(); ++i) scored[i].rank = static_cast<int>(i) + 1;
    out.emplace_back(set.set_id, std::move(scored));
  }
  return out;
}

}  // namespace discrank
