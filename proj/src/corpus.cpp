#include "discrank/corpus.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "discrank/rng.hpp"
#include "discrank/textproc.hpp"

namespace discrank {

using nlohmann::json;

std::size_t Dataset::total_reports() const {
  std::size_t n = 0;
  for (const auto& s : sets) n += s.reports.size();
  return n;
}

std::vector<const Report*> Dataset::all_reports() const {
  std::vector<const Report*> out;
  out.reserve(total_reports());
  for (const auto& s : sets)
    for (const auto& r : s.reports) out.push_back(&r);
  return out;
}

namespace {

[[noreturn]] void fail_line(const std::string& path, std::size_t line_no, const std::string& what) {
  std::ostringstream msg;
  msg << path << ":" << line_no << ": " << what;
  throw std::runtime_error(msg.str());
}

std::string require_string(const json& obj, const char* field, const std::string& path,
                           std::size_t line_no) {
  auto it = obj.find(field);
  if (it == obj.end() || !it->is_string())
    fail_line(path, line_no, std::string("missing or non-string field '") + field + "'");
  return it->get<std::string>();
}

}  // namespace

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);

  Dataset ds;
  ds.provenance = path;
  std::unordered_map<std::string, std::size_t> set_index;
  std::unordered_set<std::string> seen_ids;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      fail_line(path, line_no, std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object()) fail_line(path, line_no, "expected a JSON object");

    Report r;
    r.report_id = require_string(obj, "report_id", path, line_no);
    r.set_id = require_string(obj, "set_id", path, line_no);
    r.preliminary = require_string(obj, "preliminary", path, line_no);
    r.final_text = require_string(obj, "final", path, line_no);

    auto lab = obj.find("label");
    if (lab == obj.end() || !lab->is_number_integer())
      fail_line(path, line_no, "missing or non-integer field 'label'");
    r.label = lab->get<int>();
    if (r.label < 0 || r.label > 3)
      fail_line(path, line_no, "label out of range (expected 0..3, got " +
                                   std::to_string(r.label) + ")");

    if (!seen_ids.insert(r.report_id).second)
      fail_line(path, line_no, "duplicate report_id '" + r.report_id + "'");

    auto [it, fresh] = set_index.try_emplace(r.set_id, ds.sets.size());
    if (fresh) ds.sets.push_back(RankingSet{r.set_id, {}});
    ds.sets[it->second].reports.push_back(std::move(r));
  }
  return ds;
}

void save_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  for (const auto& s : ds.sets) {
    for (const auto& r : s.reports) {
      json obj{{"report_id", r.report_id},
               {"set_id", r.set_id},
               {"preliminary", r.preliminary},
               {"final", r.final_text},
               {"label", r.label}};
      out << obj.dump() << '\n';
    }
  }
}

std::array<Dataset, 3> split_dataset(const Dataset& ds, const SplitRatios& ratios,
                                     std::uint64_t seed) {
  if (ratios.train <= 0 || ratios.dev <= 0 || ratios.test <= 0)
    throw std::invalid_argument("split_dataset: ratios must be positive");
  const double sum = ratios.train + ratios.dev + ratios.test;
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("split_dataset: ratios must sum to 1");
  const std::size_t n = ds.sets.size();
  if (n < 3)
    throw std::runtime_error("split_dataset: fewer sets than splits (" + std::to_string(n) +
                             " sets)");

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  const std::size_t n_dev = static_cast<std::size_t>(ratios.dev * static_cast<double>(n));
  const std::size_t n_test = static_cast<std::size_t>(ratios.test * static_cast<double>(n));
  const std::size_t n_train = n - n_dev - n_test;

  std::array<Dataset, 3> parts;
  for (auto& p : parts) p.provenance = ds.provenance;
  for (std::size_t i = 0; i < n; ++i) {
    int slot = i < n_train ? 0 : (i < n_train + n_dev ? 1 : 2);
    parts[slot].sets.push_back(ds.sets[order[i]]);
  }
  return parts;
}

std::vector<Issue> validate(const Dataset& ds) {
  std::vector<Issue> issues;
  for (const auto& s : ds.sets) {
    if (s.reports.size() < 5)
      issues.push_back({Issue::Severity::Warning, s.set_id, "",
                        "set smaller than 5 reports (" + std::to_string(s.reports.size()) + ")"});
    bool any_positive = false;
    for (const auto& r : s.reports) {
      if (r.label > 0) any_positive = true;
      if (tokenize(r.preliminary).empty())
        issues.push_back({Issue::Severity::Error, s.set_id, r.report_id,
                          "preliminary text empty after tokenization"});
      if (tokenize(r.final_text).empty())
        issues.push_back({Issue::Severity::Error, s.set_id, r.report_id,
                          "final text empty after tokenization"});
    }
    if (!any_positive)
      issues.push_back(
          {Issue::Severity::Warning, s.set_id, "", "no discrepancy in set (all labels 0)"});
  }
  return issues;
}

void write_qrels(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write qrels file: " + path);
  for (const auto& s : ds.sets)
    for (const auto& r : s.reports)
      out << s.set_id << " 0 " << r.report_id << ' ' << r.label << '\n';
}

}  // namespace discrank
