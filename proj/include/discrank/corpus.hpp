#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace discrank {

// One preliminary/final report pair. Labels grade the significance of the
// discrepancy between the two versions: 0 none, 1 minor, 2 significant,
// 3 urgent.
struct Report {
  std::string report_id;
  std::string set_id;
  std::string preliminary;
  std::string final_text;
  int label = 0;
};

// All reports sharing a set_id; the unit being ranked and scored.
struct RankingSet {
  std::string set_id;
  std::vector<Report> reports;
};

struct Dataset {
  std::vector<RankingSet> sets;
  std::string provenance;  // free-form origin note, e.g. the source path

  std::size_t total_reports() const;
  std::vector<const Report*> all_reports() const;
};

// Reads one JSON object per line with fields report_id, set_id, preliminary,
// final, label. Sets are ordered by first appearance, reports keep file
// order. Malformed lines, duplicate report ids, and labels outside 0..3 are
// errors naming the offending line.
Dataset load_dataset(const std::string& path);

// Inverse of load_dataset up to field ordering: one JSON object per line.
void save_dataset(const Dataset& ds, const std::string& path);

struct SplitRatios {
  double train = 0.6;
  double dev = 0.2;
  double test = 0.2;
};

// Seeded set-level split into train/dev/test. Dev and test sizes are
// floor(n * ratio); the remainder goes to train. The same seed always yields
// the same partition.
std::array<Dataset, 3> split_dataset(const Dataset& ds, const SplitRatios& ratios,
                                     std::uint64_t seed);

struct Issue {
  enum class Severity { Warning, Error };
  Severity severity;
  std::string set_id;
  std::string report_id;  // empty for set-level issues
  std::string message;
};

// Diagnostic pass: flags sets smaller than 5 reports, sets with no
// discrepancy (no label above 0), and reports whose preliminary or final
// text tokenizes to nothing.
std::vector<Issue> validate(const Dataset& ds);

// Relevance judgments, one line per report: "set_id 0 report_id label".
void write_qrels(const Dataset& ds, const std::string& path);

}  // namespace discrank
