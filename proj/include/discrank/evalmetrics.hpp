#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace discrank {

// Metrics operate on relevance labels listed in ranked order. Gains are
// exponential (2^label - 1); binary metrics treat label >= 1 as relevant.

// Discounted cumulative gain ratio at cutoff k (k >= 1). The ideal ranking
// is the labels sorted descending, truncated at the same cutoff; an all-zero
// list scores 0.
double ndcg_at_k(const std::vector<int>& ranked_labels, int k);
// Same without a cutoff.
double ndcg(const std::vector<int>& ranked_labels);

// Relevant fraction of the top k, with k itself as the denominator even
// when fewer results exist.
double precision_at_k(const std::vector<int>& ranked_labels, int k);

// Precision at R where R is the number of relevant labels; 0 when R is 0.
double r_prec(const std::vector<int>& ranked_labels);

struct SetMetrics {
  double ndcg1 = 0.0;
  double ndcg5 = 0.0;
  double ndcg_full = 0.0;
  double p1 = 0.0;
  double p5 = 0.0;
  double rprec = 0.0;
};

struct RunEntry {
  std::string report_id;
  int rank = 0;
  double score = 0.0;
};

// set_id -> ranked entries / judged labels.
using Run = std::map<std::string, std::vector<RunEntry>>;
using Qrels = std::map<std::string, std::map<std::string, int>>;

// "set_id 0 report_id label" lines; labels outside 0..3 are errors naming
// the line.
Qrels read_qrels(const std::string& path);

// "set_id Q0 report_id rank score run_name" lines. The first run name seen
// is reported through run_name when non-null.
Run read_run(const std::string& path, std::string* run_name = nullptr);

struct EvalReport {
  std::map<std::string, SetMetrics> per_set;
  SetMetrics mean;  // arithmetic mean over the run's sets

  struct Comparison {
    std::string against;
    int wins = 0;
    int ties = 0;
    int losses = 0;
  };
  std::optional<Comparison> comparison;
};

// Scores every set in the run against the judgments. Sets or reports absent
// from the qrels are errors naming the offender; qrels may judge more sets
// than the run ranks.
EvalReport evaluate_run(const Run& run, const Qrels& qrels);

// Per-set nDCG@5 win/tie/loss of this report against another, counted over
// the sets both cover.
void add_comparison(EvalReport& report, const EvalReport& other, const std::string& name);

std::string to_table(const EvalReport& report);
nlohmann::json to_json(const EvalReport& report);

}  // namespace discrank
