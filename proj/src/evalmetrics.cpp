#include "discrank/evalmetrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace discrank {

namespace {

double dcg(const std::vector<int>& labels, std::size_t cutoff) {
  double sum = 0.0;
  const std::size_t limit = std::min(cutoff, labels.size());
  for (std::size_t i = 0; i < limit; ++i) {
    const double gain = std::exp2(labels[i]) - 1.0;
    sum += gain / std::log2(static_cast<double>(i) + 2.0);
  }
  return sum;
}

double ndcg_impl(const std::vector<int>& ranked_labels, std::size_t cutoff) {
  std::vector<int> ideal = ranked_labels;
  std::sort(ideal.begin(), ideal.end(), std::greater<int>());
  const double idcg = dcg(ideal, cutoff);
  if (idcg <= 0.0) return 0.0;
  return dcg(ranked_labels, cutoff) / idcg;
}

}  // namespace

double ndcg_at_k(const std::vector<int>& ranked_labels, int k) {
  if (k < 1) throw std::invalid_argument("ndcg_at_k: k must be >= 1");
  return ndcg_impl(ranked_labels, static_cast<std::size_t>(k));
}

double ndcg(const std::vector<int>& ranked_labels) {
  return ndcg_impl(ranked_labels, ranked_labels.size());
}

double precision_at_k(const std::vector<int>& ranked_labels, int k) {
  if (k < 1) throw std::invalid_argument("precision_at_k: k must be >= 1");
  const std::size_t limit = std::min<std::size_t>(static_cast<std::size_t>(k),
                                                  ranked_labels.size());
  int relevant = 0;
  for (std::size_t i = 0; i < limit; ++i)
    if (ranked_labels[i] >= 1) ++relevant;
  return static_cast<double>(relevant) / static_cast<double>(k);
}

double r_prec(const std::vector<int>& ranked_labels) {
  std::size_t r = 0;
  for (int label : ranked_labels)
    if (label >= 1) ++r;
  if (r == 0) return 0.0;
  int relevant = 0;
  for (std::size_t i = 0; i < std::min(r, ranked_labels.size()); ++i)
    if (ranked_labels[i] >= 1) ++relevant;
  return static_cast<double>(relevant) / static_cast<double>(r);
}

namespace {

[[noreturn]] void fail_line(const std::string& path, std::size_t line_no, const std::string& what) {
  std::ostringstream msg;
  msg << path << ":" << line_no << ": " << what;
  throw std::runtime_error(msg.str());
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream ss(line);
  std::string f;
  while (ss >> f) fields.push_back(std::move(f));
  return fields;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

Qrels read_qrels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open qrels file: " + path);
  Qrels qrels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    auto fields = split_fields(line);
    if (fields.size() != 4)
      fail_line(path, line_no, "expected 4 fields (set_id 0 report_id label)");
    int label = 0;
    auto [ptr, ec] = std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(), label);
    if (ec != std::errc() || ptr != fields[3].data() + fields[3].size())
      fail_line(path, line_no, "cannot parse label '" + fields[3] + "'");
    if (label < 0 || label > 3)
      fail_line(path, line_no, "label out of range (expected 0..3, got " + fields[3] + ")");
    qrels[fields[0]][fields[2]] = label;
  }
  if (qrels.empty()) throw std::runtime_error("empty qrels file: " + path);
  return qrels;
}

Run read_run(const std::string& path, std::string* run_name) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open run file: " + path);
  Run run;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    auto fields = split_fields(line);
    if (fields.size() != 6)
      fail_line(path, line_no, "expected 6 fields (set_id Q0 report_id rank score run_name)");
    RunEntry entry;
    entry.report_id = fields[2];
    {
      auto [ptr, ec] =
          std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(), entry.rank);
      if (ec != std::errc() || ptr != fields[3].data() + fields[3].size())
        fail_line(path, line_no, "cannot parse rank '" + fields[3] + "'");
    }
    try {
      entry.score = std::stod(fields[4]);
    } catch (const std::exception&) {
      fail_line(path, line_no, "cannot parse score '" + fields[4] + "'");
    }
    if (run_name && run_name->empty()) *run_name = fields[5];
    run[fields[0]].push_back(std::move(entry));
  }
  if (run.empty()) throw std::runtime_error("empty run file: " + path);
  return run;
}

namespace {

SetMetrics metrics_from_labels(const std::vector<int>& labels) {
  SetMetrics m;
  m.ndcg1 = ndcg_at_k(labels, 1);
  m.ndcg5 = ndcg_at_k(labels, 5);
  m.ndcg_full = ndcg(labels);
  m.p1 = precision_at_k(labels, 1);
  m.p5 = precision_at_k(labels, 5);
  m.rprec = r_prec(labels);
  return m;
}

}  // namespace

EvalReport evaluate_run(const Run& run, const Qrels& qrels) {
  EvalReport report;
  for (const auto& [set_id, entries] : run) {
    auto qit = qrels.find(set_id);
    if (qit == qrels.end())
      throw std::runtime_error("run set '" + set_id + "' not present in qrels");

    std::vector<RunEntry> ordered = entries;
    std::sort(ordered.begin(), ordered.end(), [](const RunEntry& a, const RunEntry& b) {
      if (a.rank != b.rank) return a.rank < b.rank;
      if (a.score != b.score) return a.score > b.score;
      return a.report_id < b.report_id;
    });

    std::vector<int> labels;
    labels.reserve(ordered.size());
    for (const auto& e : ordered) {
      auto rit = qit->second.find(e.report_id);
      if (rit == qit->second.end())
        throw std::runtime_error("report '" + e.report_id + "' in run set '" + set_id +
                                 "' has no qrels entry");
      labels.push_back(rit->second);
    }
    report.per_set.emplace(set_id, metrics_from_labels(labels));
  }

  const double n = static_cast<double>(report.per_set.size());
  for (const auto& [set_id, m] : report.per_set) {
    report.mean.ndcg1 += m.ndcg1 / n;
    report.mean.ndcg5 += m.ndcg5 / n;
    report.mean.ndcg_full += m.ndcg_full / n;
    report.mean.p1 += m.p1 / n;
    report.mean.p5 += m.p5 / n;
    report.mean.rprec += m.rprec / n;
  }
  return report;
}

void add_comparison(EvalReport& report, const EvalReport& other, const std::string& name) {
  EvalReport::Comparison cmp;
  cmp.against = name;
  for (const auto& [set_id, mine] : report.per_set) {
    auto it = other.per_set.find(set_id);
    if (it == other.per_set.end()) continue;
    if (mine.ndcg5 > it->second.ndcg5)
      ++cmp.wins;
    else if (mine.ndcg5 < it->second.ndcg5)
      ++cmp.losses;
    else
      ++cmp.ties;
  }
  report.comparison = cmp;
}

namespace {

void append_row(std::ostringstream& out, const std::string& name, const SetMetrics& m,
                double scale, int precision) {
  out << std::left << std::setw(16) << name << std::right << std::fixed
      << std::setprecision(precision);
  for (double v : {m.ndcg1, m.ndcg5, m.ndcg_full, m.p1, m.p5, m.rprec})
    out << std::setw(10) << v * scale;
  out << '\n';
}

nlohmann::json metrics_json(const SetMetrics& m, double scale = 1.0) {
  return nlohmann::json{{"ndcg@1", m.ndcg1 * scale}, {"ndcg@5", m.ndcg5 * scale},
                        {"ndcg", m.ndcg_full * scale}, {"p@1", m.p1 * scale},
                        {"p@5", m.p5 * scale},         {"rprec", m.rprec * scale}};
}

}  // namespace

std::string to_table(const EvalReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(16) << "set" << std::right;
  for (const char* h : {"nDCG@1", "nDCG@5", "nDCG", "P@1", "P@5", "R-Prec"})
    out << std::setw(10) << h;
  out << '\n';
  for (const auto& [set_id, m] : report.per_set) append_row(out, set_id, m, 1.0, 4);
  append_row(out, "mean", report.mean, 1.0, 4);
  append_row(out, "mean%", report.mean, 100.0, 2);
  if (report.comparison) {
    const auto& c = *report.comparison;
    out << "nDCG@5 vs " << c.against << ": " << c.wins << " wins, " << c.ties << " ties, "
        << c.losses << " losses\n";
  }
  return out.str();
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json per_set = nlohmann::json::object();
  for (const auto& [set_id, m] : report.per_set) per_set[set_id] = metrics_json(m);
  nlohmann::json j{{"per_set", per_set},
                   {"mean", metrics_json(report.mean)},
                   {"mean_pct", metrics_json(report.mean, 100.0)}};
  if (report.comparison) {
    const auto& c = *report.comparison;
    j["comparison"] = {{"against", c.against}, {"wins", c.wins}, {"ties", c.ties},
                       {"losses", c.losses}};
  }
  return j;
}

}  // namespace discrank
