#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "discrank/evalmetrics.hpp"
#include "discrank/rng.hpp"
#include "support/testutil.hpp"

using namespace discrank;
using testutil::TempDir;

namespace {

std::vector<int> random_labels(Rng& rng, int max_len) {
  std::vector<int> labels(static_cast<std::size_t>(rng.range(1, max_len)));
  for (auto& l : labels) l = rng.range(0, 3);
  return labels;
}

}  // namespace

TEST_CASE("ndcg_at_k fixtures") {
  // DCG = 0/1 + 7/log2(3), ideal = 7/1.
  CHECK(ndcg_at_k({0, 3}, 2) == doctest::Approx(0.63093).epsilon(1e-5));
  CHECK(ndcg_at_k({3, 0}, 2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ndcg_at_k({3, 2, 1}, 3) == doctest::Approx(1.0).epsilon(1e-12));
  // Cutoff truncates both the ranking and the ideal.
  CHECK(ndcg_at_k({0, 3}, 1) == 0.0);
  CHECK(ndcg_at_k({1, 3}, 1) == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
  // All-zero labels score zero rather than dividing by zero.
  CHECK(ndcg_at_k({0, 0, 0}, 5) == 0.0);
  CHECK(ndcg_at_k({}, 5) == 0.0);
  CHECK_THROWS_AS(ndcg_at_k({1}, 0), std::invalid_argument);

  // Cutoff beyond the list length equals the full metric.
  CHECK(ndcg_at_k({1, 0, 2}, 50) == doctest::Approx(ndcg({1, 0, 2})).epsilon(1e-12));

  const double dcg = 1.0 + 3.0 / std::log2(3.0);
  const double ideal = 3.0 + 1.0 / std::log2(3.0);
  CHECK(ndcg({1, 2}) == doctest::Approx(dcg / ideal).epsilon(1e-12));
}

TEST_CASE("precision_at_k keeps k in the denominator") {
  CHECK(precision_at_k({3, 0, 1, 0}, 1) == 1.0);
  CHECK(precision_at_k({3, 0, 1, 0}, 2) == 0.5);
  CHECK(precision_at_k({3, 0, 1, 0}, 4) == 0.5);
  // Two relevant among four results, but k = 5 divides by five.
  CHECK(precision_at_k({3, 0, 1, 0}, 5) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(precision_at_k({}, 5) == 0.0);
  CHECK(precision_at_k({0, 0}, 2) == 0.0);
  CHECK_THROWS_AS(precision_at_k({1}, 0), std::invalid_argument);
}

TEST_CASE("r_prec divides by the relevant count") {
  // R = 2 relevant, top-2 holds one of them.
  CHECK(r_prec({3, 0, 1, 0}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r_prec({1, 2, 0, 0}) == 1.0);
  CHECK(r_prec({0, 0, 1}) == 0.0);    // R = 1, top-1 irrelevant
  CHECK(r_prec({0, 0, 0}) == 0.0);    // R = 0
  CHECK(r_prec({}) == 0.0);
}

TEST_CASE("perfect rankings score one on every metric") {
  // Five relevant labels in descending order, then noise.
  const std::vector<int> labels = {3, 3, 2, 2, 1, 0, 0, 0};
  CHECK(ndcg_at_k(labels, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ndcg_at_k(labels, 5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ndcg(labels) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(precision_at_k(labels, 1) == 1.0);
  CHECK(precision_at_k(labels, 5) == 1.0);
  CHECK(r_prec(labels) == 1.0);
}

TEST_CASE("fixing an adjacent inversion never lowers nDCG") {
  Rng rng(555);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<int> labels = random_labels(rng, 10);
    if (labels.size() < 2) continue;
    const auto i = static_cast<std::size_t>(rng.below(labels.size() - 1));
    if (labels[i] >= labels[i + 1]) std::swap(labels[i], labels[i + 1]);
    // labels now has the lower label first at position i.
    const double before = ndcg(labels);
    std::swap(labels[i], labels[i + 1]);
    CHECK(ndcg(labels) >= before - 1e-12);
  }
}

TEST_CASE("read_qrels parses judged labels and rejects junk") {
  TempDir dir("eval");
  const std::string path = dir.file("qrels.txt");
  testutil::write_file(path, "s1 0 r1 2\ns1 0 r2 0\ns2 0 r3 3\n");
  const Qrels qrels = read_qrels(path);
  CHECK(qrels.size() == 2);
  CHECK(qrels.at("s1").at("r1") == 2);
  CHECK(qrels.at("s1").at("r2") == 0);
  CHECK(qrels.at("s2").at("r3") == 3);

  testutil::write_file(path, "s1 0 r1 7\n");
  CHECK_THROWS_WITH_AS(read_qrels(path), doctest::Contains(":1: label out of range"),
                       std::runtime_error);
  testutil::write_file(path, "s1 0 r1\n");
  CHECK_THROWS_AS(read_qrels(path), std::runtime_error);
  testutil::write_file(path, "");
  CHECK_THROWS_AS(read_qrels(path), std::runtime_error);
  CHECK_THROWS_AS(read_qrels(dir.file("missing.txt")), std::runtime_error);
}

TEST_CASE("read_run parses TREC lines and reports the run name") {
  TempDir dir("eval");
  const std::string path = dir.file("run.txt");
  testutil::write_file(path,
                       "s1 Q0 r2 2 0.25 sysA\n"
                       "s1 Q0 r1 1 0.75 sysA\n"
                       "s2 Q0 r3 1 0.9 sysA\n");
  std::string name;
  const Run run = read_run(path, &name);
  CHECK(name == "sysA");
  REQUIRE(run.at("s1").size() == 2);
  // File order is preserved; ordering by rank is the evaluator's job.
  CHECK(run.at("s1")[0].report_id == "r2");
  CHECK(run.at("s1")[0].rank == 2);
  CHECK(run.at("s1")[0].score == doctest::Approx(0.25));
  CHECK(run.at("s1")[1].report_id == "r1");
  CHECK(run.at("s1")[1].rank == 1);

  // A shuffled file still evaluates by the written ranks: r1 (label 3)
  // occupies rank 1 even though it appears second in the file.
  Qrels qrels;
  qrels["s1"] = {{"r1", 3}, {"r2", 0}};
  qrels["s2"] = {{"r3", 1}};
  const EvalReport shuffled = evaluate_run(run, qrels);
  CHECK(shuffled.per_set.at("s1").ndcg1 == doctest::Approx(1.0));
  CHECK(shuffled.per_set.at("s1").p1 == 1.0);

  testutil::write_file(path, "s1 Q0 r1 notanumber 0.5 sys\n");
  CHECK_THROWS_AS(read_run(path), std::runtime_error);
  testutil::write_file(path, "");
  CHECK_THROWS_AS(read_run(path), std::runtime_error);
}

TEST_CASE("evaluate_run averages per-set metrics") {
  Run run;
  run["s1"] = {{"r1", 1, 0.9}, {"r2", 2, 0.5}};
  run["s2"] = {{"r3", 1, 0.9}, {"r4", 2, 0.5}};
  Qrels qrels;
  qrels["s1"] = {{"r1", 3}, {"r2", 0}};
  qrels["s2"] = {{"r3", 0}, {"r4", 3}};
  // qrels may judge sets the run never ranked.
  qrels["s3"] = {{"r9", 1}};

  const EvalReport report = evaluate_run(run, qrels);
  REQUIRE(report.per_set.size() == 2);
  CHECK(report.per_set.at("s1").ndcg1 == doctest::Approx(1.0));
  CHECK(report.per_set.at("s1").p1 == 1.0);
  CHECK(report.per_set.at("s2").ndcg1 == 0.0);
  CHECK(report.per_set.at("s2").p1 == 0.0);
  CHECK(report.per_set.at("s2").ndcg5 == doctest::Approx(0.63093).epsilon(1e-5));
  CHECK(report.mean.ndcg1 == doctest::Approx(0.5));
  CHECK(report.mean.p1 == doctest::Approx(0.5));
  CHECK(report.mean.ndcg5 ==
        doctest::Approx((1.0 + 0.63093) / 2.0).epsilon(1e-5));

  SUBCASE("unknown set is an error") {
    run["s9"] = {{"rx", 1, 0.1}};
    CHECK_THROWS_WITH_AS(evaluate_run(run, qrels), doctest::Contains("s9"), std::runtime_error);
  }
  SUBCASE("unknown report is an error") {
    run["s1"].push_back({"ghost", 3, 0.1});
    CHECK_THROWS_WITH_AS(evaluate_run(run, qrels), doctest::Contains("ghost"),
                         std::runtime_error);
  }
}

TEST_CASE("add_comparison counts per-set nDCG@5 wins") {
  Run ours, theirs;
  ours["s1"] = {{"r1", 1, 0.9}, {"r2", 2, 0.5}};
  ours["s2"] = {{"r3", 1, 0.9}, {"r4", 2, 0.5}};
  theirs["s1"] = {{"r2", 1, 0.9}, {"r1", 2, 0.5}};
  theirs["s2"] = {{"r3", 1, 0.9}, {"r4", 2, 0.5}};
  Qrels qrels;
  qrels["s1"] = {{"r1", 3}, {"r2", 0}};
  qrels["s2"] = {{"r3", 2}, {"r4", 0}};

  EvalReport report = evaluate_run(ours, qrels);
  const EvalReport other = evaluate_run(theirs, qrels);
  add_comparison(report, other, "baseline");
  REQUIRE(report.comparison.has_value());
  CHECK(report.comparison->against == "baseline");
  CHECK(report.comparison->wins == 1);
  CHECK(report.comparison->ties == 1);
  CHECK(report.comparison->losses == 0);
}

TEST_CASE("to_table and to_json carry the mean row") {
  Run run;
  run["s1"] = {{"r1", 1, 0.9}, {"r2", 2, 0.5}};
  Qrels qrels;
  qrels["s1"] = {{"r1", 3}, {"r2", 0}};
  const EvalReport report = evaluate_run(run, qrels);

  const std::string table = to_table(report);
  CHECK(table.find("nDCG@5") != std::string::npos);
  CHECK(table.find("mean") != std::string::npos);
  CHECK(table.find("s1") != std::string::npos);

  const nlohmann::json j = to_json(report);
  CHECK(j.contains("per_set"));
  CHECK(j.contains("mean"));
  CHECK(j["mean"]["ndcg@5"].get<double>() == doctest::Approx(1.0));
  CHECK(j["per_set"]["s1"]["p@5"].get<double>() == doctest::Approx(1.0 / 5.0));
}
