// End-to-end acceptance checks. Each numbered criterion prints one
// [PASS]/[FAIL] line; the exit code is nonzero when any line fails.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "discrank/baseline.hpp"
#include "discrank/corpus.hpp"
#include "discrank/embed.hpp"
#include "discrank/evalmetrics.hpp"
#include "discrank/explain.hpp"
#include "discrank/ontology.hpp"
#include "discrank/ranker.hpp"
#include "discrank/rng.hpp"
#include "discrank/scoring.hpp"
#include "discrank/synth.hpp"
#include "discrank/textproc.hpp"
#include "support/testutil.hpp"

using namespace discrank;
using testutil::TempDir;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double sec() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

bool near(double x, double want, double tol) { return std::abs(x - want) <= tol; }

Qrels qrels_of(const Dataset& ds) {
  Qrels qrels;
  for (const auto& set : ds.sets)
    for (const auto& rep : set.reports) qrels[set.set_id][rep.report_id] = rep.label;
  return qrels;
}

Run run_of(const RankedDataset& ranked) {
  Run run;
  for (const auto& [set_id, entries] : ranked) {
    auto& out = run[set_id];
    for (const auto& e : entries) out.push_back({e.report_id, e.rank, e.score});
  }
  return run;
}

SynthConfig small_synth(std::uint64_t seed) {
  SynthConfig cfg;
  cfg.num_sets = 12;
  cfg.max_set_size = 20;
  cfg.mean_set_size = 9.0;
  cfg.set_size_sigma = 0.3;
  cfg.dimension = 16;
  cfg.seed = seed;
  return cfg;
}

// Random parameters in a regime where gradients are alive: the fresh
// all-near-one combiner is perturbed by a wide normal.
ModelParams random_model(Rng& rng, int d, CombinerMode mode) {
  ModelParams model = init_params(rng.u64(), d, mode);
  const auto jitter = [&rng](double v) { return v + rng.normal(0.0, 0.6); };
  model.combiner.hidden_weights = model.combiner.hidden_weights.unaryExpr(jitter);
  model.combiner.hidden_bias = model.combiner.hidden_bias.unaryExpr(jitter);
  model.combiner.out_weights = model.combiner.out_weights.unaryExpr(jitter);
  model.combiner.out_bias = jitter(model.combiner.out_bias);
  model.combiner.weights = model.combiner.weights.unaryExpr(jitter);
  model.combiner.bias = jitter(model.combiner.bias);
  model.importance.w_imp = model.importance.w_imp.unaryExpr(jitter);
  model.importance.b_imp = jitter(model.importance.b_imp);
  return model;
}

FeatureInput random_feature_input(Rng& rng, int d) {
  FeatureInput input;
  for (int g = 0; g < 3; ++g) {
    GramInput& gram = input.grams[static_cast<std::size_t>(g)];
    const int np = rng.range(0, 6);
    const int nf = rng.range(0, 6);
    gram.prelim_embs = Eigen::MatrixXd(np, d);
    gram.final_embs = Eigen::MatrixXd(nf, d);
    for (int i = 0; i < np; ++i)
      for (int j = 0; j < d; ++j) gram.prelim_embs(i, j) = rng.normal();
    for (int i = 0; i < nf; ++i)
      for (int j = 0; j < d; ++j) gram.final_embs(i, j) = rng.normal();
    gram.prelim_match = Eigen::VectorXd(np);
    gram.final_match = Eigen::VectorXd(nf);
    for (int i = 0; i < np; ++i) gram.prelim_match[i] = rng.real();
    for (int i = 0; i < nf; ++i) gram.final_match[i] = rng.real();
  }
  input.onto_prelim_terms = rng.range(0, 4);
  input.onto_final_terms = rng.range(0, 4);
  input.onto_prelim_matched = rng.range(0, input.onto_prelim_terms);
  input.onto_final_matched = rng.range(0, input.onto_final_terms);
  return input;
}

// Background color indices in order of appearance in an ANSI rendering.
std::vector<int> background_cells(const std::string& ansi) {
  std::vector<int> cells;
  const std::string prefix = "\x1b[48;5;";
  std::size_t pos = 0;
  while ((pos = ansi.find(prefix, pos)) != std::string::npos) {
    pos += prefix.size();
    int value = 0;
    while (pos < ansi.size() && ansi[pos] >= '0' && ansi[pos] <= '9')
      value = value * 10 + (ansi[pos++] - '0');
    cells.push_back(value);
  }
  return cells;
}

// --- criterion bodies ------------------------------------------------------

std::pair<bool, std::string> ablate_report_shape() {
  const char* exe = std::getenv("DISCRANK_CLI");
  if (exe == nullptr) return {false, "DISCRANK_CLI is not set"};

  TempDir dir("acc-ablate");
  write_synth(generate_synth(small_synth(21)), dir.file("synth"));
  const std::string synth = dir.file("synth") + "/";
  const std::string cmd = std::string(exe) + " ablate --data " + synth + "corpus.jsonl" +
                          " --embeddings " + synth + "embeddings.vec" + " --ontology " + synth +
                          "ontology.json --mode linear --epochs 2 --seed 3 > " +
                          dir.file("table.txt") + " 2> " + dir.file("err.txt");
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0)
    return {false, "ablate exited with " + std::to_string(WEXITSTATUS(status))};

  const std::string table = testutil::read_file(dir.file("table.txt"));
  for (const char* needle : {"configuration", "nDCG@1", "nDCG@5", "nDCG", "P@1", "P@5", "R-Prec",
                             "full", "no-importance", "no-ontology", "overlap-only",
                             "add-del-only"})
    if (table.find(needle) == std::string::npos)
      return {false, std::string("report lacks '") + needle + "'"};
  const auto lines = static_cast<int>(std::count(table.begin(), table.end(), '\n'));
  if (lines != 6) return {false, "expected 6 report lines, saw " + std::to_string(lines)};
  return {true, "5 configurations x 6 metrics"};
}

std::pair<bool, std::string> similarity_oracle() {
  Timer timer;
  Rng rng(20240202);
  const int instances = 1500;
  double max_diff = 0.0;
  for (int trial = 0; trial < instances; ++trial) {
    const auto g = static_cast<Granularity>(trial % 4);
    const int d = rng.range(1, 4);
    const TermSet p = testutil::random_term_set(rng, g, d, 10, 6);
    const TermSet f = testutil::random_term_set(rng, g, d, 10, 6);
    ImportanceParams params = testutil::random_importance(rng, d);
    FeatureConfig config;
    config.learn_importance = rng.real() < 0.8;

    const SimScores got = sim_scores(p, f, params, config);
    const SimScores want = testutil::oracle::sim_scores(p, f, params, config);
    max_diff = std::max({max_diff, std::abs(got.addition - want.addition),
                         std::abs(got.deletion - want.deletion),
                         std::abs(got.overlap - want.overlap)});
  }
  const double elapsed = timer.sec();
  const bool ok = max_diff <= 1e-9 && elapsed < 10.0;
  return {ok, fmt("max diff %.2e over 1500 instances in %.2fs", max_diff, elapsed)};
}

std::pair<bool, std::string> gradient_check() {
  Timer timer;
  Rng rng(77);
  double worst = 0.0;
  for (const CombinerMode mode : {CombinerMode::Mlp, CombinerMode::Linear}) {
    for (int trial = 0; trial < 100; ++trial) {
      const int d = rng.range(3, 8);
      ModelParams model = random_model(rng, d, mode);
      if (trial % 5 == 0) model.config.learn_importance = false;
      const FeatureInput pos = random_feature_input(rng, d);
      const FeatureInput neg = random_feature_input(rng, d);
      worst = std::max(worst, grad_check(model, pos, neg, 1e-5));
    }
  }
  const double elapsed = timer.sec();
  const bool ok = worst < 1e-4 && elapsed < 30.0;
  return {ok, fmt("max relative error %.2e over 100 trials per mode in %.2fs", worst, elapsed)};
}

std::pair<bool, std::string> metric_fixtures() {
  if (!near(ndcg_at_k({0, 3}, 2), 0.63093, 1e-5))
    return {false, fmt("nDCG@2 of [0,3] = %.6f", ndcg_at_k({0, 3}, 2))};
  if (ndcg_at_k({3, 0, 0}, 1) != 1.0) return {false, "nDCG@1 of an ideal prefix is not 1"};
  if (ndcg_at_k({0, 0, 0}, 3) != 0.0) return {false, "all-zero labels should score 0"};

  if (!near(precision_at_k({3, 0, 1, 0, 0}, 5), 0.4, 1e-12))
    return {false, "P@5 with 2 relevant in the top 5 is not 0.4"};
  if (!near(precision_at_k({1, 2, 3}, 5), 0.6, 1e-12))
    return {false, "P@5 keeps k as denominator when n < k"};
  if (precision_at_k({3}, 1) != 1.0) return {false, "P@1 of a relevant top item is not 1"};

  if (!near(r_prec({1, 0, 1}), 0.5, 1e-12)) return {false, "R-Prec of [1,0,1] is not 0.5"};
  if (r_prec({0, 0}) != 0.0) return {false, "R-Prec with no relevant items is not 0"};

  const std::vector<int> perfect = {3, 3, 2, 2, 1, 0, 0};  // five relevant, sorted
  for (const double value :
       {ndcg_at_k(perfect, 1), ndcg_at_k(perfect, 5), ndcg(perfect), precision_at_k(perfect, 1),
        precision_at_k(perfect, 5), r_prec(perfect)})
    if (!near(value, 1.0, 1e-12)) return {false, "perfect ranking misses 1.0 somewhere"};
  return {true, "nDCG@2([0,3]) = 0.63093, perfect ranking scores 1.0 on all six metrics"};
}

std::pair<bool, std::string> end_to_end_learning() {
  Timer timer;
  SynthConfig cfg;
  cfg.seed = 7;
  const SynthCorpus corpus = generate_synth(cfg);
  const EmbeddingStore store = make_store(corpus);
  const Ontology onto = build_ontology(corpus.concepts);
  const auto parts = split_dataset(corpus.dataset, SplitRatios{}, 7);

  const ModelParams init = init_params(7, store.dimension(), CombinerMode::Mlp);
  TrainConfig tcfg;  // 20 epochs, batch 16, lr 1e-3
  tcfg.seed = 7;
  const TrainResult result = train(parts[0], parts[1], tcfg, store, onto, init);

  const Qrels qrels = qrels_of(parts[2]);
  const double model_ndcg5 =
      evaluate_run(run_of(rank_dataset(parts[2], result.model, store, onto)), qrels).mean.ndcg5;
  const double vsm_ndcg5 =
      evaluate_run(run_of(vsm_rank_dataset(parts[2], build_idf(parts[0]))), qrels).mean.ndcg5;

  const double elapsed = timer.sec();
  const bool ok = model_ndcg5 >= 0.95 && model_ndcg5 > vsm_ndcg5 && elapsed < 300.0;
  return {ok, fmt("test mean nDCG@5 = %.4f, VSM = %.4f, %.1fs", model_ndcg5, vsm_ndcg5, elapsed)};
}

std::pair<bool, std::string> scoring_invariants() {
  Rng rng(5150);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto g = static_cast<Granularity>(trial % 4);
    const int d = rng.range(1, 4);
    const TermSet p = testutil::random_term_set(rng, g, d, 6, 5);
    const TermSet f = testutil::random_term_set(rng, g, d, 6, 5);
    ImportanceParams params = testutil::random_importance(rng, d);
    FeatureConfig config;
    config.learn_importance = rng.real() < 0.8;

    const SimScores pf = sim_scores(p, f, params, config);
    const SimScores fp = sim_scores(f, p, params, config);
    if (pf.addition != fp.deletion || pf.deletion != fp.addition || pf.overlap != fp.overlap)
      return {false, "transposition duality broke at trial " + std::to_string(trial)};
    for (const double s : {pf.addition, pf.deletion, pf.overlap})
      if (!(s >= -1.0 && s <= 0.0))
        return {false, "score out of [-1,0] at trial " + std::to_string(trial)};
  }
  return {true, "duality and range hold on 10000 random inputs"};
}

std::pair<bool, std::string> determinism() {
  TempDir dir("acc-det");
  SynthConfig cfg;
  cfg.num_sets = 20;
  cfg.seed = 11;

  write_synth(generate_synth(cfg), dir.file("a"));
  write_synth(generate_synth(cfg), dir.file("b"));
  for (const char* name :
       {"corpus.jsonl", "embeddings.vec", "ontology.json", "qrels.txt", "ground_truth.jsonl"}) {
    const std::string a = testutil::read_file(dir.file("a") + "/" + name);
    if (a.empty() || a != testutil::read_file(dir.file("b") + "/" + name))
      return {false, std::string("synth file ") + name + " differs between runs"};
  }

  const SynthCorpus corpus = generate_synth(cfg);
  const EmbeddingStore store = make_store(corpus);
  const Ontology onto = build_ontology(corpus.concepts);
  const auto parts = split_dataset(corpus.dataset, SplitRatios{}, 11);
  TrainConfig tcfg;
  tcfg.epochs = 5;
  tcfg.seed = 11;

  for (const char* tag : {"1", "2"}) {
    const ModelParams init = init_params(11, store.dimension(), CombinerMode::Mlp);
    const TrainResult result = train(parts[0], parts[1], tcfg, store, onto, init);
    save_model(result.model, dir.file(std::string("model") + tag + ".json"));
    write_run(rank_dataset(corpus.dataset, result.model, store, onto), "acc",
              dir.file(std::string("run") + tag + ".txt"));
  }
  const std::string model1 = testutil::read_file(dir.file("model1.json"));
  if (model1.empty() || model1 != testutil::read_file(dir.file("model2.json")))
    return {false, "model files differ between runs"};
  const std::string run1 = testutil::read_file(dir.file("run1.txt"));
  if (run1.empty() || run1 != testutil::read_file(dir.file("run2.txt")))
    return {false, "run files differ between runs"};
  return {true, "synth, model and run files are byte-identical across reruns"};
}

std::pair<bool, std::string> synth_statistics() {
  const SynthCorpus corpus = generate_synth(SynthConfig{});  // seed 1 defaults
  std::array<double, 4> counts = {0, 0, 0, 0};
  for (const auto& set : corpus.dataset.sets)
    for (const auto& rep : set.reports) counts[static_cast<std::size_t>(rep.label)] += 1.0;
  const double total = counts[0] + counts[1] + counts[2] + counts[3];
  const double mean_size = total / static_cast<double>(corpus.dataset.sets.size());

  const std::array<double, 4> want = {0.81, 0.12, 0.06, 0.01};
  for (int l = 0; l < 4; ++l)
    if (std::abs(counts[static_cast<std::size_t>(l)] / total - want[static_cast<std::size_t>(l)]) >
        0.02)
      return {false, "label " + std::to_string(l) +
                         fmt(" fraction off target: %.4f", counts[static_cast<std::size_t>(l)] /
                                                               total)};
  if (!(mean_size >= 27.6 * 0.9 && mean_size <= 27.6 * 1.1))
    return {false, fmt("mean set size %.2f outside 27.6 +- 10%%", mean_size)};
  return {true, fmt("fractions %.1f/%.1f", 100.0 * counts[0] / total, 100.0 * counts[1] / total) +
                    fmt("/%.1f/%.1f, ", 100.0 * counts[2] / total, 100.0 * counts[3] / total) +
                    fmt("mean set size %.2f", mean_size)};
}

std::pair<bool, std::string> explain_view() {
  EmbeddingStore store(4);
  store.insert("alpha", Eigen::Vector4d(-3, 0, 0, 0));
  store.insert("beta", Eigen::Vector4d(-1, 0, 0, 0));
  store.insert("gamma", Eigen::Vector4d(0, 0, 0, 0));
  store.insert("epsilon", Eigen::Vector4d(1, 0, 0, 0));
  store.insert("delta", Eigen::Vector4d(3, 0, 0, 0));
  ModelParams model;
  model.d = 4;
  model.importance.w_imp = Eigen::Vector4d(1, 0, 0, 0);
  model.importance.b_imp = 0.0;

  const std::string prelim = "alpha beta gamma delta";
  const std::string final_text = "alpha gamma epsilon delta";
  const ExplainView view = explain_pair(prelim, final_text, model, store);

  // Replay invariant: KEEP+DELETE spell the preliminary tokens, KEEP+ADD the
  // final ones.
  std::vector<std::string> prelim_replay, final_replay;
  for (const ExplainItem& item : view.items) {
    if (item.kind != EditOp::Kind::Add) prelim_replay.push_back(item.token);
    if (item.kind != EditOp::Kind::Delete) final_replay.push_back(item.token);
  }
  if (prelim_replay != tokenize(prelim).tokens || final_replay != tokenize(final_text).tokens)
    return {false, "edit markers do not replay the two versions"};
  int adds = 0, dels = 0;
  for (const ExplainItem& item : view.items) {
    adds += item.kind == EditOp::Kind::Add ? 1 : 0;
    dels += item.kind == EditOp::Kind::Delete ? 1 : 0;
  }
  if (adds != 1 || dels != 1) return {false, "crafted pair should show one add and one delete"};

  const std::vector<int> cells = background_cells(render_ansi(view));
  if (cells.size() != view.items.size()) return {false, "one background cell per token expected"};
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (std::size_t j = 0; j < cells.size(); ++j)
      if (view.items[i].importance < view.items[j].importance &&
          !(cells[i] < cells[j]))
        return {false, "background shading is not monotone in importance"};
  return {true, "markers replay both versions, shading rises with importance"};
}

}  // namespace

int main() {
  int failures = 0;
  const auto run = [&failures](int index, const char* name,
                               const std::function<std::pair<bool, std::string>()>& body) {
    std::pair<bool, std::string> result;
    try {
      result = body();
    } catch (const std::exception& e) {
      result = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %d. %s: %s\n", result.first ? "PASS" : "FAIL", index, name,
                result.second.c_str());
    std::fflush(stdout);
    if (!result.first) ++failures;
  };

  run(1, "ablation report shape", ablate_report_shape);
  run(2, "similarity oracle agreement", similarity_oracle);
  run(3, "analytic gradients", gradient_check);
  run(4, "metric fixtures", metric_fixtures);
  run(5, "end-to-end learning beats the baseline", end_to_end_learning);
  run(6, "scoring duality and range", scoring_invariants);
  run(7, "seeded runs are byte-identical", determinism);
  run(8, "synthetic corpus statistics", synth_statistics);
  run(9, "explain markers and shading", explain_view);

  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
