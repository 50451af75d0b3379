#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "discrank/ablation.hpp"
#include "discrank/baseline.hpp"
#include "discrank/corpus.hpp"
#include "discrank/embed.hpp"
#include "discrank/evalmetrics.hpp"
#include "discrank/explain.hpp"
#include "discrank/ontology.hpp"
#include "discrank/ranker.hpp"
#include "discrank/synth.hpp"

namespace {

using namespace discrank;
using nlohmann::json;

// Flag-level mistakes exit with 2, runtime and data failures with 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Expands --config <file> into synthetic tokens inserted right after the
// subcommand name. Config keys mirror long flag names; tokens from the real
// command line come later and win under the take-last policy.
std::vector<std::string> expand_config_args(int argc, char** argv) {
  std::vector<std::string> tokens(argv + 1, argv + argc);

  std::size_t sub = 0;
  while (sub < tokens.size() && !tokens[sub].empty() && tokens[sub][0] == '-') ++sub;
  if (sub == tokens.size()) {
    for (const auto& t : tokens)
      if (t == "--config" || t.rfind("--config=", 0) == 0)
        throw UsageError("--config requires a subcommand");
    return tokens;
  }

  std::string config_path;
  for (std::size_t i = sub + 1; i < tokens.size(); ++i) {
    if (tokens[i] == "--config" && i + 1 < tokens.size())
      config_path = tokens[i + 1];
    else if (tokens[i].rfind("--config=", 0) == 0)
      config_path = tokens[i].substr(9);
  }
  if (config_path.empty()) return tokens;

  std::ifstream in(config_path);
  if (!in) throw UsageError("cannot open config file: " + config_path);
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    throw UsageError(config_path + ": config file must hold a JSON object");

  std::vector<std::string> injected;
  for (const auto& [key, value] : doc.items()) {
    if (value.is_boolean()) {
      if (value.get<bool>()) injected.push_back("--" + key);
      continue;
    }
    injected.push_back("--" + key);
    if (value.is_string()) {
      injected.push_back(value.get<std::string>());
    } else if (value.is_number()) {
      injected.push_back(value.dump());
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& item : value) {
        if (!joined.empty()) joined.push_back(',');
        joined += item.is_string() ? item.get<std::string>() : item.dump();
      }
      injected.push_back(joined);
    } else {
      throw UsageError(config_path + ": key '" + key + "' has an unsupported value type");
    }
  }

  std::vector<std::string> out(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(sub) + 1);
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), tokens.begin() + static_cast<std::ptrdiff_t>(sub) + 1, tokens.end());
  return out;
}

FeatureConfig parse_feature_flags(const std::string& ngrams, bool no_ontology,
                                  bool no_importance) {
  FeatureConfig config;
  config.unigram = config.bigram = config.trigram = false;
  std::stringstream ss(ngrams);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    piece.erase(std::remove_if(piece.begin(), piece.end(),
                               [](unsigned char c) { return c == ' ' || c == '\t'; }),
                piece.end());
    if (piece.empty()) continue;
    if (piece == "1")
      config.unigram = true;
    else if (piece == "2")
      config.bigram = true;
    else if (piece == "3")
      config.trigram = true;
    else
      throw UsageError("--ngrams accepts a comma-separated subset of 1,2,3");
  }
  config.ontology = !no_ontology;
  config.learn_importance = !no_importance;
  return config;
}

CombinerMode parse_mode(const std::string& mode) {
  return mode == "linear" ? CombinerMode::Linear : CombinerMode::Mlp;
}

// Prints validation warnings and fails on validation errors.
void check_dataset(const Dataset& ds, const std::string& label) {
  bool failed = false;
  for (const auto& issue : validate(ds)) {
    std::string where = issue.set_id;
    if (!issue.report_id.empty()) where += "/" + issue.report_id;
    if (issue.severity == Issue::Severity::Error) {
      std::cerr << "error: " << label << ": " << where << ": " << issue.message << '\n';
      failed = true;
    } else {
      std::cerr << "warning: " << label << ": " << where << ": " << issue.message << '\n';
    }
  }
  if (failed) throw std::runtime_error(label + " failed validation");
}

Ontology load_ontology_verbose(const std::string& path) {
  Ontology onto = load_ontology(path);
  for (const auto& w : onto.warnings) std::cerr << "warning: " << path << ": " << w << '\n';
  return onto;
}

Dataset pick_split(const Dataset& ds, const std::string& split, std::uint64_t seed) {
  if (split == "all") return ds;
  auto parts = split_dataset(ds, SplitRatios{}, seed);
  if (split == "train") return std::move(parts[0]);
  if (split == "dev") return std::move(parts[1]);
  return std::move(parts[2]);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

struct TrainFlags {
  std::string data, train_path, dev_path, test_path;
  std::string embeddings, ontology, out, history;
  std::uint64_t seed = 0;
  int epochs = 20;
  int batch_size = 16;
  double learning_rate = 1e-3;
  int pairs_per_epoch = 0;
  bool within_set_pairs = false;
  std::string mode = "mlp";
  std::string ngrams = "1,2,3";
  bool no_ontology = false;
  bool no_importance = false;
  double ontology_importance = 1.0;
  double ontology_match = 1.0;
};

int run_train(const TrainFlags& f) {
  const bool triplet = !f.train_path.empty() || !f.dev_path.empty() || !f.test_path.empty();
  if (triplet && (f.train_path.empty() || f.dev_path.empty() || f.test_path.empty()))
    throw UsageError("--train, --dev and --test must be given together");
  if (triplet == !f.data.empty())
    throw UsageError("give either --data or the --train/--dev/--test triplet");

  Dataset train_ds, dev_ds;
  if (triplet) {
    train_ds = load_dataset(f.train_path);
    dev_ds = load_dataset(f.dev_path);
    load_dataset(f.test_path);  // the held-out file must at least parse
  } else {
    Dataset all = load_dataset(f.data);
    auto parts = split_dataset(all, SplitRatios{}, f.seed);
    train_ds = std::move(parts[0]);
    dev_ds = std::move(parts[1]);
  }
  check_dataset(train_ds, "train split");
  check_dataset(dev_ds, "dev split");

  const EmbeddingStore store = load_embeddings(f.embeddings);
  const Ontology onto = load_ontology_verbose(f.ontology);

  const FeatureConfig config = parse_feature_flags(f.ngrams, f.no_ontology, f.no_importance);
  ModelParams init = init_params(f.seed, store.dimension(), parse_mode(f.mode), config);
  init.importance.ontology_importance = f.ontology_importance;
  init.importance.ontology_match = f.ontology_match;

  TrainConfig tcfg;
  tcfg.epochs = f.epochs;
  tcfg.batch_size = f.batch_size;
  tcfg.learning_rate = f.learning_rate;
  tcfg.seed = f.seed;
  tcfg.pairs_per_epoch = f.pairs_per_epoch;
  tcfg.within_set_pairs = f.within_set_pairs;

  const TrainResult result = train(train_ds, dev_ds, tcfg, store, onto, init);
  save_model(result.model, f.out);

  json history;
  history["best_epoch"] = result.best_epoch;
  history["best_dev_ndcg5"] = result.best_dev_ndcg5;
  history["epochs"] = json::array();
  for (std::size_t i = 0; i < result.history.size(); ++i)
    history["epochs"].push_back({{"epoch", i + 1},
                                 {"train_loss", result.history[i].train_loss},
                                 {"dev_ndcg5", result.history[i].dev_ndcg5}});
  const std::string history_path = f.history.empty() ? f.out + ".history.json" : f.history;
  write_text_file(history_path, history.dump(2) + "\n");

  std::cout << "best epoch " << result.best_epoch << ": dev nDCG@5 = " << result.best_dev_ndcg5
            << "\nmodel written to " << f.out << "\nhistory written to " << history_path << '\n';
  return 0;
}

struct RankFlags {
  std::string model, data, embeddings, ontology, out;
  std::string run_name = "discrank";
  std::string split = "all";
  std::uint64_t seed = 0;
};

int run_rank(const RankFlags& f) {
  const ModelParams model = load_model(f.model);
  const EmbeddingStore store = load_embeddings(f.embeddings);
  if (model.d != store.dimension())
    throw std::runtime_error("model dimension (d=" + std::to_string(model.d) +
                             ") does not match embedding dimension (d=" +
                             std::to_string(store.dimension()) + ")");
  const Ontology onto = load_ontology_verbose(f.ontology);
  const Dataset ds = pick_split(load_dataset(f.data), f.split, f.seed);

  const RankedDataset ranked = rank_dataset(ds, model, store, onto);
  write_run(ranked, f.run_name, f.out);
  std::cout << "run written to " << f.out << " (" << ranked.size() << " sets)\n";
  return 0;
}

struct EvalFlags {
  std::string run, qrels, compare, out;
};

int run_eval(const EvalFlags& f) {
  std::string run_name;
  const Run run = read_run(f.run, &run_name);
  const Qrels qrels = read_qrels(f.qrels);
  EvalReport report = evaluate_run(run, qrels);

  if (!f.compare.empty()) {
    std::string other_name;
    const Run other = read_run(f.compare, &other_name);
    const EvalReport other_report = evaluate_run(other, qrels);
    add_comparison(report, other_report, other_name.empty() ? f.compare : other_name);
  }

  std::cout << to_table(report);
  if (!f.out.empty()) write_text_file(f.out, to_json(report).dump(2) + "\n");
  return 0;
}

struct ExplainFlags {
  std::string model, embeddings, data, report_id, report_file, out;
  std::string format = "ansi";
  int top = 10;
};

int run_explain(const ExplainFlags& f) {
  const ModelParams model = load_model(f.model);
  const EmbeddingStore store = load_embeddings(f.embeddings);

  std::string preliminary, final_text;
  if (!f.report_file.empty()) {
    std::ifstream in(f.report_file);
    if (!in) throw std::runtime_error("cannot open report file: " + f.report_file);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("preliminary") ||
        !doc.contains("final") || !doc["preliminary"].is_string() || !doc["final"].is_string())
      throw std::runtime_error(f.report_file +
                               ": expected a JSON object with string fields "
                               "'preliminary' and 'final'");
    preliminary = doc["preliminary"].get<std::string>();
    final_text = doc["final"].get<std::string>();
  } else {
    if (f.data.empty() || f.report_id.empty())
      throw UsageError("explain needs --report-id together with --data, or --report-file");
    const Dataset ds = load_dataset(f.data);
    bool found = false;
    for (const auto& set : ds.sets) {
      for (const auto& rep : set.reports) {
        if (rep.report_id == f.report_id) {
          preliminary = rep.preliminary;
          final_text = rep.final_text;
          found = true;
        }
      }
    }
    if (!found)
      throw std::runtime_error("report '" + f.report_id + "' not found in " + f.data);
  }

  const ExplainView view =
      explain_pair(preliminary, final_text, model, store, static_cast<std::size_t>(f.top));
  const std::string rendered = f.format == "html" ? render_html(view) : render_ansi(view);
  if (f.out.empty())
    std::cout << rendered;
  else
    write_text_file(f.out, rendered);
  return 0;
}

struct GenSynthFlags {
  std::string out_dir;
  int num_sets = 122;
  int vocab_size = 600;
  int dim = 64;
  std::string difficulty = "easy";
  std::uint64_t seed = 1;
  int min_set_size = 5;
  int max_set_size = 148;
  double mean_set_size = 27.6;
  double set_size_sigma = 0.55;
};

int run_gen_synth(const GenSynthFlags& f) {
  SynthConfig cfg;
  cfg.num_sets = f.num_sets;
  cfg.vocab_size = f.vocab_size;
  cfg.dimension = f.dim;
  cfg.difficulty = f.difficulty == "hard" ? Difficulty::Hard : Difficulty::Easy;
  cfg.seed = f.seed;
  cfg.min_set_size = f.min_set_size;
  cfg.max_set_size = f.max_set_size;
  cfg.mean_set_size = f.mean_set_size;
  cfg.set_size_sigma = f.set_size_sigma;

  const SynthCorpus corpus = generate_synth(cfg);
  write_synth(corpus, f.out_dir);
  std::cout << "wrote " << corpus.dataset.sets.size() << " sets ("
            << corpus.dataset.total_reports() << " reports) to " << f.out_dir << '\n';
  return 0;
}

struct BaselineFlags {
  std::string data, out;
  std::string run_name = "vsm";
  std::string split = "all";
  std::uint64_t seed = 0;
};

int run_baseline_vsm(const BaselineFlags& f) {
  const Dataset all = load_dataset(f.data);
  // The idf table only ever sees the training split; the ranked portion is
  // chosen independently.
  auto parts = split_dataset(all, SplitRatios{}, f.seed);
  const IdfTable table = build_idf(parts[0]);
  const Dataset ds = pick_split(all, f.split, f.seed);

  const RankedDataset ranked = vsm_rank_dataset(ds, table);
  write_run(ranked, f.run_name, f.out);
  std::cout << "run written to " << f.out << " (" << ranked.size() << " sets)\n";
  return 0;
}

struct AblateFlags {
  std::string data, embeddings, ontology, out;
  std::uint64_t seed = 0;
  int epochs = 20;
  int batch_size = 16;
  double learning_rate = 1e-3;
  std::string mode = "mlp";
  std::string ngrams = "1,2,3";
  bool no_ontology = false;
  bool no_importance = false;
};

int run_ablate(const AblateFlags& f) {
  const Dataset all = load_dataset(f.data);
  auto parts = split_dataset(all, SplitRatios{}, f.seed);
  check_dataset(parts[0], "train split");
  check_dataset(parts[1], "dev split");

  const EmbeddingStore store = load_embeddings(f.embeddings);
  const Ontology onto = load_ontology_verbose(f.ontology);
  const FeatureConfig base = parse_feature_flags(f.ngrams, f.no_ontology, f.no_importance);

  TrainConfig tcfg;
  tcfg.epochs = f.epochs;
  tcfg.batch_size = f.batch_size;
  tcfg.learning_rate = f.learning_rate;
  tcfg.seed = f.seed;

  const std::vector<AblationRow> rows =
      run_ablation(parts[0], parts[1], parts[2], store, onto, parse_mode(f.mode), tcfg, base);
  std::cout << ablation_table(rows);

  if (!f.out.empty()) {
    json doc = json::array();
    for (const auto& row : rows)
      doc.push_back({{"name", row.name},
                     {"ndcg1", row.test_mean.ndcg1},
                     {"ndcg5", row.test_mean.ndcg5},
                     {"ndcg", row.test_mean.ndcg_full},
                     {"p1", row.test_mean.p1},
                     {"p5", row.test_mean.p5},
                     {"rprec", row.test_mean.rprec},
                     {"best_dev_ndcg5", row.best_dev_ndcg5}});
    write_text_file(f.out, doc.dump(2) + "\n");
  }
  return 0;
}

void add_config_option(CLI::App* cmd) {
  // The value is consumed by expand_config_args before parsing; the sink
  // only has to outlive the parse, hence static.
  static std::string ignored;
  cmd->add_option("--config", ignored,
                  "JSON file whose keys mirror the long flag names; command-line flags override "
                  "it");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ranks preliminary/final clinical report pairs by how significant their "
               "discrepancies are",
               "discrank"};
  app.require_subcommand(1);

  TrainFlags train_f;
  CLI::App* train_cmd = app.add_subcommand("train", "fit a discrepancy ranking model");
  train_cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  train_cmd->add_option("--data", train_f.data, "corpus JSONL, split 60/20/20 by --seed");
  train_cmd->add_option("--train", train_f.train_path, "training corpus JSONL");
  train_cmd->add_option("--dev", train_f.dev_path, "development corpus JSONL");
  train_cmd->add_option("--test", train_f.test_path, "held-out corpus JSONL (parsed, not used)");
  train_cmd->add_option("--embeddings", train_f.embeddings, "word2vec text embeddings")
      ->required();
  train_cmd->add_option("--ontology", train_f.ontology, "concept JSON")->required();
  train_cmd->add_option("--out", train_f.out, "model JSON output path")->required();
  train_cmd->add_option("--history", train_f.history,
                        "per-epoch history JSON (default: <out>.history.json)");
  train_cmd->add_option("--seed", train_f.seed, "RNG seed for split, init and sampling")
      ->envname("DISCRANK_SEED");
  train_cmd->add_option("--epochs", train_f.epochs)->check(CLI::PositiveNumber);
  train_cmd->add_option("--batch-size", train_f.batch_size)->check(CLI::PositiveNumber);
  train_cmd->add_option("--learning-rate", train_f.learning_rate)
      ->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--pairs-per-epoch", train_f.pairs_per_epoch,
                        "0 means one pair per training report")
      ->check(CLI::NonNegativeNumber);
  train_cmd->add_flag("--within-set-pairs", train_f.within_set_pairs,
                      "sample training pairs inside one ranking set");
  train_cmd->add_option("--mode", train_f.mode, "score combiner")
      ->check(CLI::IsMember({"mlp", "linear"}));
  train_cmd->add_option("--ngrams", train_f.ngrams, "comma-separated subset of 1,2,3");
  train_cmd->add_flag("--no-ontology", train_f.no_ontology, "disable concept features");
  train_cmd->add_flag("--no-importance", train_f.no_importance,
                      "freeze term importance at 0.5");
  train_cmd->add_option("--ontology-importance", train_f.ontology_importance,
                        "constant importance of concept terms");
  train_cmd->add_option("--ontology-match", train_f.ontology_match,
                        "match value of equal concepts");
  add_config_option(train_cmd);

  RankFlags rank_f;
  CLI::App* rank_cmd = app.add_subcommand("rank", "score and order report sets");
  rank_cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  rank_cmd->add_option("--model", rank_f.model, "model JSON")->required();
  rank_cmd->add_option("--data", rank_f.data, "corpus JSONL")->required();
  rank_cmd->add_option("--embeddings", rank_f.embeddings, "word2vec text embeddings")
      ->required();
  rank_cmd->add_option("--ontology", rank_f.ontology, "concept JSON")->required();
  rank_cmd->add_option("--out", rank_f.out, "run file output path")->required();
  rank_cmd->add_option("--run-name", rank_f.run_name, "name column of the run file");
  rank_cmd->add_option("--split", rank_f.split, "portion of --data to rank")
      ->check(CLI::IsMember({"all", "train", "dev", "test"}));
  rank_cmd->add_option("--seed", rank_f.seed, "split seed; match the training seed")
      ->envname("DISCRANK_SEED");
  add_config_option(rank_cmd);

  EvalFlags eval_f;
  CLI::App* eval_cmd = app.add_subcommand("eval", "score a run file against judgments");
  eval_cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  eval_cmd->add_option("--run", eval_f.run, "run file")->required();
  eval_cmd->add_option("--qrels", eval_f.qrels, "relevance judgments")->required();
  eval_cmd->add_option("--compare", eval_f.compare,
                       "second run file for per-set nDCG@5 win/tie/loss counts");
  eval_cmd->add_option("--out", eval_f.out, "metrics JSON output path");
  add_config_option(eval_cmd);

  ExplainFlags explain_f;
  CLI::App* explain_cmd =
      app.add_subcommand("explain", "annotate one report pair with edits and importance");
  explain_cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  explain_cmd->add_option("--model", explain_f.model, "model JSON")->required();
  explain_cmd->add_option("--embeddings", explain_f.embeddings, "word2vec text embeddings")
      ->required();
  explain_cmd->add_option("--data", explain_f.data, "corpus JSONL to look up --report-id in");
  explain_cmd->add_option("--report-id", explain_f.report_id, "report to explain");
  explain_cmd->add_option("--report-file", explain_f.report_file,
                          "JSON object with 'preliminary' and 'final' instead of --data");
  explain_cmd->add_option("--format", explain_f.format, "output format")
      ->check(CLI::IsMember({"ansi", "html"}));
  explain_cmd->add_option("--top", explain_f.top, "number of most important terms to list")
      ->check(CLI::NonNegativeNumber);
  explain_cmd->add_option("--out", explain_f.out, "write the rendering here instead of stdout");
  add_config_option(explain_cmd);

  GenSynthFlags gen_f;
  CLI::App* gen_cmd = app.add_subcommand("gen-synth", "generate a synthetic benchmark corpus");
  gen_cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  gen_cmd->add_option("--out-dir", gen_f.out_dir, "output directory")->required();
  gen_cmd->add_option("--num-sets", gen_f.num_sets)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--vocab-size", gen_f.vocab_size)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--dim", gen_f.dim, "embedding dimension")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--difficulty", gen_f.difficulty)
      ->check(CLI::IsMember({"easy", "hard"}));
  gen_cmd->add_option("--seed", gen_f.seed)->envname("DISCRANK_SEED");
  gen_cmd->add_option("--min-set-size", gen_f.min_set_size)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--max-set-size", gen_f.max_set_size)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--mean-set-size", gen_f.mean_set_size)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--set-size-sigma", gen_f.set_size_sigma)
      ->check(CLI::NonNegativeNumber);
  add_config_option(gen_cmd);

  BaselineFlags vsm_f;
  CLI::App* vsm_cmd =
      app.add_subcommand("baseline-vsm", "rank by TF-IDF discrepancy between versions");
  vsm_cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  vsm_cmd->add_option("--data", vsm_f.data, "corpus JSONL")->required();
  vsm_cmd->add_option("--out", vsm_f.out, "run file output path")->required();
  vsm_cmd->add_option("--run-name", vsm_f.run_name, "name column of the run file");
  vsm_cmd->add_option("--split", vsm_f.split, "portion of --data to rank")
      ->check(CLI::IsMember({"all", "train", "dev", "test"}));
  vsm_cmd->add_option("--seed", vsm_f.seed, "split seed; idf uses the train split")
      ->envname("DISCRANK_SEED");
  add_config_option(vsm_cmd);

  AblateFlags ablate_f;
  CLI::App* ablate_cmd =
      app.add_subcommand("ablate", "retrain with components switched off and compare");
  ablate_cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  ablate_cmd->add_option("--data", ablate_f.data, "corpus JSONL, split 60/20/20 by --seed")
      ->required();
  ablate_cmd->add_option("--embeddings", ablate_f.embeddings, "word2vec text embeddings")
      ->required();
  ablate_cmd->add_option("--ontology", ablate_f.ontology, "concept JSON")->required();
  ablate_cmd->add_option("--out", ablate_f.out, "row metrics JSON output path");
  ablate_cmd->add_option("--seed", ablate_f.seed)->envname("DISCRANK_SEED");
  ablate_cmd->add_option("--epochs", ablate_f.epochs)->check(CLI::PositiveNumber);
  ablate_cmd->add_option("--batch-size", ablate_f.batch_size)->check(CLI::PositiveNumber);
  ablate_cmd->add_option("--learning-rate", ablate_f.learning_rate)
      ->check(CLI::NonNegativeNumber);
  ablate_cmd->add_option("--mode", ablate_f.mode, "score combiner")
      ->check(CLI::IsMember({"mlp", "linear"}));
  ablate_cmd->add_option("--ngrams", ablate_f.ngrams, "comma-separated subset of 1,2,3");
  ablate_cmd->add_flag("--no-ontology", ablate_f.no_ontology,
                       "drop concept features from the base configuration");
  ablate_cmd->add_flag("--no-importance", ablate_f.no_importance,
                       "freeze importance in the base configuration");
  add_config_option(ablate_cmd);

  std::vector<std::string> args;
  try {
    args = expand_config_args(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  std::reverse(args.begin(), args.end());

  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (train_cmd->parsed()) return run_train(train_f);
    if (rank_cmd->parsed()) return run_rank(rank_f);
    if (eval_cmd->parsed()) return run_eval(eval_f);
    if (explain_cmd->parsed()) return run_explain(explain_f);
    if (gen_cmd->parsed()) return run_gen_synth(gen_f);
    if (vsm_cmd->parsed()) return run_baseline_vsm(vsm_f);
    if (ablate_cmd->parsed()) return run_ablate(ablate_f);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
