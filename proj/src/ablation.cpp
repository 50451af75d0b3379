#include "discrank/ablation.hpp"

#include <cstdio>

namespace discrank {

namespace {

Qrels qrels_from(const Dataset& ds) {
  Qrels qrels;
  for (const auto& set : ds.sets)
    for (const auto& rep : set.reports) qrels[set.set_id][rep.report_id] = rep.label;
  return qrels;
}

Run run_from(const RankedDataset& ranked) {
  Run run;
  for (const auto& [set_id, entries] : ranked) {
    auto& out = run[set_id];
    for (const auto& e : entries) out.push_back({e.report_id, e.rank, e.score});
  }
  return run;
}

std::string cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%10.4f", v);
  return buf;
}

}  // namespace

std::vector<std::pair<std::string, FeatureConfig>> ablation_grid(const FeatureConfig& base) {
  std::vector<std::pair<std::string, FeatureConfig>> grid;
  grid.emplace_back("full", base);

  FeatureConfig no_importance = base;
  no_importance.learn_importance = false;
  grid.emplace_back("no-importance", no_importance);

  FeatureConfig no_ontology = base;
  no_ontology.ontology = false;
  grid.emplace_back("no-ontology", no_ontology);

  FeatureConfig overlap_only = base;
  overlap_only.use_addition = false;
  overlap_only.use_deletion = false;
  grid.emplace_back("overlap-only", overlap_only);

  FeatureConfig add_del_only = base;
  add_del_only.use_overlap = false;
  grid.emplace_back("add-del-only", add_del_only);
  return grid;
}

std::vector<AblationRow> run_ablation(const Dataset& train_ds, const Dataset& dev_ds,
                                      const Dataset& test_ds, const EmbeddingStore& store,
                                      const Ontology& onto, CombinerMode mode,
                                      const TrainConfig& tcfg, const FeatureConfig& base) {
  const Qrels qrels = qrels_from(test_ds);
  std::vector<AblationRow> rows;
  for (const auto& [name, config] : ablation_grid(base)) {
    const ModelParams init = init_params(tcfg.seed, store.dimension(), mode, config);
    const TrainResult trained = train(train_ds, dev_ds, tcfg, store, onto, init);
    const RankedDataset ranked = rank_dataset(test_ds, trained.model, store, onto);
    const EvalReport report = evaluate_run(run_from(ranked), qrels);

    AblationRow row;
    row.name = name;
    row.config = config;
    row.test_mean = report.mean;
    row.best_dev_ndcg5 = trained.best_dev_ndcg5;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string ablation_table(const std::vector<AblationRow>& rows) {
  std::string out = "configuration  ";
  for (const char* name : {"nDCG@1", "nDCG@5", "nDCG", "P@1", "P@5", "R-Prec"}) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%10s", name);
    out += buf;
  }
  out += '\n';
  for (const auto& row : rows) {
    char name_buf[32];
    std::snprintf(name_buf, sizeof(name_buf), "%-15s", row.name.c_str());
    out += name_buf;
    out += cell(row.test_mean.ndcg1);
    out += cell(row.test_mean.ndcg5);
    out += cell(row.test_mean.ndcg_full);
    out += cell(row.test_mean.p1);
    out += cell(row.test_mean.p5);
    out += cell(row.test_mean.rprec);
    out += '\n';
  }
  return out;
}

}  // namespace discrank
