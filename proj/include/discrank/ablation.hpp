#pragma once

#include <string>
#include <utility>
#include <vector>

#include "discrank/corpus.hpp"
#include "discrank/embed.hpp"
#include "discrank/evalmetrics.hpp"
#include "discrank/ontology.hpp"
#include "discrank/ranker.hpp"

namespace discrank {

struct AblationRow {
  std::string name;
  FeatureConfig config;
  SetMetrics test_mean;
  double best_dev_ndcg5 = 0.0;
};

// The standard component study: the base configuration, importance frozen
// to 0.5, ontology features off, overlap scores alone, and addition plus
// deletion scores alone.
std::vector<std::pair<std::string, FeatureConfig>> ablation_grid(const FeatureConfig& base);

// Trains one model per grid row and measures the mean test metrics. Rows
// come back in grid order; every step reuses the same seed and training
// settings, so the only variable is the feature configuration.
std::vector<AblationRow> run_ablation(const Dataset& train_ds, const Dataset& dev_ds,
                                      const Dataset& test_ds, const EmbeddingStore& store,
                                      const Ontology& onto, CombinerMode mode,
                                      const TrainConfig& tcfg, const FeatureConfig& base);

std::string ablation_table(const std::vector<AblationRow>& rows);

}  // namespace discrank
