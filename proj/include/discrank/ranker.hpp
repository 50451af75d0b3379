#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "discrank/corpus.hpp"
#include "discrank/embed.hpp"
#include "discrank/ontology.hpp"
#include "discrank/rng.hpp"
#include "discrank/scoring.hpp"

namespace discrank {

enum class CombinerMode { Mlp, Linear };

constexpr int kHiddenUnits = 10;

// Maps the 12 features to a scalar: either a one-hidden-layer perceptron
// with sigmoid activations and a linear output, or a plain linear layer.
struct CombinerParams {
  CombinerMode mode = CombinerMode::Mlp;

  Eigen::MatrixXd hidden_weights;  // kHiddenUnits x kNumFeatures
  Eigen::VectorXd hidden_bias;     // kHiddenUnits
  Eigen::VectorXd out_weights;     // kHiddenUnits
  double out_bias = 0.0;

  Eigen::VectorXd weights;  // kNumFeatures (linear mode)
  double bias = 0.0;
};

struct ModelParams {
  ImportanceParams importance;
  CombinerParams combiner;
  FeatureConfig config;
  int d = 0;  // embedding dimension the model was built for
};

struct TrainConfig {
  int epochs = 20;
  int batch_size = 16;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  // 0 means one pair per training report.
  int pairs_per_epoch = 0;
  // Sample contrastive pairs inside a single ranking set instead of
  // globally across the split.
  bool within_set_pairs = false;
};

// Fresh parameters: combiner weights and biases from N(1, 0.01), importance
// weights from N(0, 0.01), importance bias exactly 1. The same seed always
// produces the same model.
ModelParams init_params(std::uint64_t seed, int d, CombinerMode mode,
                        const FeatureConfig& config = {});

double score(const FeatureVec& x, const CombinerParams& combiner);

struct RankedReport {
  std::string report_id;
  double score = 0.0;
  int rank = 0;  // 1-based
};

// Scores every report of the set and orders descending by score, ties by
// ascending report_id.
std::vector<RankedReport> rank_set(const RankingSet& set, const ModelParams& model,
                                   const EmbeddingStore& store, const Ontology& onto);

using RankedDataset = std::vector<std::pair<std::string, std::vector<RankedReport>>>;
RankedDataset rank_dataset(const Dataset& ds, const ModelParams& model,
                           const EmbeddingStore& store, const Ontology& onto);

// Cross entropy of the softmax over a (positive, negative) score pair,
// computed in overflow-safe form.
double pairwise_loss(double s_pos, double s_neg);

// Uniformly samples report pairs whose labels differ; the higher label is
// the positive side. Construction fails when no such pair exists.
class PairSampler {
 public:
  PairSampler(const Dataset& train, std::uint64_t seed, bool within_set = false);

  // Indices into reports().
  std::pair<int, int> next();
  const std::vector<const Report*>& reports() const { return reports_; }

 private:
  std::vector<const Report*> reports_;
  std::vector<std::pair<int, int>> set_ranges_;  // [begin, end) per usable set
  Rng rng_;
  bool within_set_;
};

struct EpochStats {
  double train_loss = 0.0;
  double dev_ndcg5 = 0.0;
};

struct TrainResult {
  ModelParams model;  // parameters of the best epoch by dev mean nDCG@5
  std::vector<EpochStats> history;
  int best_epoch = 0;  // 1-based
  double best_dev_ndcg5 = 0.0;
};

// Mini-batch gradient descent on the pairwise loss, starting from init.
// Gradients flow into the combiner and the importance parameters; term
// embeddings stay frozen. After each epoch the dev split is ranked and the
// best snapshot by mean nDCG@5 is retained. Fully deterministic given
// (init, data, config).
TrainResult train(const Dataset& train_ds, const Dataset& dev_ds, const TrainConfig& cfg,
                  const EmbeddingStore& store, const Ontology& onto, const ModelParams& init);

// Loss of one precomputed pair under the model; fills parameter gradients
// when grads is non-null (layout matches flatten_params).
struct PairGrads {
  Eigen::VectorXd combiner;  // flattened combiner gradient
  Eigen::VectorXd w_imp;
  double b_imp = 0.0;
};
double pair_loss(const ModelParams& model, const FeatureInput& pos, const FeatureInput& neg,
                 PairGrads* grads = nullptr);

// Central-difference verification of every parameter gradient (combiner,
// w_imp, b_imp). Returns the maximum over parameters of
// |analytic - numeric| / max(1e-8, |analytic| + |numeric|).
double grad_check(const ModelParams& model, const FeatureInput& pos, const FeatureInput& neg,
                  double eps = 1e-5);

// JSON round trip preserving every parameter value exactly. Files written
// from the same parameters are byte-identical.
void save_model(const ModelParams& model, const std::string& path);
ModelParams load_model(const std::string& path);

// TREC-format run lines: "set_id Q0 report_id rank score run_name".
void write_run(const RankedDataset& ranked, const std::string& run_name, const std::string& path);

}  // namespace discrank
