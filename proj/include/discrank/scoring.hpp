#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "discrank/corpus.hpp"
#include "discrank/embed.hpp"
#include "discrank/ontology.hpp"

namespace discrank {

enum class Granularity { Unigram = 0, Bigram = 1, Trigram = 2, Ontology = 3 };

// One matchable unit of a report. Embedding granularities carry a vector
// (token vector, or the mean over an n-gram window); ontology terms carry
// only their concept id and an empty vector.
struct Term {
  std::string key;
  Eigen::VectorXd vec;
};

struct TermSet {
  Granularity granularity = Granularity::Unigram;
  std::vector<Term> terms;
};

struct ImportanceParams {
  Eigen::VectorXd w_imp;
  double b_imp = 0.0;
  // Concept terms have no learned weight: a constant importance and a
  // constant match value stand in for the embedding-based ones. Both cancel
  // inside the score ratios but stay configurable.
  double ontology_importance = 1.0;
  double ontology_match = 1.0;
};

// Granularity and score-type switches. Disabled parts keep their feature
// slots, pinned to zero, so the feature layout never changes shape.
struct FeatureConfig {
  bool unigram = true;
  bool bigram = true;
  bool trigram = true;
  bool ontology = true;
  bool use_addition = true;
  bool use_deletion = true;
  bool use_overlap = true;
  // When false, every embedding-granularity term gets importance 0.5
  // (sigmoid of zero) and no gradient reaches w_imp or b_imp.
  bool learn_importance = true;
};

constexpr int kNumFeatures = 12;
using FeatureVec = Eigen::Matrix<double, kNumFeatures, 1>;

// Feature slot layout: three scores (addition, deletion, overlap) for each
// granularity in order unigram, bigram, trigram, ontology.
inline int feature_slot(Granularity g, int score) { return static_cast<int>(g) * 3 + score; }

double sigmoid(double x);

// Best soft match of term y against set X: the maximum cosine between y's
// vector and any vector in X, clamped to [0, 1]. Ontology terms match
// exactly by concept id and score the constant ontology_match. Empty X
// yields 0.
double match_score(const Term& y, const TermSet& X, const ImportanceParams& params);

// Learned importance of a term: sigmoid(vec . w_imp + b_imp) for embedding
// granularities, the constant ontology_importance for concept terms.
double importance(const Term& y, Granularity g, const ImportanceParams& params,
                  const FeatureConfig& config = {});

struct SimScores {
  double addition = 0.0;
  double deletion = 0.0;
  double overlap = 0.0;
};

// Importance-weighted soft similarity of a preliminary/final pair at one
// granularity. addition sums matches of final terms against the preliminary
// side, deletion the reverse, overlap pools both sides. All three fall in
// [-1, 0]; a side with no terms contributes nothing and an empty denominator
// gives 0.
SimScores sim_scores(const TermSet& p, const TermSet& f, const ImportanceParams& params,
                     const FeatureConfig& config = {});

struct ReportTermSets {
  std::array<TermSet, 4> prelim;  // indexed by Granularity
  std::array<TermSet, 4> final_;
};

ReportTermSets build_term_sets(const Report& report, const EmbeddingStore& store,
                               const Ontology& onto, const FeatureConfig& config);

// The model's 12 input features for one report.
FeatureVec feature_vector(const Report& report, const EmbeddingStore& store, const Ontology& onto,
                          const ImportanceParams& params, const FeatureConfig& config);

// Precomputed per-report state for training. Embeddings are frozen, so term
// vectors and match values are constants; only the importance weights move.
struct GramInput {
  Eigen::MatrixXd prelim_embs;   // n_p x d
  Eigen::MatrixXd final_embs;    // n_f x d
  Eigen::VectorXd prelim_match;  // best match of each preliminary term in the final side
  Eigen::VectorXd final_match;   // best match of each final term in the preliminary side
};

struct FeatureInput {
  std::array<GramInput, 3> grams;  // unigram, bigram, trigram
  int onto_prelim_terms = 0;
  int onto_final_terms = 0;
  int onto_prelim_matched = 0;
  int onto_final_matched = 0;
};

FeatureInput build_feature_input(const Report& report, const EmbeddingStore& store,
                                 const Ontology& onto, const FeatureConfig& config);

// d(feature)/d(importance parameters), one row per feature slot.
struct FeatureGrad {
  Eigen::MatrixXd d_w;  // kNumFeatures x d
  Eigen::VectorXd d_b;  // kNumFeatures
};

// Same values as feature_vector, computed from the precomputed input; fills
// per-slot gradients with respect to (w_imp, b_imp) when grad is non-null.
FeatureVec features(const FeatureInput& input, const ImportanceParams& params,
                    const FeatureConfig& config, FeatureGrad* grad = nullptr);

}  // namespace discrank
