#include "discrank/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "discrank/textproc.hpp"

namespace discrank {

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double match_score(const Term& y, const TermSet& X, const ImportanceParams& params) {
  if (X.terms.empty()) return 0.0;
  if (X.granularity == Granularity::Ontology) {
    for (const auto& x : X.terms)
      if (x.key == y.key) return params.ontology_match;
    return 0.0;
  }
  double best = -1.0;
  for (const auto& x : X.terms) best = std::max(best, cosine(x.vec, y.vec));
  return std::clamp(best, 0.0, 1.0);
}

double importance(const Term& y, Granularity g, const ImportanceParams& params,
                  const FeatureConfig& config) {
  if (g == Granularity::Ontology) return params.ontology_importance;
  if (!config.learn_importance) return 0.5;
  if (y.vec.size() != params.w_imp.size())
    throw std::invalid_argument("importance: term dimension does not match w_imp");
  return sigmoid(y.vec.dot(params.w_imp) + params.b_imp);
}

namespace {

struct RatioParts {
  double num = 0.0;
  double den = 0.0;
};

// Importance-weighted soft-match mass of side Y against side X.
RatioParts ratio_parts(const TermSet& Y, const TermSet& X, const ImportanceParams& params,
                       const FeatureConfig& config) {
  RatioParts parts;
  for (const auto& y : Y.terms) {
    const double m = match_score(y, X, params);
    const double i = importance(y, Y.granularity, params, config);
    parts.num += m * i;
    parts.den += i;
  }
  return parts;
}

double ratio_score(const RatioParts& parts) {
  return parts.den == 0.0 ? 0.0 : -parts.num / parts.den;
}

}  // namespace

SimScores sim_scores(const TermSet& p, const TermSet& f, const ImportanceParams& params,
                     const FeatureConfig& config) {
  // addition reuses the exact arithmetic of deletion with the sides swapped,
  // and overlap pools both directions, so transposing the pair swaps
  // addition and deletion bit for bit and leaves overlap unchanged.
  const RatioParts fp = ratio_parts(f, p, params, config);
  const RatioParts pf = ratio_parts(p, f, params, config);
  SimScores s;
  s.addition = ratio_score(fp);
  s.deletion = ratio_score(pf);
  s.overlap = ratio_score({pf.num + fp.num, pf.den + fp.den});
  return s;
}

namespace {

class TokenVectorCache {
 public:
  explicit TokenVectorCache(const EmbeddingStore& store) : store_(store) {}

  const Eigen::VectorXd& get(const std::string& token) {
    auto it = cache_.find(token);
    if (it == cache_.end()) it = cache_.emplace(token, store_.vector(token)).first;
    return it->second;
  }

 private:
  const EmbeddingStore& store_;
  std::unordered_map<std::string, Eigen::VectorXd> cache_;
};

TermSet gram_terms(const TokenSequence& seq, int n, Granularity g, TokenVectorCache& cache,
                   int dim) {
  TermSet set;
  set.granularity = g;
  for (auto& window : ngrams(seq, n)) {
    Term t;
    t.key = ontology_key(window);
    if (n == 1) {
      t.vec = cache.get(window[0]);
    } else {
      Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
      for (const auto& tok : window) sum += cache.get(tok);
      t.vec = sum / static_cast<double>(n);
    }
    set.terms.push_back(std::move(t));
  }
  return set;
}

TermSet concept_terms(const TokenSequence& seq, const Ontology& onto) {
  TermSet set;
  set.granularity = Granularity::Ontology;
  for (auto& mention : extract_concepts(seq, onto))
    set.terms.push_back({std::move(mention.concept_id), Eigen::VectorXd()});
  return set;
}

}  // namespace

ReportTermSets build_term_sets(const Report& report, const EmbeddingStore& store,
                               const Ontology& onto, const FeatureConfig& config) {
  const TokenSequence tp = tokenize(report.preliminary);
  const TokenSequence tf = tokenize(report.final_text);
  TokenVectorCache cache(store);
  const int dim = store.dimension();

  ReportTermSets sets;
  for (int n = 1; n <= 3; ++n) {
    const Granularity g = static_cast<Granularity>(n - 1);
    const bool enabled = (n == 1 && config.unigram) || (n == 2 && config.bigram) ||
                         (n == 3 && config.trigram);
    sets.prelim[n - 1].granularity = g;
    sets.final_[n - 1].granularity = g;
    if (!enabled) continue;
    sets.prelim[n - 1] = gram_terms(tp, n, g, cache, dim);
    sets.final_[n - 1] = gram_terms(tf, n, g, cache, dim);
  }
  sets.prelim[3].granularity = Granularity::Ontology;
  sets.final_[3].granularity = Granularity::Ontology;
  if (config.ontology) {
    sets.prelim[3] = concept_terms(tp, onto);
    sets.final_[3] = concept_terms(tf, onto);
  }
  return sets;
}

namespace {

bool granularity_enabled(const FeatureConfig& config, int g) {
  switch (g) {
    case 0: return config.unigram;
    case 1: return config.bigram;
    case 2: return config.trigram;
    default: return config.ontology;
  }
}

void apply_score_masks(const FeatureConfig& config, FeatureVec& x, FeatureGrad* grad) {
  for (int g = 0; g < 4; ++g) {
    const std::array<bool, 3> keep = {config.use_addition, config.use_deletion,
                                      config.use_overlap};
    for (int s = 0; s < 3; ++s) {
      if (keep[static_cast<std::size_t>(s)]) continue;
      const int slot = g * 3 + s;
      x[slot] = 0.0;
      if (grad) {
        grad->d_w.row(slot).setZero();
        grad->d_b[slot] = 0.0;
      }
    }
  }
}

}  // namespace

FeatureVec feature_vector(const Report& report, const EmbeddingStore& store, const Ontology& onto,
                          const ImportanceParams& params, const FeatureConfig& config) {
  const ReportTermSets sets = build_term_sets(report, store, onto, config);
  FeatureVec x = FeatureVec::Zero();
  for (int g = 0; g < 4; ++g) {
    if (!granularity_enabled(config, g)) continue;
    const SimScores s = sim_scores(sets.prelim[static_cast<std::size_t>(g)],
                                   sets.final_[static_cast<std::size_t>(g)], params, config);
    x[g * 3 + 0] = s.addition;
    x[g * 3 + 1] = s.deletion;
    x[g * 3 + 2] = s.overlap;
  }
  apply_score_masks(config, x, nullptr);
  return x;
}

FeatureInput build_feature_input(const Report& report, const EmbeddingStore& store,
                                 const Ontology& onto, const FeatureConfig& config) {
  const ReportTermSets sets = build_term_sets(report, store, onto, config);
  FeatureInput input;
  const int dim = store.dimension();

  for (int g = 0; g < 3; ++g) {
    const TermSet& p = sets.prelim[static_cast<std::size_t>(g)];
    const TermSet& f = sets.final_[static_cast<std::size_t>(g)];
    GramInput& gi = input.grams[static_cast<std::size_t>(g)];
    const auto np = static_cast<Eigen::Index>(p.terms.size());
    const auto nf = static_cast<Eigen::Index>(f.terms.size());
    gi.prelim_embs.resize(np, dim);
    gi.final_embs.resize(nf, dim);
    gi.prelim_match.resize(np);
    gi.final_match.resize(nf);
    for (Eigen::Index i = 0; i < np; ++i) {
      gi.prelim_embs.row(i) = p.terms[static_cast<std::size_t>(i)].vec;
      gi.prelim_match[i] = match_score(p.terms[static_cast<std::size_t>(i)], f, {});
    }
    for (Eigen::Index i = 0; i < nf; ++i) {
      gi.final_embs.row(i) = f.terms[static_cast<std::size_t>(i)].vec;
      gi.final_match[i] = match_score(f.terms[static_cast<std::size_t>(i)], p, {});
    }
  }

  const TermSet& op = sets.prelim[3];
  const TermSet& of = sets.final_[3];
  input.onto_prelim_terms = static_cast<int>(op.terms.size());
  input.onto_final_terms = static_cast<int>(of.terms.size());
  ImportanceParams unit;  // ontology_match = 1, so match_score is a 0/1 flag
  for (const auto& t : op.terms)
    input.onto_prelim_matched += match_score(t, of, unit) > 0.0 ? 1 : 0;
  for (const auto& t : of.terms)
    input.onto_final_matched += match_score(t, op, unit) > 0.0 ? 1 : 0;
  return input;
}

namespace {

struct SideState {
  Eigen::VectorXd imp;       // importance of each term
  Eigen::VectorXd imp_grad;  // elementwise I * (1 - I), zero when frozen
  double num = 0.0;          // match . imp
  double den = 0.0;          // sum(imp)
};

SideState side_state(const Eigen::MatrixXd& embs, const Eigen::VectorXd& match,
                     const ImportanceParams& params, bool learn) {
  SideState st;
  const Eigen::Index n = embs.rows();
  if (n == 0) {
    st.imp.resize(0);
    st.imp_grad.resize(0);
    return st;
  }
  if (learn) {
    Eigen::VectorXd z = embs * params.w_imp;
    z.array() += params.b_imp;
    st.imp = z.unaryExpr([](double v) { return sigmoid(v); });
    st.imp_grad = st.imp.array() * (1.0 - st.imp.array());
  } else {
    st.imp = Eigen::VectorXd::Constant(n, 0.5);
    st.imp_grad = Eigen::VectorXd::Zero(n);
  }
  st.num = match.dot(st.imp);
  st.den = st.imp.sum();
  return st;
}

// Adds the gradient of S = -num/den through one side's importances.
void accumulate_ratio_grad(const Eigen::MatrixXd& embs, const Eigen::VectorXd& match,
                           const SideState& st, double num, double den, int slot,
                           FeatureGrad& grad) {
  if (embs.rows() == 0 || den == 0.0) return;
  // dS/dI_j = -(match_j * den - num) / den^2
  Eigen::VectorXd dS =
      (match.array() * den - num).matrix() * (-1.0 / (den * den));
  Eigen::VectorXd g = dS.array() * st.imp_grad.array();
  grad.d_w.row(slot) += (embs.transpose() * g).transpose();
  grad.d_b[slot] += g.sum();
}

}  // namespace

FeatureVec features(const FeatureInput& input, const ImportanceParams& params,
                    const FeatureConfig& config, FeatureGrad* grad) {
  FeatureVec x = FeatureVec::Zero();
  const auto dim = params.w_imp.size();
  if (grad) {
    grad->d_w = Eigen::MatrixXd::Zero(kNumFeatures, dim);
    grad->d_b = Eigen::VectorXd::Zero(kNumFeatures);
  }

  for (int g = 0; g < 3; ++g) {
    if (!granularity_enabled(config, g)) continue;
    const GramInput& gi = input.grams[static_cast<std::size_t>(g)];
    const SideState sp = side_state(gi.prelim_embs, gi.prelim_match, params,
                                    config.learn_importance);
    const SideState sf = side_state(gi.final_embs, gi.final_match, params,
                                    config.learn_importance);

    const int slot_a = g * 3 + 0;
    const int slot_d = g * 3 + 1;
    const int slot_o = g * 3 + 2;
    if (sf.den != 0.0) x[slot_a] = -sf.num / sf.den;
    if (sp.den != 0.0) x[slot_d] = -sp.num / sp.den;
    const double num_o = sp.num + sf.num;
    const double den_o = sp.den + sf.den;
    if (den_o != 0.0) x[slot_o] = -num_o / den_o;

    if (grad && config.learn_importance) {
      accumulate_ratio_grad(gi.final_embs, gi.final_match, sf, sf.num, sf.den, slot_a, *grad);
      accumulate_ratio_grad(gi.prelim_embs, gi.prelim_match, sp, sp.num, sp.den, slot_d, *grad);
      accumulate_ratio_grad(gi.prelim_embs, gi.prelim_match, sp, num_o, den_o, slot_o, *grad);
      accumulate_ratio_grad(gi.final_embs, gi.final_match, sf, num_o, den_o, slot_o, *grad);
    }
  }

  if (config.ontology) {
    const double imp = params.ontology_importance;
    const double m = params.ontology_match;
    const double num_a = static_cast<double>(input.onto_final_matched) * m * imp;
    const double den_a = static_cast<double>(input.onto_final_terms) * imp;
    const double num_d = static_cast<double>(input.onto_prelim_matched) * m * imp;
    const double den_d = static_cast<double>(input.onto_prelim_terms) * imp;
    if (den_a != 0.0) x[9] = -num_a / den_a;
    if (den_d != 0.0) x[10] = -num_d / den_d;
    if (den_a + den_d != 0.0) x[11] = -(num_a + num_d) / (den_a + den_d);
  }

  apply_score_masks(config, x, grad);
  return x;
}

}  // namespace discrank
