#include "discrank/ranker.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "discrank/evalmetrics.hpp"

namespace discrank {

using nlohmann::json;

namespace {

int combiner_param_count(CombinerMode mode) {
  return mode == CombinerMode::Mlp
             ? kHiddenUnits * kNumFeatures + kHiddenUnits + kHiddenUnits + 1
             : kNumFeatures + 1;
}

// Flat layout (mlp): hidden weights row-major, hidden bias, output weights,
// output bias. Flat layout (linear): weights, bias. grad_check and the SGD
// step share this order.
void flatten_combiner(const CombinerParams& c, Eigen::VectorXd& out) {
  out.resize(combiner_param_count(c.mode));
  Eigen::Index at = 0;
  if (c.mode == CombinerMode::Mlp) {
    for (int j = 0; j < kHiddenUnits; ++j)
      for (int k = 0; k < kNumFeatures; ++k) out[at++] = c.hidden_weights(j, k);
    for (int j = 0; j < kHiddenUnits; ++j) out[at++] = c.hidden_bias[j];
    for (int j = 0; j < kHiddenUnits; ++j) out[at++] = c.out_weights[j];
    out[at++] = c.out_bias;
  } else {
    for (int k = 0; k < kNumFeatures; ++k) out[at++] = c.weights[k];
    out[at++] = c.bias;
  }
}

void unflatten_combiner(const Eigen::VectorXd& in, CombinerParams& c) {
  Eigen::Index at = 0;
  if (c.mode == CombinerMode::Mlp) {
    c.hidden_weights.resize(kHiddenUnits, kNumFeatures);
    c.hidden_bias.resize(kHiddenUnits);
    c.out_weights.resize(kHiddenUnits);
    for (int j = 0; j < kHiddenUnits; ++j)
      for (int k = 0; k < kNumFeatures; ++k) c.hidden_weights(j, k) = in[at++];
    for (int j = 0; j < kHiddenUnits; ++j) c.hidden_bias[j] = in[at++];
    for (int j = 0; j < kHiddenUnits; ++j) c.out_weights[j] = in[at++];
    c.out_bias = in[at++];
  } else {
    c.weights.resize(kNumFeatures);
    for (int k = 0; k < kNumFeatures; ++k) c.weights[k] = in[at++];
    c.bias = in[at++];
  }
}

struct ScoreGrad {
  double s = 0.0;
  Eigen::VectorXd d_params;  // flat combiner layout
  FeatureVec d_x = FeatureVec::Zero();
};

ScoreGrad score_with_grad(const FeatureVec& x, const CombinerParams& c) {
  ScoreGrad out;
  out.d_params = Eigen::VectorXd::Zero(combiner_param_count(c.mode));
  if (c.mode == CombinerMode::Linear) {
    out.s = c.bias + c.weights.dot(x);
    for (int k = 0; k < kNumFeatures; ++k) out.d_params[k] = x[k];
    out.d_params[kNumFeatures] = 1.0;
    out.d_x = c.weights;
    return out;
  }
  const Eigen::VectorXd pre = c.hidden_weights * x + c.hidden_bias;
  const Eigen::VectorXd h = pre.unaryExpr([](double v) { return sigmoid(v); });
  out.s = c.out_bias + c.out_weights.dot(h);

  const Eigen::VectorXd dh_pre =
      (c.out_weights.array() * h.array() * (1.0 - h.array())).matrix();
  Eigen::Index at = 0;
  for (int j = 0; j < kHiddenUnits; ++j)
    for (int k = 0; k < kNumFeatures; ++k) out.d_params[at++] = dh_pre[j] * x[k];
  for (int j = 0; j < kHiddenUnits; ++j) out.d_params[at++] = dh_pre[j];
  for (int j = 0; j < kHiddenUnits; ++j) out.d_params[at++] = h[j];
  out.d_params[at++] = 1.0;
  out.d_x = c.hidden_weights.transpose() * dh_pre;
  return out;
}

}  // namespace

ModelParams init_params(std::uint64_t seed, int d, CombinerMode mode,
                        const FeatureConfig& config) {
  if (d < 1) throw std::invalid_argument("init_params: d must be >= 1");
  Rng rng(seed);
  ModelParams m;
  m.d = d;
  m.config = config;
  m.combiner.mode = mode;

  // Combiner weights and biases around 1 keep the initial score increasing
  // in every feature, i.e. more discrepant pairs start out ranked higher.
  const double comb_sd = 0.1;  // N(1, 0.01)
  if (mode == CombinerMode::Mlp) {
    m.combiner.hidden_weights.resize(kHiddenUnits, kNumFeatures);
    m.combiner.hidden_bias.resize(kHiddenUnits);
    m.combiner.out_weights.resize(kHiddenUnits);
    for (int j = 0; j < kHiddenUnits; ++j)
      for (int k = 0; k < kNumFeatures; ++k)
        m.combiner.hidden_weights(j, k) = rng.normal(1.0, comb_sd);
    for (int j = 0; j < kHiddenUnits; ++j) m.combiner.hidden_bias[j] = rng.normal(1.0, comb_sd);
    for (int j = 0; j < kHiddenUnits; ++j) m.combiner.out_weights[j] = rng.normal(1.0, comb_sd);
    m.combiner.out_bias = rng.normal(1.0, comb_sd);
  } else {
    m.combiner.weights.resize(kNumFeatures);
    for (int k = 0; k < kNumFeatures; ++k) m.combiner.weights[k] = rng.normal(1.0, comb_sd);
    m.combiner.bias = rng.normal(1.0, comb_sd);
  }

  m.importance.w_imp.resize(d);
  for (int i = 0; i < d; ++i) m.importance.w_imp[i] = rng.normal(0.0, 0.1);  // N(0, 0.01)
  m.importance.b_imp = 1.0;
  return m;
}

double score(const FeatureVec& x, const CombinerParams& combiner) {
  if (combiner.mode == CombinerMode::Linear) return combiner.bias + combiner.weights.dot(x);
  const Eigen::VectorXd pre = combiner.hidden_weights * x + combiner.hidden_bias;
  double s = combiner.out_bias;
  for (int j = 0; j < kHiddenUnits; ++j) s += combiner.out_weights[j] * sigmoid(pre[j]);
  return s;
}

namespace {

void check_dimension(const ModelParams& model, const EmbeddingStore& store) {
  if (model.d != store.dimension())
    throw std::runtime_error("model dimension (d=" + std::to_string(model.d) +
                             ") does not match embedding dimension (d=" +
                             std::to_string(store.dimension()) + ")");
}

std::vector<RankedReport> order_scored(std::vector<RankedReport> scored) {
  std::sort(scored.begin(), scored.end(), [](const RankedReport& a, const RankedReport& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.report_id < b.report_id;
  });
  for (std::size_t i = 0; i < scored.size(); ++i) scored[i].rank = static_cast<int>(i) + 1;
  return scored;
}

}  // namespace

std::vector<RankedReport> rank_set(const RankingSet& set, const ModelParams& model,
                                   const EmbeddingStore& store, const Ontology& onto) {
  check_dimension(model, store);
  std::vector<RankedReport> scored;
  scored.reserve(set.reports.size());
  for (const auto& r : set.reports) {
    const FeatureVec x = feature_vector(r, store, onto, model.importance, model.config);
    scored.push_back({r.report_id, score(x, model.combiner), 0});
  }
  return order_scored(std::move(scored));
}

RankedDataset rank_dataset(const Dataset& ds, const ModelParams& model,
                           const EmbeddingStore& store, const Ontology& onto) {
  RankedDataset out;
  out.reserve(ds.sets.size());
  for (const auto& set : ds.sets) out.emplace_back(set.set_id, rank_set(set, model, store, onto));
  return out;
}

double pairwise_loss(double s_pos, double s_neg) {
  const double t = s_neg - s_pos;
  // softplus(t) without overflow on either tail
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

PairSampler::PairSampler(const Dataset& train, std::uint64_t seed, bool within_set)
    : rng_(seed), within_set_(within_set) {
  std::set<int> labels_seen;
  for (const auto& set : train.sets) {
    const int begin = static_cast<int>(reports_.size());
    std::set<int> set_labels;
    for (const auto& r : set.reports) {
      reports_.push_back(&r);
      labels_seen.insert(r.label);
      set_labels.insert(r.label);
    }
    if (set_labels.size() >= 2)
      set_ranges_.emplace_back(begin, static_cast<int>(reports_.size()));
  }
  if (within_set_) {
    if (set_ranges_.empty())
      throw std::runtime_error("sample_pairs: no set contains a contrastive pair");
  } else if (labels_seen.size() < 2) {
    throw std::runtime_error("sample_pairs: no contrastive pair (all labels equal)");
  }
}

std::pair<int, int> PairSampler::next() {
  for (;;) {
    int i, j;
    if (within_set_) {
      const auto [begin, end] =
          set_ranges_[static_cast<std::size_t>(rng_.below(set_ranges_.size()))];
      const auto span = static_cast<std::uint64_t>(end - begin);
      i = begin + static_cast<int>(rng_.below(span));
      j = begin + static_cast<int>(rng_.below(span));
    } else {
      i = static_cast<int>(rng_.below(reports_.size()));
      j = static_cast<int>(rng_.below(reports_.size()));
    }
    const int li = reports_[static_cast<std::size_t>(i)]->label;
    const int lj = reports_[static_cast<std::size_t>(j)]->label;
    if (li == lj) continue;
    return li > lj ? std::make_pair(i, j) : std::make_pair(j, i);
  }
}

double pair_loss(const ModelParams& model, const FeatureInput& pos, const FeatureInput& neg,
                 PairGrads* grads) {
  FeatureGrad gp, gn;
  const bool want = grads != nullptr;
  const FeatureVec xp = features(pos, model.importance, model.config, want ? &gp : nullptr);
  const FeatureVec xn = features(neg, model.importance, model.config, want ? &gn : nullptr);

  if (!want) {
    const double sp = score(xp, model.combiner);
    const double sn = score(xn, model.combiner);
    return pairwise_loss(sp, sn);
  }

  const ScoreGrad sgp = score_with_grad(xp, model.combiner);
  const ScoreGrad sgn = score_with_grad(xn, model.combiner);
  const double t = sgn.s - sgp.s;
  const double loss = pairwise_loss(sgp.s, sgn.s);

  const double sig = sigmoid(t);
  const double c_pos = -sig;  // dL/ds_pos
  const double c_neg = sig;   // dL/ds_neg

  grads->combiner = c_pos * sgp.d_params + c_neg * sgn.d_params;
  const FeatureVec dldx_p = c_pos * sgp.d_x;
  const FeatureVec dldx_n = c_neg * sgn.d_x;
  grads->w_imp = gp.d_w.transpose() * dldx_p + gn.d_w.transpose() * dldx_n;
  grads->b_imp = gp.d_b.dot(dldx_p) + gn.d_b.dot(dldx_n);
  return loss;
}

namespace {

struct DevSet {
  std::vector<FeatureInput> inputs;
  std::vector<std::string> ids;
  std::vector<int> labels;
};

double dev_mean_ndcg5(const std::vector<DevSet>& dev_sets, const ModelParams& model) {
  double sum = 0.0;
  for (const auto& set : dev_sets) {
    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(set.inputs.size());
    for (std::size_t i = 0; i < set.inputs.size(); ++i) {
      const FeatureVec x = features(set.inputs[i], model.importance, model.config);
      scored.emplace_back(score(x, model.combiner), i);
    }
    std::sort(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return set.ids[a.second] < set.ids[b.second];
    });
    std::vector<int> ranked_labels;
    ranked_labels.reserve(scored.size());
    for (const auto& [s, i] : scored) ranked_labels.push_back(set.labels[i]);
    sum += ndcg_at_k(ranked_labels, 5);
  }
  return sum / static_cast<double>(dev_sets.size());
}

}  // namespace

TrainResult train(const Dataset& train_ds, const Dataset& dev_ds, const TrainConfig& cfg,
                  const EmbeddingStore& store, const Ontology& onto, const ModelParams& init) {
  if (cfg.epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
  if (cfg.batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
  if (dev_ds.sets.empty()) throw std::invalid_argument("train: dev split is empty");
  check_dimension(init, store);

  PairSampler sampler(train_ds, cfg.seed, cfg.within_set_pairs);
  const auto& flat = sampler.reports();

  std::vector<FeatureInput> inputs;
  inputs.reserve(flat.size());
  for (const Report* r : flat) inputs.push_back(build_feature_input(*r, store, onto, init.config));

  std::vector<DevSet> dev_sets;
  dev_sets.reserve(dev_ds.sets.size());
  for (const auto& set : dev_ds.sets) {
    DevSet d;
    for (const auto& r : set.reports) {
      d.inputs.push_back(build_feature_input(r, store, onto, init.config));
      d.ids.push_back(r.report_id);
      d.labels.push_back(r.label);
    }
    dev_sets.push_back(std::move(d));
  }

  const int pairs_per_epoch =
      cfg.pairs_per_epoch > 0 ? cfg.pairs_per_epoch : static_cast<int>(flat.size());
  const int n_comb = combiner_param_count(init.combiner.mode);

  ModelParams model = init;
  TrainResult result;
  result.best_dev_ndcg5 = -1.0;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    double loss_sum = 0.0;
    int done = 0;
    int batch_index = 0;
    while (done < pairs_per_epoch) {
      const int bs = std::min(cfg.batch_size, pairs_per_epoch - done);
      Eigen::VectorXd g_comb = Eigen::VectorXd::Zero(n_comb);
      Eigen::VectorXd g_w = Eigen::VectorXd::Zero(model.d);
      double g_b = 0.0;
      double batch_loss = 0.0;
      for (int b = 0; b < bs; ++b) {
        const auto [pi, ni] = sampler.next();
        PairGrads pg;
        batch_loss += pair_loss(model, inputs[static_cast<std::size_t>(pi)],
                                inputs[static_cast<std::size_t>(ni)], &pg);
        g_comb += pg.combiner;
        g_w += pg.w_imp;
        g_b += pg.b_imp;
      }
      const double inv = 1.0 / static_cast<double>(bs);
      if (!std::isfinite(batch_loss) || !g_comb.allFinite() || !g_w.allFinite() ||
          !std::isfinite(g_b))
        throw std::runtime_error("train: non-finite loss or gradient at epoch " +
                                 std::to_string(epoch) + ", batch " +
                                 std::to_string(batch_index));

      Eigen::VectorXd flat_comb;
      flatten_combiner(model.combiner, flat_comb);
      flat_comb -= cfg.learning_rate * inv * g_comb;
      unflatten_combiner(flat_comb, model.combiner);
      model.importance.w_imp -= cfg.learning_rate * inv * g_w;
      model.importance.b_imp -= cfg.learning_rate * inv * g_b;

      loss_sum += batch_loss;
      done += bs;
      ++batch_index;
    }

    EpochStats stats;
    stats.train_loss = loss_sum / static_cast<double>(pairs_per_epoch);
    stats.dev_ndcg5 = dev_mean_ndcg5(dev_sets, model);
    result.history.push_back(stats);
    if (stats.dev_ndcg5 > result.best_dev_ndcg5) {
      result.best_dev_ndcg5 = stats.dev_ndcg5;
      result.best_epoch = epoch;
      result.model = model;
    }
  }
  return result;
}

namespace {

template <typename S>
S sigmoid_t(S x) {
  if (x >= S(0)) return S(1) / (S(1) + std::exp(-x));
  const S e = std::exp(x);
  return e / (S(1) + e);
}

template <typename S>
S softplus_t(S t) {
  return t > S(0) ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

bool gram_enabled(const FeatureConfig& cfg, int g) {
  switch (g) {
    case 0: return cfg.unigram;
    case 1: return cfg.bigram;
    case 2: return cfg.trigram;
    default: return cfg.ontology;
  }
}

// Reference forward pass over flattened parameters in scalar precision S.
// grad_check differentiates this numerically in long double, which keeps the
// difference quotient meaningful even where gradients are tiny.
template <typename S>
void flat_features(const std::vector<S>& th, std::size_t imp_off, int d,
                   const FeatureConfig& cfg, double onto_imp, double onto_match,
                   const FeatureInput& in, S out[kNumFeatures]) {
  for (int k = 0; k < kNumFeatures; ++k) out[k] = S(0);

  for (int g = 0; g < 3; ++g) {
    if (!gram_enabled(cfg, g)) continue;
    const GramInput& gi = in.grams[static_cast<std::size_t>(g)];
    S num[2] = {S(0), S(0)};
    S den[2] = {S(0), S(0)};
    for (int side = 0; side < 2; ++side) {
      const Eigen::MatrixXd& embs = side == 0 ? gi.prelim_embs : gi.final_embs;
      const Eigen::VectorXd& match = side == 0 ? gi.prelim_match : gi.final_match;
      for (Eigen::Index i = 0; i < embs.rows(); ++i) {
        S imp;
        if (cfg.learn_importance) {
          S z = th[imp_off + static_cast<std::size_t>(d)];
          for (int k = 0; k < d; ++k)
            z += S(embs(i, k)) * th[imp_off + static_cast<std::size_t>(k)];
          imp = sigmoid_t(z);
        } else {
          imp = S(0.5);
        }
        num[side] += S(match[i]) * imp;
        den[side] += imp;
      }
    }
    if (den[1] != S(0)) out[g * 3 + 0] = -num[1] / den[1];
    if (den[0] != S(0)) out[g * 3 + 1] = -num[0] / den[0];
    if (den[0] + den[1] != S(0)) out[g * 3 + 2] = -(num[0] + num[1]) / (den[0] + den[1]);
  }

  if (cfg.ontology) {
    const S imp = S(onto_imp);
    const S m = S(onto_match);
    const S num_a = S(in.onto_final_matched) * m * imp;
    const S den_a = S(in.onto_final_terms) * imp;
    const S num_d = S(in.onto_prelim_matched) * m * imp;
    const S den_d = S(in.onto_prelim_terms) * imp;
    if (den_a != S(0)) out[9] = -num_a / den_a;
    if (den_d != S(0)) out[10] = -num_d / den_d;
    if (den_a + den_d != S(0)) out[11] = -(num_a + num_d) / (den_a + den_d);
  }

  const bool keep[3] = {cfg.use_addition, cfg.use_deletion, cfg.use_overlap};
  for (int g = 0; g < 4; ++g)
    for (int s = 0; s < 3; ++s)
      if (!keep[s]) out[g * 3 + s] = S(0);
}

template <typename S>
S flat_score(const std::vector<S>& th, CombinerMode mode, const S x[kNumFeatures]) {
  if (mode == CombinerMode::Linear) {
    S s = th[kNumFeatures];
    for (int k = 0; k < kNumFeatures; ++k) s += th[static_cast<std::size_t>(k)] * x[k];
    return s;
  }
  const std::size_t b1_off = kHiddenUnits * kNumFeatures;
  const std::size_t w2_off = b1_off + kHiddenUnits;
  const std::size_t b2_off = w2_off + kHiddenUnits;
  S s = th[b2_off];
  for (int j = 0; j < kHiddenUnits; ++j) {
    S z = th[b1_off + static_cast<std::size_t>(j)];
    for (int k = 0; k < kNumFeatures; ++k)
      z += th[static_cast<std::size_t>(j * kNumFeatures + k)] * x[k];
    s += th[w2_off + static_cast<std::size_t>(j)] * sigmoid_t(z);
  }
  return s;
}

template <typename S>
S flat_pair_loss(const std::vector<S>& th, const ModelParams& model, const FeatureInput& pos,
                 const FeatureInput& neg) {
  const std::size_t imp_off = static_cast<std::size_t>(combiner_param_count(model.combiner.mode));
  S xp[kNumFeatures], xn[kNumFeatures];
  flat_features(th, imp_off, model.d, model.config, model.importance.ontology_importance,
                model.importance.ontology_match, pos, xp);
  flat_features(th, imp_off, model.d, model.config, model.importance.ontology_importance,
                model.importance.ontology_match, neg, xn);
  const S sp = flat_score(th, model.combiner.mode, xp);
  const S sn = flat_score(th, model.combiner.mode, xn);
  return softplus_t(sn - sp);
}

}  // namespace

double grad_check(const ModelParams& model, const FeatureInput& pos, const FeatureInput& neg,
                  double eps) {
  if (eps <= 0.0) throw std::invalid_argument("grad_check: eps must be positive");

  PairGrads grads;
  pair_loss(model, pos, neg, &grads);

  const int n_comb = combiner_param_count(model.combiner.mode);
  const int total = n_comb + model.d + 1;
  Eigen::VectorXd analytic(total);
  Eigen::VectorXd flat_comb;
  flatten_combiner(model.combiner, flat_comb);
  analytic.head(n_comb) = grads.combiner;
  analytic.segment(n_comb, model.d) = grads.w_imp;
  analytic[total - 1] = grads.b_imp;

  std::vector<long double> theta(static_cast<std::size_t>(total));
  for (int i = 0; i < n_comb; ++i) theta[static_cast<std::size_t>(i)] = flat_comb[i];
  for (int i = 0; i < model.d; ++i)
    theta[static_cast<std::size_t>(n_comb + i)] = model.importance.w_imp[i];
  theta[static_cast<std::size_t>(total - 1)] = model.importance.b_imp;

  double max_rel = 0.0;
  const long double e = static_cast<long double>(eps);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const long double saved = theta[i];
    theta[i] = saved + e;
    const long double up = flat_pair_loss(theta, model, pos, neg);
    theta[i] = saved - e;
    const long double down = flat_pair_loss(theta, model, pos, neg);
    theta[i] = saved;
    const double numeric = static_cast<double>((up - down) / (2.0L * e));
    const double a = analytic[static_cast<Eigen::Index>(i)];
    const double rel = std::abs(a - numeric) / std::max(1e-8, std::abs(a) + std::abs(numeric));
    max_rel = std::max(max_rel, rel);
  }
  return max_rel;
}

namespace {

json vector_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const json& arr, Eigen::Index expected, const char* what) {
  if (!arr.is_array() || (expected >= 0 && static_cast<Eigen::Index>(arr.size()) != expected))
    throw std::runtime_error(std::string("model file: bad shape for ") + what);
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = arr[static_cast<std::size_t>(i)].get<double>();
  return v;
}

}  // namespace

void save_model(const ModelParams& model, const std::string& path) {
  json combiner;
  if (model.combiner.mode == CombinerMode::Mlp) {
    json rows = json::array();
    for (int j = 0; j < kHiddenUnits; ++j) {
      json row = json::array();
      for (int k = 0; k < kNumFeatures; ++k) row.push_back(model.combiner.hidden_weights(j, k));
      rows.push_back(row);
    }
    combiner = {{"hidden_weights", rows},
                {"hidden_bias", vector_json(model.combiner.hidden_bias)},
                {"out_weights", vector_json(model.combiner.out_weights)},
                {"out_bias", model.combiner.out_bias}};
  } else {
    combiner = {{"weights", vector_json(model.combiner.weights)}, {"bias", model.combiner.bias}};
  }

  const json doc{{"version", 1},
                 {"mode", model.combiner.mode == CombinerMode::Mlp ? "mlp" : "linear"},
                 {"d", model.d},
                 {"w_imp", vector_json(model.importance.w_imp)},
                 {"b_imp", model.importance.b_imp},
                 {"combiner", combiner},
                 {"ontology_importance", model.importance.ontology_importance},
                 {"ontology_match", model.importance.ontology_match},
                 {"toggles", json{{"unigram", model.config.unigram},
                                  {"bigram", model.config.bigram},
                                  {"trigram", model.config.trigram},
                                  {"ontology", model.config.ontology},
                                  {"use_addition", model.config.use_addition},
                                  {"use_deletion", model.config.use_deletion},
                                  {"use_overlap", model.config.use_overlap},
                                  {"importance", model.config.learn_importance}}}};

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << doc.dump(2) << '\n';
}

ModelParams load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": malformed JSON: " + e.what());
  }

  if (!doc.contains("version") || !doc["version"].is_number_integer() ||
      doc["version"].get<int>() != 1)
    throw std::runtime_error(path + ": unsupported model version");

  ModelParams m;
  const std::string mode = doc.at("mode").get<std::string>();
  if (mode == "mlp")
    m.combiner.mode = CombinerMode::Mlp;
  else if (mode == "linear")
    m.combiner.mode = CombinerMode::Linear;
  else
    throw std::runtime_error(path + ": unknown combiner mode '" + mode + "'");

  m.d = doc.at("d").get<int>();
  if (m.d < 1) throw std::runtime_error(path + ": d must be >= 1");
  m.importance.w_imp = vector_from_json(doc.at("w_imp"), m.d, "w_imp");
  m.importance.b_imp = doc.at("b_imp").get<double>();
  m.importance.ontology_importance = doc.at("ontology_importance").get<double>();
  m.importance.ontology_match = doc.at("ontology_match").get<double>();

  const json& comb = doc.at("combiner");
  if (m.combiner.mode == CombinerMode::Mlp) {
    const json& rows = comb.at("hidden_weights");
    if (!rows.is_array() || rows.size() != kHiddenUnits)
      throw std::runtime_error(path + ": bad shape for hidden_weights");
    m.combiner.hidden_weights.resize(kHiddenUnits, kNumFeatures);
    for (int j = 0; j < kHiddenUnits; ++j) {
      const Eigen::VectorXd row =
          vector_from_json(rows[static_cast<std::size_t>(j)], kNumFeatures, "hidden_weights row");
      m.combiner.hidden_weights.row(j) = row;
    }
    m.combiner.hidden_bias = vector_from_json(comb.at("hidden_bias"), kHiddenUnits, "hidden_bias");
    m.combiner.out_weights = vector_from_json(comb.at("out_weights"), kHiddenUnits, "out_weights");
    m.combiner.out_bias = comb.at("out_bias").get<double>();
  } else {
    m.combiner.weights = vector_from_json(comb.at("weights"), kNumFeatures, "weights");
    m.combiner.bias = comb.at("bias").get<double>();
  }

  const json& toggles = doc.at("toggles");
  m.config.unigram = toggles.at("unigram").get<bool>();
  m.config.bigram = toggles.at("bigram").get<bool>();
  m.config.trigram = toggles.at("trigram").get<bool>();
  m.config.ontology = toggles.at("ontology").get<bool>();
  m.config.use_addition = toggles.at("use_addition").get<bool>();
  m.config.use_deletion = toggles.at("use_deletion").get<bool>();
  m.config.use_overlap = toggles.at("use_overlap").get<bool>();
  m.config.learn_importance = toggles.at("importance").get<bool>();
  return m;
}

void write_run(const RankedDataset& ranked, const std::string& run_name, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write run file: " + path);
  char buf[64];
  for (const auto& [set_id, entries] : ranked) {
    for (const auto& e : entries) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), e.score);
      out << set_id << " Q0 " << e.report_id << ' ' << e.rank << ' '
          << std::string_view(buf, static_cast<std::size_t>(ptr - buf)) << ' ' << run_name
          << '\n';
    }
  }
}

}  // namespace discrank
