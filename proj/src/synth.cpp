#include "discrank/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "discrank/rng.hpp"

namespace discrank {

namespace {

using nlohmann::json;

// Report shape: every report in a set shares one length drawn from
// [kMinReportTokens, kMaxReportTokens], roughly kStyleFraction of positions
// come from the style vocabulary, and every preliminary report carries
// exactly kConceptsPerReport distinct concept mentions. Uniform lengths and
// mention counts keep the normalizing denominators comparable across a
// set's reports, so score differences within a set reflect the edits alone.
constexpr int kMinReportTokens = 20;
constexpr int kMaxReportTokens = 40;
constexpr double kStyleFraction = 0.6;
constexpr int kClusterSize = 3;
constexpr int kNumConcepts = 40;
constexpr std::size_t kConceptsPerReport = 4;
// Style vectors sit within kClusterSpread of their cluster base, which
// bounds intra-cluster angles by 2*asin(kClusterSpread) and keeps cosines
// above 0.98, comfortably over the 0.95 the scoring tests rely on.
constexpr double kClusterSpread = 0.08;
// Easy difficulty caps |cos| between a substantive edit token and every
// token already in the report pair.
constexpr double kOrthogonalCap = 0.4;

int substantive_count(int label) {
  constexpr int counts[4] = {0, 1, 2, 4};
  return counts[label];
}

std::string zero_pad(std::size_t n, std::size_t width) {
  std::string s = std::to_string(n);
  if (s.size() < width) s.insert(0, width - s.size(), '0');
  return s;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

Eigen::VectorXd random_unit(Rng& rng, int d) {
  Eigen::VectorXd v(d);
  while (true) {
    for (int i = 0; i < d; ++i) v[i] = rng.normal();
    const double n = v.norm();
    if (n > 1e-9) return v / n;
  }
}

// Generated vocabulary. Style tokens occupy indices [0, style_count) in
// cluster-major order; the clinical range follows, with concept members
// packed at its front and plain (concept-free) clinical tokens after them.
struct Vocab {
  std::vector<std::string> tokens;
  std::vector<Eigen::VectorXd> vectors;
  std::size_t style_count = 0;
  std::size_t concept_token_count = 0;
  std::unordered_map<std::size_t, std::size_t> concept_ordinal;  // token index -> concept
  std::vector<std::vector<std::size_t>> concept_tokens;          // concept -> token indices
  std::vector<OntologyConcept> concepts;

  bool is_style(std::size_t idx) const { return idx < style_count; }
  std::size_t clinical_count() const { return tokens.size() - style_count; }
  std::size_t clinical(std::size_t i) const { return style_count + i; }
  std::size_t plain_count() const { return clinical_count() - concept_token_count; }
  std::size_t plain(std::size_t i) const { return style_count + concept_token_count + i; }
};

Vocab build_vocab(const SynthConfig& cfg, Rng& rng) {
  Vocab vocab;
  const std::size_t target_style =
      static_cast<std::size_t>(cfg.vocab_size * kStyleFraction);
  vocab.style_count = target_style - target_style % kClusterSize;
  const std::size_t clusters = vocab.style_count / kClusterSize;

  for (std::size_t c = 0; c < clusters; ++c) {
    std::array<Eigen::VectorXd, kClusterSize> members;
    for (int attempt = 0;; ++attempt) {
      const Eigen::VectorXd base = random_unit(rng, cfg.dimension);
      for (auto& m : members)
        m = (base + kClusterSpread * random_unit(rng, cfg.dimension)).normalized();
      double min_cos = 1.0;
      for (int i = 0; i < kClusterSize; ++i)
        for (int j = i + 1; j < kClusterSize; ++j)
          min_cos = std::min(min_cos, members[i].dot(members[j]));
      if (min_cos > 0.95) break;
      if (attempt >= 100)
        throw std::logic_error("generate_synth: style cluster construction failed");
    }
    for (int m = 0; m < kClusterSize; ++m) {
      vocab.tokens.push_back("sty" + zero_pad(c, 3) + static_cast<char>('a' + m));
      vocab.vectors.push_back(members[m]);
    }
  }

  const std::size_t clinical = cfg.vocab_size - vocab.style_count;
  for (std::size_t i = 0; i < clinical; ++i) {
    vocab.tokens.push_back("term" + zero_pad(i, 3));
    vocab.vectors.push_back(random_unit(rng, cfg.dimension));
  }

  // Concepts group disjoint runs of clinical tokens; the first token is the
  // preferred name, the rest are synonyms. Tokens keep their embeddings and
  // remain eligible for report text.
  const std::size_t n_concepts =
      std::min<std::size_t>(kNumConcepts, clinical / 3);
  std::size_t next = 0;
  for (std::size_t k = 0; k < n_concepts; ++k) {
    const std::size_t size = 2 + k % 2;
    OntologyConcept entry;
    entry.id = "cn" + zero_pad(k, 3);
    entry.name = vocab.tokens[vocab.clinical(next)];
    std::vector<std::size_t> members;
    for (std::size_t s = 0; s < size; ++s) {
      const std::size_t idx = vocab.clinical(next + s);
      if (s > 0) entry.synonyms.push_back(vocab.tokens[idx]);
      vocab.concept_ordinal[idx] = k;
      members.push_back(idx);
    }
    vocab.concept_tokens.push_back(std::move(members));
    vocab.concepts.push_back(std::move(entry));
    next += size;
  }
  vocab.concept_token_count = next;
  return vocab;
}

// Clinical tokens a full concept allocation consumes.
constexpr int concept_token_total() {
  int total = 0;
  for (int k = 0; k < kNumConcepts; ++k) total += 2 + k % 2;
  return total;
}

void check_config(const SynthConfig& cfg) {
  const auto fail = [](const std::string& msg) {
    throw std::invalid_argument("generate_synth: " + msg);
  };
  if (cfg.num_sets < 1) fail("num_sets must be positive");
  if (cfg.min_set_size < 1) fail("min_set_size must be positive");
  if (!(cfg.min_set_size <= cfg.mean_set_size && cfg.mean_set_size <= cfg.max_set_size))
    fail("set sizes must satisfy min <= mean <= max");
  if (!(cfg.set_size_sigma >= 0.0)) fail("set_size_sigma must be nonnegative");
  double total = 0.0;
  double positive = 0.0;
  for (int l = 0; l < 4; ++l) {
    if (!(cfg.label_probs[l] >= 0.0)) fail("label probabilities must be nonnegative");
    total += cfg.label_probs[l];
    if (l > 0) positive += cfg.label_probs[l];
  }
  if (std::abs(total - 1.0) > 1e-9) fail("label probabilities must sum to 1");
  if (positive <= 0.0) fail("label probabilities leave no chance of a discrepancy");
  if (cfg.dimension < 8) fail("dimension must be at least 8");
  const int style_total =
      static_cast<int>(cfg.vocab_size * kStyleFraction) / kClusterSize * kClusterSize;
  const int clinical = cfg.vocab_size - style_total;
  if (style_total < kClusterSize ||
      clinical < concept_token_total() + kMaxReportTokens + 16)
    fail("vocabulary too small for requested edits");
}

int draw_label(Rng& rng, const std::array<double, 4>& probs, int last_positive) {
  const double x = rng.real();
  double acc = 0.0;
  for (int l = 0; l < 4; ++l) {
    acc += probs[l];
    if (x < acc) return l;
  }
  return last_positive;  // residual rounding mass
}

// One report pair mid-construction, tokens held as vocabulary indices.
struct Draft {
  std::vector<std::size_t> prelim;
  std::vector<std::size_t> final_toks;
  std::unordered_set<std::size_t> prelim_set;
  // Tokens any substantive edit produced or consumed; later edits must not
  // reuse them, or the edit count would no longer match the ground truth.
  std::unordered_set<std::size_t> touched;
  int substantive = 0;
  int style = 0;
};

// Positions in the current final text that a delete or swap may target: a
// clinical token occurring exactly once, carried over from the preliminary
// text and untouched so far. With concept_only set, the token must also be
// the final text's sole mention of its concept, so the edit removes the
// concept from one side entirely.
std::vector<std::size_t> edit_targets(const Draft& d, const Vocab& vocab, bool concept_only) {
  std::unordered_map<std::size_t, int> counts;
  std::unordered_map<std::size_t, int> id_counts;
  for (std::size_t idx : d.final_toks) {
    ++counts[idx];
    auto it = vocab.concept_ordinal.find(idx);
    if (it != vocab.concept_ordinal.end()) ++id_counts[it->second];
  }
  std::vector<std::size_t> targets;
  for (std::size_t p = 0; p < d.final_toks.size(); ++p) {
    const std::size_t idx = d.final_toks[p];
    if (vocab.is_style(idx)) continue;
    if (counts[idx] != 1) continue;
    if (!d.prelim_set.count(idx)) continue;
    if (d.touched.count(idx)) continue;
    if (concept_only) {
      auto it = vocab.concept_ordinal.find(idx);
      if (it == vocab.concept_ordinal.end() || id_counts[it->second] != 1) continue;
    }
    targets.push_back(p);
  }
  return targets;
}

struct PairContext {
  std::unordered_set<std::size_t> in_pair;
  std::unordered_set<std::size_t> concepts;  // ordinals mentioned on either side
};

PairContext pair_context(const Draft& d, const Vocab& vocab) {
  PairContext ctx;
  ctx.in_pair = d.prelim_set;
  for (std::size_t idx : d.final_toks) ctx.in_pair.insert(idx);
  for (std::size_t idx : ctx.in_pair) {
    auto it = vocab.concept_ordinal.find(idx);
    if (it != vocab.concept_ordinal.end()) ctx.concepts.insert(it->second);
  }
  return ctx;
}

bool usable_new_token(const Draft& d, const Vocab& vocab, const PairContext& ctx,
                      std::size_t z) {
  if (ctx.in_pair.count(z) || d.touched.count(z)) return false;
  auto it = vocab.concept_ordinal.find(z);
  return it == vocab.concept_ordinal.end() || !ctx.concepts.count(it->second);
}

double max_abs_cos(const Vocab& vocab, const PairContext& ctx, std::size_t z) {
  double max_cos = 0.0;
  for (std::size_t idx : ctx.in_pair)
    max_cos = std::max(max_cos, std::abs(vocab.vectors[z].dot(vocab.vectors[idx])));
  return max_cos;
}

// Picks a plain clinical token absent from both versions and from earlier
// edits. Easy difficulty additionally keeps it nearly orthogonal to every
// token in the pair; when the rejection loop runs out, the least-aligned
// acceptable token wins. The final fallback scan ignores the extra
// constraints and always succeeds because the vocabulary check guarantees
// spare plain tokens.
std::size_t pick_new_token(const Draft& d, const Vocab& vocab, Rng& rng,
                           Difficulty difficulty) {
  const PairContext ctx = pair_context(d, vocab);
  const bool easy = difficulty == Difficulty::Easy;
  std::size_t best = vocab.tokens.size();
  double best_cos = 2.0;
  for (int attempt = 0; attempt < 200; ++attempt) {
    const std::size_t z = vocab.plain(rng.below(vocab.plain_count()));
    if (!usable_new_token(d, vocab, ctx, z)) continue;
    if (!easy) return z;
    const double max_cos = max_abs_cos(vocab, ctx, z);
    if (max_cos < kOrthogonalCap) return z;
    if (max_cos < best_cos) {
      best_cos = max_cos;
      best = z;
    }
  }
  if (best < vocab.tokens.size()) return best;

  const std::size_t n = vocab.plain_count();
  const std::size_t rotate = rng.below(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t z = vocab.plain((rotate + i) % n);
    if (!ctx.in_pair.count(z) && !d.touched.count(z)) return z;
  }
  throw std::logic_error("generate_synth: no spare clinical token");
}

// Like pick_new_token but restricted to concept members, so the insertion
// introduces a concept absent from both sides. Returns the vocabulary size
// when every concept is already taken.
std::size_t pick_new_concept_token(const Draft& d, const Vocab& vocab, Rng& rng,
                                   Difficulty difficulty) {
  const PairContext ctx = pair_context(d, vocab);
  const bool easy = difficulty == Difficulty::Easy;
  const std::size_t n_concepts = vocab.concept_tokens.size();
  std::size_t best = vocab.tokens.size();
  double best_cos = 2.0;
  for (int attempt = 0; attempt < 200; ++attempt) {
    const std::size_t c = rng.below(n_concepts);
    if (ctx.concepts.count(c)) continue;
    const auto& members = vocab.concept_tokens[c];
    const std::size_t z = members[rng.below(members.size())];
    if (!usable_new_token(d, vocab, ctx, z)) continue;
    if (!easy) return z;
    const double max_cos = max_abs_cos(vocab, ctx, z);
    if (max_cos < kOrthogonalCap) return z;
    if (max_cos < best_cos) {
      best_cos = max_cos;
      best = z;
    }
  }
  if (best < vocab.tokens.size()) return best;
  const std::size_t rotate = rng.below(n_concepts);
  for (std::size_t i = 0; i < n_concepts; ++i) {
    const std::size_t c = (rotate + i) % n_concepts;
    if (ctx.concepts.count(c)) continue;
    for (std::size_t z : vocab.concept_tokens[c])
      if (!ctx.in_pair.count(z) && !d.touched.count(z)) return z;
  }
  return vocab.tokens.size();
}

enum class EditKind { Insert, Delete, Swap };

// The kind mix is fixed per count: swaps throughout, except that counts of
// four or more trade the last two swaps for one insertion and one deletion.
// A swap changes both report versions while an insertion or deletion
// changes only one, so a free mix would let a one-swap revision leave as
// large a footprint in the similarity features as an insert-plus-delete
// revision; the fixed mix keeps those footprints ordered by edit count.
std::vector<EditKind> edit_kinds(int count) {
  std::vector<EditKind> kinds(static_cast<std::size_t>(count), EditKind::Swap);
  if (count >= 4) {
    kinds[static_cast<std::size_t>(count) - 2] = EditKind::Insert;
    kinds[static_cast<std::size_t>(count) - 1] = EditKind::Delete;
  }
  return kinds;
}

// Substantive edits prefer concept mentions: deletions and swaps take out a
// side's only mention of a concept, insertions bring in an unseen concept.
// That keeps the concept features aligned with the edit count. Fallbacks
// (generic targets, then insertion) keep the applied count exact.
void apply_substantive(Draft& d, const Vocab& vocab, Rng& rng, Difficulty difficulty,
                       int count) {
  for (EditKind kind : edit_kinds(count)) {
    std::vector<std::size_t> targets;
    if (kind != EditKind::Insert) {
      targets = edit_targets(d, vocab, true);
      if (targets.empty()) targets = edit_targets(d, vocab, false);
      if (targets.empty()) kind = EditKind::Insert;
    }
    if (kind == EditKind::Delete) {
      const std::size_t p = targets[rng.below(targets.size())];
      d.touched.insert(d.final_toks[p]);
      d.final_toks.erase(d.final_toks.begin() + static_cast<std::ptrdiff_t>(p));
    } else if (kind == EditKind::Swap) {
      const std::size_t p = targets[rng.below(targets.size())];
      std::size_t z = pick_new_concept_token(d, vocab, rng, difficulty);
      if (z == vocab.tokens.size()) z = pick_new_token(d, vocab, rng, difficulty);
      d.touched.insert(d.final_toks[p]);
      d.touched.insert(z);
      d.final_toks[p] = z;
    } else {
      std::size_t z = pick_new_concept_token(d, vocab, rng, difficulty);
      if (z == vocab.tokens.size()) z = pick_new_token(d, vocab, rng, difficulty);
      const std::size_t p = rng.below(d.final_toks.size() + 1);
      d.touched.insert(z);
      d.final_toks.insert(d.final_toks.begin() + static_cast<std::ptrdiff_t>(p), z);
    }
    ++d.substantive;
  }
}

void apply_style(Draft& d, const Vocab& vocab, Rng& rng, Difficulty difficulty) {
  const bool easy = difficulty == Difficulty::Easy;
  const int want = easy ? rng.range(1, 4) : rng.range(3, 8);
  std::vector<std::size_t> positions;
  for (std::size_t p = 0; p < d.final_toks.size(); ++p)
    if (vocab.is_style(d.final_toks[p])) positions.push_back(p);
  rng.shuffle(positions);
  const int subs = std::min<int>(want, static_cast<int>(positions.size()));
  for (int s = 0; s < subs; ++s) {
    const std::size_t p = positions[static_cast<std::size_t>(s)];
    const std::size_t idx = d.final_toks[p];
    const std::size_t cluster = idx / kClusterSize;
    const std::size_t member = idx % kClusterSize;
    const std::size_t shift = 1 + rng.below(kClusterSize - 1);
    d.final_toks[p] = cluster * kClusterSize + (member + shift) % kClusterSize;
    ++d.style;
  }

  // Easy difficulty reorders at most one adjacent pair, which leaves n-gram
  // windows nearly intact; hard difficulty swaps arbitrary positions.
  const std::size_t n = d.final_toks.size();
  if (easy) {
    if (rng.real() < 0.5 && n >= 2) {
      for (int attempt = 0; attempt < 8; ++attempt) {
        const std::size_t i = rng.below(n - 1);
        if (d.final_toks[i] != d.final_toks[i + 1]) {
          std::swap(d.final_toks[i], d.final_toks[i + 1]);
          ++d.style;
          break;
        }
      }
    }
  } else {
    const int reorders = rng.range(1, 3);
    for (int r = 0; r < reorders; ++r) {
      if (n < 2) break;
      const std::size_t i = rng.below(n);
      std::size_t j = rng.below(n - 1);
      if (j >= i) ++j;
      std::swap(d.final_toks[i], d.final_toks[j]);
      ++d.style;
    }
  }
}

Draft make_draft(const Vocab& vocab, Rng& rng, Difficulty difficulty, int label,
                 int len) {
  Draft d;
  const std::size_t clusters = vocab.style_count / kClusterSize;
  for (int i = 0; i < len; ++i) {
    std::size_t idx;
    if (rng.real() < kStyleFraction) {
      idx = rng.below(clusters) * kClusterSize + rng.below(kClusterSize);
    } else {
      idx = vocab.plain(rng.below(vocab.plain_count()));
    }
    d.prelim.push_back(idx);
  }

  // Exactly kConceptsPerReport distinct concepts, one mention each, at
  // distinct positions. Style edits never touch them, so a label-0
  // revision keeps its concept mentions bit-identical to the preliminary
  // version and every substantive edit can claim a fresh concept.
  std::vector<std::size_t> ordinals(vocab.concept_tokens.size());
  std::iota(ordinals.begin(), ordinals.end(), std::size_t{0});
  rng.shuffle(ordinals);
  std::vector<std::size_t> positions(d.prelim.size());
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  rng.shuffle(positions);
  for (std::size_t k = 0; k < kConceptsPerReport; ++k) {
    const auto& members = vocab.concept_tokens[ordinals[k]];
    d.prelim[positions[k]] = members[rng.below(members.size())];
  }

  d.final_toks = d.prelim;
  d.prelim_set.insert(d.prelim.begin(), d.prelim.end());

  apply_substantive(d, vocab, rng, difficulty, substantive_count(label));
  apply_style(d, vocab, rng, difficulty);
  return d;
}

std::string render(const std::vector<std::size_t>& toks, const Vocab& vocab) {
  std::string text;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (i > 0) text.push_back(' ');
    text += vocab.tokens[toks[i]];
  }
  return text;
}

}  // namespace

SynthCorpus generate_synth(const SynthConfig& cfg) {
  check_config(cfg);
  Rng rng(cfg.seed);

  SynthCorpus corpus;
  Vocab vocab = build_vocab(cfg, rng);
  corpus.vocab = vocab.tokens;
  corpus.vectors = vocab.vectors;
  corpus.concepts = vocab.concepts;

  int last_positive = 0;
  for (int l = 3; l > 0; --l)
    if (cfg.label_probs[static_cast<std::size_t>(l)] > 0.0) {
      last_positive = l;
      break;
    }

  // Mean of exp(N(mu, sigma^2)) is mean_set_size before clipping.
  const double mu =
      std::log(cfg.mean_set_size) - cfg.set_size_sigma * cfg.set_size_sigma / 2.0;
  const std::size_t set_width = std::max<std::size_t>(3, std::to_string(cfg.num_sets).size());

  corpus.dataset.provenance = "synthetic";
  for (int s = 0; s < cfg.num_sets; ++s) {
    RankingSet set;
    set.set_id = "s" + zero_pad(static_cast<std::size_t>(s) + 1, set_width);

    const auto raw = static_cast<long long>(
        std::llround(std::exp(rng.normal(mu, cfg.set_size_sigma))));
    const int size = static_cast<int>(std::clamp<long long>(raw, cfg.min_set_size,
                                                            cfg.max_set_size));

    std::vector<int> labels(static_cast<std::size_t>(size));
    while (true) {
      bool any = false;
      for (auto& l : labels) {
        l = draw_label(rng, cfg.label_probs, last_positive);
        any = any || l > 0;
      }
      if (any) break;
    }

    // One report length per set, so a set's scores are normalized by
    // comparable totals and differ through the edits alone.
    const int len = rng.range(kMinReportTokens, kMaxReportTokens);

    for (int r = 0; r < size; ++r) {
      Draft draft = make_draft(vocab, rng, cfg.difficulty,
                               labels[static_cast<std::size_t>(r)], len);

      Report rep;
      rep.set_id = set.set_id;
      rep.report_id = set.set_id + "-r" + zero_pad(static_cast<std::size_t>(r) + 1, 3);
      rep.preliminary = render(draft.prelim, vocab);
      rep.final_text = render(draft.final_toks, vocab);
      rep.label = labels[static_cast<std::size_t>(r)];

      GroundTruthEntry gt;
      gt.report_id = rep.report_id;
      gt.substantive_edits = draft.substantive;
      gt.style_edits = draft.style;
      corpus.ground_truth.emplace(gt.report_id, gt);

      set.reports.push_back(std::move(rep));
    }
    corpus.dataset.sets.push_back(std::move(set));
  }
  return corpus;
}

EmbeddingStore make_store(const SynthCorpus& corpus, std::uint64_t oov_seed) {
  if (corpus.vectors.empty())
    throw std::invalid_argument("make_store: corpus has no vocabulary");
  EmbeddingStore store(static_cast<int>(corpus.vectors.front().size()), oov_seed);
  for (std::size_t i = 0; i < corpus.vocab.size(); ++i)
    store.insert(corpus.vocab[i], corpus.vectors[i]);
  return store;
}

void write_synth(const SynthCorpus& corpus, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path base(dir);

  save_dataset(corpus.dataset, (base / "corpus.jsonl").string());
  write_ontology(corpus.concepts, (base / "ontology.json").string());
  write_qrels(corpus.dataset, (base / "qrels.txt").string());
  write_ground_truth(corpus.ground_truth, (base / "ground_truth.jsonl").string());

  const fs::path vec_path = base / "embeddings.vec";
  std::ofstream out(vec_path);
  if (!out) throw std::runtime_error("cannot write embedding file: " + vec_path.string());
  out << corpus.vocab.size() << ' ' << corpus.vectors.front().size() << '\n';
  for (std::size_t i = 0; i < corpus.vocab.size(); ++i) {
    out << corpus.vocab[i];
    const Eigen::VectorXd& v = corpus.vectors[i];
    for (Eigen::Index k = 0; k < v.size(); ++k) out << ' ' << format_double(v[k]);
    out << '\n';
  }
}

void write_ground_truth(const GroundTruth& gt, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write ground truth file: " + path);
  for (const auto& [id, entry] : gt) {
    json line = {{"report_id", entry.report_id},
                 {"substantive_edits", entry.substantive_edits},
                 {"style_edits", entry.style_edits}};
    out << line.dump() << '\n';
  }
}

GroundTruth read_ground_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ground truth file: " + path);
  GroundTruth gt;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fail = [&](const std::string& msg) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + msg);
    };
    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) fail("malformed JSON object");
    if (!doc.contains("report_id") || !doc["report_id"].is_string())
      fail("missing string field 'report_id'");
    if (!doc.contains("substantive_edits") || !doc["substantive_edits"].is_number_integer())
      fail("missing integer field 'substantive_edits'");
    if (!doc.contains("style_edits") || !doc["style_edits"].is_number_integer())
      fail("missing integer field 'style_edits'");
    GroundTruthEntry entry;
    entry.report_id = doc["report_id"].get<std::string>();
    entry.substantive_edits = doc["substantive_edits"].get<int>();
    entry.style_edits = doc["style_edits"].get<int>();
    if (!gt.emplace(entry.report_id, entry).second)
      fail("duplicate report_id '" + entry.report_id + "'");
  }
  return gt;
}

std::vector<std::string> oracle_rank(const RankingSet& set, const GroundTruth& gt) {
  std::vector<const GroundTruthEntry*> entries;
  for (const auto& rep : set.reports) {
    auto it = gt.find(rep.report_id);
    if (it == gt.end())
      throw std::runtime_error("oracle_rank: report '" + rep.report_id +
                               "' missing from ground truth");
    entries.push_back(&it->second);
  }
  std::sort(entries.begin(), entries.end(),
            [](const GroundTruthEntry* a, const GroundTruthEntry* b) {
              if (a->substantive_edits != b->substantive_edits)
                return a->substantive_edits > b->substantive_edits;
              return a->report_id < b->report_id;
            });
  std::vector<std::string> ids;
  ids.reserve(entries.size());
  for (const auto* e : entries) ids.push_back(e->report_id);
  return ids;
}

}  // namespace discrank
