#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "discrank/embed.hpp"
#include "discrank/ranker.hpp"
#include "discrank/textproc.hpp"

namespace discrank {

// One aligned token of the preliminary/final diff, carrying the model's
// unigram importance. Repeated tokens share one importance value because
// the embeddings are static.
struct ExplainItem {
  EditOp::Kind kind = EditOp::Kind::Keep;
  std::string token;
  double importance = 0.0;
};

struct TermImportance {
  std::string token;
  double importance = 0.0;
};

struct ExplainView {
  std::vector<ExplainItem> items;        // diff order
  std::vector<TermImportance> top_terms;  // distinct tokens, most important first
};

// Aligns the two versions with token_diff and attaches importance values.
// The model's dimension must match the store's.
ExplainView explain_pair(const std::string& preliminary, const std::string& final_text,
                         const ModelParams& model, const EmbeddingStore& store,
                         std::size_t top_k = 10);

// Terminal rendering: deleted tokens struck through in red, added tokens
// underlined in green, background intensity rising monotonically with
// importance.
std::string render_ansi(const ExplainView& view);

// Self-contained well-formed HTML fragment; highlight opacity equals the
// token's importance.
std::string render_html(const ExplainView& view);

}  // namespace discrank
