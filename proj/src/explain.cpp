#include "discrank/explain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "discrank/scoring.hpp"

namespace discrank {

namespace {

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string escape_html(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

ExplainView explain_pair(const std::string& preliminary, const std::string& final_text,
                         const ModelParams& model, const EmbeddingStore& store,
                         std::size_t top_k) {
  if (model.d != store.dimension())
    throw std::runtime_error("model dimension (d=" + std::to_string(model.d) +
                             ") does not match embedding dimension (d=" +
                             std::to_string(store.dimension()) + ")");

  const TokenSequence prelim = tokenize(preliminary);
  const TokenSequence final_seq = tokenize(final_text);

  // Static embeddings make importance a pure function of the token.
  std::map<std::string, double> by_token;
  const auto importance_of = [&](const std::string& token) {
    auto it = by_token.find(token);
    if (it != by_token.end()) return it->second;
    Term term{token, store.vector(token)};
    const double value = importance(term, Granularity::Unigram, model.importance, model.config);
    by_token.emplace(token, value);
    return value;
  };

  ExplainView view;
  for (const EditOp& op : token_diff(prelim, final_seq))
    view.items.push_back({op.kind, op.token, importance_of(op.token)});

  for (const auto& [token, value] : by_token) view.top_terms.push_back({token, value});
  std::sort(view.top_terms.begin(), view.top_terms.end(),
            [](const TermImportance& a, const TermImportance& b) {
              if (a.importance != b.importance) return a.importance > b.importance;
              return a.token < b.token;
            });
  if (view.top_terms.size() > top_k) view.top_terms.resize(top_k);
  return view;
}

std::string render_ansi(const ExplainView& view) {
  std::string out;
  for (std::size_t i = 0; i < view.items.size(); ++i) {
    const ExplainItem& item = view.items[i];
    if (i > 0) out.push_back(' ');
    // Grayscale ramp 232..255; the cell index grows with importance.
    const int cell =
        232 + std::clamp(static_cast<int>(std::lround(item.importance * 23.0)), 0, 23);
    out += "\x1b[48;5;" + std::to_string(cell) + "m";
    if (item.kind == EditOp::Kind::Delete) out += "\x1b[31;9m";
    if (item.kind == EditOp::Kind::Add) out += "\x1b[32;4m";
    out += item.token;
    out += "\x1b[0m";
  }
  out += "\n\nmost important terms:\n";
  for (const auto& term : view.top_terms)
    out += "  " + fixed3(term.importance) + "  " + term.token + "\n";
  return out;
}

std::string render_html(const ExplainView& view) {
  std::string out = "<div class=\"explain\">\n<p class=\"diff\">";
  for (std::size_t i = 0; i < view.items.size(); ++i) {
    const ExplainItem& item = view.items[i];
    if (i > 0) out.push_back(' ');
    const char* cls = "keep";
    const char* decoration = "none";
    if (item.kind == EditOp::Kind::Delete) {
      cls = "del";
      decoration = "line-through";
    } else if (item.kind == EditOp::Kind::Add) {
      cls = "add";
      decoration = "underline";
    }
    out += "<span class=\"";
    out += cls;
    out += "\" style=\"background-color: rgba(250, 200, 60, " + fixed3(item.importance) +
           "); text-decoration: " + decoration + "\">";
    out += escape_html(item.token);
    out += "</span>";
  }
  out += "</p>\n<ol class=\"top-terms\">\n";
  for (const auto& term : view.top_terms) {
    out += "<li>" + escape_html(term.token) + " (" + fixed3(term.importance) + ")</li>\n";
  }
  out += "</ol>\n</div>\n";
  return out;
}

}  // namespace discrank
