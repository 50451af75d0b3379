#include "discrank/textproc.hpp"

#include <cctype>
#include <stdexcept>

namespace discrank {

namespace {

bool is_space(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return u < 128 && std::isspace(u);
}

// ASCII punctuation only; multi-byte UTF-8 content passes through as word
// characters.
bool is_punct(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return u < 128 && std::ispunct(u);
}

char lower(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return u < 128 ? static_cast<char>(std::tolower(u)) : c;
}

}  // namespace

TokenSequence tokenize(std::string_view text) {
  TokenSequence out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    if (is_punct(text[i])) {
      out.tokens.emplace_back(1, text[i]);
      out.offsets.emplace_back(i, i + 1);
      ++i;
      continue;
    }
    std::size_t start = i;
    std::string tok;
    while (i < n && !is_space(text[i]) && !is_punct(text[i])) {
      tok.push_back(lower(text[i]));
      ++i;
    }
    out.tokens.push_back(std::move(tok));
    out.offsets.emplace_back(start, i);
  }
  return out;
}

std::vector<std::vector<std::string>> ngrams(const TokenSequence& seq, int n) {
  if (n < 1) throw std::invalid_argument("ngrams: n must be >= 1");
  std::vector<std::vector<std::string>> out;
  const std::size_t count = seq.size();
  const std::size_t width = static_cast<std::size_t>(n);
  if (count < width) return out;
  out.reserve(count - width + 1);
  for (std::size_t i = 0; i + width <= count; ++i) {
    out.emplace_back(seq.tokens.begin() + i, seq.tokens.begin() + i + width);
  }
  return out;
}

EditScript token_diff(const TokenSequence& prelim, const TokenSequence& final_seq) {
  const auto& a = prelim.tokens;
  const auto& b = final_seq.tokens;
  const std::size_t n = a.size();
  const std::size_t m = b.size();

  // dp[i][j] holds the LCS length of the suffixes a[i..] and b[j..], so the
  // script can be emitted front to back and KEEPs bind as early as possible.
  std::vector<std::vector<int>> dp(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      if (a[i] == b[j]) {
        dp[i][j] = dp[i + 1][j + 1] + 1;
      } else {
        dp[i][j] = std::max(dp[i + 1][j], dp[i][j + 1]);
      }
    }
  }

  EditScript script;
  script.reserve(n + m);
  std::size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (a[i] == b[j] && dp[i][j] == dp[i + 1][j + 1] + 1) {
      script.push_back({EditOp::Kind::Keep, a[i]});
      ++i;
      ++j;
    } else if (dp[i + 1][j] >= dp[i][j + 1]) {
      script.push_back({EditOp::Kind::Delete, a[i]});
      ++i;
    } else {
      script.push_back({EditOp::Kind::Add, b[j]});
      ++j;
    }
  }
  for (; i < n; ++i) script.push_back({EditOp::Kind::Delete, a[i]});
  for (; j < m; ++j) script.push_back({EditOp::Kind::Add, b[j]});
  return script;
}

std::vector<std::string> replay_preliminary(const EditScript& script) {
  std::vector<std::string> out;
  for (const auto& op : script) {
    if (op.kind != EditOp::Kind::Add) out.push_back(op.token);
  }
  return out;
}

std::vector<std::string> replay_final(const EditScript& script) {
  std::vector<std::string> out;
  for (const auto& op : script) {
    if (op.kind != EditOp::Kind::Delete) out.push_back(op.token);
  }
  return out;
}

}  // namespace discrank
