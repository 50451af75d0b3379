#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include "discrank/rng.hpp"
#include "discrank/textproc.hpp"

using namespace discrank;

namespace {

std::vector<std::string> toks(const std::string& text) { return tokenize(text).tokens; }

TokenSequence seq_of(const std::vector<std::string>& tokens) {
  std::string text;
  for (const auto& t : tokens) {
    if (!text.empty()) text.push_back(' ');
    text += t;
  }
  return tokenize(text);
}

// Longest common subsequence length by classic dynamic programming, used to
// cross-check the edit script's KEEP count.
std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::vector<std::size_t>> dp(a.size() + 1,
                                           std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      dp[i][j] = a[i - 1] == b[j - 1] ? dp[i - 1][j - 1] + 1
                                      : std::max(dp[i - 1][j], dp[i][j - 1]);
  return dp[a.size()][b.size()];
}

std::vector<std::string> random_tokens(Rng& rng, int max_len, int alphabet) {
  std::vector<std::string> out;
  const int n = rng.range(0, max_len);
  for (int i = 0; i < n; ++i)
    out.push_back(std::string(1, static_cast<char>('a' + rng.range(0, alphabet - 1))));
  return out;
}

}  // namespace

TEST_CASE("tokenize lowercases and splits on whitespace") {
  CHECK(toks("Chest X-Ray") == std::vector<std::string>{"chest", "x", "-", "ray"});
  CHECK(toks("  multiple   spaces\tand\nnewlines ") ==
        std::vector<std::string>{"multiple", "spaces", "and", "newlines"});
  CHECK(toks("MiXeD CaSe") == std::vector<std::string>{"mixed", "case"});
}

TEST_CASE("tokenize isolates ASCII punctuation") {
  CHECK(toks("no acute event.") == std::vector<std::string>{"no", "acute", "event", "."});
  CHECK(toks("a,b;c") == std::vector<std::string>{"a", ",", "b", ";", "c"});
  CHECK(toks("(left)") == std::vector<std::string>{"(", "left", ")"});
  CHECK(toks("3.5 cm") == std::vector<std::string>{"3", ".", "5", "cm"});
}

TEST_CASE("tokenize of empty and punctuation-only input") {
  CHECK(tokenize("").empty());
  CHECK(tokenize("   ").empty());
  CHECK(toks("...") == std::vector<std::string>{".", ".", "."});
}

TEST_CASE("tokenize offsets cover each token and never overlap") {
  const std::string text = "Effusion, small; STABLE.";
  const TokenSequence seq = tokenize(text);
  REQUIRE(seq.tokens.size() == seq.offsets.size());
  std::size_t prev_end = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto [begin, end] = seq.offsets[i];
    CHECK(begin >= prev_end);
    CHECK(begin < end);
    CHECK(end <= text.size());
    // The offsets point at the original casing of the token.
    std::string surface = text.substr(begin, end - begin);
    for (auto& c : surface) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    CHECK(surface == seq.tokens[i]);
    prev_end = end;
  }
}

TEST_CASE("ngrams slide over consecutive tokens") {
  const TokenSequence seq = seq_of({"a", "b", "c", "d"});
  const auto bi = ngrams(seq, 2);
  REQUIRE(bi.size() == 3);
  CHECK(bi[0] == std::vector<std::string>{"a", "b"});
  CHECK(bi[1] == std::vector<std::string>{"b", "c"});
  CHECK(bi[2] == std::vector<std::string>{"c", "d"});

  const auto tri = ngrams(seq, 3);
  REQUIRE(tri.size() == 2);
  CHECK(tri[0] == std::vector<std::string>{"a", "b", "c"});
  CHECK(tri[1] == std::vector<std::string>{"b", "c", "d"});

  CHECK(ngrams(seq, 1).size() == 4);
  CHECK(ngrams(seq, 4).size() == 1);
  CHECK(ngrams(seq, 5).empty());
  CHECK(ngrams(tokenize(""), 2).empty());
}

TEST_CASE("token_diff on the canonical deletion example") {
  const EditScript script = token_diff(seq_of({"a", "b", "c"}), seq_of({"a", "c"}));
  REQUIRE(script.size() == 3);
  CHECK(script[0] == EditOp{EditOp::Kind::Keep, "a"});
  CHECK(script[1] == EditOp{EditOp::Kind::Delete, "b"});
  CHECK(script[2] == EditOp{EditOp::Kind::Keep, "c"});
}

TEST_CASE("token_diff of identical sequences is all KEEP") {
  const TokenSequence seq = seq_of({"stable", "left", "effusion"});
  for (const EditOp& op : token_diff(seq, seq)) CHECK(op.kind == EditOp::Kind::Keep);
}

TEST_CASE("token_diff emits deletions before additions at the same point") {
  const EditScript script = token_diff(seq_of({"a", "x", "b"}), seq_of({"a", "y", "b"}));
  REQUIRE(script.size() == 4);
  CHECK(script[0] == EditOp{EditOp::Kind::Keep, "a"});
  CHECK(script[1] == EditOp{EditOp::Kind::Delete, "x"});
  CHECK(script[2] == EditOp{EditOp::Kind::Add, "y"});
  CHECK(script[3] == EditOp{EditOp::Kind::Keep, "b"});
}

TEST_CASE("token_diff against an empty side") {
  for (const EditOp& op : token_diff(seq_of({"a", "b"}), tokenize("")))
    CHECK(op.kind == EditOp::Kind::Delete);
  for (const EditOp& op : token_diff(tokenize(""), seq_of({"a", "b"})))
    CHECK(op.kind == EditOp::Kind::Add);
  CHECK(token_diff(tokenize(""), tokenize("")).empty());
}

TEST_CASE("token_diff replay reconstructs both sides and KEEPs match the LCS") {
  Rng rng(20240817);
  for (int trial = 0; trial < 500; ++trial) {
    const std::vector<std::string> a = random_tokens(rng, 12, 4);
    const std::vector<std::string> b = random_tokens(rng, 12, 4);
    const EditScript script = token_diff(seq_of(a), seq_of(b));

    CHECK(replay_preliminary(script) == a);
    CHECK(replay_final(script) == b);

    std::size_t keeps = 0;
    for (const EditOp& op : script)
      if (op.kind == EditOp::Kind::Keep) ++keeps;
    CHECK(keeps == lcs_length(a, b));
  }
}
