#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace discrank {

struct TokenSequence {
  std::vector<std::string> tokens;  // lowercased surface forms
  // Byte range [begin, end) of each token in the source text. Offsets are
  // non-overlapping and strictly increasing; one entry per token.
  std::vector<std::pair<std::size_t, std::size_t>> offsets;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

// Lowercases, splits on whitespace, and emits each ASCII punctuation
// character as its own token. No stemming, no stopword removal.
TokenSequence tokenize(std::string_view text);

// Sliding windows of n consecutive tokens; fewer than n tokens yields an
// empty list. n must be >= 1.
std::vector<std::vector<std::string>> ngrams(const TokenSequence& seq, int n);

struct EditOp {
  enum class Kind { Keep, Add, Delete };
  Kind kind;
  std::string token;

  bool operator==(const EditOp&) const = default;
};
using EditScript = std::vector<EditOp>;

// Aligns the two token sequences on their longest common subsequence and
// reports the final side's additions and the preliminary side's deletions.
// When several alignments tie, KEEP ops match as early as possible in the
// preliminary sequence, and deletions are emitted before additions.
EditScript token_diff(const TokenSequence& prelim, const TokenSequence& final_seq);

// Replay helpers: KEEP+DELETE ops spell the preliminary sequence, KEEP+ADD
// ops spell the final one.
std::vector<std::string> replay_preliminary(const EditScript& script);
std::vector<std::string> replay_final(const EditScript& script);

}  // namespace discrank
