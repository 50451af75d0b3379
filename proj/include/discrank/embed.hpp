#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace discrank {

// Frozen token embedding table in word2vec text format. Lookups never fail:
// unknown tokens map to a unit vector derived deterministically from
// (oov_seed, token), so repeated runs and repeated lookups agree.
class EmbeddingStore {
 public:
  EmbeddingStore(int dimension, std::uint64_t oov_seed = 0);

  int dimension() const { return dim_; }
  std::size_t size() const { return table_.size(); }
  std::uint64_t oov_seed() const { return oov_seed_; }

  // First insertion of a token wins; later duplicates are ignored.
  void insert(const std::string& token, Eigen::VectorXd vec);
  bool contains(const std::string& token) const { return table_.count(token) > 0; }

  Eigen::VectorXd vector(const std::string& token) const;

 private:
  int dim_;
  std::uint64_t oov_seed_;
  std::unordered_map<std::string, Eigen::VectorXd> table_;
};

// Parses "token v1 .. vd" lines, optionally preceded by a "count dim"
// header. Dimension comes from the header when present, otherwise from the
// first vector line; rows that disagree are errors naming the line.
EmbeddingStore load_embeddings(const std::string& path, std::uint64_t oov_seed = 0);

// Arithmetic mean of the window's token vectors. The window must be
// nonempty.
Eigen::VectorXd ngram_vector(const EmbeddingStore& store, const std::vector<std::string>& window);

// Cosine similarity in [-1, 1]; zero-norm inputs yield 0.
double cosine(const Eigen::Ref<const Eigen::VectorXd>& u,
              const Eigen::Ref<const Eigen::VectorXd>& v);

}  // namespace discrank
