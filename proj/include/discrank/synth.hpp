#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "discrank/corpus.hpp"
#include "discrank/embed.hpp"
#include "discrank/ontology.hpp"

namespace discrank {

// Easy keeps substantive edits near-orthogonal to everything already in the
// report; hard drops that constraint and layers on more style noise.
enum class Difficulty { Easy, Hard };

struct SynthConfig {
  int num_sets = 122;
  int min_set_size = 5;
  int max_set_size = 148;
  double mean_set_size = 27.6;
  double set_size_sigma = 0.55;  // log-space spread of the set-size draw
  std::array<double, 4> label_probs = {0.81, 0.12, 0.06, 0.01};
  int vocab_size = 600;
  int dimension = 64;
  Difficulty difficulty = Difficulty::Easy;
  std::uint64_t seed = 1;
};

// What the generator actually did to one report pair. Substantive edits are
// inserts, deletes, and swaps of clinical tokens; style edits are
// within-cluster substitutions and reorderings.
struct GroundTruthEntry {
  std::string report_id;
  int substantive_edits = 0;
  int style_edits = 0;
};

using GroundTruth = std::map<std::string, GroundTruthEntry>;

struct SynthCorpus {
  Dataset dataset;
  std::vector<std::string> vocab;  // row order of the embedding table
  std::vector<Eigen::VectorXd> vectors;
  std::vector<OntologyConcept> concepts;
  GroundTruth ground_truth;
};

// Deterministic per seed: equal configs produce equal corpora, and the
// files written by write_synth are byte-identical across runs.
SynthCorpus generate_synth(const SynthConfig& cfg);

// Embedding table of the generated vocabulary, without a file round trip.
EmbeddingStore make_store(const SynthCorpus& corpus, std::uint64_t oov_seed = 0);

// Writes corpus.jsonl, embeddings.vec, ontology.json, qrels.txt and
// ground_truth.jsonl into dir, creating it if needed.
void write_synth(const SynthCorpus& corpus, const std::string& dir);

void write_ground_truth(const GroundTruth& gt, const std::string& path);
GroundTruth read_ground_truth(const std::string& path);

// The ranking a perfect system would produce: substantive edit count
// descending, report_id ascending. Reports absent from the ground truth are
// errors.
std::vector<std::string> oracle_rank(const RankingSet& set, const GroundTruth& gt);

}  // namespace discrank
