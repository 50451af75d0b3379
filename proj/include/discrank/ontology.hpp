#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "discrank/textproc.hpp"

namespace discrank {

// Source form of one concept, as stored in the JSON file.
struct OntologyConcept {
  std::string id;
  std::string name;
  std::vector<std::string> synonyms;
};

// Concept dictionary with a token-level name index. Names and synonyms are
// tokenized with the same rules as report text, so matching is
// case-insensitive and punctuation-aware.
struct Ontology {
  std::map<std::string, std::string> concepts;  // id -> preferred name
  // Joined name tokens -> concept id. First definition of a name wins.
  std::map<std::string, std::string> name_index;
  std::size_t max_name_tokens = 0;
  std::vector<std::string> warnings;  // duplicate-name notes from loading
};

struct ConceptMention {
  std::string concept_id;
  std::size_t begin = 0;  // token index, inclusive
  std::size_t end = 0;    // token index, exclusive
  std::vector<std::string> surface;

  bool operator==(const ConceptMention&) const = default;
};

// Key under which a tokenized name is indexed.
std::string ontology_key(const std::vector<std::string>& tokens);

// Indexes a concept list. Duplicate names keep the first concept and add a
// warning; an empty list is an error.
Ontology build_ontology(const std::vector<OntologyConcept>& concepts);

// Parses a JSON array of {"id", "name", "synonyms": [...]} objects and
// indexes it with build_ontology.
Ontology load_ontology(const std::string& path);
void write_ontology(const std::vector<OntologyConcept>& concepts, const std::string& path);

// Greedy left-to-right scan preferring the longest name starting at each
// position; matched spans never overlap.
std::vector<ConceptMention> extract_concepts(const TokenSequence& seq, const Ontology& onto);

}  // namespace discrank
