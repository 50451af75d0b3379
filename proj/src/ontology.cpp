#include "discrank/ontology.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace discrank {

using nlohmann::json;

std::string ontology_key(const std::vector<std::string>& tokens) {
  std::string key;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) key.push_back(' ');
    key += tokens[i];
  }
  return key;
}

namespace {

void index_name(Ontology& onto, const std::string& name, const std::string& id) {
  TokenSequence toks = tokenize(name);
  if (toks.empty()) {
    onto.warnings.push_back("concept '" + id + "': name '" + name +
                            "' is empty after tokenization, skipped");
    return;
  }
  std::string key = ontology_key(toks.tokens);
  auto [it, fresh] = onto.name_index.try_emplace(key, id);
  if (!fresh) {
    if (it->second != id)
      onto.warnings.push_back("duplicate name '" + name + "': kept concept '" + it->second +
                              "', ignored '" + id + "'");
    return;
  }
  onto.max_name_tokens = std::max(onto.max_name_tokens, toks.size());
}

}  // namespace

Ontology build_ontology(const std::vector<OntologyConcept>& concepts) {
  if (concepts.empty()) throw std::runtime_error("ontology has no concepts");
  Ontology onto;
  for (const auto& c : concepts) {
    auto [it, fresh] = onto.concepts.try_emplace(c.id, c.name);
    if (!fresh) {
      onto.warnings.push_back("duplicate concept id '" + c.id + "', first definition kept");
      continue;
    }
    index_name(onto, c.name, c.id);
    for (const auto& syn : c.synonyms) index_name(onto, syn, c.id);
  }
  if (onto.name_index.empty()) throw std::runtime_error("ontology has no indexable names");
  return onto;
}

Ontology load_ontology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ontology file: " + path);

  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": malformed JSON: " + e.what());
  }
  if (!doc.is_array()) throw std::runtime_error(path + ": expected a JSON array of concepts");

  std::vector<OntologyConcept> concepts;
  for (const auto& entry : doc) {
    if (!entry.is_object() || !entry.contains("id") || !entry.contains("name") ||
        !entry["id"].is_string() || !entry["name"].is_string())
      throw std::runtime_error(path + ": each concept needs string fields 'id' and 'name'");
    OntologyConcept c;
    c.id = entry["id"].get<std::string>();
    c.name = entry["name"].get<std::string>();
    if (entry.contains("synonyms")) {
      if (!entry["synonyms"].is_array())
        throw std::runtime_error(path + ": concept '" + c.id + "': 'synonyms' must be an array");
      for (const auto& syn : entry["synonyms"]) {
        if (!syn.is_string())
          throw std::runtime_error(path + ": concept '" + c.id + "': synonyms must be strings");
        c.synonyms.push_back(syn.get<std::string>());
      }
    }
    concepts.push_back(std::move(c));
  }
  try {
    return build_ontology(concepts);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_ontology(const std::vector<OntologyConcept>& concepts, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write ontology file: " + path);
  json doc = json::array();
  for (const auto& c : concepts) {
    doc.push_back(json{{"id", c.id}, {"name", c.name}, {"synonyms", c.synonyms}});
  }
  out << doc.dump(2) << '\n';
}

std::vector<ConceptMention> extract_concepts(const TokenSequence& seq, const Ontology& onto) {
  std::vector<ConceptMention> mentions;
  const std::size_t n = seq.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t longest = std::min(onto.max_name_tokens, n - i);
    bool matched = false;
    for (std::size_t len = longest; len >= 1; --len) {
      std::vector<std::string> window(seq.tokens.begin() + i, seq.tokens.begin() + i + len);
      auto it = onto.name_index.find(ontology_key(window));
      if (it != onto.name_index.end()) {
        mentions.push_back({it->second, i, i + len, std::move(window)});
        i += len;
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
  }
  return mentions;
}

}  // namespace discrank
