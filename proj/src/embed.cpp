#include "discrank/embed.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "discrank/rng.hpp"

namespace discrank {

EmbeddingStore::EmbeddingStore(int dimension, std::uint64_t oov_seed)
    : dim_(dimension), oov_seed_(oov_seed) {
  if (dimension < 1) throw std::invalid_argument("EmbeddingStore: dimension must be >= 1");
}

void EmbeddingStore::insert(const std::string& token, Eigen::VectorXd vec) {
  if (vec.size() != dim_)
    throw std::invalid_argument("EmbeddingStore::insert: vector dimension mismatch");
  table_.try_emplace(token, std::move(vec));
}

Eigen::VectorXd EmbeddingStore::vector(const std::string& token) const {
  auto it = table_.find(token);
  if (it != table_.end()) return it->second;

  // Unknown token: a pseudo-random unit vector seeded by (oov_seed, token).
  Rng rng(hash_combine(oov_seed_, fnv1a64(token)));
  Eigen::VectorXd v(dim_);
  double norm = 0.0;
  do {
    for (int i = 0; i < dim_; ++i) v[i] = rng.normal();
    norm = v.norm();
  } while (norm < 1e-12);
  return v / norm;
}

namespace {

[[noreturn]] void fail_line(const std::string& path, std::size_t line_no, const std::string& what) {
  std::ostringstream msg;
  msg << path << ":" << line_no << ": " << what;
  throw std::runtime_error(msg.str());
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream ss(line);
  std::string f;
  while (ss >> f) fields.push_back(std::move(f));
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_count(const std::string& s, long& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && out >= 0;
}

}  // namespace

EmbeddingStore load_embeddings(const std::string& path, std::uint64_t oov_seed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embedding file: " + path);

  std::string line;
  std::size_t line_no = 0;
  int dim = -1;
  std::vector<std::pair<std::string, Eigen::VectorXd>> rows;

  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_fields(line);
    if (fields.empty()) continue;

    if (first_content_line) {
      first_content_line = false;
      long count = 0, d = 0;
      if (fields.size() == 2 && parse_count(fields[0], count) && parse_count(fields[1], d)) {
        if (d < 1) fail_line(path, line_no, "header dimension must be >= 1");
        dim = static_cast<int>(d);
        continue;  // header consumed
      }
    }

    if (fields.size() < 2) fail_line(path, line_no, "expected a token and at least one value");
    const int row_dim = static_cast<int>(fields.size()) - 1;
    if (dim < 0) dim = row_dim;
    if (row_dim != dim)
      fail_line(path, line_no, "expected " + std::to_string(dim) + " values, got " +
                                   std::to_string(row_dim));

    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) {
      if (!parse_double(fields[static_cast<std::size_t>(i) + 1], v[i]))
        fail_line(path, line_no, "cannot parse value '" + fields[static_cast<std::size_t>(i) + 1] +
                                     "'");
    }
    rows.emplace_back(std::move(fields[0]), std::move(v));
  }

  if (rows.empty()) throw std::runtime_error("empty embedding file: " + path);

  EmbeddingStore store(dim, oov_seed);
  for (auto& [token, vec] : rows) store.insert(token, std::move(vec));
  return store;
}

Eigen::VectorXd ngram_vector(const EmbeddingStore& store, const std::vector<std::string>& window) {
  if (window.empty()) throw std::invalid_argument("ngram_vector: empty window");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(store.dimension());
  for (const auto& token : window) sum += store.vector(token);
  return sum / static_cast<double>(window.size());
}

double cosine(const Eigen::Ref<const Eigen::VectorXd>& u,
              const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (u.size() != v.size()) throw std::invalid_argument("cosine: dimension mismatch");
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
}

}  // namespace discrank
