#include "mover/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>

#include "http_util.hpp"
#include "mover/error.hpp"
#include "mover/java_lexer.hpp"
#include "mover/text.hpp"

namespace mover {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool ident_part(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }

std::string env_or(const char* name, std::string fallback = "") {
  const char* v = std::getenv(name);
  return v != nullptr ? std::string(v) : fallback;
}

}  // namespace

LocalEmbedder::LocalEmbedder(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw Error(ErrorCode::InvalidArgument, "embedding dimension must be positive");
}

std::vector<std::string> LocalEmbedder::tokenize(std::string_view content) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < content.size()) {
    if (!ident_start(content[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < content.size() && ident_part(content[j])) ++j;
    std::string_view word = content.substr(i, j - i);
    if (!java::is_keyword(word)) {
      for (auto& w : text::split_identifier(word)) out.push_back(std::move(w));
    }
    i = j;
  }
  return out;
}

void LocalEmbedder::fit(const std::vector<std::string>& documents) {
  df_.clear();
  documents_ = documents.size();
  for (const auto& doc : documents) {
    auto tokens = tokenize(doc);
    std::set<std::string> unique(tokens.begin(), tokens.end());
    for (const auto& t : unique) ++df_[t];
  }
}

void LocalEmbedder::fit(const ProjectIndex& index) {
  std::vector<std::string> docs;
  for (const auto& [_, cls] : index.classes) {
    docs.emplace_back(class_text(index, cls));
    for (const auto& m : cls.methods) docs.emplace_back(method_text(index, cls, m));
  }
  fit(docs);
}

double LocalEmbedder::idf(const std::string& token) const {
  if (documents_ == 0) return 1.0;
  auto it = df_.find(token);
  double df = it == df_.end() ? 0.0 : static_cast<double>(it->second);
  return std::log((1.0 + static_cast<double>(documents_)) / (1.0 + df)) + 1.0;
}

std::string LocalEmbedder::model_id() const { return "local-tfidf-" + std::to_string(dimension_); }

EmbeddingVector LocalEmbedder::embed(std::string_view content) {
  std::string trimmed = text::trim(content);
  if (trimmed.empty()) throw Error(ErrorCode::EmptyContent, "cannot embed blank text");
  auto tokens = tokenize(trimmed);
  if (tokens.empty()) tokens.push_back(trimmed);
  std::map<std::string, double> tf;
  for (const auto& t : tokens) tf[t] += 1.0;
  EmbeddingVector v{std::vector<double>(dimension_, 0.0), model_id()};
  for (const auto& [token, count] : tf) v.values[fnv1a(token) % dimension_] += count * idf(token);
  double norm = 0.0;
  for (double x : v.values) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v.values) x /= norm;
  return v;
}

HttpEmbedderConfig HttpEmbedderConfig::from_env() {
  HttpEmbedderConfig c;
  c.url = env_or("EMBEDDING_API_URL");
  c.api_key = env_or("EMBEDDING_API_KEY");
  c.model = env_or("EMBEDDING_MODEL", "default");
  return c;
}

HttpEmbedder::HttpEmbedder(HttpEmbedderConfig config) : config_(std::move(config)) {}

EmbeddingVector HttpEmbedder::embed(std::string_view content) {
  if (text::trim(content).empty()) throw Error(ErrorCode::EmptyContent, "cannot embed blank text");
  if (config_.url.empty()) throw Error(ErrorCode::ProviderUnavailable, "EMBEDDING_API_URL is not set");
  nlohmann::json body = {{"model", config_.model}, {"input", {std::string(content)}}};
  auto res = detail::post_json(config_.url, config_.api_key, body, config_.timeout);
  try {
    EmbeddingVector v{res.at("data").at(0).at("embedding").get<std::vector<double>>(), config_.model};
    if (v.values.empty()) throw Error(ErrorCode::ProviderUnavailable, "empty embedding in response");
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ProviderUnavailable, std::string("unexpected embedding response: ") + e.what());
  }
}

CachingEmbedder::CachingEmbedder(std::shared_ptr<EmbeddingProvider> inner, std::filesystem::path cache_file)
    : inner_(std::move(inner)), cache_file_(std::move(cache_file)) {
  std::ifstream in(cache_file_);
  std::string line;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("model") || !j.contains("sha256") || !j.contains("embedding")) continue;
    entries_[{j["model"].get<std::string>(), j["sha256"].get<std::string>()}] =
        j["embedding"].get<std::vector<double>>();
  }
}

EmbeddingVector CachingEmbedder::embed(std::string_view content) {
  std::pair<std::string, std::string> key{inner_->model_id(), text::sha256_hex(content)};
  {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    if (it != entries_.end()) {
      ++hits_;
      return EmbeddingVector{it->second, key.first};
    }
  }
  EmbeddingVector v = inner_->embed(content);
  std::lock_guard lock(mutex_);
  ++misses_;
  if (entries_.emplace(key, v.values).second) {
    if (cache_file_.has_parent_path()) std::filesystem::create_directories(cache_file_.parent_path());
    std::ofstream out(cache_file_, std::ios::app);
    out << nlohmann::json{{"model", key.first}, {"sha256", key.second}, {"embedding", v.values}}.dump() << "\n";
  }
  return v;
}

std::size_t CachingEmbedder::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

std::size_t CachingEmbedder::misses() const {
  std::lock_guard lock(mutex_);
  return misses_;
}

FallbackEmbedder::FallbackEmbedder(std::shared_ptr<EmbeddingProvider> primary,
                                   std::shared_ptr<EmbeddingProvider> fallback)
    : primary_(std::move(primary)), fallback_(std::move(fallback)) {}

std::string FallbackEmbedder::model_id() const {
  std::lock_guard lock(mutex_);
  return fell_back_ ? fallback_->model_id() : primary_->model_id();
}

EmbeddingVector FallbackEmbedder::embed(std::string_view content) {
  {
    std::lock_guard lock(mutex_);
    if (fell_back_) return fallback_->embed(content);
  }
  try {
    return primary_->embed(content);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ProviderUnavailable) throw;
    std::lock_guard lock(mutex_);
    fell_back_ = true;
  }
  return fallback_->embed(content);
}

bool FallbackEmbedder::fell_back() const {
  std::lock_guard lock(mutex_);
  return fell_back_;
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dimension() != b.dimension()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(a.dimension()) + " vs " + std::to_string(b.dimension()));
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::ZeroVector, "cosine of an all-zero vector");
  double c = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(c, -1.0, 1.0);
}

std::vector<MoveCandidate> misplacement_scores(const ProjectIndex& index, EmbeddingProvider& provider,
                                               const ClassInfo& cls, const std::vector<const MethodInfo*>& surviving) {
  std::vector<MoveCandidate> out;
  out.reserve(surviving.size());
  for (const MethodInfo* m : surviving) {
    EmbeddingVector method_vec = provider.embed(method_text(index, cls, *m));
    EmbeddingVector class_vec = provider.embed(class_text_without_method(index, cls, *m));
    out.push_back(MoveCandidate{MethodRef{cls.qualified_name, m->signature}, cosine_similarity(method_vec, class_vec)});
  }
  std::sort(out.begin(), out.end(), [](const MoveCandidate& a, const MoveCandidate& b) {
    if (a.similarity != b.similarity) return a.similarity < b.similarity;
    return a.method < b.method;
  });
  return out;
}

}  // namespace mover
