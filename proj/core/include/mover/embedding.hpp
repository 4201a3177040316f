#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mover/code_model.hpp"

namespace mover {

struct EmbeddingVector {
  std::vector<double> values;
  std::string model_id;

  std::size_t dimension() const { return values.size(); }
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string model_id() const = 0;
  /// Throws EmptyContent for whitespace-only input.
  virtual EmbeddingVector embed(std::string_view content) = 0;
};

/// Deterministic offline provider: TF-IDF over split identifier words,
/// hashed into a fixed number of buckets and L2-normalized.
class LocalEmbedder : public EmbeddingProvider {
 public:
  explicit LocalEmbedder(std::size_t dimension = 512);

  /// Fits document frequencies; before fitting every idf is 1.
  void fit(const std::vector<std::string>& documents);
  /// Fits on every class text and method text of the index.
  void fit(const ProjectIndex& index);

  std::string model_id() const override;
  EmbeddingVector embed(std::string_view content) override;

  /// Lowercased identifier words with Java keywords removed.
  static std::vector<std::string> tokenize(std::string_view content);
  double idf(const std::string& token) const;

 private:
  std::size_t dimension_;
  std::size_t documents_ = 0;
  std::map<std::string, std::size_t> df_;
};

struct HttpEmbedderConfig {
  std::string url;
  std::string api_key;
  std::string model;
  std::chrono::seconds timeout{30};

  /// EMBEDDING_API_URL, EMBEDDING_API_KEY, EMBEDDING_MODEL.
  static HttpEmbedderConfig from_env();
};

/// Remote provider: POST {model, input: [text]}, reads data[0].embedding.
class HttpEmbedder : public EmbeddingProvider {
 public:
  explicit HttpEmbedder(HttpEmbedderConfig config);
  std::string model_id() const override { return config_.model; }
  EmbeddingVector embed(std::string_view content) override;

 private:
  HttpEmbedderConfig config_;
};

/// Content-addressed cache in front of another provider, persisted as JSON
/// lines of {model, sha256, embedding}.
class CachingEmbedder : public EmbeddingProvider {
 public:
  CachingEmbedder(std::shared_ptr<EmbeddingProvider> inner, std::filesystem::path cache_file);
  std::string model_id() const override { return inner_->model_id(); }
  EmbeddingVector embed(std::string_view content) override;
  std::size_t hits() const;
  std::size_t misses() const;

 private:
  std::shared_ptr<EmbeddingProvider> inner_;
  std::filesystem::path cache_file_;
  mutable std::mutex mutex_;
  std::map<std::pair<std::string, std::string>, std::vector<double>> entries_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

/// Uses `primary` until it raises ProviderUnavailable, then `fallback` for
/// every later call.
class FallbackEmbedder : public EmbeddingProvider {
 public:
  FallbackEmbedder(std::shared_ptr<EmbeddingProvider> primary, std::shared_ptr<EmbeddingProvider> fallback);
  std::string model_id() const override;
  EmbeddingVector embed(std::string_view content) override;
  bool fell_back() const;

 private:
  std::shared_ptr<EmbeddingProvider> primary_;
  std::shared_ptr<EmbeddingProvider> fallback_;
  mutable std::mutex mutex_;
  bool fell_back_ = false;
};

/// Throws DimensionMismatch or ZeroVector.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

struct MoveCandidate {
  MethodRef method;
  double similarity = 0.0;
};

/// Similarity of each method to its class with the method cut out, lowest
/// first; ties by qualified method name.
std::vector<MoveCandidate> misplacement_scores(const ProjectIndex& index, EmbeddingProvider& provider,
                                               const ClassInfo& cls, const std::vector<const MethodInfo*>& surviving);

}  // namespace mover
