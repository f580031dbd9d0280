// Copyright 2026-present the evdet project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "evdet/design_space.hpp"
#include "evdet/text_models.hpp"

namespace evdet {

// Sparse term-to-article weight vectors. Read-only after load; shareable
// across threads.
class TermVectorStore {
  public:
    struct SparseVector {
        std::vector<std::pair<int, double>> entries;  // sorted by article index
        double norm = 0.0;
    };

    static TermVectorStore load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    // Entries need not be sorted; weights must be >= 0 with at least one > 0.
    void insert(const std::string& term, std::vector<std::pair<int, double>> entries);

    const SparseVector* find(const std::string& term) const;
    bool contains(const std::string& term) const { return find(term) != nullptr; }
    size_t size() const { return vectors_.size(); }

    int article_dim() const { return article_dim_; }
    void set_article_dim(int dim) { article_dim_ = dim; }

  private:
    std::unordered_map<std::string, SparseVector> vectors_;
    int article_dim_ = 0;
};

// Disk-persistable (term, term) -> similarity cache. Concurrent reads,
// serialized writes.
class PairCache {
  public:
    PairCache() = default;

    // Movable before concurrent use begins; the mutex itself is not moved.
    PairCache(PairCache&& other) noexcept : values_(std::move(other.values_)) {}
    PairCache& operator=(PairCache&& other) noexcept {
        values_ = std::move(other.values_);
        return *this;
    }

    // Missing file yields an empty cache.
    static PairCache load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    std::optional<double> get(const std::string& a, const std::string& b) const;
    void put(const std::string& a, const std::string& b, double value);
    size_t size() const;

  private:
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, double> values_;  // key "a\tb" with a <= b
};

struct SimilarityMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;  // row-major

    double at(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }
    double& at(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
};

// Cosine similarity of the stored article vectors; 1.0 when a == b
// (case-folded) even out of vocabulary, otherwise 0.0 if either is absent.
double term_similarity(const std::string& a, const std::string& b,
                       const TermVectorStore& store);

// s_{i,j} = term_similarity(elm[i], clm[j]). Row order follows the ELM, column
// order the CLM. An optional pair cache is consulted and filled.
SimilarityMatrix similarity_matrix(const LanguageModel& elm, const LanguageModel& clm,
                                   const TermVectorStore& store,
                                   PairCache* cache = nullptr);

// Scalar reduction of the similarity matrix per the matrix-operator axis.
double matrix_score(const SimilarityMatrix& s, MatrixOp op);

// All five operator scores at once; the similarity matrix is the expensive
// part, so sweeps extract every reduction per matrix.
std::vector<double> all_matrix_scores(const SimilarityMatrix& s);

}  // namespace evdet
