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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "evdet/errors.hpp"
#include "evdet/rng.hpp"
#include "evdet/similarity.hpp"
#include "evdet/text_models.hpp"

using namespace evdet;

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("evdet_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// Shared fixture store over three articles:
//   alpha   -> {0:1}
//   bravo   -> {0:1, 1:1}
//   charlie -> {1:1}
//   delta   -> {0:3, 1:4}
//   echo    -> {2:1}
TermVectorStore fixture_store() {
    TermVectorStore store;
    store.set_article_dim(3);
    store.insert("alpha", {{0, 1.0}});
    store.insert("bravo", {{0, 1.0}, {1, 1.0}});
    store.insert("charlie", {{1, 1.0}});
    store.insert("delta", {{0, 3.0}, {1, 4.0}});
    store.insert("echo", {{2, 1.0}});
    return store;
}

LanguageModel model_of(const std::vector<std::string>& terms) {
    LanguageModel lm;
    lm.capacity = static_cast<int>(terms.size());
    for (const std::string& t : terms) lm.entries.push_back({t, 1.0});
    return lm;
}

// Largest singular value of a 2-row matrix from the closed-form eigenvalues
// of the 2x2 Gram matrix A A^T. Shares nothing with the iterative solver.
double two_row_spectral(const SimilarityMatrix& s) {
    REQUIRE(s.rows == 2);
    double g00 = 0.0, g01 = 0.0, g11 = 0.0;
    for (int j = 0; j < s.cols; ++j) {
        g00 += s.at(0, j) * s.at(0, j);
        g01 += s.at(0, j) * s.at(1, j);
        g11 += s.at(1, j) * s.at(1, j);
    }
    double trace = g00 + g11;
    double det = g00 * g11 - g01 * g01;
    double disc = std::sqrt(std::max(0.0, trace * trace - 4.0 * det));
    return std::sqrt(0.5 * (trace + disc));
}

SimilarityMatrix random_matrix(Rng& rng, int rows, int cols) {
    SimilarityMatrix s;
    s.rows = rows;
    s.cols = cols;
    s.data.resize(static_cast<size_t>(rows) * cols);
    for (double& v : s.data) v = rng.uniform();
    return s;
}

}  // namespace

TEST_CASE("term similarity is the cosine of article vectors") {
    TermVectorStore store = fixture_store();
    CHECK(term_similarity("alpha", "bravo", store) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(term_similarity("alpha", "delta", store) == doctest::Approx(0.6));
    CHECK(term_similarity("charlie", "delta", store) == doctest::Approx(0.8));
    CHECK(term_similarity("alpha", "echo", store) == doctest::Approx(0.0));
    // Symmetry.
    CHECK(term_similarity("bravo", "alpha", store) ==
          doctest::Approx(term_similarity("alpha", "bravo", store)));
}

TEST_CASE("identical terms are fully similar even out of vocabulary") {
    TermVectorStore store = fixture_store();
    CHECK(term_similarity("zebra", "zebra", store) == 1.0);
    CHECK(term_similarity("Alpha", "alpha", store) == 1.0);
    CHECK(term_similarity("BRAVO", "bravo", store) == 1.0);
}

TEST_CASE("unknown terms have zero similarity to everything else") {
    TermVectorStore store = fixture_store();
    CHECK(term_similarity("zebra", "alpha", store) == 0.0);
    CHECK(term_similarity("alpha", "zebra", store) == 0.0);
    CHECK(term_similarity("zebra", "yak", store) == 0.0);
}

TEST_CASE("store lookup folds case and reports membership") {
    TermVectorStore store = fixture_store();
    CHECK(store.contains("ALPHA"));
    CHECK(store.find("Alpha") != nullptr);
    CHECK(store.find("zebra") == nullptr);
    CHECK(store.size() == 5);
    CHECK(store.article_dim() == 3);
}

TEST_CASE("store insert validates entries") {
    TermVectorStore store;
    CHECK_THROWS_AS(store.insert("bad", {{0, -1.0}}), Error);
    CHECK_THROWS_AS(store.insert("bad", {{-1, 1.0}}), Error);
    CHECK_THROWS_AS(store.insert("bad", {}), Error);
    CHECK_THROWS_AS(store.insert("bad", {{0, 0.0}}), Error);
    store.set_article_dim(2);
    CHECK_THROWS_AS(store.insert("bad", {{5, 1.0}}), Error);
    store.insert("ok", {{1, 2.0}});
    CHECK(store.find("ok")->norm == doctest::Approx(2.0));
}

TEST_CASE("store insert sorts entries by article index") {
    TermVectorStore store;
    store.insert("term", {{4, 1.0}, {1, 2.0}, {3, 0.5}});
    const auto* vec = store.find("term");
    REQUIRE(vec != nullptr);
    REQUIRE(vec->entries.size() == 3);
    CHECK(vec->entries[0].first == 1);
    CHECK(vec->entries[1].first == 3);
    CHECK(vec->entries[2].first == 4);
}

TEST_CASE("term vector store round-trips through its file") {
    fs::path dir = fresh_dir("store");
    TermVectorStore store = fixture_store();
    store.save(dir / "vectors.txt");
    TermVectorStore loaded = TermVectorStore::load(dir / "vectors.txt");
    CHECK(loaded.size() == store.size());
    CHECK(loaded.article_dim() == 3);
    for (const std::string term : {"alpha", "bravo", "charlie", "delta", "echo"}) {
        const auto* a = store.find(term);
        const auto* b = loaded.find(term);
        REQUIRE(b != nullptr);
        CHECK(a->entries == b->entries);
        CHECK(a->norm == doctest::Approx(b->norm));
    }
    CHECK_THROWS_AS(TermVectorStore::load(dir / "missing.txt"), Error);
}

TEST_CASE("similarity matrix rows follow the event model, columns the concept model") {
    TermVectorStore store = fixture_store();
    LanguageModel elm = model_of({"alpha", "charlie"});
    LanguageModel clm = model_of({"bravo", "delta", "echo"});
    SimilarityMatrix s = similarity_matrix(elm, clm, store);
    REQUIRE(s.rows == 2);
    REQUIRE(s.cols == 3);
    double r2 = 1.0 / std::sqrt(2.0);
    CHECK(s.at(0, 0) == doctest::Approx(r2));   // alpha-bravo
    CHECK(s.at(0, 1) == doctest::Approx(0.6));  // alpha-delta
    CHECK(s.at(0, 2) == doctest::Approx(0.0));  // alpha-echo
    CHECK(s.at(1, 0) == doctest::Approx(r2));   // charlie-bravo
    CHECK(s.at(1, 1) == doctest::Approx(0.8));  // charlie-delta
    CHECK(s.at(1, 2) == doctest::Approx(0.0));  // charlie-echo
}

TEST_CASE("similarity matrix rejects empty models") {
    TermVectorStore store = fixture_store();
    LanguageModel empty;
    LanguageModel ok = model_of({"alpha"});
    CHECK_THROWS_AS(similarity_matrix(empty, ok, store), Error);
    CHECK_THROWS_AS(similarity_matrix(ok, empty, store), Error);
}

TEST_CASE("matrix reductions match hand-computed values on the fixture") {
    TermVectorStore store = fixture_store();
    LanguageModel elm = model_of({"alpha", "charlie"});
    LanguageModel clm = model_of({"bravo", "delta", "echo"});
    SimilarityMatrix s = similarity_matrix(elm, clm, store);
    double r2 = 1.0 / std::sqrt(2.0);

    CHECK(matrix_score(s, MatrixOp::max_entry) == doctest::Approx(0.8));
    CHECK(matrix_score(s, MatrixOp::frobenius) ==
          doctest::Approx(std::sqrt(r2 * r2 + 0.36 + r2 * r2 + 0.64)));
    CHECK(matrix_score(s, MatrixOp::inf_norm) == doctest::Approx(r2 + 0.8));
    // Row maxima are {r2, 0.8}; even count, so their mean.
    CHECK(matrix_score(s, MatrixOp::hausdorff) == doctest::Approx(0.5 * (r2 + 0.8)));
    CHECK(matrix_score(s, MatrixOp::spectral) == doctest::Approx(two_row_spectral(s)));

    std::vector<double> all = all_matrix_scores(s);
    REQUIRE(all.size() == 5);
    CHECK(all[0] == doctest::Approx(matrix_score(s, MatrixOp::spectral)));
    CHECK(all[1] == doctest::Approx(matrix_score(s, MatrixOp::inf_norm)));
    CHECK(all[2] == doctest::Approx(matrix_score(s, MatrixOp::frobenius)));
    CHECK(all[3] == doctest::Approx(matrix_score(s, MatrixOp::max_entry)));
    CHECK(all[4] == doctest::Approx(matrix_score(s, MatrixOp::hausdorff)));
}

TEST_CASE("hausdorff reduction is the median of row maxima") {
    SimilarityMatrix s;
    s.rows = 3;
    s.cols = 2;
    s.data = {0.1, 0.9,   // row max 0.9
              0.3, 0.2,   // row max 0.3
              0.5, 0.4};  // row max 0.5
    CHECK(matrix_score(s, MatrixOp::hausdorff) == doctest::Approx(0.5));
    SimilarityMatrix even;
    even.rows = 4;
    even.cols = 1;
    even.data = {0.9, 0.1, 0.4, 0.2};
    // Sorted row maxima {0.1, 0.2, 0.4, 0.9}: mean of the middle two.
    CHECK(matrix_score(even, MatrixOp::hausdorff) == doctest::Approx(0.3));
}

TEST_CASE("spectral norm of a rank-one matrix equals its frobenius norm") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 1 + static_cast<int>(rng.uniform_index(6));
        int m = 1 + static_cast<int>(rng.uniform_index(6));
        std::vector<double> u(n), v(m);
        for (double& x : u) x = rng.uniform();
        for (double& x : v) x = rng.uniform();
        SimilarityMatrix s;
        s.rows = n;
        s.cols = m;
        s.data.resize(static_cast<size_t>(n) * m);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) s.at(i, j) = u[i] * v[j];
        CHECK(matrix_score(s, MatrixOp::spectral) ==
              doctest::Approx(matrix_score(s, MatrixOp::frobenius)).epsilon(1e-8));
    }
}

TEST_CASE("spectral norm matches the two-row closed form on random matrices") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        int cols = 1 + static_cast<int>(rng.uniform_index(9));
        SimilarityMatrix s = random_matrix(rng, 2, cols);
        double expected = two_row_spectral(s);
        CHECK(matrix_score(s, MatrixOp::spectral) == doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("spectral norm handles repeated extreme singular values") {
    // The identity has every singular value equal; power iteration cannot
    // separate them but the result must still be exact.
    for (int n : {1, 2, 3, 8}) {
        SimilarityMatrix s;
        s.rows = n;
        s.cols = n;
        s.data.assign(static_cast<size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i) s.at(i, i) = 1.0;
        CHECK(matrix_score(s, MatrixOp::spectral) == doctest::Approx(1.0).epsilon(1e-10));
    }
    SimilarityMatrix z;
    z.rows = 2;
    z.cols = 3;
    z.data.assign(6, 0.0);
    CHECK(matrix_score(z, MatrixOp::spectral) == doctest::Approx(0.0));
}

TEST_CASE("matrix reductions satisfy their norm inequalities") {
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 1 + static_cast<int>(rng.uniform_index(7));
        int m = 1 + static_cast<int>(rng.uniform_index(7));
        SimilarityMatrix s = random_matrix(rng, n, m);
        double spectral = matrix_score(s, MatrixOp::spectral);
        double inf = matrix_score(s, MatrixOp::inf_norm);
        double fro = matrix_score(s, MatrixOp::frobenius);
        double maxe = matrix_score(s, MatrixOp::max_entry);
        double haus = matrix_score(s, MatrixOp::hausdorff);

        CHECK(maxe <= fro + 1e-12);
        CHECK(fro <= std::sqrt(static_cast<double>(n) * m) * maxe + 1e-12);
        CHECK(spectral <= fro + 1e-8);
        CHECK(spectral + 1e-8 >= maxe);
        CHECK(spectral + 1e-8 >= fro / std::sqrt(static_cast<double>(std::min(n, m))));
        CHECK(inf + 1e-12 >= maxe);
        CHECK(haus <= maxe + 1e-12);
        CHECK(haus >= 0.0);
    }
}

TEST_CASE("matrix reductions are invariant under row and column permutation") {
    Rng rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 2 + static_cast<int>(rng.uniform_index(5));
        int m = 2 + static_cast<int>(rng.uniform_index(5));
        SimilarityMatrix s = random_matrix(rng, n, m);
        std::vector<int> rp(n), cp(m);
        for (int i = 0; i < n; ++i) rp[i] = i;
        for (int j = 0; j < m; ++j) cp[j] = j;
        rng.shuffle(rp);
        rng.shuffle(cp);
        SimilarityMatrix p = s;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) p.at(i, j) = s.at(rp[i], cp[j]);
        std::vector<double> a = all_matrix_scores(s);
        std::vector<double> b = all_matrix_scores(p);
        for (size_t k = 0; k < 5; ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-9));
    }
}

TEST_CASE("pair cache stores unordered term pairs") {
    PairCache cache;
    CHECK(cache.size() == 0);
    CHECK_FALSE(cache.get("a", "b").has_value());
    cache.put("b", "a", 0.25);
    CHECK(cache.size() == 1);
    REQUIRE(cache.get("a", "b").has_value());
    CHECK(*cache.get("a", "b") == doctest::Approx(0.25));
    CHECK(*cache.get("b", "a") == doctest::Approx(0.25));
    cache.put("a", "b", 0.5);
    CHECK(cache.size() == 1);
    CHECK(*cache.get("a", "b") == doctest::Approx(0.5));
}

TEST_CASE("pair cache round-trips through its file and tolerates absence") {
    fs::path dir = fresh_dir("pair_cache");
    PairCache cache;
    cache.put("alpha", "bravo", 0.125);
    cache.put("echo", "delta", 1.0);
    cache.save(dir / "cache.tsv");
    PairCache loaded = PairCache::load(dir / "cache.tsv");
    CHECK(loaded.size() == 2);
    CHECK(*loaded.get("bravo", "alpha") == doctest::Approx(0.125));
    CHECK(*loaded.get("delta", "echo") == doctest::Approx(1.0));
    PairCache empty = PairCache::load(dir / "missing.tsv");
    CHECK(empty.size() == 0);
}

TEST_CASE("similarity matrices consult and fill the pair cache") {
    TermVectorStore store = fixture_store();
    LanguageModel elm = model_of({"alpha", "charlie"});
    LanguageModel clm = model_of({"bravo", "delta"});

    PairCache cache;
    SimilarityMatrix s = similarity_matrix(elm, clm, store, &cache);
    CHECK(cache.size() == 4);
    CHECK(*cache.get("alpha", "delta") == doctest::Approx(0.6));

    // A poisoned cache entry overrides the store: proof the cache is read.
    PairCache poisoned;
    poisoned.put("alpha", "bravo", 0.99);
    SimilarityMatrix t = similarity_matrix(elm, clm, store, &poisoned);
    CHECK(t.at(0, 0) == doctest::Approx(0.99));
    CHECK(t.at(1, 1) == doctest::Approx(0.8));
    CHECK(s.at(1, 1) == doctest::Approx(t.at(1, 1)));
}
