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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "evdet/errors.hpp"
#include "evdet/event_detector.hpp"
#include "evdet/rng.hpp"

using namespace evdet;

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("evdet_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

EventDetector make_detector(const std::vector<DetectorEntry>& entries, int n_concepts) {
    EventDetector det;
    det.event_id = "e1";
    det.n_concepts = n_concepts;
    det.entries = entries;
    return det;
}

ModelVector make_video(const std::string& id, std::vector<double> values) {
    ModelVector mv;
    mv.video_id = id;
    mv.values = std::move(values);
    return mv;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// Small world with one concept that shares vocabulary with the event title.
struct DetectorWorld {
    EventDescription event;
    std::vector<ConceptEntry> pool;
    TermVectorStore store;
    CorpusSet corpora;
    Tokenizer tok;
    LmCaps caps;

    DetectorWorld() {
        event.event_id = "e1";
        event.title = "dog grooming";
        event.visual_cues = {"dog brush"};
        event.free_text = "people brush dogs";
        event.audio_cues = {"clipper buzz"};

        pool.push_back({0, "dog", {}});
        pool.push_back({1, "spacecraft", {}});
        pool.push_back({2, "brush", {}});

        store.set_article_dim(4);
        store.insert("dog", {{0, 1.0}});
        store.insert("grooming", {{0, 1.0}, {1, 1.0}});
        store.insert("brush", {{1, 1.0}});
        store.insert("spacecraft", {{3, 1.0}});

        DocumentCorpus dog;
        dog.concept_index = 0;
        dog.source_tag = "google-style";
        dog.documents = {"dog grooming tips", "dog care"};
        corpora.add(dog);
        DocumentCorpus craft;
        craft.concept_index = 1;
        craft.source_tag = "google-style";
        craft.documents = {"spacecraft engines", "orbital spacecraft"};
        corpora.add(craft);
        // Concept 2 has no google-style documents on purpose.
    }
};

}  // namespace

TEST_CASE("keyframe aggregation is the component-wise mean") {
    std::vector<std::vector<double>> frames = {{1.0, 2.0}, {3.0, 4.0}, {5.0, 0.0}};
    std::vector<double> mean = aggregate_keyframes(frames);
    REQUIRE(mean.size() == 2);
    CHECK(mean[0] == doctest::Approx(3.0));
    CHECK(mean[1] == doctest::Approx(2.0));
    CHECK_THROWS_AS(aggregate_keyframes({}), Error);
    CHECK_THROWS_AS(aggregate_keyframes({{1.0}, {1.0, 2.0}}), Error);
}

TEST_CASE("detectors keep the top-K scores with ties broken by concept index") {
    std::vector<double> scores = {0.5, 0.9, 0.5, 0.1, 0.9};
    EventDetector det = detector_from_scores("e1", DetectorConfig{}, scores, 3);
    CHECK(det.n_concepts == 5);
    REQUIRE(det.entries.size() == 3);
    CHECK(det.entries[0].concept_index == 1);  // 0.9, lower index first
    CHECK(det.entries[1].concept_index == 4);  // 0.9
    CHECK(det.entries[2].concept_index == 0);  // 0.5, index 0 beats index 2
    CHECK(det.entries[2].score == doctest::Approx(0.5));
}

TEST_CASE("detector construction validates top_k and score finiteness") {
    std::vector<double> scores = {0.5, 0.2};
    CHECK_THROWS_AS(detector_from_scores("e", DetectorConfig{}, scores, 0), Error);
    CHECK_THROWS_AS(detector_from_scores("e", DetectorConfig{}, scores, 3), Error);
    CHECK_NOTHROW(detector_from_scores("e", DetectorConfig{}, scores, 2));
    std::vector<double> bad = {0.5, std::nan("")};
    CHECK_THROWS_AS(detector_from_scores("e", DetectorConfig{}, bad, 1), Error);
}

TEST_CASE("cosine relevance matches the hand-computed value") {
    EventDetector det = make_detector({{0, 3.0}, {2, 4.0}}, 4);
    ModelVector mv = make_video("v", {6.0, 99.0, 8.0, 99.0});
    // Selected entries (3,4) vs (6,8): parallel vectors, cosine 1.
    CHECK(video_relevance(det, mv, Relevance::cosine) == doctest::Approx(1.0));
    ModelVector orth = make_video("v", {0.0, 99.0, 5.0, 99.0});
    // (3,4) vs (0,5): cos = 20 / (5*5) = 0.8.
    CHECK(video_relevance(det, orth, Relevance::cosine) == doctest::Approx(0.8));
}

TEST_CASE("histogram intersection sums the smaller normalized mass per bin") {
    EventDetector det = make_detector({{0, 1.0}, {1, 3.0}}, 2);
    ModelVector mv = make_video("v", {3.0, 1.0});
    // Normalized detector (0.25, 0.75) vs video (0.75, 0.25): 0.25 + 0.25.
    CHECK(video_relevance(det, mv, Relevance::hist_intersect) == doctest::Approx(0.5));
    ModelVector same = make_video("v", {2.0, 6.0});
    CHECK(video_relevance(det, same, Relevance::hist_intersect) == doctest::Approx(1.0));
}

TEST_CASE("divergence and distance relevances peak at an exact match") {
    EventDetector det = make_detector({{0, 0.6}, {1, 0.4}}, 2);
    ModelVector same = make_video("v", {0.6, 0.4});
    CHECK(video_relevance(det, same, Relevance::kullback) == doctest::Approx(0.0));
    CHECK(video_relevance(det, same, Relevance::chi2) == doctest::Approx(0.0));
    CHECK(video_relevance(det, same, Relevance::euclidean) == doctest::Approx(0.0));

    ModelVector other = make_video("v", {0.4, 0.6});
    CHECK(video_relevance(det, other, Relevance::kullback) < 0.0);
    CHECK(video_relevance(det, other, Relevance::chi2) < 0.0);
    CHECK(video_relevance(det, other, Relevance::euclidean) ==
          doctest::Approx(-std::sqrt(0.08)));
}

TEST_CASE("every relevance measure scores the detector's own profile highest") {
    Rng rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 4 + static_cast<int>(rng.uniform_index(4));
        std::vector<double> scores(n);
        for (double& s : scores) s = 0.05 + rng.uniform();
        EventDetector det = detector_from_scores("e", DetectorConfig{}, scores, 3);

        ModelVector self = make_video("self", std::vector<double>(n, 0.0));
        for (const DetectorEntry& e : det.entries) self.values[e.concept_index] = e.score;
        ModelVector noise = make_video("noise", std::vector<double>(n, 0.0));
        for (const DetectorEntry& e : det.entries)
            noise.values[e.concept_index] = 0.05 + rng.uniform();

        for (Relevance rel : all_relevances()) {
            double at_self = video_relevance(det, self, rel);
            double at_noise = video_relevance(det, noise, rel);
            CHECK(at_self >= at_noise - 1e-12);
        }
    }
}

TEST_CASE("zero detector or zero video entries rank at negative infinity") {
    EventDetector zero_det = make_detector({{0, 0.0}, {1, 0.0}}, 3);
    ModelVector mv = make_video("v", {1.0, 1.0, 1.0});
    EventDetector det = make_detector({{0, 0.5}, {1, 0.5}}, 3);
    ModelVector zero_mv = make_video("v", {0.0, 0.0, 5.0});  // zero on selected entries
    for (Relevance rel : all_relevances()) {
        CHECK(video_relevance(zero_det, mv, rel) == -kInf);
        CHECK(video_relevance(det, zero_mv, rel) == -kInf);
    }
}

TEST_CASE("relevance checks the model-vector dimension") {
    EventDetector det = make_detector({{0, 1.0}}, 3);
    ModelVector mv = make_video("v", {1.0, 2.0});
    CHECK_THROWS_AS(video_relevance(det, mv, Relevance::cosine), Error);
}

TEST_CASE("ranking sorts by score then video id and rejects duplicates") {
    EventDetector det = make_detector({{0, 1.0}}, 1);
    std::vector<ModelVector> collection = {
        make_video("vb", {0.5}),
        make_video("va", {0.5}),
        make_video("vc", {0.9}),
        make_video("vz", {0.0}),  // -inf sentinel, always last
    };
    RankedList list = rank_videos(det, collection, Relevance::euclidean);
    REQUIRE(list.size() == 4);
    CHECK(list[0].video_id == "vc");  // distance 0.1
    CHECK(list[1].video_id == "va");  // distance 0.5, id tie-break
    CHECK(list[2].video_id == "vb");
    CHECK(list[3].video_id == "vz");
    CHECK(list[3].score == -kInf);

    collection.push_back(make_video("va", {0.1}));
    CHECK_THROWS_AS(rank_videos(det, collection, Relevance::euclidean), Error);
    CHECK_THROWS_AS(rank_videos(det, {}, Relevance::euclidean), Error);
}

TEST_CASE("design grid scoring covers the pool and degrades missing corpora to warnings") {
    DetectorWorld w;
    DetectorConfig title_google{ElmSource::title, ClmSource::google, BowWeighting::raw_count,
                                MatrixOp::max_entry};
    DetectorConfig title_title{ElmSource::title, ClmSource::title, BowWeighting::raw_count,
                               MatrixOp::max_entry};
    auto scored = score_design_grid(w.event, w.pool, {title_google, title_title}, w.store,
                                    w.corpora, w.caps, w.tok);
    REQUIRE(scored.size() == 2);
    REQUIRE(scored[0].scores.size() == 3);
    REQUIRE(scored[1].scores.size() == 3);

    // Concept 2 lacks google-style documents: zero score plus a warning.
    CHECK(scored[0].scores[2] == 0.0);
    REQUIRE(scored[0].warnings.size() == 1);
    CHECK(scored[0].warnings[0].find("concept 2") != std::string::npos);
    // dog ELM terms overlap the dog corpus; spacecraft shares nothing.
    CHECK(scored[0].scores[0] > 0.0);
    CHECK(scored[0].scores[0] > scored[0].scores[1]);

    // Title-only corpora exist for every concept: no warnings, and the
    // identical term "dog" gives concept 0 a full-strength match.
    CHECK(scored[1].warnings.empty());
    CHECK(scored[1].scores[0] == doctest::Approx(1.0));
    CHECK(scored[1].scores[1] == 0.0);
}

TEST_CASE("single-combo construction matches grid scoring") {
    DetectorWorld w;
    DetectorConfig config{ElmSource::title, ClmSource::google, BowWeighting::tfidf,
                          MatrixOp::frobenius};
    std::vector<std::string> warnings;
    EventDetector det =
        build_detector(w.event, w.pool, config, 2, w.store, w.corpora, w.caps, w.tok,
                       nullptr, &warnings);
    auto scored = score_design_grid(w.event, w.pool, {config}, w.store, w.corpora, w.caps,
                                    w.tok);
    EventDetector expected = detector_from_scores("e1", config, scored[0].scores, 2);
    REQUIRE(det.entries.size() == expected.entries.size());
    for (size_t i = 0; i < det.entries.size(); ++i) {
        CHECK(det.entries[i].concept_index == expected.entries[i].concept_index);
        CHECK(det.entries[i].score == doctest::Approx(expected.entries[i].score));
    }
    CHECK(warnings == scored[0].warnings);
}

TEST_CASE("model vectors round-trip, average keyframes, and clamp negatives") {
    fs::path dir = fresh_dir("model_vectors");
    std::vector<ModelVector> vectors = {
        make_video("v1", {0.5, 0.25, 0.0}),
        make_video("v2", {1.0 / 3.0, 0.1, 0.9}),
    };
    save_model_vectors(dir / "mv.csv", vectors);
    auto loaded = load_model_vectors(dir / "mv.csv");
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].video_id == "v1");
    for (size_t i = 0; i < 3; ++i) {
        CHECK(loaded[0].values[i] == vectors[0].values[i]);
        CHECK(loaded[1].values[i] == vectors[1].values[i]);
    }

    std::ofstream out(dir / "frames.csv");
    out << "#Nc=2\n";
    out << "v1,1.0,0.0\n";
    out << "v2,0.5,-3.0\n";  // negative clamps to 0
    out << "v1,0.0,0.5\n";   // second keyframe of v1
    out.close();
    auto frames = load_model_vectors(dir / "frames.csv");
    REQUIRE(frames.size() == 2);
    CHECK(frames[0].video_id == "v1");
    CHECK(frames[0].values[0] == doctest::Approx(0.5));
    CHECK(frames[0].values[1] == doctest::Approx(0.25));
    CHECK(frames[1].values[1] == 0.0);
}

TEST_CASE("model vector files validate the header and row arity") {
    fs::path dir = fresh_dir("model_vectors_bad");
    std::ofstream(dir / "no_header.csv") << "v1,1.0\n";
    CHECK_THROWS_AS(load_model_vectors(dir / "no_header.csv"), Error);
    std::ofstream(dir / "arity.csv") << "#Nc=3\nv1,1.0,2.0\n";
    CHECK_THROWS_AS(load_model_vectors(dir / "arity.csv"), Error);
    std::ofstream(dir / "nonfinite.csv") << "#Nc=1\nv1,inf\n";
    CHECK_THROWS_AS(load_model_vectors(dir / "nonfinite.csv"), Error);
    CHECK_THROWS_AS(load_model_vectors(dir / "missing.csv"), Error);
}

TEST_CASE("detectors round-trip through their file") {
    fs::path dir = fresh_dir("detector_io");
    EventDetector det;
    det.event_id = "e9";
    det.config = {ElmSource::audio_visual, ClmSource::wikipedia, BowWeighting::tfidf,
                  MatrixOp::hausdorff};
    det.n_concepts = 40;
    det.entries = {{7, 0.9}, {3, 0.5}, {21, 0.25}};
    save_detector(dir / "det.txt", det);
    EventDetector loaded = load_detector(dir / "det.txt");
    CHECK(loaded.event_id == "e9");
    CHECK(loaded.config == det.config);
    CHECK(loaded.n_concepts == 40);
    REQUIRE(loaded.entries.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(loaded.entries[i].concept_index == det.entries[i].concept_index);
        CHECK(loaded.entries[i].score == det.entries[i].score);
    }
}

TEST_CASE("detector files must be complete and sorted") {
    fs::path dir = fresh_dir("detector_bad");
    std::ofstream(dir / "unsorted.txt")
        << "# design_choice=Title-Google-TfIdf-Spectral n_concepts=5\ne1\n0,0.1\n1,0.9\n";
    CHECK_THROWS_AS(load_detector(dir / "unsorted.txt"), Error);
    std::ofstream(dir / "no_entries.txt")
        << "# design_choice=Title-Google-TfIdf-Spectral n_concepts=5\ne1\n";
    CHECK_THROWS_AS(load_detector(dir / "no_entries.txt"), Error);
    std::ofstream(dir / "no_header.txt") << "e1\n0,0.5\n";
    CHECK_THROWS_AS(load_detector(dir / "no_header.txt"), Error);
}

TEST_CASE("ranked lists round-trip including infinite sentinels") {
    fs::path dir = fresh_dir("ranked_io");
    RankedList list = {{"v1", 0.75}, {"v2", 0.5}, {"v3", -kInf}};
    save_ranked_list(dir / "list.csv", list);
    RankedList loaded = load_ranked_list(dir / "list.csv");
    REQUIRE(loaded.size() == 3);
    CHECK(loaded[0].video_id == "v1");
    CHECK(loaded[0].score == 0.75);
    CHECK(loaded[2].score == -kInf);
    CHECK_THROWS_AS(load_ranked_list(dir / "missing.csv"), Error);
}
