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
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "evdet/errors.hpp"
#include "evdet/event_detector.hpp"
#include "evdet/fusion_eval.hpp"

using namespace evdet;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::filesystem::path fresh_dir(const std::string& name) {
    std::filesystem::path dir = std::filesystem::temp_directory_path() / ("evdet_fuse_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

RankedList make_list(const std::vector<std::pair<std::string, double>>& items) {
    RankedList list;
    for (const auto& [id, score] : items) list.push_back({id, score});
    return list;
}

// Textbook average precision over a ranked relevance mask: the mean, over
// relevant items, of precision at each relevant item's rank.
double ap_reference(const std::vector<bool>& relevant) {
    int total = 0;
    for (bool r : relevant)
        if (r) ++total;
    double sum = 0.0;
    int seen = 0;
    for (size_t k = 0; k < relevant.size(); ++k) {
        if (relevant[k]) {
            ++seen;
            sum += static_cast<double>(seen) / static_cast<double>(k + 1);
        }
    }
    return sum / static_cast<double>(total);
}

}  // namespace

TEST_CASE("average precision hand goldens") {
    GroundTruth gt;
    gt.set("v1", "ev", GtLabel::positive);
    gt.set("v3", "ev", GtLabel::positive);

    // Ranks: v1 (hit, 1/1), v2 (miss), v3 (hit, 2/3), v4 (miss).
    RankedList list = make_list({{"v1", 0.9}, {"v2", 0.8}, {"v3", 0.7}, {"v4", 0.6}});
    CHECK(average_precision(list, gt, "ev") == doctest::Approx((1.0 + 2.0 / 3.0) / 2.0));

    // All positives first: perfect score, exactly.
    RankedList perfect = make_list({{"v1", 0.9}, {"v3", 0.8}, {"v2", 0.7}, {"v4", 0.6}});
    CHECK(average_precision(perfect, gt, "ev") == 1.0);

    // All positives last: (1/3 + 2/4) / 2.
    RankedList worst = make_list({{"v2", 0.9}, {"v4", 0.8}, {"v1", 0.7}, {"v3", 0.6}});
    CHECK(average_precision(worst, gt, "ev") == doctest::Approx((1.0 / 3.0 + 2.0 / 4.0) / 2.0));
}

TEST_CASE("average precision matches the exhaustive definition on every placement") {
    // Every way to place 4 positives among 8 ranks, compared exactly.
    GroundTruth gt;
    for (int i = 0; i < 8; ++i) {
        std::string id = "v" + std::to_string(i);
        gt.set(id, "ev", i < 4 ? GtLabel::positive : GtLabel::background);
    }
    int placements = 0;
    for (int mask = 0; mask < 256; ++mask) {
        if (std::popcount(static_cast<unsigned>(mask)) != 4) continue;
        ++placements;
        RankedList list;
        std::vector<bool> relevant;
        int pos_used = 0;
        int neg_used = 0;
        for (int rank = 0; rank < 8; ++rank) {
            bool is_pos = (mask >> rank) & 1;
            int id_index = is_pos ? pos_used++ : 4 + neg_used++;
            list.push_back({"v" + std::to_string(id_index), 8.0 - rank});
            relevant.push_back(is_pos);
        }
        CHECK(average_precision(list, gt, "ev") == ap_reference(relevant));
    }
    CHECK(placements == 70);
}

TEST_CASE("average precision counts only positives present in the list") {
    GroundTruth gt;
    gt.set("v1", "ev", GtLabel::positive);
    gt.set("ghost", "ev", GtLabel::positive);
    RankedList list = make_list({{"v0", 0.9}, {"v1", 0.8}});
    // "ghost" never appears, so the denominator is 1 and AP = 1/2.
    CHECK(average_precision(list, gt, "ev") == doctest::Approx(0.5));
}

TEST_CASE("related videos count as negatives unless opted in") {
    GroundTruth gt;
    gt.set("p", "ev", GtLabel::positive);
    gt.set("r", "ev", GtLabel::related);
    RankedList list = make_list({{"r", 0.9}, {"p", 0.8}, {"b", 0.7}});

    CHECK(average_precision(list, gt, "ev") == doctest::Approx(0.5));

    ApOptions opts;
    opts.related_as_positive = true;
    // Both r and p are relevant: (1/1 + 2/2) / 2 = 1.
    CHECK(average_precision(list, gt, "ev", opts) == 1.0);
}

TEST_CASE("average precision requires at least one in-list positive") {
    GroundTruth gt;
    gt.set("elsewhere", "ev", GtLabel::positive);
    RankedList list = make_list({{"v0", 0.9}, {"v1", 0.8}});
    CHECK_THROWS_AS(average_precision(list, gt, "ev"), Error);
    CHECK_THROWS_AS(average_precision(list, gt, "other-event"), Error);
}

TEST_CASE("scored average precision keeps input order on ties") {
    // Equal scores: stable sort preserves input order of the pairs.
    std::vector<std::pair<double, bool>> neg_first = {{0.5, false}, {0.5, true}};
    CHECK(average_precision_scores(neg_first) == doctest::Approx(0.5));

    std::vector<std::pair<double, bool>> pos_first = {{0.5, true}, {0.5, false}};
    CHECK(average_precision_scores(pos_first) == 1.0);

    // Unsorted input is sorted by score before evaluation.
    std::vector<std::pair<double, bool>> shuffled = {{0.1, true}, {0.9, true}, {0.5, false}};
    // Sorted: 0.9 pos (1/1), 0.5 neg, 0.1 pos (2/3).
    CHECK(average_precision_scores(shuffled) == doctest::Approx((1.0 + 2.0 / 3.0) / 2.0));

    CHECK_THROWS_AS(average_precision_scores({{0.5, false}}), Error);
}

TEST_CASE("scored and ranked average precision agree on random data") {
    std::mt19937 rng(404);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 3 + static_cast<int>(rng() % 12);
        GroundTruth gt;
        std::vector<std::pair<double, bool>> scored;
        RankedList list;
        bool any_pos = false;
        for (int i = 0; i < n; ++i) {
            bool pos = (rng() % 3) == 0 || (!any_pos && i == n - 1);
            any_pos = any_pos || pos;
            double score = unif(rng);  // Distinct with probability 1.
            std::string id = "v" + std::to_string(i);
            gt.set(id, "ev", pos ? GtLabel::positive : GtLabel::background);
            scored.push_back({score, pos});
            list.push_back({id, score});
        }
        sort_ranked(list);
        CHECK(average_precision(list, gt, "ev") ==
              doctest::Approx(average_precision_scores(scored)).epsilon(1e-12));
    }
}

TEST_CASE("mean average precision averages the defined values") {
    CHECK(mean_average_precision({1.0, 0.5, 0.0}) == doctest::Approx(0.5));
    CHECK(mean_average_precision({0.25}) == doctest::Approx(0.25));
    CHECK_THROWS_AS(mean_average_precision({}), Error);
}

TEST_CASE("score normalization maps the finite range onto [0, 1]") {
    RankedList list = make_list({{"a", 2.0}, {"b", 4.0}, {"c", 8.0}});
    RankedList out = normalize_scores(list);
    REQUIRE(out.size() == 3);
    CHECK(out[0].score == doctest::Approx(0.0));
    CHECK(out[1].score == doctest::Approx(1.0 / 3.0));
    CHECK(out[2].score == doctest::Approx(1.0));
    // Ids and order are untouched; only scores change.
    CHECK(out[0].video_id == "a");
    CHECK(out[2].video_id == "c");
}

TEST_CASE("score normalization handles degenerate lists") {
    // Constant scores carry no ranking information: everything maps to 0.5.
    RankedList constant = make_list({{"a", 3.0}, {"b", 3.0}});
    for (const RankedItem& item : normalize_scores(constant)) CHECK(item.score == 0.5);

    RankedList single = make_list({{"a", -7.0}});
    CHECK(normalize_scores(single)[0].score == 0.5);

    RankedList all_sentinel = make_list({{"a", -kInf}, {"b", -kInf}});
    for (const RankedItem& item : normalize_scores(all_sentinel)) CHECK(item.score == 0.5);

    CHECK_THROWS_AS(normalize_scores({}), Error);
}

TEST_CASE("score normalization floors the -inf sentinel below finite scores") {
    RankedList list = make_list({{"a", -kInf}, {"b", 0.0}, {"c", 10.0}});
    RankedList out = normalize_scores(list);
    CHECK(out[0].score == doctest::Approx(0.0));
    CHECK(out[1].score > 0.0);
    CHECK(out[1].score < out[2].score);
    CHECK(out[2].score == doctest::Approx(1.0));

    // Sentinels plus a constant finite score: the finite value stays strictly
    // above the floor instead of collapsing onto it.
    RankedList mixed = make_list({{"a", -kInf}, {"b", 5.0}, {"c", 5.0}});
    RankedList mixed_out = normalize_scores(mixed);
    CHECK(mixed_out[0].score == doctest::Approx(0.0));
    CHECK(mixed_out[1].score == doctest::Approx(1.0));
    CHECK(mixed_out[2].score == doctest::Approx(1.0));
}

TEST_CASE("score normalization preserves strict order") {
    std::mt19937 rng(505);
    std::normal_distribution<double> gauss(0.0, 3.0);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + static_cast<int>(rng() % 10);
        RankedList list;
        for (int i = 0; i < n; ++i) {
            double score = (rng() % 5 == 0) ? -kInf : gauss(rng);
            list.push_back({"v" + std::to_string(i), score});
        }
        bool any_finite = false;
        for (const RankedItem& item : list) any_finite |= std::isfinite(item.score);
        if (!any_finite) list[0].score = 1.0;
        RankedList out = normalize_scores(list);
        for (size_t i = 0; i < list.size(); ++i) {
            CHECK(out[i].score >= 0.0);
            CHECK(out[i].score <= 1.0);
            for (size_t j = 0; j < list.size(); ++j) {
                if (list[i].score < list[j].score ||
                    (list[i].score == -kInf && std::isfinite(list[j].score))) {
                    CHECK(out[i].score < out[j].score);
                }
            }
        }
    }
}

TEST_CASE("late fusion averages normalized scores") {
    RankedList a = make_list({{"x", 0.0}, {"y", 5.0}, {"z", 10.0}});
    RankedList b = make_list({{"x", 2.0}, {"y", 0.0}, {"z", 4.0}});
    // Normalized: a -> {0, 0.5, 1}, b -> {0.5, 0, 1}.
    // Means: x 0.25, y 0.25, z 1. Ties break by video id ascending.
    RankedList fused = late_fuse({a, b});
    REQUIRE(fused.size() == 3);
    CHECK(fused[0].video_id == "z");
    CHECK(fused[0].score == doctest::Approx(1.0));
    CHECK(fused[1].video_id == "x");
    CHECK(fused[1].score == doctest::Approx(0.25));
    CHECK(fused[2].video_id == "y");
    CHECK(fused[2].score == doctest::Approx(0.25));
}

TEST_CASE("late fusion is insensitive to input ordering within a list") {
    RankedList a = make_list({{"x", 1.0}, {"y", 2.0}, {"z", 3.0}});
    RankedList b = make_list({{"z", 9.0}, {"x", 1.0}, {"y", 4.0}});
    RankedList b_shuffled = make_list({{"y", 4.0}, {"z", 9.0}, {"x", 1.0}});
    RankedList first = late_fuse({a, b});
    RankedList second = late_fuse({a, b_shuffled});
    REQUIRE(first.size() == second.size());
    for (size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].video_id == second[i].video_id);
        CHECK(first[i].score == second[i].score);
    }
}

TEST_CASE("late fusion of a single list is its normalization, sorted") {
    RankedList a = make_list({{"x", 4.0}, {"y", 8.0}, {"z", 6.0}});
    RankedList fused = late_fuse({a});
    REQUIRE(fused.size() == 3);
    CHECK(fused[0].video_id == "y");
    CHECK(fused[0].score == doctest::Approx(1.0));
    CHECK(fused[1].video_id == "z");
    CHECK(fused[1].score == doctest::Approx(0.5));
    CHECK(fused[2].video_id == "x");
    CHECK(fused[2].score == doctest::Approx(0.0));
}

TEST_CASE("late fusion validates video-id sets") {
    RankedList a = make_list({{"x", 1.0}, {"y", 2.0}});
    RankedList missing = make_list({{"x", 1.0}, {"w", 2.0}});
    RankedList shorter = make_list({{"x", 1.0}});
    RankedList duplicated = make_list({{"x", 1.0}, {"x", 2.0}});
    CHECK_THROWS_AS(late_fuse({a, missing}), Error);
    CHECK_THROWS_AS(late_fuse({a, shorter}), Error);
    CHECK_THROWS_AS(late_fuse({duplicated, a}), Error);
    CHECK_THROWS_AS(late_fuse({a, duplicated}), Error);
    CHECK_THROWS_AS(late_fuse({}), Error);
}

TEST_CASE("ground truth defaults absent videos to background") {
    GroundTruth gt;
    gt.set("v1", "ev", GtLabel::positive);
    CHECK(gt.label("v1", "ev") == GtLabel::positive);
    CHECK(gt.label("v2", "ev") == GtLabel::background);
    CHECK(gt.label("v1", "other") == GtLabel::background);

    // Re-stating the same label is fine; contradicting it is not.
    gt.set("v1", "ev", GtLabel::positive);
    CHECK_THROWS_AS(gt.set("v1", "ev", GtLabel::related), Error);
}

TEST_CASE("ground truth enumerates events and labels in sorted order") {
    GroundTruth gt;
    gt.set("vb", "ev2", GtLabel::positive);
    gt.set("va", "ev2", GtLabel::positive);
    gt.set("vc", "ev2", GtLabel::related);
    gt.set("vd", "ev1", GtLabel::background);
    gt.set("ve", "ev1", GtLabel::positive);

    CHECK(gt.event_ids() == std::vector<std::string>{"ev1", "ev2"});
    CHECK(gt.positives("ev2") == std::vector<std::string>{"va", "vb"});
    CHECK(gt.positives("ev1") == std::vector<std::string>{"ve"});
    CHECK(gt.with_label("ev2", GtLabel::related) == std::vector<std::string>{"vc"});
    CHECK(gt.with_label("ev1", GtLabel::background) == std::vector<std::string>{"vd"});
    CHECK(gt.positives("no-such-event").empty());
}

TEST_CASE("ground truth survives a save/load round trip") {
    std::filesystem::path dir = fresh_dir("gt_roundtrip");
    GroundTruth gt;
    gt.set("v1", "ev1", GtLabel::positive);
    gt.set("v2", "ev1", GtLabel::related);
    gt.set("v3", "ev2", GtLabel::background);
    gt.save(dir / "gt.csv");

    GroundTruth loaded = GroundTruth::load(dir / "gt.csv");
    CHECK(loaded.label("v1", "ev1") == GtLabel::positive);
    CHECK(loaded.label("v2", "ev1") == GtLabel::related);
    CHECK(loaded.label("v3", "ev2") == GtLabel::background);
    CHECK(loaded.event_ids() == gt.event_ids());

    // A second save of the loaded table reproduces the file byte for byte.
    loaded.save(dir / "gt2.csv");
    std::ifstream f1(dir / "gt.csv", std::ios::binary);
    std::ifstream f2(dir / "gt2.csv", std::ios::binary);
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
    CHECK(!s1.empty());
}

TEST_CASE("ground truth parsing accepts comments and rejects malformed rows") {
    std::filesystem::path dir = fresh_dir("gt_parse");
    {
        std::ofstream out(dir / "ok.csv");
        out << "# header comment\n\nv1,ev1,positive\r\nv2,ev1,background\n";
    }
    GroundTruth gt = GroundTruth::load(dir / "ok.csv");
    CHECK(gt.label("v1", "ev1") == GtLabel::positive);
    CHECK(gt.label("v2", "ev1") == GtLabel::background);

    {
        std::ofstream out(dir / "bad_label.csv");
        out << "v1,ev1,maybe\n";
    }
    CHECK_THROWS_AS(GroundTruth::load(dir / "bad_label.csv"), Error);

    {
        std::ofstream out(dir / "bad_fields.csv");
        out << "v1,ev1\n";
    }
    CHECK_THROWS_AS(GroundTruth::load(dir / "bad_fields.csv"), Error);

    CHECK_THROWS_AS(GroundTruth::load(dir / "missing.csv"), Error);
}
