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
#include <string>
#include <vector>

#include "evdet/design_space.hpp"
#include "evdet/similarity.hpp"
#include "evdet/text_models.hpp"

namespace evdet {

struct LmCaps {
    int elm = 30;  // N
    int clm = 50;  // M
};

struct DetectorEntry {
    int concept_index = 0;
    double score = 0.0;
};

// Top-K concepts and scores for one event, plus the design choice that built
// it. n_concepts records the pool size the concept indices refer to.
struct EventDetector {
    std::string event_id;
    DetectorConfig config;
    int n_concepts = 0;
    std::vector<DetectorEntry> entries;  // sorted score non-increasing
};

struct ModelVector {
    std::string video_id;
    std::vector<double> values;  // length N_c, finite, >= 0 after ingestion
};

struct RankedItem {
    std::string video_id;
    double score = 0.0;
};

// Sorted by score non-increasing, ties by video_id ascending.
using RankedList = std::vector<RankedItem>;

// Component-wise mean of keyframe-level vectors.
std::vector<double> aggregate_keyframes(const std::vector<std::vector<double>>& frames);

// Per-concept scores for one detector configuration, sharing ELM, CLM, and
// similarity-matrix work across the whole configuration batch. Failures on a
// single concept or source degrade to a zero score with a warning instead of
// aborting.
struct ComboConceptScores {
    DetectorConfig config;
    std::vector<double> scores;  // length = pool size
    std::vector<std::string> warnings;
};

std::vector<ComboConceptScores> score_design_grid(
    const EventDescription& event, const std::vector<ConceptEntry>& pool,
    const std::vector<DetectorConfig>& configs, const TermVectorStore& store,
    const CorpusSet& corpora, const LmCaps& caps, const Tokenizer& tok,
    PairCache* cache = nullptr);

// Top-K assembly from a full per-concept score vector; ties broken by
// concept_index ascending.
EventDetector detector_from_scores(const std::string& event_id,
                                   const DetectorConfig& config,
                                   const std::vector<double>& scores, int top_k);

EventDetector build_detector(const EventDescription& event,
                             const std::vector<ConceptEntry>& pool,
                             const DetectorConfig& config, int top_k,
                             const TermVectorStore& store, const CorpusSet& corpora,
                             const LmCaps& caps, const Tokenizer& tok,
                             PairCache* cache = nullptr,
                             std::vector<std::string>* warnings = nullptr);

// Relevance of one video to the detector; higher = more relevant for every
// measure (distances are negated). Returns -infinity when either the detector
// scores or the selected model-vector entries are all zero.
double video_relevance(const EventDetector& det, const ModelVector& mv, Relevance rel);

RankedList rank_videos(const EventDetector& det, const std::vector<ModelVector>& collection,
                       Relevance rel);

// Sorts in place into RankedList order (score desc, id asc).
void sort_ranked(RankedList& list);

// Model-vector file: "#Nc=<int>" header then CSV rows video_id,v0,v1,...
// Duplicate video ids are keyframe rows and are averaged; negative entries are
// clamped to 0 at ingestion.
std::vector<ModelVector> load_model_vectors(const std::filesystem::path& path);
void save_model_vectors(const std::filesystem::path& path,
                        const std::vector<ModelVector>& vectors);

void save_detector(const std::filesystem::path& path, const EventDetector& det);
EventDetector load_detector(const std::filesystem::path& path);

void save_ranked_list(const std::filesystem::path& path, const RankedList& list);
RankedList load_ranked_list(const std::filesystem::path& path);

}  // namespace evdet
