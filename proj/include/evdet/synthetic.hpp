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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "evdet/event_detector.hpp"
#include "evdet/fusion_eval.hpp"
#include "evdet/similarity.hpp"
#include "evdet/text_models.hpp"

namespace evdet {

// Recipe for a planted-association benchmark: each event owns a set of
// concepts; its kit, the concept corpora, and the positive videos all share
// that vocabulary, so a correct pipeline can recover the planted positives.
struct SyntheticSpec {
    int events = 10;
    int concepts = 200;
    int videos = 500;  // eval partition total: positives + related + background

    // Explicit event -> concept associations; empty means contiguous blocks of
    // planted_per_event concepts per event.
    std::vector<std::vector<int>> planted;
    int planted_per_event = 5;

    double sigma = 0.05;  // model-vector noise level, >= 0
    int vocab_size = 150;  // unrelated noise words mixed into the corpora
    uint64_t seed = 1;

    int eval_positives = 20;  // per event
    int eval_related = 10;    // per event

    int train_positives = 25;  // per event
    int train_related = 25;    // per event
    int train_background = 200;

    // "google-style" or "wikipedia-style": that source's documents for planted
    // concepts are rewired to the next event's vocabulary, so design combos
    // reading the corrupted source must rank below combos reading the intact
    // one. Empty disables corruption.
    std::string corrupt_source;
};

struct SyntheticDataset {
    std::vector<ConceptEntry> pool;
    std::vector<EventDescription> kits;
    CorpusSet corpora;
    TermVectorStore store;
    std::vector<ModelVector> eval_videos;
    GroundTruth eval_gt;
    std::vector<ModelVector> train_videos;
    GroundTruth train_gt;
    std::vector<std::vector<int>> planted;  // resolved per-event concept indices
};

// Deterministic in spec.seed. Text content (kits, corpora, term vectors)
// depends only on the text-shaped fields, never on sigma or video counts, and
// video draws are sigma-invariant apart from the noise scale, so noise sweeps
// reuse identical text and compare rankings of comparably drawn videos.
SyntheticDataset build_synthetic(const SyntheticSpec& spec);

// Writes concepts.tsv, kits/, corpus/, term_vectors.txt, the two model-vector
// and ground-truth files, and a ready-to-run config.txt under out_dir.
void write_synthetic(const SyntheticDataset& ds, const SyntheticSpec& spec,
                     const std::filesystem::path& out_dir);

void generate_synthetic(const SyntheticSpec& spec, const std::filesystem::path& out_dir);

}  // namespace evdet
