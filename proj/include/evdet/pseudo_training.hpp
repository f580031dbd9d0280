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
#include <map>
#include <string>
#include <vector>

#include "evdet/event_detector.hpp"
#include "evdet/rdsvm.hpp"

namespace evdet {

// A detector embedded in concept space: the top-K scores at their concept
// indices, zero elsewhere. Scores are stored raw; training normalizes.
struct PseudoSample {
    std::string event_id;
    DetectorConfig provenance;
    std::vector<double> vector;  // length N_c
};

enum class NegativesMode { pseudo, real };

// One sample per non-degenerate design combo. Title/Title combos coincide for
// every matrix operator and collapse to one canonical sample; identical
// detector vectors are deduplicated (first combo wins); all-zero detectors are
// skipped with a warning.
std::vector<PseudoSample> generate_pseudo_positives(
    const EventDescription& event, const std::vector<ConceptEntry>& pool,
    const std::vector<DetectorConfig>& combos, int top_k, const TermVectorStore& store,
    const CorpusSet& corpora, const LmCaps& caps, const Tokenizer& tok,
    PairCache* cache = nullptr, std::vector<std::string>* warnings = nullptr);

// pseudo mode: union of the other events' pseudo-positive vectors, minus any
// vector identical to one of this event's own positives. real mode: the
// background model vectors.
std::vector<std::vector<double>> assemble_negatives(
    const std::string& event_id, NegativesMode mode,
    const std::map<std::string, std::vector<PseudoSample>>& all_pseudo,
    const std::vector<ModelVector>& background);

struct PseudoTrainResult {
    SvmModel model;
    CvResult cv;
};

// Standard SVM (all u = 0) on l2-normalized pseudo-positives vs l2-normalized
// negatives. Apply the model to l2-normalized model vectors.
PseudoTrainResult train_pseudo_detector(const std::vector<PseudoSample>& pseudo_positives,
                                        const std::vector<std::vector<double>>& negatives,
                                        const Grids& grids, uint64_t seed);

// Copy of v scaled to unit l2 norm; all-zero input is returned unchanged.
std::vector<double> l2_normalized(const std::vector<double>& v);

// CSV rows event_id,combo_tag,idx:score;... with a #Nc=<int> header.
void save_pseudo_samples(const std::filesystem::path& path,
                         const std::vector<PseudoSample>& samples);
std::map<std::string, std::vector<PseudoSample>> load_pseudo_samples(
    const std::filesystem::path& path);

}  // namespace evdet
