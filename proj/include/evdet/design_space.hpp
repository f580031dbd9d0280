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

#include <string>
#include <vector>

namespace evdet {

// The detector design space has five independent axes:
//   - which event-kit text feeds the event language model,
//   - which document source feeds each concept language model,
//   - how concept term weights are computed,
//   - how the term-similarity matrix is reduced to one score,
//   - how a detector is compared against a video model vector.

enum class ElmSource { title, visual, audio_visual };

enum class ClmSource { title, google, wikipedia };

enum class BowWeighting { tfidf, raw_count };

enum class MatrixOp { spectral, inf_norm, frobenius, max_entry, hausdorff };

enum class Relevance { cosine, hist_intersect, kullback, chi2, euclidean };

// One detector-building configuration (everything except the relevance
// measure, which only enters at ranking time).
struct DetectorConfig {
    ElmSource elm_source = ElmSource::audio_visual;
    ClmSource clm_source = ClmSource::google;
    BowWeighting weighting = BowWeighting::raw_count;
    MatrixOp op = MatrixOp::hausdorff;

    bool operator==(const DetectorConfig&) const = default;
};

struct FullConfig {
    DetectorConfig detector;
    Relevance relevance = Relevance::cosine;

    bool operator==(const FullConfig&) const = default;
};

const char* to_string(ElmSource v);
const char* to_string(ClmSource v);
const char* to_string(BowWeighting v);
const char* to_string(MatrixOp v);
const char* to_string(Relevance v);

ElmSource parse_elm_source(const std::string& s);
ClmSource parse_clm_source(const std::string& s);
BowWeighting parse_weighting(const std::string& s);
MatrixOp parse_matrix_op(const std::string& s);
Relevance parse_relevance(const std::string& s);

std::vector<ElmSource> all_elm_sources();
std::vector<ClmSource> all_clm_sources();
std::vector<BowWeighting> all_weightings();
std::vector<MatrixOp> all_matrix_ops();
std::vector<Relevance> all_relevances();

// All 90 detector configurations, enumerated in a fixed nesting order
// (elm, clm, weighting, op). Sweeps and reports rely on this order.
std::vector<DetectorConfig> enumerate_detector_configs();

// All 450 full configurations: detector order above, relevance innermost.
std::vector<FullConfig> enumerate_full_configs();

// "Visual-Google-NoTfIdf-Hausdorff" style tag; parse round-trips it.
std::string combo_tag(const DetectorConfig& c);
DetectorConfig parse_combo_tag(const std::string& tag);

}  // namespace evdet
