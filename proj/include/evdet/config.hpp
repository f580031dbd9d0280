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

#include "evdet/design_space.hpp"
#include "evdet/event_detector.hpp"
#include "evdet/rdsvm.hpp"

namespace evdet {

// One experiment: dataset locations, the design-axis ranges to sweep, the
// pipeline modes to run, and training hyperparameters. Parsed from a
// key=value text file; CLI flags override file values.
struct ExperimentConfig {
    // Dataset paths, resolved against the config file's directory.
    std::filesystem::path pool;
    std::filesystem::path kits;
    std::filesystem::path corpus;
    std::filesystem::path term_vectors;
    std::filesystem::path eval_model_vectors;
    std::filesystem::path eval_ground_truth;
    std::filesystem::path train_model_vectors;  // optional
    std::filesystem::path train_ground_truth;   // optional
    std::filesystem::path stopwords;            // optional
    std::filesystem::path pair_cache;           // optional
    std::filesystem::path out = "out";

    // Design-axis ranges; sweeps take the cross product, single-combo
    // commands the first entry of each axis.
    std::vector<ElmSource> elm_sources = all_elm_sources();
    std::vector<ClmSource> clm_sources = all_clm_sources();
    std::vector<BowWeighting> weightings = all_weightings();
    std::vector<MatrixOp> matrix_ops = all_matrix_ops();
    std::vector<Relevance> relevances = all_relevances();

    LmCaps caps;
    int top_k = 10;

    // "sweep" or pipeline mode names (T0, T10-pseudo-neg, T10-real-neg, P10,
    // R10, R10p), atoms joined with '+' for late fusion.
    std::vector<std::string> modes = {"sweep"};
    int draws = 10;
    int positives_per_draw = 10;
    int related_subset = 10;
    bool related_as_positive = false;
    bool emit_gnuplot = false;
    std::string emit_lists = "best";  // none | best | all

    Grids grids = default_grids();
    uint64_t seed = 1;
    int jobs = 0;  // 0 = logical CPU count

    // Cross product of the configured axes, detector nesting order.
    std::vector<DetectorConfig> detector_grid() const;
    // Ditto with relevance innermost.
    std::vector<FullConfig> full_grid() const;
    // First entry of each axis, for single-combo commands.
    FullConfig fixed() const;
};

ExperimentConfig default_config();

// Applies one key=value pair; unknown keys or unparsable values are config
// errors. Shared by the file parser and CLI overrides.
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);

// Parses the file, resolves relative paths against its directory, and
// verifies that every referenced input path exists.
ExperimentConfig load_config(const std::filesystem::path& path);

// Existence check for all non-empty input paths.
void validate_config_paths(const ExperimentConfig& cfg);

}  // namespace evdet
