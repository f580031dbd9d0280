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

#include "evdet/config.hpp"
#include "evdet/event_detector.hpp"
#include "evdet/fusion_eval.hpp"
#include "evdet/pseudo_training.hpp"
#include "evdet/similarity.hpp"
#include "evdet/synthetic.hpp"
#include "evdet/text_models.hpp"

namespace evdet {

// All experiment inputs resident in memory.
struct DatasetBundle {
    std::vector<ConceptEntry> pool;
    std::vector<EventDescription> kits;
    CorpusSet corpora;
    TermVectorStore store;
    Tokenizer tok;
    std::vector<ModelVector> eval_videos;
    GroundTruth eval_gt;
    std::vector<ModelVector> train_videos;  // empty when the config has none
    GroundTruth train_gt;
};

DatasetBundle load_bundle(const ExperimentConfig& cfg);
DatasetBundle bundle_from_synthetic(SyntheticDataset ds);

// Per-event concept scores for every detector combo in the grid; the costly
// text half of a sweep, reusable across ranking passes.
struct EventScoreTable {
    std::string event_id;
    std::vector<ComboConceptScores> combos;  // grid order
};

std::vector<EventScoreTable> compute_design_scores(const DatasetBundle& ds,
                                                   const std::vector<DetectorConfig>& grid,
                                                   const LmCaps& caps, int jobs,
                                                   PairCache* cache,
                                                   std::vector<std::string>* warnings);

struct SweepRow {
    FullConfig config;
    std::vector<double> event_aps;  // NaN = undefined for that event
    double map = 0.0;               // mean of defined APs, NaN if none
};

struct SweepResult {
    std::vector<std::string> event_ids;
    std::vector<SweepRow> rows;  // MAP non-increasing, grid order on ties
    std::vector<std::string> warnings;
};

SweepResult sweep_from_scores(const std::vector<EventScoreTable>& tables,
                              const std::vector<Relevance>& relevances,
                              const std::vector<ModelVector>& eval_videos,
                              const GroundTruth& gt, int top_k, const ApOptions& options,
                              int jobs);

// Computes tables, evaluates every configured combination, and writes
// sweep.csv, sweep.txt, optional gnuplot data, and ranked lists under cfg.out.
// Re-running with identical config and seed is byte-identical.
SweepResult run_sweep(const ExperimentConfig& cfg, const DatasetBundle& ds);

// One ranked list per seeded draw for one event. Deterministic single-list
// atoms (T0, T10) hold exactly one draw.
struct DrawLists {
    std::string event_id;
    std::vector<RankedList> draws;
};

// Inputs for the few-example protocol, already in their final feature space;
// nothing here normalizes. Videos are ranked by SVM decision value.
struct FewShotEvent {
    std::string event_id;
    std::vector<std::vector<double>> positive_pool;
    std::vector<std::vector<double>> related_pool;  // near-miss videos
    std::vector<std::vector<double>> pseudo_pool;   // pseudo-positive vectors
    std::vector<std::vector<double>> negatives;
};

struct FewShotProblem {
    std::vector<FewShotEvent> events;
    std::vector<ModelVector> eval_videos;
    Grids grids;
    int draws = 10;
    int positives_per_draw = 10;
    int related_subset = 10;
    uint64_t seed = 1;
    int jobs = 1;
    std::vector<std::string>* warnings = nullptr;  // optional sink
};

enum class FewShotVariant { p10, r10, r10p };

// P10: plain SVM on the drawn positives vs the event's negatives. R10:
// auto_relevance_train with the related subset nearest the related-pool
// median. R10p: ditto with pseudo-positives as the related pool. Each draw
// samples positives_per_draw positives without replacement; a failed draw
// yields an empty list and a warning.
std::vector<DrawLists> run_few_shot(const FewShotProblem& problem, FewShotVariant variant);

struct ModeEvaluation {
    std::vector<std::string> event_ids;
    std::vector<std::vector<double>> draw_aps;  // [event][draw], NaN undefined
    std::vector<double> event_aps;              // mean over defined draw APs
    double map = 0.0;                           // mean over defined event APs
};

ModeEvaluation evaluate_draw_lists(const std::vector<DrawLists>& lists,
                                   const GroundTruth& gt, const ApOptions& options);

// Per-draw late fusion across atoms. Single-draw atoms broadcast; an empty
// (failed) constituent empties the fused draw.
std::vector<DrawLists> fuse_draws(const std::vector<std::vector<DrawLists>>& atoms);

// One atom: T0, T10-pseudo-neg (alias T10), T10-real-neg, P10, R10, or R10p.
std::vector<DrawLists> run_mode_atom(const ExperimentConfig& cfg, const DatasetBundle& ds,
                                     const std::string& atom,
                                     std::vector<std::string>* warnings);

struct ModeResult {
    std::string mode;
    std::vector<DrawLists> lists;
    ModeEvaluation eval;
    std::vector<std::string> warnings;
};

// Executes a mode expression (atoms joined with '+', late-fused per draw) and
// writes report.csv, report.txt, ranked lists, and optional gnuplot data
// under cfg.out/<mode>/ .
ModeResult run_mode(const ExperimentConfig& cfg, const DatasetBundle& ds,
                    const std::string& mode);

// Report round-trip, shared with the `report` subcommand.
void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result);
void write_sweep_txt(const std::filesystem::path& path, const SweepResult& result);
void write_sweep_dat(const std::filesystem::path& path, const SweepResult& result);
SweepResult load_sweep_csv(const std::filesystem::path& path);

void write_mode_csv(const std::filesystem::path& path, const ModeResult& result);
void write_mode_txt(const std::filesystem::path& path, const ModeResult& result);
void write_mode_dat(const std::filesystem::path& path, const ModeResult& result);
ModeResult load_mode_csv(const std::filesystem::path& path);

// Regenerates the text table (and gnuplot data) next to an existing CSV of
// either report kind.
void regenerate_report(const std::filesystem::path& csv_path, bool emit_gnuplot);

}  // namespace evdet
