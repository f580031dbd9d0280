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

namespace evdet {

enum class KernelKind { rbf, linear };

struct LabeledSample {
    std::vector<double> features;
    int y = 1;  // +1 or -1
    int u = 0;  // 1 marks a related (weighted-slack) sample
};

// One solver configuration. The per-sample box constraint is
// C_i = cost * (u_i == 1 ? relevance : 1).
struct TrainParams {
    KernelKind kernel = KernelKind::rbf;
    double cost = 1.0;
    double gamma = 1.0;
    double relevance = 1.0;  // in (0, 1]
    double tol = 1e-3;
    long long max_iter = 10000000;
};

struct SupportVector {
    double alpha = 0.0;
    int y = 1;
    int u = 0;
    std::vector<double> x;
};

struct SvmModel {
    KernelKind kernel = KernelKind::rbf;
    double gamma = 1.0;
    double cost = 1.0;
    double relevance = 1.0;
    double bias = 0.0;
    std::vector<SupportVector> svs;  // alpha > 0 only
};

struct TrainResult {
    SvmModel model;
    std::vector<double> alpha;  // full dual vector, one entry per input sample
    double dual_objective = 0.0;  // maximization value: e'a - a'Qa/2
    double kkt_gap = 0.0;         // final working-set violation m(a) - M(a)
    long long iterations = 0;
};

double rbf_kernel(const std::vector<double>& x, const std::vector<double>& z, double gamma);
double kernel_value(KernelKind kind, const std::vector<double>& x,
                    const std::vector<double>& z, double gamma);

// SMO with maximal-violating-pair selection over per-sample boxes.
TrainResult train(const std::vector<LabeledSample>& data, const TrainParams& params);

double predict(const SvmModel& model, const std::vector<double>& x);

struct Grids {
    std::vector<double> cost_grid;
    std::vector<double> gamma_grid;
    std::vector<double> relevance_grid;
    int folds = 5;
    KernelKind kernel = KernelKind::rbf;
    double tol = 1e-3;
    long long max_iter = 10000000;
    int jobs = 1;  // concurrent grid cells
};

// C in {2^-5, 2^-3, ..., 2^15}, gamma in {2^-15, ..., 2^3},
// relevance in {0.1, ..., 1.0}, 5 stratified folds.
Grids default_grids();

struct CvResult {
    TrainParams best;
    double mean_ap = 0.0;
};

// Two-stage model selection: grid search over (cost, gamma) with relevance
// fixed at 1, then, when tune_relevance is set and related samples exist, a
// line search over the relevance grid at the stage-1 optimum. Selection
// criterion is mean fold AP (positives = y == +1 with u == 0); a fold whose
// training fails scores 0, a fold without positives is excluded.
CvResult cross_validate(const std::vector<LabeledSample>& data, const Grids& grids,
                        uint64_t seed, bool tune_relevance);

enum class RelatedBranch { none, positive, negative };

struct AutoTrainResult {
    SvmModel model;
    RelatedBranch branch = RelatedBranch::none;
    TrainParams params;
    double cv_ap = 0.0;
};

// Trains one branch with the related vectors as weighted positives and one
// with them as weighted negatives, keeps the branch with the higher
// cross-validated AP (ties to the negative branch), and retrains it on the
// full set with the winning parameters.
AutoTrainResult auto_relevance_train(const std::vector<std::vector<double>>& positives,
                                     const std::vector<std::vector<double>>& negatives,
                                     const std::vector<std::vector<double>>& related,
                                     const Grids& grids, uint64_t seed);

// The k vectors nearest (Euclidean) to the component-wise median vector, ties
// by input order.
std::vector<std::vector<double>> select_related_subset(
    const std::vector<std::vector<double>>& related, int k);

struct Dataset {
    std::vector<std::string> ids;
    std::vector<LabeledSample> samples;
};

// CSV rows: video_id,y,u,f0,f1,...
Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const std::filesystem::path& path, const Dataset& dataset);

// Textual model dump, bit-exact on reload.
void save_model(const std::filesystem::path& path, const SvmModel& model);
SvmModel load_model(const std::filesystem::path& path);

}  // namespace evdet
