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

#include "evdet/config.hpp"

#include <fstream>

#include "evdet/errors.hpp"
#include "evdet/str_util.hpp"

namespace evdet {
namespace {

long long parse_int(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw config_error(Errc::invalid_config, key + ": not an integer: " + value);
    }
}

double parse_num(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw config_error(Errc::invalid_config, key + ": not a number: " + value);
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw config_error(Errc::invalid_config, key + ": not a boolean: " + value);
}

std::vector<double> parse_num_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    for (const auto& piece : split(value, ',')) {
        std::string t = trim(piece);
        if (t.empty())
            throw config_error(Errc::invalid_config, key + ": empty list entry");
        out.push_back(parse_num(key, t));
    }
    if (out.empty()) throw config_error(Errc::invalid_config, key + ": empty list");
    return out;
}

// "all" or a comma list of axis value names.
template <typename T, typename Parse, typename All>
std::vector<T> parse_axis(const std::string& key, const std::string& value, Parse parse,
                          All all) {
    if (value == "all") return all();
    std::vector<T> out;
    for (const auto& piece : split(value, ',')) {
        std::string t = trim(piece);
        if (t.empty())
            throw config_error(Errc::invalid_config, key + ": empty list entry");
        out.push_back(parse(t));
    }
    if (out.empty()) throw config_error(Errc::invalid_config, key + ": empty list");
    return out;
}

}  // namespace

std::vector<DetectorConfig> ExperimentConfig::detector_grid() const {
    std::vector<DetectorConfig> out;
    for (ElmSource elm : elm_sources)
        for (ClmSource clm : clm_sources)
            for (BowWeighting w : weightings)
                for (MatrixOp op : matrix_ops)
                    out.push_back(DetectorConfig{elm, clm, w, op});
    return out;
}

std::vector<FullConfig> ExperimentConfig::full_grid() const {
    std::vector<FullConfig> out;
    for (const DetectorConfig& d : detector_grid())
        for (Relevance r : relevances) out.push_back(FullConfig{d, r});
    return out;
}

FullConfig ExperimentConfig::fixed() const {
    if (elm_sources.empty() || clm_sources.empty() || weightings.empty() ||
        matrix_ops.empty() || relevances.empty())
        throw config_error(Errc::invalid_config, "empty design axis");
    return FullConfig{
        DetectorConfig{elm_sources.front(), clm_sources.front(), weightings.front(),
                       matrix_ops.front()},
        relevances.front()};
}

ExperimentConfig default_config() { return ExperimentConfig{}; }

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
    if (key == "pool") cfg.pool = value;
    else if (key == "kits") cfg.kits = value;
    else if (key == "corpus") cfg.corpus = value;
    else if (key == "term_vectors") cfg.term_vectors = value;
    else if (key == "eval_model_vectors") cfg.eval_model_vectors = value;
    else if (key == "eval_ground_truth") cfg.eval_ground_truth = value;
    else if (key == "train_model_vectors") cfg.train_model_vectors = value;
    else if (key == "train_ground_truth") cfg.train_ground_truth = value;
    else if (key == "stopwords") cfg.stopwords = value;
    else if (key == "pair_cache") cfg.pair_cache = value;
    else if (key == "out") cfg.out = value;
    else if (key == "elm_source")
        cfg.elm_sources = parse_axis<ElmSource>(key, value, parse_elm_source,
                                                all_elm_sources);
    else if (key == "clm_source")
        cfg.clm_sources = parse_axis<ClmSource>(key, value, parse_clm_source,
                                                all_clm_sources);
    else if (key == "weighting")
        cfg.weightings = parse_axis<BowWeighting>(key, value, parse_weighting,
                                                  all_weightings);
    else if (key == "matrix_op")
        cfg.matrix_ops = parse_axis<MatrixOp>(key, value, parse_matrix_op,
                                              all_matrix_ops);
    else if (key == "relevance")
        cfg.relevances = parse_axis<Relevance>(key, value, parse_relevance,
                                               all_relevances);
    else if (key == "elm_cap") cfg.caps.elm = static_cast<int>(parse_int(key, value));
    else if (key == "clm_cap") cfg.caps.clm = static_cast<int>(parse_int(key, value));
    else if (key == "top_k") cfg.top_k = static_cast<int>(parse_int(key, value));
    else if (key == "mode") {
        cfg.modes.clear();
        for (const auto& piece : split(value, ',')) {
            std::string t = trim(piece);
            if (!t.empty()) cfg.modes.push_back(t);
        }
        if (cfg.modes.empty())
            throw config_error(Errc::invalid_config, "mode: empty list");
    } else if (key == "draws") cfg.draws = static_cast<int>(parse_int(key, value));
    else if (key == "positives_per_draw")
        cfg.positives_per_draw = static_cast<int>(parse_int(key, value));
    else if (key == "related_subset")
        cfg.related_subset = static_cast<int>(parse_int(key, value));
    else if (key == "related_as_positive")
        cfg.related_as_positive = parse_bool(key, value);
    else if (key == "emit_gnuplot") cfg.emit_gnuplot = parse_bool(key, value);
    else if (key == "emit_lists") {
        if (value != "none" && value != "best" && value != "all")
            throw config_error(Errc::invalid_config,
                               "emit_lists must be none, best, or all");
        cfg.emit_lists = value;
    } else if (key == "cost_grid") cfg.grids.cost_grid = parse_num_list(key, value);
    else if (key == "gamma_grid") cfg.grids.gamma_grid = parse_num_list(key, value);
    else if (key == "relevance_grid")
        cfg.grids.relevance_grid = parse_num_list(key, value);
    else if (key == "folds") cfg.grids.folds = static_cast<int>(parse_int(key, value));
    else if (key == "kernel") {
        if (value == "rbf") cfg.grids.kernel = KernelKind::rbf;
        else if (value == "linear") cfg.grids.kernel = KernelKind::linear;
        else throw config_error(Errc::invalid_config, "kernel must be rbf or linear");
    } else if (key == "cv_tol") cfg.grids.tol = parse_num(key, value);
    else if (key == "cv_max_iter") cfg.grids.max_iter = parse_int(key, value);
    else if (key == "seed")
        cfg.seed = static_cast<uint64_t>(parse_int(key, value));
    else if (key == "jobs") cfg.jobs = static_cast<int>(parse_int(key, value));
    else throw config_error(Errc::invalid_config, "unknown config key: " + key);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error(Errc::io_error, "cannot read config " + path.string());
    ExperimentConfig cfg = default_config();
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw config_error(Errc::invalid_config,
                               path.string() + ":" + std::to_string(lineno) +
                                   ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw config_error(Errc::invalid_config,
                               path.string() + ":" + std::to_string(lineno) +
                                   ": empty key");
        apply_config_entry(cfg, key, value);
    }

    std::filesystem::path base = path.parent_path();
    auto resolve = [&](std::filesystem::path& p) {
        if (!p.empty() && p.is_relative()) p = base / p;
    };
    resolve(cfg.pool);
    resolve(cfg.kits);
    resolve(cfg.corpus);
    resolve(cfg.term_vectors);
    resolve(cfg.eval_model_vectors);
    resolve(cfg.eval_ground_truth);
    resolve(cfg.train_model_vectors);
    resolve(cfg.train_ground_truth);
    resolve(cfg.stopwords);
    resolve(cfg.pair_cache);
    resolve(cfg.out);

    validate_config_paths(cfg);
    return cfg;
}

void validate_config_paths(const ExperimentConfig& cfg) {
    auto check = [](const char* key, const std::filesystem::path& p) {
        if (!p.empty() && !std::filesystem::exists(p))
            throw config_error(Errc::invalid_config,
                               std::string(key) + ": path does not exist: " + p.string());
    };
    check("pool", cfg.pool);
    check("kits", cfg.kits);
    check("corpus", cfg.corpus);
    check("term_vectors", cfg.term_vectors);
    check("eval_model_vectors", cfg.eval_model_vectors);
    check("eval_ground_truth", cfg.eval_ground_truth);
    check("train_model_vectors", cfg.train_model_vectors);
    check("train_ground_truth", cfg.train_ground_truth);
    check("stopwords", cfg.stopwords);
    // pair_cache and out are created on demand.
}

}  // namespace evdet
