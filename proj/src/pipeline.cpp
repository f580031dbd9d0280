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

#include "evdet/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <optional>

#include "evdet/errors.hpp"
#include "evdet/rng.hpp"
#include "evdet/str_util.hpp"
#include "evdet/thread_pool.hpp"

namespace evdet {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_defined(const std::vector<double>& values) {
    double sum = 0.0;
    int n = 0;
    for (double x : values) {
        if (!std::isnan(x)) {
            sum += x;
            ++n;
        }
    }
    return n > 0 ? sum / n : kNaN;
}

std::string ap_cell(double ap) { return std::isnan(ap) ? "NA" : format_double(ap); }

double parse_ap_cell(const std::string& s) { return s == "NA" ? kNaN : std::stod(s); }

std::string fixed_cell(double ap) {
    return std::isnan(ap) ? std::string("NA") : format_fixed(ap, 4);
}

void require_path(const char* key, const std::filesystem::path& p) {
    if (p.empty())
        throw config_error(Errc::invalid_config,
                           std::string("config key '") + key + "' is required here");
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw data_error(Errc::io_error, "cannot write " + path.string());
    return out;
}

// Left-pads cells to per-column widths; every report table goes through this
// so reruns stay byte-identical.
std::string format_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<size_t> width;
    for (const auto& row : rows) {
        if (width.size() < row.size()) width.resize(row.size(), 0);
        for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::string out;
    for (const auto& row : rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out += "  ";
            out += row[c];
            if (c + 1 < row.size())
                out.append(width[c] - row[c].size(), ' ');
        }
        out += '\n';
    }
    return out;
}

std::string relevance_suffix(const FullConfig& fc) {
    return combo_tag(fc.detector) + "-" + to_string(fc.relevance);
}

std::string normalize_atom(const std::string& atom) {
    return atom == "T10" ? std::string("T10-pseudo-neg") : atom;
}

std::vector<ModelVector> background_for(const std::vector<ModelVector>& train_videos,
                                        const GroundTruth& gt, const std::string& event_id) {
    std::vector<ModelVector> out;
    for (const auto& mv : train_videos)
        if (gt.label(mv.video_id, event_id) == GtLabel::background) out.push_back(mv);
    return out;
}

}  // namespace

DatasetBundle load_bundle(const ExperimentConfig& cfg) {
    require_path("pool", cfg.pool);
    require_path("kits", cfg.kits);
    require_path("corpus", cfg.corpus);
    require_path("term_vectors", cfg.term_vectors);
    require_path("eval_model_vectors", cfg.eval_model_vectors);
    require_path("eval_ground_truth", cfg.eval_ground_truth);
    if (cfg.train_model_vectors.empty() != cfg.train_ground_truth.empty())
        throw config_error(Errc::invalid_config,
                           "train_model_vectors and train_ground_truth go together");

    DatasetBundle ds;
    ds.pool = load_concept_pool(cfg.pool);
    ds.kits = load_event_kits(cfg.kits);
    ds.corpora = CorpusSet::load(cfg.corpus);
    ds.store = TermVectorStore::load(cfg.term_vectors);
    ds.tok = cfg.stopwords.empty() ? Tokenizer() : Tokenizer::from_file(cfg.stopwords);
    ds.eval_videos = load_model_vectors(cfg.eval_model_vectors);
    ds.eval_gt = GroundTruth::load(cfg.eval_ground_truth);
    if (!cfg.train_model_vectors.empty()) {
        ds.train_videos = load_model_vectors(cfg.train_model_vectors);
        ds.train_gt = GroundTruth::load(cfg.train_ground_truth);
    }
    if (ds.kits.empty()) throw data_error(Errc::empty_collection, "no event kits");
    return ds;
}

DatasetBundle bundle_from_synthetic(SyntheticDataset ds) {
    DatasetBundle out;
    out.pool = std::move(ds.pool);
    out.kits = std::move(ds.kits);
    out.corpora = std::move(ds.corpora);
    out.store = std::move(ds.store);
    out.eval_videos = std::move(ds.eval_videos);
    out.eval_gt = std::move(ds.eval_gt);
    out.train_videos = std::move(ds.train_videos);
    out.train_gt = std::move(ds.train_gt);
    return out;
}

std::vector<EventScoreTable> compute_design_scores(const DatasetBundle& ds,
                                                   const std::vector<DetectorConfig>& grid,
                                                   const LmCaps& caps, int jobs,
                                                   PairCache* cache,
                                                   std::vector<std::string>* warnings) {
    if (ds.kits.empty()) throw data_error(Errc::empty_collection, "no event kits");
    if (grid.empty()) throw config_error(Errc::empty_list, "empty detector grid");
    std::vector<EventScoreTable> tables(ds.kits.size());
    parallel_for(ds.kits.size(), jobs, [&](size_t e) {
        tables[e].event_id = ds.kits[e].event_id;
        tables[e].combos = score_design_grid(ds.kits[e], ds.pool, grid, ds.store,
                                             ds.corpora, caps, ds.tok, cache);
    });
    if (warnings) {
        for (const auto& table : tables)
            for (const auto& combo : table.combos)
                warnings->insert(warnings->end(), combo.warnings.begin(),
                                 combo.warnings.end());
    }
    return tables;
}

SweepResult sweep_from_scores(const std::vector<EventScoreTable>& tables,
                              const std::vector<Relevance>& relevances,
                              const std::vector<ModelVector>& eval_videos,
                              const GroundTruth& gt, int top_k, const ApOptions& options,
                              int jobs) {
    if (tables.empty()) throw data_error(Errc::empty_input, "no score tables");
    if (relevances.empty()) throw config_error(Errc::empty_list, "no relevance measures");
    if (eval_videos.empty())
        throw data_error(Errc::empty_collection, "no evaluation videos");
    size_t n_events = tables.size();
    size_t n_combos = tables.front().combos.size();
    for (const auto& t : tables)
        if (t.combos.size() != n_combos)
            throw data_error(Errc::dimension_mismatch, "ragged score tables");

    SweepResult result;
    for (const auto& t : tables) result.event_ids.push_back(t.event_id);

    // The detector depends only on the combo, so build each once and share it
    // across the relevance measures.
    std::vector<std::vector<std::optional<EventDetector>>> detectors(
        n_events, std::vector<std::optional<EventDetector>>(n_combos));
    for (size_t e = 0; e < n_events; ++e) {
        for (size_t c = 0; c < n_combos; ++c) {
            const auto& combo = tables[e].combos[c];
            try {
                detectors[e][c] = detector_from_scores(tables[e].event_id, combo.config,
                                                       combo.scores, top_k);
            } catch (const Error& err) {
                result.warnings.push_back("event " + tables[e].event_id + " combo " +
                                          combo_tag(combo.config) + ": " + err.what());
            }
        }
    }

    size_t n_rows = n_combos * relevances.size();
    std::vector<SweepRow> rows(n_rows);
    std::vector<std::vector<std::string>> row_warnings(n_rows);
    parallel_for(n_rows, jobs, [&](size_t r) {
        size_t c = r / relevances.size();
        Relevance rel = relevances[r % relevances.size()];
        SweepRow& row = rows[r];
        row.config = FullConfig{tables.front().combos[c].config, rel};
        row.event_aps.assign(n_events, kNaN);
        for (size_t e = 0; e < n_events; ++e) {
            if (!detectors[e][c]) continue;
            try {
                RankedList list = rank_videos(*detectors[e][c], eval_videos, rel);
                row.event_aps[e] =
                    average_precision(list, gt, tables[e].event_id, options);
            } catch (const Error& err) {
                if (err.code() == Errc::no_positives) continue;  // AP undefined
                row_warnings[r].push_back("combo " + relevance_suffix(row.config) +
                                          " event " + tables[e].event_id + ": " +
                                          err.what());
            }
        }
        row.map = mean_defined(row.event_aps);
    });
    for (auto& w : row_warnings)
        result.warnings.insert(result.warnings.end(), w.begin(), w.end());

    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        bool da = !std::isnan(a.map), db = !std::isnan(b.map);
        if (da != db) return da;
        return da && a.map > b.map;
    });
    result.rows = std::move(rows);
    return result;
}

SweepResult run_sweep(const ExperimentConfig& cfg, const DatasetBundle& ds) {
    namespace fs = std::filesystem;
    int jobs = resolve_jobs(cfg.jobs);
    ApOptions options{cfg.related_as_positive};

    PairCache cache;
    bool use_cache = !cfg.pair_cache.empty();
    if (use_cache) cache = PairCache::load(cfg.pair_cache);

    std::vector<std::string> warnings;
    std::vector<DetectorConfig> grid = cfg.detector_grid();
    auto tables = compute_design_scores(ds, grid, cfg.caps, jobs,
                                        use_cache ? &cache : nullptr, &warnings);
    SweepResult result = sweep_from_scores(tables, cfg.relevances, ds.eval_videos,
                                           ds.eval_gt, cfg.top_k, options, jobs);
    result.warnings.insert(result.warnings.begin(), warnings.begin(), warnings.end());

    if (use_cache) cache.save(cfg.pair_cache);

    fs::create_directories(cfg.out);
    write_sweep_csv(cfg.out / "sweep.csv", result);
    write_sweep_txt(cfg.out / "sweep.txt", result);
    if (cfg.emit_gnuplot) write_sweep_dat(cfg.out / "sweep.dat", result);
    if (!result.warnings.empty()) {
        auto out = open_out(cfg.out / "sweep_warnings.txt");
        for (const auto& w : result.warnings) out << w << "\n";
    }

    size_t emit_rows = 0;
    if (cfg.emit_lists == "best" && !result.rows.empty()) emit_rows = 1;
    if (cfg.emit_lists == "all") emit_rows = result.rows.size();
    for (size_t r = 0; r < emit_rows; ++r) {
        const SweepRow& row = result.rows[r];
        auto combo_it = std::find_if(
            tables.front().combos.begin(), tables.front().combos.end(),
            [&](const ComboConceptScores& c) { return c.config == row.config.detector; });
        size_t c = static_cast<size_t>(combo_it - tables.front().combos.begin());
        fs::path dir = cfg.out / "lists" / relevance_suffix(row.config);
        fs::create_directories(dir);
        for (size_t e = 0; e < tables.size(); ++e) {
            const auto& combo = tables[e].combos[c];
            try {
                EventDetector det = detector_from_scores(tables[e].event_id, combo.config,
                                                         combo.scores, cfg.top_k);
                RankedList list =
                    rank_videos(det, ds.eval_videos, row.config.relevance);
                save_ranked_list(dir / (tables[e].event_id + ".csv"), list);
            } catch (const Error&) {
                // already reported during the sweep
            }
        }
    }
    return result;
}

std::vector<DrawLists> run_few_shot(const FewShotProblem& problem, FewShotVariant variant) {
    if (problem.events.empty()) throw data_error(Errc::empty_input, "no events");
    if (problem.eval_videos.empty())
        throw data_error(Errc::empty_collection, "no evaluation videos");
    if (problem.draws < 1)
        throw config_error(Errc::invalid_argument, "draws must be >= 1");
    if (problem.positives_per_draw < 1)
        throw config_error(Errc::invalid_argument, "positives_per_draw must be >= 1");

    size_t n_events = problem.events.size();
    size_t n_draws = static_cast<size_t>(problem.draws);

    // The related subset is a deterministic function of the pool, so it is
    // shared by all draws of an event.
    std::vector<std::vector<std::vector<double>>> related_sel(n_events);
    for (size_t e = 0; e < n_events; ++e) {
        const std::vector<std::vector<double>>* pool = nullptr;
        if (variant == FewShotVariant::r10) pool = &problem.events[e].related_pool;
        if (variant == FewShotVariant::r10p) pool = &problem.events[e].pseudo_pool;
        if (pool && !pool->empty()) {
            int k = std::min<int>(problem.related_subset, static_cast<int>(pool->size()));
            if (k > 0) related_sel[e] = select_related_subset(*pool, k);
        }
    }

    std::vector<std::vector<RankedList>> slots(n_events,
                                               std::vector<RankedList>(n_draws));
    std::vector<std::string> warn_slots(n_events * n_draws);
    parallel_for(n_events * n_draws, problem.jobs, [&](size_t t) {
        size_t e = t / n_draws;
        size_t d = t % n_draws;
        const FewShotEvent& ev = problem.events[e];
        try {
            if (ev.positive_pool.empty())
                throw data_error(Errc::empty_input, "no training positives");
            if (ev.negatives.empty())
                throw data_error(Errc::empty_input, "no training negatives");

            Rng rng(mix_seed(problem.seed, 0x64726177ULL, e, d));
            std::vector<size_t> order(ev.positive_pool.size());
            for (size_t i = 0; i < order.size(); ++i) order[i] = i;
            rng.shuffle(order);
            size_t k = std::min(static_cast<size_t>(problem.positives_per_draw),
                                order.size());
            order.resize(k);
            std::sort(order.begin(), order.end());
            std::vector<std::vector<double>> positives;
            positives.reserve(k);
            for (size_t i : order) positives.push_back(ev.positive_pool[i]);

            Grids grids = problem.grids;
            grids.jobs = 1;  // draws already run in parallel
            uint64_t cv_seed = mix_seed(problem.seed, 0x63767364ULL, e, d);
            AutoTrainResult trained =
                auto_relevance_train(positives, ev.negatives, related_sel[e], grids,
                                     cv_seed);

            RankedList list;
            list.reserve(problem.eval_videos.size());
            for (const auto& mv : problem.eval_videos)
                list.push_back(RankedItem{mv.video_id, predict(trained.model, mv.values)});
            sort_ranked(list);
            slots[e][d] = std::move(list);
        } catch (const Error& err) {
            warn_slots[t] = problem.events[e].event_id + " draw " + std::to_string(d) +
                            ": " + err.what();
        }
    });

    std::vector<DrawLists> out(n_events);
    for (size_t e = 0; e < n_events; ++e) {
        out[e].event_id = problem.events[e].event_id;
        out[e].draws = std::move(slots[e]);
    }
    if (problem.warnings) {
        for (const auto& w : warn_slots)
            if (!w.empty()) problem.warnings->push_back(w);
    }
    return out;
}

ModeEvaluation evaluate_draw_lists(const std::vector<DrawLists>& lists,
                                   const GroundTruth& gt, const ApOptions& options) {
    ModeEvaluation eval;
    for (const auto& dl : lists) {
        eval.event_ids.push_back(dl.event_id);
        std::vector<double> aps;
        for (const auto& list : dl.draws) {
            if (list.empty()) {
                aps.push_back(kNaN);
                continue;
            }
            try {
                aps.push_back(average_precision(list, gt, dl.event_id, options));
            } catch (const Error& err) {
                if (err.code() != Errc::no_positives) throw;
                aps.push_back(kNaN);
            }
        }
        eval.event_aps.push_back(mean_defined(aps));
        eval.draw_aps.push_back(std::move(aps));
    }
    eval.map = mean_defined(eval.event_aps);
    return eval;
}

std::vector<DrawLists> fuse_draws(const std::vector<std::vector<DrawLists>>& atoms) {
    if (atoms.empty()) throw data_error(Errc::empty_input, "nothing to fuse");
    size_t n_events = atoms.front().size();
    size_t n_draws = 1;
    for (const auto& atom : atoms) {
        if (atom.size() != n_events)
            throw data_error(Errc::id_mismatch, "atoms cover different event sets");
        for (size_t e = 0; e < n_events; ++e) {
            if (atom[e].event_id != atoms.front()[e].event_id)
                throw data_error(Errc::id_mismatch, "atoms cover different event sets");
            n_draws = std::max(n_draws, atom[e].draws.size());
        }
    }

    std::vector<DrawLists> out(n_events);
    for (size_t e = 0; e < n_events; ++e) {
        out[e].event_id = atoms.front()[e].event_id;
        for (size_t d = 0; d < n_draws; ++d) {
            std::vector<RankedList> parts;
            bool missing = false;
            for (const auto& atom : atoms) {
                const auto& draws = atom[e].draws;
                if (draws.size() != 1 && draws.size() != n_draws)
                    throw config_error(Errc::invalid_argument,
                                       "fusion constituents disagree on draw count");
                const RankedList& list = draws.size() == 1 ? draws[0] : draws[d];
                if (list.empty()) {
                    missing = true;
                    break;
                }
                parts.push_back(list);
            }
            out[e].draws.push_back(missing ? RankedList{} : late_fuse(parts));
        }
    }
    return out;
}

namespace {

std::vector<DrawLists> atom_t0(const ExperimentConfig& cfg, const DatasetBundle& ds,
                               std::vector<std::string>* warnings) {
    FullConfig fixed = cfg.fixed();
    std::vector<DrawLists> out;
    for (const auto& kit : ds.kits) {
        DrawLists dl;
        dl.event_id = kit.event_id;
        try {
            EventDetector det = build_detector(kit, ds.pool, fixed.detector, cfg.top_k,
                                               ds.store, ds.corpora, cfg.caps, ds.tok,
                                               nullptr, warnings);
            dl.draws.push_back(rank_videos(det, ds.eval_videos, fixed.relevance));
        } catch (const Error& err) {
            if (warnings)
                warnings->push_back("T0 " + kit.event_id + ": " + err.what());
            dl.draws.push_back(RankedList{});
        }
        out.push_back(std::move(dl));
    }
    return out;
}

std::vector<DrawLists> atom_t10(const ExperimentConfig& cfg, const DatasetBundle& ds,
                                NegativesMode negatives_mode,
                                std::vector<std::string>* warnings) {
    std::vector<DetectorConfig> grid = cfg.detector_grid();
    int jobs = resolve_jobs(cfg.jobs);

    std::vector<std::vector<PseudoSample>> samples(ds.kits.size());
    std::vector<std::vector<std::string>> warn_slots(ds.kits.size());
    parallel_for(ds.kits.size(), jobs, [&](size_t e) {
        samples[e] = generate_pseudo_positives(ds.kits[e], ds.pool, grid, cfg.top_k,
                                               ds.store, ds.corpora, cfg.caps, ds.tok,
                                               nullptr, &warn_slots[e]);
    });
    std::map<std::string, std::vector<PseudoSample>> all_pseudo;
    for (size_t e = 0; e < ds.kits.size(); ++e)
        all_pseudo[ds.kits[e].event_id] = samples[e];
    if (warnings)
        for (auto& w : warn_slots) warnings->insert(warnings->end(), w.begin(), w.end());

    if (negatives_mode == NegativesMode::real && ds.train_videos.empty())
        throw data_error(Errc::empty_input,
                         "T10-real-neg needs train_model_vectors in the config");

    std::vector<ModelVector> eval_norm = ds.eval_videos;
    for (auto& mv : eval_norm) mv.values = l2_normalized(mv.values);

    std::vector<DrawLists> out(ds.kits.size());
    std::vector<std::string> train_warn(ds.kits.size());
    parallel_for(ds.kits.size(), jobs, [&](size_t e) {
        const std::string& id = ds.kits[e].event_id;
        out[e].event_id = id;
        try {
            std::vector<ModelVector> bg;
            if (negatives_mode == NegativesMode::real)
                bg = background_for(ds.train_videos, ds.train_gt, id);
            auto negatives = assemble_negatives(id, negatives_mode, all_pseudo, bg);
            Grids grids = cfg.grids;
            grids.jobs = 1;
            PseudoTrainResult trained = train_pseudo_detector(
                all_pseudo.at(id), negatives, grids, mix_seed(cfg.seed, 0x74313000ULL, e));
            RankedList list;
            list.reserve(eval_norm.size());
            for (const auto& mv : eval_norm)
                list.push_back(RankedItem{mv.video_id, predict(trained.model, mv.values)});
            sort_ranked(list);
            out[e].draws.push_back(std::move(list));
        } catch (const Error& err) {
            train_warn[e] = "T10 " + id + ": " + err.what();
            out[e].draws.push_back(RankedList{});
        }
    });
    if (warnings)
        for (const auto& w : train_warn)
            if (!w.empty()) warnings->push_back(w);
    return out;
}

std::vector<DrawLists> atom_few_shot(const ExperimentConfig& cfg, const DatasetBundle& ds,
                                     FewShotVariant variant,
                                     std::vector<std::string>* warnings) {
    if (ds.train_videos.empty())
        throw data_error(Errc::empty_input,
                         "few-example modes need train_model_vectors in the config");

    FewShotProblem problem;
    problem.grids = cfg.grids;
    problem.draws = cfg.draws;
    problem.positives_per_draw = cfg.positives_per_draw;
    problem.related_subset = cfg.related_subset;
    problem.seed = cfg.seed;
    problem.jobs = resolve_jobs(cfg.jobs);
    problem.warnings = warnings;

    // SVM modes operate on l2-normalized model vectors so RBF distances stay
    // commensurate between video features and embedded detector vectors.
    problem.eval_videos = ds.eval_videos;
    for (auto& mv : problem.eval_videos) mv.values = l2_normalized(mv.values);

    std::vector<DetectorConfig> grid = cfg.detector_grid();
    for (const auto& kit : ds.kits) {
        FewShotEvent ev;
        ev.event_id = kit.event_id;
        for (const auto& mv : ds.train_videos) {
            GtLabel label = ds.train_gt.label(mv.video_id, kit.event_id);
            if (label == GtLabel::positive)
                ev.positive_pool.push_back(l2_normalized(mv.values));
            else if (label == GtLabel::related && variant == FewShotVariant::r10)
                ev.related_pool.push_back(l2_normalized(mv.values));
            else if (label == GtLabel::background)
                ev.negatives.push_back(l2_normalized(mv.values));
        }
        if (variant == FewShotVariant::r10p) {
            auto samples = generate_pseudo_positives(kit, ds.pool, grid, cfg.top_k,
                                                     ds.store, ds.corpora, cfg.caps,
                                                     ds.tok, nullptr, warnings);
            for (const auto& s : samples) ev.pseudo_pool.push_back(l2_normalized(s.vector));
        }
        problem.events.push_back(std::move(ev));
    }
    return run_few_shot(problem, variant);
}

}  // namespace

std::vector<DrawLists> run_mode_atom(const ExperimentConfig& cfg, const DatasetBundle& ds,
                                     const std::string& atom,
                                     std::vector<std::string>* warnings) {
    std::string name = normalize_atom(trim(atom));
    if (name == "T0") return atom_t0(cfg, ds, warnings);
    if (name == "T10-pseudo-neg") return atom_t10(cfg, ds, NegativesMode::pseudo, warnings);
    if (name == "T10-real-neg") return atom_t10(cfg, ds, NegativesMode::real, warnings);
    if (name == "P10") return atom_few_shot(cfg, ds, FewShotVariant::p10, warnings);
    if (name == "R10") return atom_few_shot(cfg, ds, FewShotVariant::r10, warnings);
    if (name == "R10p") return atom_few_shot(cfg, ds, FewShotVariant::r10p, warnings);
    throw config_error(Errc::invalid_config, "unknown mode atom: " + atom);
}

ModeResult run_mode(const ExperimentConfig& cfg, const DatasetBundle& ds,
                    const std::string& mode) {
    std::vector<std::string> atoms;
    for (const auto& piece : split(mode, '+')) {
        std::string t = trim(piece);
        if (!t.empty()) atoms.push_back(t);
    }
    if (atoms.empty())
        throw config_error(Errc::invalid_config, "empty mode expression: " + mode);

    ModeResult result;
    result.mode = mode;

    std::map<std::string, std::vector<DrawLists>> memo;
    std::vector<std::vector<DrawLists>> parts;
    for (const auto& atom : atoms) {
        std::string name = normalize_atom(atom);
        auto it = memo.find(name);
        if (it == memo.end())
            it = memo.emplace(name, run_mode_atom(cfg, ds, name, &result.warnings)).first;
        parts.push_back(it->second);
    }
    result.lists = parts.size() == 1 ? std::move(parts.front()) : fuse_draws(parts);
    result.eval = evaluate_draw_lists(result.lists, ds.eval_gt,
                                      ApOptions{cfg.related_as_positive});

    namespace fs = std::filesystem;
    fs::path dir = cfg.out / mode;
    fs::create_directories(dir);
    write_mode_csv(dir / "report.csv", result);
    write_mode_txt(dir / "report.txt", result);
    if (cfg.emit_gnuplot) write_mode_dat(dir / "report.dat", result);
    if (!result.warnings.empty()) {
        auto out = open_out(dir / "warnings.txt");
        for (const auto& w : result.warnings) out << w << "\n";
    }
    fs::path lists_dir = dir / "lists";
    fs::create_directories(lists_dir);
    for (const auto& dl : result.lists) {
        for (size_t d = 0; d < dl.draws.size(); ++d) {
            if (dl.draws[d].empty()) continue;
            std::string name = dl.event_id;
            if (dl.draws.size() > 1) {
                char buf[16];
                std::snprintf(buf, sizeof buf, "_draw%02zu", d);
                name += buf;
            }
            save_ranked_list(lists_dir / (name + ".csv"), dl.draws[d]);
        }
    }
    return result;
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result) {
    auto out = open_out(path);
    out << "elm_source,clm_source,weighting,matrix_op,relevance,map";
    for (const auto& id : result.event_ids) out << "," << id;
    out << "\n";
    for (const auto& row : result.rows) {
        out << to_string(row.config.detector.elm_source) << ","
            << to_string(row.config.detector.clm_source) << ","
            << to_string(row.config.detector.weighting) << ","
            << to_string(row.config.detector.op) << "," << to_string(row.config.relevance)
            << "," << ap_cell(row.map);
        for (double ap : row.event_aps) out << "," << ap_cell(ap);
        out << "\n";
    }
}

void write_sweep_txt(const std::filesystem::path& path, const SweepResult& result) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"rank", "design", "map"};
    for (const auto& id : result.event_ids) header.push_back(id);
    rows.push_back(std::move(header));
    for (size_t r = 0; r < result.rows.size(); ++r) {
        const SweepRow& row = result.rows[r];
        std::vector<std::string> cells{std::to_string(r + 1), relevance_suffix(row.config),
                                       fixed_cell(row.map)};
        for (double ap : row.event_aps) cells.push_back(fixed_cell(ap));
        rows.push_back(std::move(cells));
    }
    auto out = open_out(path);
    out << format_table(rows);
}

void write_sweep_dat(const std::filesystem::path& path, const SweepResult& result) {
    auto out = open_out(path);
    if (result.rows.empty()) {
        out << "# empty sweep\n";
        return;
    }
    const SweepRow& best = result.rows.front();
    out << "# per-event AP of the best design: " << relevance_suffix(best.config) << "\n";
    out << "# index event ap\n";
    for (size_t e = 0; e < result.event_ids.size(); ++e)
        out << e << " \"" << result.event_ids[e] << "\" " << ap_cell(best.event_aps[e])
            << "\n";
}

SweepResult load_sweep_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error(Errc::io_error, "cannot read " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw data_error(Errc::parse_error, path.string() + ": empty report");
    auto header = split(trim(line), ',');
    if (header.size() < 6 || header[0] != "elm_source")
        throw data_error(Errc::parse_error, path.string() + ": not a sweep report");
    SweepResult result;
    for (size_t i = 6; i < header.size(); ++i) result.event_ids.push_back(header[i]);
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        auto fields = split(t, ',');
        if (fields.size() != header.size())
            throw data_error(Errc::parse_error,
                             path.string() + ":" + std::to_string(lineno) +
                                 ": wrong field count");
        SweepRow row;
        row.config.detector.elm_source = parse_elm_source(fields[0]);
        row.config.detector.clm_source = parse_clm_source(fields[1]);
        row.config.detector.weighting = parse_weighting(fields[2]);
        row.config.detector.op = parse_matrix_op(fields[3]);
        row.config.relevance = parse_relevance(fields[4]);
        row.map = parse_ap_cell(fields[5]);
        for (size_t i = 6; i < fields.size(); ++i)
            row.event_aps.push_back(parse_ap_cell(fields[i]));
        result.rows.push_back(std::move(row));
    }
    return result;
}

void write_mode_csv(const std::filesystem::path& path, const ModeResult& result) {
    size_t n_draws = 0;
    for (const auto& aps : result.eval.draw_aps) n_draws = std::max(n_draws, aps.size());
    auto out = open_out(path);
    out << "event_id,mean_ap";
    for (size_t d = 0; d < n_draws; ++d) out << ",draw" << d;
    out << "\n";
    for (size_t e = 0; e < result.eval.event_ids.size(); ++e) {
        out << result.eval.event_ids[e] << "," << ap_cell(result.eval.event_aps[e]);
        for (size_t d = 0; d < n_draws; ++d) {
            out << ",";
            out << (d < result.eval.draw_aps[e].size()
                        ? ap_cell(result.eval.draw_aps[e][d])
                        : std::string("NA"));
        }
        out << "\n";
    }
}

void write_mode_txt(const std::filesystem::path& path, const ModeResult& result) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"event", "mean_ap"});
    for (size_t e = 0; e < result.eval.event_ids.size(); ++e)
        rows.push_back({result.eval.event_ids[e], fixed_cell(result.eval.event_aps[e])});
    auto out = open_out(path);
    out << "mode: " << result.mode << "\n";
    out << format_table(rows);
    out << "MAP " << fixed_cell(result.eval.map) << "\n";
}

void write_mode_dat(const std::filesystem::path& path, const ModeResult& result) {
    auto out = open_out(path);
    out << "# per-event mean AP, mode " << result.mode << "\n";
    out << "# index event ap\n";
    for (size_t e = 0; e < result.eval.event_ids.size(); ++e)
        out << e << " \"" << result.eval.event_ids[e] << "\" "
            << ap_cell(result.eval.event_aps[e]) << "\n";
}

ModeResult load_mode_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error(Errc::io_error, "cannot read " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw data_error(Errc::parse_error, path.string() + ": empty report");
    auto header = split(trim(line), ',');
    if (header.size() < 2 || header[0] != "event_id")
        throw data_error(Errc::parse_error, path.string() + ": not a mode report");
    ModeResult result;
    result.mode = path.parent_path().filename().string();
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        auto fields = split(t, ',');
        if (fields.size() != header.size())
            throw data_error(Errc::parse_error,
                             path.string() + ":" + std::to_string(lineno) +
                                 ": wrong field count");
        result.eval.event_ids.push_back(fields[0]);
        result.eval.event_aps.push_back(parse_ap_cell(fields[1]));
        std::vector<double> draws;
        for (size_t i = 2; i < fields.size(); ++i) draws.push_back(parse_ap_cell(fields[i]));
        result.eval.draw_aps.push_back(std::move(draws));
    }
    result.eval.map = mean_defined(result.eval.event_aps);
    return result;
}

void regenerate_report(const std::filesystem::path& csv_path, bool emit_gnuplot) {
    std::ifstream in(csv_path);
    if (!in) throw data_error(Errc::io_error, "cannot read " + csv_path.string());
    std::string first;
    std::getline(in, first);
    in.close();
    std::filesystem::path txt = csv_path;
    txt.replace_extension(".txt");
    std::filesystem::path dat = csv_path;
    dat.replace_extension(".dat");
    if (trim(first).rfind("elm_source,", 0) == 0) {
        SweepResult result = load_sweep_csv(csv_path);
        write_sweep_txt(txt, result);
        if (emit_gnuplot) write_sweep_dat(dat, result);
    } else {
        ModeResult result = load_mode_csv(csv_path);
        write_mode_txt(txt, result);
        if (emit_gnuplot) write_mode_dat(dat, result);
    }
}

}  // namespace evdet
