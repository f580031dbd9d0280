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
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "evdet/config.hpp"
#include "evdet/errors.hpp"
#include "evdet/pipeline.hpp"
#include "evdet/str_util.hpp"
#include "evdet/synthetic.hpp"

namespace {

using namespace evdet;

struct CommonFlags {
    std::string config_path;
    std::string out;
    std::vector<std::string> sets;
    uint64_t seed = 0;
    bool seed_set = false;
    int jobs = -1;
};

void add_common(CLI::App* app, CommonFlags& flags) {
    app->add_option("--config", flags.config_path, "experiment config file");
    app->add_option("--out", flags.out, "output path (overrides the config)");
    app->add_option("--seed", flags.seed, "seed (overrides the config)")
        ->each([&](const std::string&) { flags.seed_set = true; });
    app->add_option("--jobs", flags.jobs, "worker count, 0 = logical CPUs");
    app->add_option("--set", flags.sets, "extra key=value config override")
        ->type_name("KEY=VALUE");
}

ExperimentConfig make_config(const CommonFlags& flags, bool config_required) {
    if (config_required && flags.config_path.empty())
        throw config_error(Errc::invalid_config, "--config is required for this command");
    ExperimentConfig cfg = flags.config_path.empty() ? default_config()
                                                     : load_config(flags.config_path);
    for (const std::string& kv : flags.sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw config_error(Errc::invalid_config, "--set wants key=value, got " + kv);
        apply_config_entry(cfg, trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
    }
    if (flags.seed_set) cfg.seed = flags.seed;
    if (flags.jobs >= 0) cfg.jobs = flags.jobs;
    if (!flags.out.empty()) cfg.out = flags.out;
    if (!flags.sets.empty()) validate_config_paths(cfg);
    return cfg;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

void emit_lm(const LanguageModel& lm, const std::string& out_path) {
    std::ostringstream body;
    for (const auto& e : lm.entries) body << e.term << " " << format_double(e.weight) << "\n";
    if (out_path.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream out(out_path);
        if (!out) throw data_error(Errc::io_error, "cannot write " + out_path);
        out << body.str();
    }
}

void emit_list(const RankedList& list, const std::string& out_path) {
    if (out_path.empty()) {
        for (const auto& item : list)
            std::cout << item.video_id << "," << format_double(item.score) << "\n";
    } else {
        save_ranked_list(out_path, list);
    }
}

Tokenizer tokenizer_for(const ExperimentConfig& cfg) {
    return cfg.stopwords.empty() ? Tokenizer() : Tokenizer::from_file(cfg.stopwords);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zero-shot and few-example video event detection toolkit"};
    app.require_subcommand(1);

    CommonFlags flags;

    // gen-synthetic
    auto* gen = app.add_subcommand("gen-synthetic", "write a planted benchmark dataset");
    add_common(gen, flags);
    SyntheticSpec spec;
    gen->add_option("--events", spec.events);
    gen->add_option("--concepts", spec.concepts);
    gen->add_option("--videos", spec.videos, "eval partition size");
    gen->add_option("--planted-per-event", spec.planted_per_event);
    gen->add_option("--sigma", spec.sigma, "model-vector noise level");
    gen->add_option("--vocab", spec.vocab_size, "noise vocabulary size");
    gen->add_option("--eval-positives", spec.eval_positives);
    gen->add_option("--eval-related", spec.eval_related);
    gen->add_option("--train-positives", spec.train_positives);
    gen->add_option("--train-related", spec.train_related);
    gen->add_option("--train-background", spec.train_background);
    gen->add_option("--corrupt-source", spec.corrupt_source,
                    "google-style or wikipedia-style");

    // build-lm
    auto* lm_cmd = app.add_subcommand("build-lm", "build one language model");
    add_common(lm_cmd, flags);
    std::string lm_kind = "elm", lm_event, lm_source = "AudioVisual";
    std::string lm_weighting = "NoTfIdf";
    int lm_concept = -1, lm_cap = 0;
    lm_cmd->add_option("--kind", lm_kind, "elm or clm");
    lm_cmd->add_option("--event", lm_event, "event id (elm)");
    lm_cmd->add_option("--concept", lm_concept, "concept index (clm)");
    lm_cmd->add_option("--source", lm_source, "Title/Visual/AudioVisual or Title/Google/Wikipedia");
    lm_cmd->add_option("--weighting", lm_weighting, "TfIdf or NoTfIdf (clm)");
    lm_cmd->add_option("--cap", lm_cap, "entry cap, 0 = config default");

    // build-detector
    auto* det_cmd = app.add_subcommand("build-detector",
                                       "top-K concept detectors for the fixed combo");
    add_common(det_cmd, flags);
    std::string det_event;
    det_cmd->add_option("--event", det_event, "one event id, default all");

    // rank
    auto* rank_cmd = app.add_subcommand("rank", "rank eval videos with a saved detector");
    add_common(rank_cmd, flags);
    std::string rank_detector, rank_relevance;
    rank_cmd->add_option("--detector", rank_detector, "detector file")->required();
    rank_cmd->add_option("--relevance", rank_relevance, "relevance measure override");

    // train-rdsvm
    auto* svm_cmd = app.add_subcommand("train-rdsvm", "train one weighted-slack SVM");
    add_common(svm_cmd, flags);
    std::string svm_data, svm_kernel = "rbf";
    TrainParams svm_params;
    svm_cmd->add_option("--data", svm_data, "dataset csv: video_id,y,u,f0,...")->required();
    svm_cmd->add_option("--cost", svm_params.cost);
    svm_cmd->add_option("--gamma", svm_params.gamma);
    svm_cmd->add_option("--relevance-degree", svm_params.relevance, "c in (0,1]");
    svm_cmd->add_option("--kernel", svm_kernel, "rbf or linear");
    svm_cmd->add_option("--tol", svm_params.tol);
    svm_cmd->add_option("--max-iter", svm_params.max_iter);

    // pseudo
    auto* pseudo_cmd = app.add_subcommand("pseudo",
                                          "pseudo-positive samples over the design grid");
    add_common(pseudo_cmd, flags);

    // fuse
    auto* fuse_cmd = app.add_subcommand("fuse", "late-fuse ranked lists");
    add_common(fuse_cmd, flags);
    std::vector<std::string> fuse_files;
    fuse_cmd->add_option("lists", fuse_files, "ranked list files")->required();

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "average precision of ranked lists");
    add_common(eval_cmd, flags);
    std::string eval_gt, eval_event;
    bool eval_related_pos = false;
    std::vector<std::string> eval_files;
    eval_cmd->add_option("--gt", eval_gt, "ground truth csv")->required();
    eval_cmd->add_option("--event", eval_event, "event id")->required();
    eval_cmd->add_flag("--related-as-positive", eval_related_pos);
    eval_cmd->add_option("lists", eval_files, "ranked list files")->required();

    // sweep
    auto* sweep_cmd = app.add_subcommand(
        "sweep", "run the configured design sweep and pipeline modes");
    add_common(sweep_cmd, flags);
    std::vector<std::string> sweep_modes;
    sweep_cmd->add_option("--mode", sweep_modes,
                          "mode entries overriding the config (sweep, T0, T0+T10-pseudo-neg, ...)");

    // report
    auto* report_cmd = app.add_subcommand("report", "regenerate tables from a report csv");
    add_common(report_cmd, flags);
    std::string report_csv;
    bool report_gnuplot = false;
    report_cmd->add_option("csv", report_csv, "report.csv or sweep.csv")->required();
    report_cmd->add_flag("--gnuplot", report_gnuplot);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            if (flags.out.empty())
                throw config_error(Errc::invalid_config, "gen-synthetic needs --out DIR");
            if (flags.seed_set) spec.seed = flags.seed;
            // Validate overrides before writing anything; they are baked into
            // the emitted config.txt, where last-wins parsing applies them.
            ExperimentConfig scratch = default_config();
            for (const std::string& kv : flags.sets) {
                auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw config_error(Errc::invalid_config, "--set wants key=value, got " + kv);
                apply_config_entry(scratch, trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
            }
            generate_synthetic(spec, flags.out);
            if (!flags.sets.empty()) {
                std::ofstream app(std::filesystem::path(flags.out) / "config.txt",
                                  std::ios::app);
                app << "# overrides from --set\n";
                for (const std::string& kv : flags.sets) {
                    auto eq = kv.find('=');
                    app << trim(kv.substr(0, eq)) << " = " << trim(kv.substr(eq + 1)) << "\n";
                }
            }
            std::cout << "wrote dataset to " << flags.out << "\n";
            return 0;
        }
        if (lm_cmd->parsed()) {
            ExperimentConfig cfg = make_config(flags, true);
            Tokenizer tok = tokenizer_for(cfg);
            if (lm_kind == "elm") {
                if (lm_event.empty())
                    throw config_error(Errc::invalid_config, "--event is required for elm");
                auto kits = load_event_kits(cfg.kits);
                auto it = std::find_if(kits.begin(), kits.end(), [&](const auto& k) {
                    return k.event_id == lm_event;
                });
                if (it == kits.end())
                    throw data_error(Errc::id_mismatch, "unknown event: " + lm_event);
                LanguageModel lm = build_elm(*it, parse_elm_source(lm_source),
                                             lm_cap > 0 ? lm_cap : cfg.caps.elm, tok);
                emit_lm(lm, flags.out);
            } else if (lm_kind == "clm") {
                if (lm_concept < 0)
                    throw config_error(Errc::invalid_config, "--concept is required for clm");
                auto pool = load_concept_pool(cfg.pool);
                if (lm_concept >= static_cast<int>(pool.size()))
                    throw data_error(Errc::id_mismatch,
                                     "concept index out of range: " +
                                         std::to_string(lm_concept));
                const ConceptEntry& centry = pool[static_cast<size_t>(lm_concept)];
                ClmSource source = parse_clm_source(lm_source);
                DocumentCorpus corpus;
                if (source == ClmSource::title) {
                    corpus = title_corpus(centry);
                } else {
                    CorpusSet corpora = CorpusSet::load(cfg.corpus);
                    const DocumentCorpus* found = corpora.find(source, lm_concept);
                    if (!found)
                        throw data_error(Errc::empty_corpus,
                                         "no documents for concept " +
                                             std::to_string(lm_concept));
                    corpus = *found;
                }
                LanguageModel lm = build_clm(centry, corpus, parse_weighting(lm_weighting),
                                             lm_cap > 0 ? lm_cap : cfg.caps.clm, tok);
                emit_lm(lm, flags.out);
            } else {
                throw config_error(Errc::invalid_config, "--kind must be elm or clm");
            }
            return 0;
        }
        if (det_cmd->parsed()) {
            ExperimentConfig cfg = make_config(flags, true);
            Tokenizer tok = tokenizer_for(cfg);
            auto pool = load_concept_pool(cfg.pool);
            auto kits = load_event_kits(cfg.kits);
            CorpusSet corpora = CorpusSet::load(cfg.corpus);
            TermVectorStore store = TermVectorStore::load(cfg.term_vectors);
            DetectorConfig combo = cfg.fixed().detector;
            std::filesystem::path dir =
                flags.out.empty() ? cfg.out / "detectors" : std::filesystem::path(flags.out);
            std::filesystem::create_directories(dir);
            std::vector<std::string> warnings;
            size_t written = 0;
            for (const auto& kit : kits) {
                if (!det_event.empty() && kit.event_id != det_event) continue;
                EventDetector det = build_detector(kit, pool, combo, cfg.top_k, store,
                                                   corpora, cfg.caps, tok, nullptr,
                                                   &warnings);
                save_detector(dir / (kit.event_id + ".csv"), det);
                ++written;
            }
            if (!det_event.empty() && written == 0)
                throw data_error(Errc::id_mismatch, "unknown event: " + det_event);
            print_warnings(warnings);
            std::cout << "wrote " << written << " detector(s) to " << dir.string() << "\n";
            return 0;
        }
        if (rank_cmd->parsed()) {
            ExperimentConfig cfg = make_config(flags, true);
            EventDetector det = load_detector(rank_detector);
            auto videos = load_model_vectors(cfg.eval_model_vectors);
            Relevance rel = rank_relevance.empty() ? cfg.fixed().relevance
                                                   : parse_relevance(rank_relevance);
            emit_list(rank_videos(det, videos, rel), flags.out);
            return 0;
        }
        if (svm_cmd->parsed()) {
            if (svm_kernel == "rbf") svm_params.kernel = KernelKind::rbf;
            else if (svm_kernel == "linear") svm_params.kernel = KernelKind::linear;
            else throw config_error(Errc::invalid_config, "--kernel must be rbf or linear");
            Dataset data = load_dataset(svm_data);
            TrainResult result = train(data.samples, svm_params);
            std::cout << "samples " << data.samples.size() << " support_vectors "
                      << result.model.svs.size() << " iterations " << result.iterations
                      << " dual_objective " << format_double(result.dual_objective)
                      << " kkt_gap " << format_double(result.kkt_gap) << " bias "
                      << format_double(result.model.bias) << "\n";
            if (!flags.out.empty()) save_model(flags.out, result.model);
            return 0;
        }
        if (pseudo_cmd->parsed()) {
            ExperimentConfig cfg = make_config(flags, true);
            Tokenizer tok = tokenizer_for(cfg);
            auto pool = load_concept_pool(cfg.pool);
            auto kits = load_event_kits(cfg.kits);
            CorpusSet corpora = CorpusSet::load(cfg.corpus);
            TermVectorStore store = TermVectorStore::load(cfg.term_vectors);
            auto grid = cfg.detector_grid();
            std::vector<std::string> warnings;
            std::vector<PseudoSample> all;
            for (const auto& kit : kits) {
                auto samples = generate_pseudo_positives(kit, pool, grid, cfg.top_k, store,
                                                         corpora, cfg.caps, tok, nullptr,
                                                         &warnings);
                all.insert(all.end(), samples.begin(), samples.end());
            }
            std::filesystem::path out_path =
                flags.out.empty() ? cfg.out / "pseudo_samples.csv"
                                  : std::filesystem::path(flags.out);
            // A bare filename has an empty parent; create_directories("") throws.
            if (!out_path.parent_path().empty())
                std::filesystem::create_directories(out_path.parent_path());
            save_pseudo_samples(out_path, all);
            print_warnings(warnings);
            std::cout << "wrote " << all.size() << " pseudo samples to "
                      << out_path.string() << "\n";
            return 0;
        }
        if (fuse_cmd->parsed()) {
            std::vector<RankedList> lists;
            for (const auto& f : fuse_files) lists.push_back(load_ranked_list(f));
            emit_list(late_fuse(lists), flags.out);
            return 0;
        }
        if (eval_cmd->parsed()) {
            GroundTruth gt = GroundTruth::load(eval_gt);
            ApOptions options{eval_related_pos};
            std::vector<double> aps;
            for (const auto& f : eval_files) {
                double ap = average_precision(load_ranked_list(f), gt, eval_event, options);
                aps.push_back(ap);
                std::cout << f << " " << format_double(ap) << "\n";
            }
            if (aps.size() > 1)
                std::cout << "mean " << format_double(mean_average_precision(aps)) << "\n";
            return 0;
        }
        if (sweep_cmd->parsed()) {
            ExperimentConfig cfg = make_config(flags, true);
            if (!sweep_modes.empty()) {
                cfg.modes.clear();
                for (const std::string& entry : sweep_modes)
                    for (std::string_view part : split(entry, ','))
                        if (std::string m{trim(part)}; !m.empty()) cfg.modes.push_back(m);
            }
            DatasetBundle ds = load_bundle(cfg);
            for (const auto& mode : cfg.modes) {
                if (mode == "sweep") {
                    SweepResult result = run_sweep(cfg, ds);
                    print_warnings(result.warnings);
                    if (result.rows.empty()) {
                        std::cout << "sweep: no rows\n";
                    } else {
                        const SweepRow& best = result.rows.front();
                        std::cout << "sweep: " << result.rows.size() << " combinations, best "
                                  << combo_tag(best.config.detector) << "-"
                                  << to_string(best.config.relevance) << " map "
                                  << format_fixed(best.map, 4) << "\n";
                    }
                } else {
                    ModeResult result = run_mode(cfg, ds, mode);
                    print_warnings(result.warnings);
                    std::cout << "mode " << mode << ": map "
                              << format_fixed(result.eval.map, 4) << "\n";
                }
            }
            std::cout << "reports in " << cfg.out.string() << "\n";
            return 0;
        }
        if (report_cmd->parsed()) {
            regenerate_report(report_csv, report_gnuplot);
            std::cout << "regenerated tables next to " << report_csv << "\n";
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
