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

#include "evdet/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "evdet/errors.hpp"
#include "evdet/rng.hpp"
#include "evdet/str_util.hpp"

namespace evdet {
namespace {

constexpr int kEventWords = 8;    // per event
constexpr int kConceptWords = 4;  // per concept
constexpr int kEventArticles = 4;
constexpr int kConceptArticles = 2;
constexpr int kNoiseArticles = 16;

// Pronounceable nonsense word: a namespace prefix syllable plus three
// syllables encoding the id in base 50. Distinct prefixes keep the three
// namespaces collision-free; no output collides with a stop word.
std::string make_word(const char* prefix, long long id) {
    static const char consonants[] = "bdgklmnprt";
    static const char vowels[] = "aeiou";
    std::string w = prefix;
    long long x = id;
    for (int s = 0; s < 3; ++s) {
        w += consonants[x % 10];
        w += vowels[(x / 10) % 5];
        x /= 50;
    }
    return w;
}

std::string event_word(int e, int i) { return make_word("be", e * kEventWords + i); }
std::string concept_word(int j, int i) { return make_word("ko", j * kConceptWords + i); }
std::string noise_word(int n) { return make_word("su", n); }

void validate(const SyntheticSpec& spec) {
    if (spec.events < 1 || spec.concepts < 1)
        throw config_error(Errc::invalid_config, "events and concepts must be >= 1");
    if (spec.sigma < 0.0) throw config_error(Errc::invalid_config, "sigma must be >= 0");
    if (spec.vocab_size < 1)
        throw config_error(Errc::invalid_config, "vocab_size must be >= 1");
    if (spec.planted.empty() && spec.planted_per_event < 1)
        throw config_error(Errc::invalid_config, "planted_per_event must be >= 1");
    if (spec.planted.empty() &&
        spec.events * spec.planted_per_event > spec.concepts)
        throw config_error(Errc::invalid_config,
                           "default planting needs events * planted_per_event <= concepts");
    if (!spec.planted.empty() && spec.planted.size() != static_cast<size_t>(spec.events))
        throw config_error(Errc::invalid_config, "planted lists must match event count");
    for (const auto& list : spec.planted) {
        if (list.empty())
            throw config_error(Errc::invalid_config, "every event needs planted concepts");
        for (int j : list)
            if (j < 0 || j >= spec.concepts)
                throw config_error(Errc::invalid_config,
                                   "planted concept index " + std::to_string(j) +
                                       " out of range");
    }
    if (spec.eval_positives < 1 || spec.train_positives < 1)
        throw config_error(Errc::invalid_config, "positive counts must be >= 1");
    if (spec.eval_related < 0 || spec.train_related < 0 || spec.train_background < 0)
        throw config_error(Errc::invalid_config, "related/background counts must be >= 0");
    if (spec.videos < spec.events * (spec.eval_positives + spec.eval_related))
        throw config_error(Errc::invalid_config,
                           "videos must cover eval positives and related per event");
    if (!spec.corrupt_source.empty() && spec.corrupt_source != "google-style" &&
        spec.corrupt_source != "wikipedia-style")
        throw config_error(Errc::invalid_config,
                           "corrupt_source must be google-style or wikipedia-style");
}

std::vector<std::vector<int>> resolve_planted(const SyntheticSpec& spec) {
    if (!spec.planted.empty()) return spec.planted;
    std::vector<std::vector<int>> planted(static_cast<size_t>(spec.events));
    for (int e = 0; e < spec.events; ++e)
        for (int p = 0; p < spec.planted_per_event; ++p)
            planted[e].push_back(e * spec.planted_per_event + p);
    return planted;
}

std::string join_words(const std::vector<std::string>& words) {
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

// Appends `count` occurrences of each word in `words`.
void emit(std::vector<std::string>& doc, std::initializer_list<std::string> words,
          int count = 1) {
    for (int c = 0; c < count; ++c)
        for (const auto& w : words) doc.push_back(w);
}

TermVectorStore build_store(const SyntheticSpec& spec, Rng& rng) {
    TermVectorStore store;
    int dim = spec.events * kEventArticles + spec.concepts * kConceptArticles +
              kNoiseArticles;
    store.set_article_dim(dim);
    int concept_base = spec.events * kEventArticles;
    int noise_base = concept_base + spec.concepts * kConceptArticles;
    for (int e = 0; e < spec.events; ++e) {
        for (int i = 0; i < kEventWords; ++i) {
            std::vector<std::pair<int, double>> entries;
            for (int a = 0; a < kEventArticles; ++a)
                entries.emplace_back(e * kEventArticles + a, rng.uniform(0.8, 1.2));
            store.insert(event_word(e, i), std::move(entries));
        }
    }
    for (int j = 0; j < spec.concepts; ++j) {
        for (int i = 0; i < kConceptWords; ++i) {
            std::vector<std::pair<int, double>> entries;
            for (int a = 0; a < kConceptArticles; ++a)
                entries.emplace_back(concept_base + j * kConceptArticles + a,
                                     rng.uniform(0.8, 1.2));
            store.insert(concept_word(j, i), std::move(entries));
        }
    }
    for (int n = 0; n < spec.vocab_size; ++n) {
        // The two indices can never coincide: they differ by 6n+3 mod 16,
        // which is odd.
        std::vector<std::pair<int, double>> entries;
        entries.emplace_back(noise_base + n % kNoiseArticles, rng.uniform(0.8, 1.2));
        entries.emplace_back(noise_base + (n * 7 + 3) % kNoiseArticles,
                             rng.uniform(0.8, 1.2));
        store.insert(noise_word(n), std::move(entries));
    }
    return store;
}

std::vector<ConceptEntry> build_pool(const SyntheticSpec& spec) {
    std::vector<ConceptEntry> pool;
    pool.reserve(static_cast<size_t>(spec.concepts));
    for (int j = 0; j < spec.concepts; ++j) {
        ConceptEntry c;
        c.concept_index = j;
        c.title = concept_word(j, 0);
        if (j % 3 == 0) c.title += " " + concept_word(j, 1);
        if (j % 2 == 0) c.subtitles.push_back(concept_word(j, 2));
        pool.push_back(std::move(c));
    }
    return pool;
}

std::string event_id_of(int e) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "event%02d", e + 1);
    return buf;
}

std::vector<EventDescription> build_kits(const SyntheticSpec& spec,
                                         const std::vector<std::vector<int>>& planted) {
    std::vector<EventDescription> kits;
    for (int e = 0; e < spec.events; ++e) {
        EventDescription kit;
        kit.event_id = event_id_of(e);
        kit.title = event_word(e, 0) + " " + event_word(e, 1);
        std::vector<std::string> sentences;
        sentences.push_back(join_words({event_word(e, 0), event_word(e, 1),
                                        event_word(e, 6), event_word(e, 7)}) +
                            ".");
        for (int j : planted[e]) {
            sentences.push_back(join_words({event_word(e, 6), concept_word(j, 0),
                                            event_word(e, 0)}) +
                                ".");
        }
        kit.free_text = join_words(sentences);
        for (int j : planted[e])
            kit.visual_cues.push_back(concept_word(j, 0) + " " + concept_word(j, 1));
        kit.visual_cues.push_back(event_word(e, 2) + " " + event_word(e, 3));
        kit.audio_cues.push_back(event_word(e, 4));
        kit.audio_cues.push_back(event_word(e, 5) + " " + event_word(e, 4));
        kits.push_back(std::move(kit));
    }
    return kits;
}

// owner[j] = event that planted concept j, or -1. Overlapping custom lists
// keep the lowest event, which only softens the planted signal.
std::vector<int> owners_of(const SyntheticSpec& spec,
                           const std::vector<std::vector<int>>& planted) {
    std::vector<int> owner(static_cast<size_t>(spec.concepts), -1);
    for (int e = 0; e < spec.events; ++e)
        for (int j : planted[e])
            if (owner[static_cast<size_t>(j)] < 0) owner[static_cast<size_t>(j)] = e;
    return owner;
}

CorpusSet build_corpora(const SyntheticSpec& spec,
                        const std::vector<std::vector<int>>& planted, Rng& rng) {
    CorpusSet corpora;
    std::vector<int> owner = owners_of(spec, planted);
    auto noise_pick = [&]() { return noise_word(static_cast<int>(
        rng.uniform_index(static_cast<size_t>(spec.vocab_size)))); };

    for (const char* source : {"google-style", "wikipedia-style"}) {
        bool google = std::string(source) == "google-style";
        bool corrupted = spec.corrupt_source == source;
        int docs = google ? 4 : 3;
        for (int j = 0; j < spec.concepts; ++j) {
            int e = owner[static_cast<size_t>(j)];
            DocumentCorpus corpus;
            corpus.concept_index = j;
            corpus.source_tag = source;
            for (int k = 0; k < docs; ++k) {
                std::vector<std::string> doc;
                emit(doc, {concept_word(j, 0)}, google ? 4 + k % 2 : 3);
                emit(doc, {concept_word(j, 1)}, google ? 3 : 2);
                emit(doc, {concept_word(j, 2)}, 2);
                // Kept out of the last document so tf-idf retains the term.
                if (k < docs - 1) emit(doc, {concept_word(j, 3)}, google ? 2 : 1);
                if (e >= 0) {
                    // Planted concept: its documents mention the owning
                    // event's vocabulary and its sibling concepts. Corruption
                    // rewires the mentions to the next event and drops the
                    // siblings.
                    int me = corrupted ? (e + 1) % spec.events : e;
                    bool boosted = google ? (k < 3) : (k == 0);
                    if (boosted) {
                        emit(doc, {event_word(me, 0), event_word(me, 1)}, google ? 2 : 1);
                        for (int i = 2; i < kEventWords; ++i)
                            emit(doc, {event_word(me, i)}, 1);
                        if (!corrupted)
                            for (int sib : planted[e]) emit(doc, {concept_word(sib, 0)}, 1);
                    }
                }
                int extra = google ? 2 : 4;
                for (int t = 0; t < extra; ++t) emit(doc, {noise_pick()}, 1);
                corpus.documents.push_back(join_words(doc));
            }
            corpora.add(std::move(corpus));
        }
    }
    return corpora;
}

struct VideoPlan {
    int positives = 0;
    int related = 0;
    int background = 0;
    const char* id_prefix = "";
};

// Draw discipline: every video consumes an identical number of uniform and
// normal variates regardless of sigma, so datasets differing only in sigma
// rank comparably drawn videos.
std::vector<double> draw_video(const SyntheticSpec& spec, Rng& rng,
                               const std::vector<int>& strong,
                               const std::vector<int>& weak) {
    std::vector<double> v(static_cast<size_t>(spec.concepts), 0.0);
    for (int j : strong) v[static_cast<size_t>(j)] = rng.uniform(0.55, 0.95);
    for (int j : weak) v[static_cast<size_t>(j)] = rng.uniform(0.2, 0.45);
    for (int j = 0; j < spec.concepts; ++j) {
        double noisy = v[static_cast<size_t>(j)] + spec.sigma * rng.normal();
        v[static_cast<size_t>(j)] = std::max(0.0, noisy);
    }
    return v;
}

// Two confuser concepts outside the event's planted set give related videos
// near-miss structure instead of a scaled-down positive.
std::vector<int> confusers_of(const SyntheticSpec& spec,
                              const std::vector<int>& planted_e, int e) {
    std::vector<int> out;
    int candidate = (spec.events * spec.planted_per_event + 2 * e) % spec.concepts;
    for (int tried = 0; tried < spec.concepts && static_cast<int>(out.size()) < 2;
         ++tried) {
        bool clash = std::find(planted_e.begin(), planted_e.end(), candidate) !=
                     planted_e.end();
        if (!clash) out.push_back(candidate);
        candidate = (candidate + 1) % spec.concepts;
    }
    return out;  // may be short when nearly every concept is planted

}

void build_partition(const SyntheticSpec& spec,
                     const std::vector<std::vector<int>>& planted, Rng& rng,
                     const VideoPlan& plan, std::vector<ModelVector>& videos,
                     GroundTruth& gt) {
    int counter = 0;
    auto next_id = [&]() {
        char buf[24];
        std::snprintf(buf, sizeof buf, "%s%04d", plan.id_prefix, counter++);
        return std::string(buf);
    };
    for (int e = 0; e < spec.events; ++e) {
        for (int i = 0; i < plan.positives; ++i) {
            ModelVector mv{next_id(), draw_video(spec, rng, planted[e], {})};
            gt.set(mv.video_id, event_id_of(e), GtLabel::positive);
            videos.push_back(std::move(mv));
        }
    }
    for (int e = 0; e < spec.events; ++e) {
        std::vector<int> partial(planted[e].begin(),
                                 planted[e].begin() + (planted[e].size() + 1) / 2);
        std::vector<int> weak = confusers_of(spec, planted[e], e);
        weak.insert(weak.end(), partial.begin(), partial.end());
        for (int i = 0; i < plan.related; ++i) {
            ModelVector mv{next_id(), draw_video(spec, rng, {}, weak)};
            gt.set(mv.video_id, event_id_of(e), GtLabel::related);
            videos.push_back(std::move(mv));
        }
    }
    for (int i = 0; i < plan.background; ++i)
        videos.push_back(ModelVector{next_id(), draw_video(spec, rng, {}, {})});
}

}  // namespace

SyntheticDataset build_synthetic(const SyntheticSpec& spec) {
    validate(spec);
    SyntheticDataset ds;
    ds.planted = resolve_planted(spec);

    // Separate streams keep text immune to video-count or sigma changes.
    Rng text_rng(mix_seed(spec.seed, 0x74657874ULL));
    ds.store = build_store(spec, text_rng);
    ds.pool = build_pool(spec);
    ds.kits = build_kits(spec, ds.planted);
    ds.corpora = build_corpora(spec, ds.planted, text_rng);

    Rng eval_rng(mix_seed(spec.seed, 0x65766c00ULL));
    VideoPlan eval_plan{spec.eval_positives, spec.eval_related,
                        spec.videos - spec.events * (spec.eval_positives + spec.eval_related),
                        "ev"};
    build_partition(spec, ds.planted, eval_rng, eval_plan, ds.eval_videos, ds.eval_gt);

    Rng train_rng(mix_seed(spec.seed, 0x74726e00ULL));
    VideoPlan train_plan{spec.train_positives, spec.train_related, spec.train_background,
                         "tv"};
    build_partition(spec, ds.planted, train_rng, train_plan, ds.train_videos, ds.train_gt);
    return ds;
}

void write_synthetic(const SyntheticDataset& ds, const SyntheticSpec& spec,
                     const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw data_error(Errc::io_error, "cannot create " + out_dir.string());

    save_concept_pool(out_dir / "concepts.tsv", ds.pool);

    fs::create_directories(out_dir / "kits");
    for (const auto& kit : ds.kits)
        save_event_kit(out_dir / "kits" / (kit.event_id + ".txt"), kit);

    for (const char* source : {"google-style", "wikipedia-style"}) {
        for (int j = 0; j < static_cast<int>(ds.pool.size()); ++j) {
            const DocumentCorpus* corpus =
                ds.corpora.find(std::string(source) == "google-style"
                                    ? ClmSource::google
                                    : ClmSource::wikipedia,
                                j);
            if (!corpus) continue;
            fs::path dir = out_dir / "corpus" / source / std::to_string(j);
            fs::create_directories(dir);
            for (size_t k = 0; k < corpus->documents.size(); ++k) {
                std::ofstream doc(dir / ("doc" + std::to_string(k) + ".txt"));
                doc << corpus->documents[k] << "\n";
            }
        }
    }

    ds.store.save(out_dir / "term_vectors.txt");
    save_model_vectors(out_dir / "eval_model_vectors.csv", ds.eval_videos);
    ds.eval_gt.save(out_dir / "eval_ground_truth.csv");
    save_model_vectors(out_dir / "train_model_vectors.csv", ds.train_videos);
    ds.train_gt.save(out_dir / "train_ground_truth.csv");

    std::ofstream cfg(out_dir / "config.txt");
    if (!cfg) throw data_error(Errc::io_error, "cannot write config.txt");
    cfg << "# generated experiment config; paths are relative to this file\n"
        << "pool = concepts.tsv\n"
        << "kits = kits\n"
        << "corpus = corpus\n"
        << "term_vectors = term_vectors.txt\n"
        << "eval_model_vectors = eval_model_vectors.csv\n"
        << "eval_ground_truth = eval_ground_truth.csv\n"
        << "train_model_vectors = train_model_vectors.csv\n"
        << "train_ground_truth = train_ground_truth.csv\n"
        << "out = results\n"
        << "mode = sweep\n"
        << "top_k = 10\n"
        << "elm_cap = 30\n"
        << "clm_cap = 50\n"
        << "seed = " << spec.seed << "\n";
}

void generate_synthetic(const SyntheticSpec& spec, const std::filesystem::path& out_dir) {
    SyntheticDataset ds = build_synthetic(spec);
    write_synthetic(ds, spec, out_dir);
}

}  // namespace evdet
