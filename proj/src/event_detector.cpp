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

#include "evdet/event_detector.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "evdet/errors.hpp"
#include "evdet/str_util.hpp"

namespace evdet {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kEps = 1e-10;

// CLM cache key. Title-source models ignore the weighting axis: a title-only
// corpus has no non-title terms, so TfIdf and NoTfIdf coincide.
struct ClmVariant {
    ClmSource source;
    BowWeighting weighting;

    bool operator<(const ClmVariant& o) const {
        if (source != o.source) return source < o.source;
        return weighting < o.weighting;
    }
    bool operator==(const ClmVariant&) const = default;
};

ClmVariant variant_of(const DetectorConfig& config) {
    if (config.clm_source == ClmSource::title)
        return {ClmSource::title, BowWeighting::raw_count};
    return {config.clm_source, config.weighting};
}

}  // namespace

std::vector<double> aggregate_keyframes(const std::vector<std::vector<double>>& frames) {
    if (frames.empty()) throw data_error(Errc::empty_input, "no keyframes to aggregate");
    size_t dim = frames[0].size();
    for (const auto& f : frames)
        if (f.size() != dim)
            throw data_error(Errc::dimension_mismatch, "keyframe dimensions differ");
    std::vector<double> mean(dim, 0.0);
    for (const auto& f : frames)
        for (size_t i = 0; i < dim; ++i) mean[i] += f[i];
    double inv = 1.0 / static_cast<double>(frames.size());
    for (double& v : mean) v *= inv;
    return mean;
}

std::vector<ComboConceptScores> score_design_grid(
    const EventDescription& event, const std::vector<ConceptEntry>& pool,
    const std::vector<DetectorConfig>& configs, const TermVectorStore& store,
    const CorpusSet& corpora, const LmCaps& caps, const Tokenizer& tok,
    PairCache* cache) {
    size_t n_concepts = pool.size();

    std::map<ElmSource, std::optional<LanguageModel>> elms;
    std::map<ElmSource, std::string> elm_warnings;
    std::map<ClmVariant, bool> variants;
    for (const DetectorConfig& config : configs) {
        elms.emplace(config.elm_source, std::nullopt);
        variants.emplace(variant_of(config), true);
    }
    for (auto& [source, lm] : elms) {
        try {
            lm = build_elm(event, source, caps.elm, tok);
        } catch (const Error& e) {
            elm_warnings[source] = std::string("event ") + event.event_id + ": " + e.what();
        }
    }

    // scores[(elm, variant)][concept][op]; missing pieces stay zero.
    std::map<std::pair<ElmSource, ClmVariant>, std::vector<std::array<double, 5>>> table;
    std::map<ClmVariant, std::vector<std::string>> variant_warnings;
    for (const auto& [variant, used] : variants) {
        (void)used;
        variant_warnings[variant] = {};
        for (const auto& [source, lm] : elms)
            if (lm) table[{source, variant}].assign(n_concepts, {0.0, 0.0, 0.0, 0.0, 0.0});
    }

    for (size_t ci = 0; ci < n_concepts; ++ci) {
        const ConceptEntry& centry = pool[ci];
        for (const auto& [variant, used] : variants) {
            (void)used;
            std::optional<LanguageModel> clm;
            try {
                if (variant.source == ClmSource::title) {
                    DocumentCorpus corpus = title_corpus(centry);
                    clm = build_clm(centry, corpus, variant.weighting, caps.clm, tok);
                } else {
                    const DocumentCorpus* corpus = corpora.find(variant.source, centry.concept_index);
                    if (corpus == nullptr)
                        throw data_error(Errc::empty_corpus,
                                         "no documents for concept " +
                                             std::to_string(centry.concept_index));
                    clm = build_clm(centry, *corpus, variant.weighting, caps.clm, tok);
                }
            } catch (const Error& e) {
                variant_warnings[variant].push_back(
                    std::string(source_tag(variant.source)) + " concept " +
                    std::to_string(centry.concept_index) + ": " + e.what());
                continue;
            }
            for (const auto& [source, lm] : elms) {
                if (!lm) continue;
                SimilarityMatrix s = similarity_matrix(*lm, *clm, store, cache);
                std::vector<double> ops = all_matrix_scores(s);
                auto& row = table[{source, variant}][ci];
                for (size_t k = 0; k < 5; ++k) row[k] = ops[k];
            }
        }
    }

    std::vector<ComboConceptScores> out;
    out.reserve(configs.size());
    for (const DetectorConfig& config : configs) {
        ComboConceptScores result;
        result.config = config;
        result.scores.assign(n_concepts, 0.0);
        ClmVariant variant = variant_of(config);
        auto elm_warning = elm_warnings.find(config.elm_source);
        if (elm_warning != elm_warnings.end()) {
            result.warnings.push_back(elm_warning->second);
        } else {
            const auto& rows = table[{config.elm_source, variant}];
            size_t op_index = static_cast<size_t>(config.op);
            for (size_t ci = 0; ci < n_concepts; ++ci) result.scores[ci] = rows[ci][op_index];
        }
        const auto& vw = variant_warnings[variant];
        result.warnings.insert(result.warnings.end(), vw.begin(), vw.end());
        out.push_back(std::move(result));
    }
    return out;
}

EventDetector detector_from_scores(const std::string& event_id,
                                   const DetectorConfig& config,
                                   const std::vector<double>& scores, int top_k) {
    int n = static_cast<int>(scores.size());
    if (top_k < 1 || top_k > n)
        throw config_error(Errc::invalid_argument,
                           "top_k must be in [1, pool size], got " + std::to_string(top_k));
    for (double s : scores)
        if (!std::isfinite(s))
            throw data_error(Errc::parse_error, "non-finite concept score for " + event_id);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    EventDetector det;
    det.event_id = event_id;
    det.config = config;
    det.n_concepts = n;
    det.entries.reserve(top_k);
    for (int k = 0; k < top_k; ++k) det.entries.push_back({order[k], scores[order[k]]});
    return det;
}

EventDetector build_detector(const EventDescription& event,
                             const std::vector<ConceptEntry>& pool,
                             const DetectorConfig& config, int top_k,
                             const TermVectorStore& store, const CorpusSet& corpora,
                             const LmCaps& caps, const Tokenizer& tok, PairCache* cache,
                             std::vector<std::string>* warnings) {
    std::vector<ComboConceptScores> scored =
        score_design_grid(event, pool, {config}, store, corpora, caps, tok, cache);
    if (warnings != nullptr) *warnings = scored[0].warnings;
    return detector_from_scores(event.event_id, config, scored[0].scores, top_k);
}

double video_relevance(const EventDetector& det, const ModelVector& mv, Relevance rel) {
    if (mv.values.size() != static_cast<size_t>(det.n_concepts))
        throw data_error(Errc::dimension_mismatch,
                         "model vector length " + std::to_string(mv.values.size()) +
                             " does not match pool size " + std::to_string(det.n_concepts));
    size_t k = det.entries.size();
    std::vector<double> d(k);
    std::vector<double> v(k);
    double sum_d = 0.0;
    double sum_v = 0.0;
    for (size_t i = 0; i < k; ++i) {
        d[i] = det.entries[i].score;
        v[i] = mv.values[det.entries[i].concept_index];
        sum_d += std::abs(d[i]);
        sum_v += std::abs(v[i]);
    }
    if (sum_d == 0.0 || sum_v == 0.0) return kNegInf;

    switch (rel) {
    case Relevance::cosine: {
        double dot = 0.0;
        double nd = 0.0;
        double nv = 0.0;
        for (size_t i = 0; i < k; ++i) {
            dot += d[i] * v[i];
            nd += d[i] * d[i];
            nv += v[i] * v[i];
        }
        return dot / (std::sqrt(nd) * std::sqrt(nv));
    }
    case Relevance::hist_intersect: {
        double acc = 0.0;
        for (size_t i = 0; i < k; ++i) acc += std::min(d[i] / sum_d, v[i] / sum_v);
        return acc;
    }
    case Relevance::kullback: {
        // KL(detector || video) on epsilon-smoothed, l1-normalized copies.
        double ds = sum_d + static_cast<double>(k) * kEps;
        double vs = sum_v + static_cast<double>(k) * kEps;
        double kl = 0.0;
        for (size_t i = 0; i < k; ++i) {
            double p = (d[i] + kEps) / ds;
            double q = (v[i] + kEps) / vs;
            kl += p * std::log(p / q);
        }
        return -kl;
    }
    case Relevance::chi2: {
        double acc = 0.0;
        for (size_t i = 0; i < k; ++i) {
            double p = d[i] / sum_d;
            double q = v[i] / sum_v;
            double diff = p - q;
            acc += diff * diff / (p + q + kEps);
        }
        return -acc;
    }
    case Relevance::euclidean: {
        double acc = 0.0;
        for (size_t i = 0; i < k; ++i) {
            double diff = d[i] - v[i];
            acc += diff * diff;
        }
        return -std::sqrt(acc);
    }
    }
    return kNegInf;
}

void sort_ranked(RankedList& list) {
    std::sort(list.begin(), list.end(), [](const RankedItem& a, const RankedItem& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.video_id < b.video_id;
    });
}

RankedList rank_videos(const EventDetector& det, const std::vector<ModelVector>& collection,
                       Relevance rel) {
    if (collection.empty())
        throw data_error(Errc::empty_collection, "cannot rank an empty video collection");
    std::unordered_set<std::string> seen;
    RankedList list;
    list.reserve(collection.size());
    for (const ModelVector& mv : collection) {
        if (!seen.insert(mv.video_id).second)
            throw data_error(Errc::id_mismatch, "duplicate video id '" + mv.video_id + "'");
        list.push_back({mv.video_id, video_relevance(det, mv, rel)});
    }
    sort_ranked(list);
    return list;
}

std::vector<ModelVector> load_model_vectors(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error(Errc::io_error, "cannot open model vectors " + path.string());
    std::string line;
    int line_no = 0;
    int n_c = -1;
    std::vector<std::string> order;
    std::unordered_map<std::string, std::pair<std::vector<double>, int>> frames;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            if (t.rfind("#Nc=", 0) == 0) {
                try {
                    n_c = std::stoi(t.substr(4));
                } catch (const std::exception&) {
                    throw data_error(Errc::parse_error, path.string() + ": bad #Nc header");
                }
            }
            continue;
        }
        if (n_c <= 0)
            throw data_error(Errc::parse_error,
                             path.string() + ": missing #Nc=<int> header before data");
        std::vector<std::string> fields = split(t, ',');
        if (static_cast<int>(fields.size()) != n_c + 1)
            throw data_error(Errc::parse_error,
                             path.string() + ":" + std::to_string(line_no) + ": expected " +
                                 std::to_string(n_c) + " values");
        std::vector<double> values(n_c);
        for (int i = 0; i < n_c; ++i) {
            try {
                values[i] = std::stod(fields[i + 1]);
            } catch (const std::exception&) {
                throw data_error(Errc::parse_error, path.string() + ":" +
                                                        std::to_string(line_no) +
                                                        ": bad value '" + fields[i + 1] + "'");
            }
            if (!std::isfinite(values[i]))
                throw data_error(Errc::parse_error, path.string() + ":" +
                                                        std::to_string(line_no) +
                                                        ": non-finite model-vector entry");
            if (values[i] < 0.0) values[i] = 0.0;
        }
        auto [it, inserted] = frames.try_emplace(fields[0]);
        if (inserted) {
            order.push_back(fields[0]);
            it->second.first.assign(n_c, 0.0);
            it->second.second = 0;
        }
        for (int i = 0; i < n_c; ++i) it->second.first[i] += values[i];
        it->second.second += 1;
    }
    std::vector<ModelVector> out;
    out.reserve(order.size());
    for (const std::string& id : order) {
        auto& [sum, count] = frames.at(id);
        ModelVector mv;
        mv.video_id = id;
        mv.values.resize(sum.size());
        double inv = 1.0 / static_cast<double>(count);
        for (size_t i = 0; i < sum.size(); ++i) mv.values[i] = sum[i] * inv;
        out.push_back(std::move(mv));
    }
    return out;
}

void save_model_vectors(const std::filesystem::path& path,
                        const std::vector<ModelVector>& vectors) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error(Errc::io_error, "cannot write " + path.string());
    size_t n_c = vectors.empty() ? 0 : vectors[0].values.size();
    out << "#Nc=" << n_c << "\n";
    for (const ModelVector& mv : vectors) {
        out << mv.video_id;
        for (double v : mv.values) out << ',' << format_double(v);
        out << "\n";
    }
}

void save_detector(const std::filesystem::path& path, const EventDetector& det) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error(Errc::io_error, "cannot write " + path.string());
    out << "# design_choice=" << combo_tag(det.config) << " n_concepts=" << det.n_concepts
        << "\n";
    out << det.event_id << "\n";
    for (const DetectorEntry& e : det.entries)
        out << e.concept_index << ',' << format_double(e.score) << "\n";
}

EventDetector load_detector(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error(Errc::io_error, "cannot open detector " + path.string());
    EventDetector det;
    bool have_id = false;
    bool have_config = false;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            size_t dc = t.find("design_choice=");
            if (dc != std::string::npos) {
                std::string rest = t.substr(dc + 14);
                size_t space = rest.find(' ');
                det.config = parse_combo_tag(rest.substr(0, space));
                size_t nc = t.find("n_concepts=");
                if (nc != std::string::npos)
                    det.n_concepts = std::stoi(t.substr(nc + 11));
                have_config = true;
            }
            continue;
        }
        if (!have_id) {
            det.event_id = t;
            have_id = true;
            continue;
        }
        std::vector<std::string> fields = split(t, ',');
        if (fields.size() != 2)
            throw data_error(Errc::parse_error, path.string() + ": expected concept,score");
        try {
            det.entries.push_back({std::stoi(fields[0]), std::stod(fields[1])});
        } catch (const std::exception&) {
            throw data_error(Errc::parse_error, path.string() + ": bad entry '" + t + "'");
        }
    }
    if (!have_id || !have_config || det.entries.empty())
        throw data_error(Errc::parse_error, path.string() + ": incomplete detector file");
    for (size_t i = 1; i < det.entries.size(); ++i)
        if (det.entries[i].score > det.entries[i - 1].score)
            throw data_error(Errc::parse_error,
                             path.string() + ": detector entries not sorted by score");
    if (det.n_concepts == 0) {
        int max_index = 0;
        for (const DetectorEntry& e : det.entries) max_index = std::max(max_index, e.concept_index);
        det.n_concepts = max_index + 1;
    }
    return det;
}

void save_ranked_list(const std::filesystem::path& path, const RankedList& list) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error(Errc::io_error, "cannot write " + path.string());
    for (const RankedItem& item : list)
        out << item.video_id << ',' << format_double(item.score) << "\n";
}

RankedList load_ranked_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error(Errc::io_error, "cannot open ranked list " + path.string());
    RankedList list;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t comma = t.rfind(',');
        if (comma == std::string::npos)
            throw data_error(Errc::parse_error, path.string() + ":" + std::to_string(line_no) +
                                                    ": expected video_id,score");
        try {
            list.push_back({t.substr(0, comma), std::stod(t.substr(comma + 1))});
        } catch (const std::exception&) {
            throw data_error(Errc::parse_error, path.string() + ":" + std::to_string(line_no) +
                                                    ": bad score");
        }
    }
    return list;
}

}  // namespace evdet
