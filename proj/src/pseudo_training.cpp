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

#include "evdet/pseudo_training.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "evdet/errors.hpp"
#include "evdet/str_util.hpp"

namespace evdet {
namespace {

// A Title/Title combo yields the same detector under every matrix operator,
// so it is canonicalized to the first operator before scoring.
DetectorConfig canonical_combo(DetectorConfig c) {
    if (c.elm_source == ElmSource::title && c.clm_source == ClmSource::title) {
        c.op = MatrixOp::spectral;
    }
    return c;
}

std::vector<double> embed_detector(const EventDetector& det) {
    std::vector<double> v(static_cast<size_t>(det.n_concepts), 0.0);
    for (const auto& e : det.entries) v[static_cast<size_t>(e.concept_index)] = e.score;
    return v;
}

}  // namespace

std::vector<PseudoSample> generate_pseudo_positives(
    const EventDescription& event, const std::vector<ConceptEntry>& pool,
    const std::vector<DetectorConfig>& combos, int top_k, const TermVectorStore& store,
    const CorpusSet& corpora, const LmCaps& caps, const Tokenizer& tok,
    PairCache* cache, std::vector<std::string>* warnings) {
    if (combos.empty()) throw config_error(Errc::empty_list, "no design combos given");

    std::vector<DetectorConfig> unique;
    std::vector<size_t> sample_combo;  // index into unique, one per surviving input combo
    for (const auto& raw : combos) {
        DetectorConfig c = canonical_combo(raw);
        auto it = std::find_if(unique.begin(), unique.end(), [&](const DetectorConfig& u) {
            return u.elm_source == c.elm_source && u.clm_source == c.clm_source &&
                   u.weighting == c.weighting && u.op == c.op;
        });
        if (it == unique.end()) {
            unique.push_back(c);
            sample_combo.push_back(unique.size() - 1);
        }
        // A combo that canonicalizes onto an already-seen one contributes no
        // new sample; the collapse is silent by design.
    }

    auto scored = score_design_grid(event, pool, unique, store, corpora, caps, tok, cache);
    if (warnings) {
        for (const auto& batch : scored)
            warnings->insert(warnings->end(), batch.warnings.begin(), batch.warnings.end());
    }

    std::vector<PseudoSample> out;
    for (size_t s : sample_combo) {
        const auto& combo = unique[s];
        const auto& scores = scored[s].scores;
        bool all_zero = std::all_of(scores.begin(), scores.end(),
                                    [](double x) { return x == 0.0; });
        if (all_zero) {
            if (warnings) {
                warnings->push_back("event " + event.event_id + ": combo " +
                                    combo_tag(combo) + " produced an all-zero detector, skipped");
            }
            continue;
        }
        EventDetector det = detector_from_scores(event.event_id, combo, scores, top_k);
        std::vector<double> vec = embed_detector(det);
        bool dup = std::any_of(out.begin(), out.end(), [&](const PseudoSample& p) {
            return p.vector == vec;
        });
        if (dup) continue;
        out.push_back(PseudoSample{event.event_id, combo, std::move(vec)});
    }
    return out;
}

std::vector<std::vector<double>> assemble_negatives(
    const std::string& event_id, NegativesMode mode,
    const std::map<std::string, std::vector<PseudoSample>>& all_pseudo,
    const std::vector<ModelVector>& background) {
    if (mode == NegativesMode::real) {
        if (background.empty())
            throw data_error(Errc::empty_background, "no background model vectors");
        std::vector<std::vector<double>> out;
        out.reserve(background.size());
        for (const auto& mv : background) out.push_back(mv.values);
        return out;
    }
    if (all_pseudo.size() < 2) {
        throw data_error(Errc::insufficient_events,
                         "pseudo negatives need at least 2 event classes, have " +
                             std::to_string(all_pseudo.size()));
    }
    auto own = all_pseudo.find(event_id);
    std::vector<std::vector<double>> out;
    for (const auto& [id, samples] : all_pseudo) {
        if (id == event_id) continue;
        for (const auto& s : samples) {
            bool clash = own != all_pseudo.end() &&
                         std::any_of(own->second.begin(), own->second.end(),
                                     [&](const PseudoSample& p) { return p.vector == s.vector; });
            if (!clash) out.push_back(s.vector);
        }
    }
    if (out.empty())
        throw data_error(Errc::empty_collection, "no usable pseudo negatives for " + event_id);
    return out;
}

std::vector<double> l2_normalized(const std::vector<double>& v) {
    double ss = 0.0;
    for (double x : v) ss += x * x;
    if (ss <= 0.0) return v;
    double inv = 1.0 / std::sqrt(ss);
    std::vector<double> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = v[i] * inv;
    return out;
}

PseudoTrainResult train_pseudo_detector(const std::vector<PseudoSample>& pseudo_positives,
                                        const std::vector<std::vector<double>>& negatives,
                                        const Grids& grids, uint64_t seed) {
    if (pseudo_positives.empty())
        throw data_error(Errc::empty_input, "no pseudo positives to train on");
    if (negatives.empty()) throw data_error(Errc::empty_input, "no negatives to train on");

    std::vector<LabeledSample> data;
    data.reserve(pseudo_positives.size() + negatives.size());
    for (const auto& p : pseudo_positives)
        data.push_back(LabeledSample{l2_normalized(p.vector), 1, 0});
    for (const auto& n : negatives) data.push_back(LabeledSample{l2_normalized(n), -1, 0});

    PseudoTrainResult r;
    r.cv = cross_validate(data, grids, seed, /*tune_relevance=*/false);
    r.model = train(data, r.cv.best).model;
    return r;
}

void save_pseudo_samples(const std::filesystem::path& path,
                         const std::vector<PseudoSample>& samples) {
    std::ofstream out(path);
    if (!out) throw data_error(Errc::io_error, "cannot write " + path.string());
    size_t nc = samples.empty() ? 0 : samples.front().vector.size();
    out << "#Nc=" << nc << "\n";
    for (const auto& s : samples) {
        if (s.vector.size() != nc)
            throw data_error(Errc::dimension_mismatch, "inconsistent sample width");
        out << s.event_id << "," << combo_tag(s.provenance) << ",";
        bool first = true;
        for (size_t i = 0; i < s.vector.size(); ++i) {
            if (s.vector[i] == 0.0) continue;
            if (!first) out << ";";
            out << i << ":" << format_double(s.vector[i]);
            first = false;
        }
        out << "\n";
    }
}

std::map<std::string, std::vector<PseudoSample>> load_pseudo_samples(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error(Errc::io_error, "cannot read " + path.string());
    std::string line;
    size_t nc = 0;
    bool have_header = false;
    std::map<std::string, std::vector<PseudoSample>> out;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t.rfind("#Nc=", 0) == 0) {
            nc = static_cast<size_t>(std::stoul(t.substr(4)));
            have_header = true;
            continue;
        }
        if (t[0] == '#') continue;
        if (!have_header)
            throw data_error(Errc::parse_error, path.string() + ": missing #Nc header");
        auto fields = split(t, ',');
        if (fields.size() != 3)
            throw data_error(Errc::parse_error,
                             path.string() + ":" + std::to_string(lineno) + ": want 3 fields");
        PseudoSample s;
        s.event_id = trim(fields[0]);
        s.provenance = parse_combo_tag(trim(fields[1]));
        s.vector.assign(nc, 0.0);
        std::string body = trim(fields[2]);
        if (!body.empty()) {
            for (const auto& pair : split(body, ';')) {
                auto colon = pair.find(':');
                if (colon == std::string::npos)
                    throw data_error(Errc::parse_error, path.string() + ":" +
                                                            std::to_string(lineno) +
                                                            ": bad idx:score pair");
                size_t idx = static_cast<size_t>(std::stoul(pair.substr(0, colon)));
                if (idx >= nc)
                    throw data_error(Errc::parse_error, path.string() + ":" +
                                                            std::to_string(lineno) +
                                                            ": index out of range");
                s.vector[idx] = std::stod(pair.substr(colon + 1));
            }
        }
        out[s.event_id].push_back(std::move(s));
    }
    return out;
}

}  // namespace evdet
