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

#include "evdet/design_space.hpp"

#include "evdet/errors.hpp"
#include "evdet/str_util.hpp"

namespace evdet {

const char* to_string(ElmSource v) {
    switch (v) {
    case ElmSource::title: return "Title";
    case ElmSource::visual: return "Visual";
    case ElmSource::audio_visual: return "AudioVisual";
    }
    return "?";
}

const char* to_string(ClmSource v) {
    switch (v) {
    case ClmSource::title: return "Title";
    case ClmSource::google: return "Google";
    case ClmSource::wikipedia: return "Wikipedia";
    }
    return "?";
}

const char* to_string(BowWeighting v) {
    switch (v) {
    case BowWeighting::tfidf: return "TfIdf";
    case BowWeighting::raw_count: return "NoTfIdf";
    }
    return "?";
}

const char* to_string(MatrixOp v) {
    switch (v) {
    case MatrixOp::spectral: return "Spectral";
    case MatrixOp::inf_norm: return "InfNorm";
    case MatrixOp::frobenius: return "Frobenius";
    case MatrixOp::max_entry: return "MaxEntry";
    case MatrixOp::hausdorff: return "Hausdorff";
    }
    return "?";
}

const char* to_string(Relevance v) {
    switch (v) {
    case Relevance::cosine: return "Cosine";
    case Relevance::hist_intersect: return "HistInt";
    case Relevance::kullback: return "Kullback";
    case Relevance::chi2: return "Chi2";
    case Relevance::euclidean: return "Euclidean";
    }
    return "?";
}

namespace {

[[noreturn]] void bad_choice(const char* axis, const std::string& s) {
    throw config_error(Errc::invalid_config,
                       std::string("unknown ") + axis + " choice: '" + s + "'");
}

}  // namespace

ElmSource parse_elm_source(const std::string& s) {
    for (ElmSource v : all_elm_sources())
        if (s == to_string(v)) return v;
    bad_choice("event-source", s);
}

ClmSource parse_clm_source(const std::string& s) {
    for (ClmSource v : all_clm_sources())
        if (s == to_string(v)) return v;
    bad_choice("concept-source", s);
}

BowWeighting parse_weighting(const std::string& s) {
    for (BowWeighting v : all_weightings())
        if (s == to_string(v)) return v;
    bad_choice("weighting", s);
}

MatrixOp parse_matrix_op(const std::string& s) {
    for (MatrixOp v : all_matrix_ops())
        if (s == to_string(v)) return v;
    bad_choice("matrix-op", s);
}

Relevance parse_relevance(const std::string& s) {
    for (Relevance v : all_relevances())
        if (s == to_string(v)) return v;
    bad_choice("relevance", s);
}

std::vector<ElmSource> all_elm_sources() {
    return {ElmSource::title, ElmSource::visual, ElmSource::audio_visual};
}

std::vector<ClmSource> all_clm_sources() {
    return {ClmSource::title, ClmSource::google, ClmSource::wikipedia};
}

std::vector<BowWeighting> all_weightings() {
    return {BowWeighting::tfidf, BowWeighting::raw_count};
}

std::vector<MatrixOp> all_matrix_ops() {
    return {MatrixOp::spectral, MatrixOp::inf_norm, MatrixOp::frobenius,
            MatrixOp::max_entry, MatrixOp::hausdorff};
}

std::vector<Relevance> all_relevances() {
    return {Relevance::cosine, Relevance::hist_intersect, Relevance::kullback,
            Relevance::chi2, Relevance::euclidean};
}

std::vector<DetectorConfig> enumerate_detector_configs() {
    std::vector<DetectorConfig> out;
    out.reserve(90);
    for (ElmSource e : all_elm_sources())
        for (ClmSource c : all_clm_sources())
            for (BowWeighting w : all_weightings())
                for (MatrixOp op : all_matrix_ops())
                    out.push_back(DetectorConfig{e, c, w, op});
    return out;
}

std::vector<FullConfig> enumerate_full_configs() {
    std::vector<FullConfig> out;
    out.reserve(450);
    for (const DetectorConfig& d : enumerate_detector_configs())
        for (Relevance r : all_relevances())
            out.push_back(FullConfig{d, r});
    return out;
}

std::string combo_tag(const DetectorConfig& c) {
    std::string out = to_string(c.elm_source);
    out += '-';
    out += to_string(c.clm_source);
    out += '-';
    out += to_string(c.weighting);
    out += '-';
    out += to_string(c.op);
    return out;
}

DetectorConfig parse_combo_tag(const std::string& tag) {
    std::vector<std::string> parts = split(tag, '-');
    if (parts.size() != 4)
        throw data_error(Errc::parse_error, "bad combo tag: '" + tag + "'");
    DetectorConfig c;
    c.elm_source = parse_elm_source(parts[0]);
    c.clm_source = parse_clm_source(parts[1]);
    c.weighting = parse_weighting(parts[2]);
    c.op = parse_matrix_op(parts[3]);
    return c;
}

}  // namespace evdet
