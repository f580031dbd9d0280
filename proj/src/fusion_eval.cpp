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

#include "evdet/fusion_eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <unordered_map>

#include "evdet/errors.hpp"
#include "evdet/str_util.hpp"

namespace evdet {

const char* to_string(GtLabel label) {
    switch (label) {
    case GtLabel::positive: return "positive";
    case GtLabel::related: return "related";
    case GtLabel::background: return "background";
    }
    return "?";
}

GtLabel parse_gt_label(const std::string& s) {
    if (s == "positive") return GtLabel::positive;
    if (s == "related") return GtLabel::related;
    if (s == "background") return GtLabel::background;
    throw data_error(Errc::parse_error, "unknown ground-truth label '" + s + "'");
}

void GroundTruth::set(const std::string& video_id, const std::string& event_id,
                      GtLabel label) {
    auto key = std::make_pair(event_id, video_id);
    auto it = labels_.find(key);
    if (it != labels_.end() && it->second != label)
        throw data_error(Errc::parse_error, "conflicting labels for video '" + video_id +
                                                "' under event '" + event_id + "'");
    labels_[key] = label;
}

GtLabel GroundTruth::label(const std::string& video_id, const std::string& event_id) const {
    auto it = labels_.find({event_id, video_id});
    return it == labels_.end() ? GtLabel::background : it->second;
}

std::vector<std::string> GroundTruth::event_ids() const {
    std::vector<std::string> out;
    for (const auto& [key, label] : labels_) {
        (void)label;
        if (out.empty() || out.back() != key.first) out.push_back(key.first);
    }
    return out;
}

std::vector<std::string> GroundTruth::positives(const std::string& event_id) const {
    return with_label(event_id, GtLabel::positive);
}

std::vector<std::string> GroundTruth::with_label(const std::string& event_id,
                                                 GtLabel label) const {
    std::vector<std::string> out;
    auto lo = labels_.lower_bound({event_id, ""});
    for (auto it = lo; it != labels_.end() && it->first.first == event_id; ++it)
        if (it->second == label) out.push_back(it->first.second);
    return out;
}

GroundTruth GroundTruth::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error(Errc::io_error, "cannot open ground truth " + path.string());
    GroundTruth gt;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::vector<std::string> fields = split(t, ',');
        if (fields.size() != 3)
            throw data_error(Errc::parse_error, path.string() + ":" + std::to_string(line_no) +
                                                    ": expected video_id,event_id,label");
        gt.set(fields[0], fields[1], parse_gt_label(fields[2]));
    }
    return gt;
}

void GroundTruth::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error(Errc::io_error, "cannot write " + path.string());
    for (const auto& [key, label] : labels_)
        out << key.second << ',' << key.first << ',' << to_string(label) << "\n";
}

RankedList normalize_scores(const RankedList& list) {
    if (list.empty()) throw data_error(Errc::empty_list, "cannot normalize an empty list");
    double finite_min = std::numeric_limits<double>::infinity();
    double finite_max = -std::numeric_limits<double>::infinity();
    bool any_finite = false;
    for (const RankedItem& item : list) {
        if (std::isfinite(item.score)) {
            any_finite = true;
            finite_min = std::min(finite_min, item.score);
            finite_max = std::max(finite_max, item.score);
        }
    }
    RankedList out = list;
    if (!any_finite) {
        for (RankedItem& item : out) item.score = 0.5;
        return out;
    }
    // The -inf sentinel becomes a floor strictly below the finite minimum, so
    // min-max keeps finite scores strictly above it and order is preserved.
    double floor = finite_min - std::max(1.0, finite_max - finite_min);
    bool any_sentinel = false;
    for (RankedItem& item : out) {
        if (!std::isfinite(item.score)) {
            item.score = floor;
            any_sentinel = true;
        }
    }
    double lo = any_sentinel ? floor : finite_min;
    double hi = finite_max;
    if (hi == lo) {
        for (RankedItem& item : out) item.score = 0.5;
        return out;
    }
    double inv = 1.0 / (hi - lo);
    for (RankedItem& item : out) item.score = (item.score - lo) * inv;
    return out;
}

RankedList late_fuse(const std::vector<RankedList>& lists) {
    if (lists.empty()) throw data_error(Errc::empty_input, "nothing to fuse");
    std::vector<RankedList> normalized;
    normalized.reserve(lists.size());
    for (const RankedList& list : lists) normalized.push_back(normalize_scores(list));

    std::unordered_map<std::string, double> sums;
    sums.reserve(normalized[0].size());
    for (const RankedItem& item : normalized[0]) {
        if (!sums.emplace(item.video_id, item.score).second)
            throw data_error(Errc::id_mismatch,
                             "duplicate video id '" + item.video_id + "' in fusion input");
    }
    for (size_t i = 1; i < normalized.size(); ++i) {
        if (normalized[i].size() != normalized[0].size())
            throw data_error(Errc::id_mismatch, "fusion inputs differ in video-id sets");
        std::unordered_map<std::string, bool> seen;
        for (const RankedItem& item : normalized[i]) {
            auto it = sums.find(item.video_id);
            if (it == sums.end() || !seen.emplace(item.video_id, true).second)
                throw data_error(Errc::id_mismatch, "fusion inputs differ in video-id sets");
            it->second += item.score;
        }
    }
    double inv = 1.0 / static_cast<double>(normalized.size());
    RankedList fused;
    fused.reserve(normalized[0].size());
    for (const RankedItem& item : normalized[0])
        fused.push_back({item.video_id, sums.at(item.video_id) * inv});
    sort_ranked(fused);
    return fused;
}

double average_precision(const RankedList& list, const GroundTruth& gt,
                         const std::string& event_id, const ApOptions& options) {
    int relevant = 0;
    for (const RankedItem& item : list) {
        GtLabel label = gt.label(item.video_id, event_id);
        if (label == GtLabel::positive ||
            (options.related_as_positive && label == GtLabel::related))
            ++relevant;
    }
    if (relevant == 0)
        throw data_error(Errc::no_positives,
                         "no positives for event '" + event_id + "' in the ranked list");
    double sum = 0.0;
    int hits = 0;
    for (size_t k = 0; k < list.size(); ++k) {
        GtLabel label = gt.label(list[k].video_id, event_id);
        bool positive = label == GtLabel::positive ||
                        (options.related_as_positive && label == GtLabel::related);
        if (positive) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(k + 1);
        }
    }
    return sum / static_cast<double>(relevant);
}

double average_precision_scores(std::vector<std::pair<double, bool>> scored) {
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    int relevant = 0;
    for (const auto& [score, positive] : scored)
        if (positive) ++relevant;
    if (relevant == 0)
        throw data_error(Errc::no_positives, "no positives among scored samples");
    double sum = 0.0;
    int hits = 0;
    for (size_t k = 0; k < scored.size(); ++k) {
        if (scored[k].second) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(k + 1);
        }
    }
    return sum / static_cast<double>(relevant);
}

double mean_average_precision(const std::vector<double>& aps) {
    if (aps.empty())
        throw data_error(Errc::all_undefined, "no defined APs to average");
    double sum = 0.0;
    for (double ap : aps) sum += ap;
    return sum / static_cast<double>(aps.size());
}

}  // namespace evdet
