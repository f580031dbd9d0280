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

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "evdet/event_detector.hpp"

namespace evdet {

enum class GtLabel { positive, related, background };

const char* to_string(GtLabel label);
GtLabel parse_gt_label(const std::string& s);

// Per-event video labels. Videos absent from the table are background: the
// file format only needs to enumerate positives and related videos.
class GroundTruth {
  public:
    void set(const std::string& video_id, const std::string& event_id, GtLabel label);
    GtLabel label(const std::string& video_id, const std::string& event_id) const;

    std::vector<std::string> event_ids() const;
    // Video ids labeled positive for the event, sorted.
    std::vector<std::string> positives(const std::string& event_id) const;
    std::vector<std::string> with_label(const std::string& event_id, GtLabel label) const;

    static GroundTruth load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

  private:
    // (event_id, video_id) -> label; ordered for deterministic persistence.
    std::map<std::pair<std::string, std::string>, GtLabel> labels_;
};

// Min-max maps scores to [0,1]; a constant list maps to all 0.5. A -infinity
// sentinel (degenerate relevance) maps to 0 while finite scores keep their
// strict order above it.
RankedList normalize_scores(const RankedList& list);

// Arithmetic-mean late fusion over normalized lists sharing one video-id set.
RankedList late_fuse(const std::vector<RankedList>& lists);

struct ApOptions {
    bool related_as_positive = false;  // near-miss videos count as non-positive by default
};

// AP = (1/R) * sum of Precision@k over positive ranks, full list, no cutoff.
double average_precision(const RankedList& list, const GroundTruth& gt,
                         const std::string& event_id, const ApOptions& options = {});

// AP over (score, is_positive) pairs; ties keep input order. Shared by
// cross-validation, which ranks unlabeled fold samples.
double average_precision_scores(std::vector<std::pair<double, bool>> scored);

// Mean of defined per-event APs.
double mean_average_precision(const std::vector<double>& aps);

}  // namespace evdet
