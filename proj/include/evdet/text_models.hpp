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
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "evdet/design_space.hpp"

namespace evdet {

// Textual description of one event: a title, free-form text, and lists of
// visual and audio cues.
struct EventDescription {
    std::string event_id;
    std::string title;
    std::string free_text;
    std::vector<std::string> visual_cues;
    std::vector<std::string> audio_cues;
};

// One entry of the concept pool. concept_index is dense in [0, pool size).
struct ConceptEntry {
    int concept_index = 0;
    std::string title;
    std::vector<std::string> subtitles;
};

// Documents describing one concept. source_tag is one of "title-only",
// "google-style", "wikipedia-style".
struct DocumentCorpus {
    int concept_index = 0;
    std::string source_tag;
    std::vector<std::string> documents;
};

struct LmEntry {
    std::string term;
    double weight = 0.0;
};

// Ranked, weighted word list. Entries are unique terms sorted by weight
// non-increasing (ties by term ascending), length <= capacity, weights > 0.
struct LanguageModel {
    std::vector<LmEntry> entries;
    int capacity = 0;

    bool contains(std::string_view term) const;
};

// ASCII tokenizer: lowercases, strips HTML tags, splits on non-alphanumeric
// bytes, drops digits-only tokens and stop words.
class Tokenizer {
  public:
    Tokenizer();  // built-in English stop-word list
    explicit Tokenizer(std::unordered_set<std::string> stopwords);

    static Tokenizer from_file(const std::filesystem::path& stopword_file);

    std::vector<std::string> tokenize(std::string_view text) const;

    const std::unordered_set<std::string>& stopwords() const { return stopwords_; }

  private:
    std::unordered_set<std::string> stopwords_;
};

// Tokenization with the built-in stop-word list.
std::vector<std::string> tokenize(std::string_view text);

// Bag-of-words term weights over a corpus. raw_count: total term frequency.
// tfidf: tf(t) * ln(D / df(t)). Terms whose weight is not positive (a term in
// every document under tfidf) are dropped, so they can never enter a model.
std::unordered_map<std::string, double> build_bow(const DocumentCorpus& corpus,
                                                  BowWeighting weighting,
                                                  const Tokenizer& tok);

// Event language model from the chosen source text, top-N by frequency.
LanguageModel build_elm(const EventDescription& event, ElmSource source, int cap_n,
                        const Tokenizer& tok);

// Concept language model: title and subtitle terms always survive the cap and
// carry the maximum corpus weight (1 for title-only corpora); remaining
// capacity is filled with the top corpus terms by weight.
LanguageModel build_clm(const ConceptEntry& entry, const DocumentCorpus& corpus,
                        BowWeighting weighting, int cap_m, const Tokenizer& tok);

// The degenerate corpus whose documents are exactly the concept's title and
// subtitles.
DocumentCorpus title_corpus(const ConceptEntry& entry);

// Per-source document corpora for a concept pool, loaded from
// <root>/<source_tag>/<concept_index>/<doc>.txt.
class CorpusSet {
  public:
    static CorpusSet load(const std::filesystem::path& root);

    void add(DocumentCorpus corpus);

    // nullptr when the concept has no documents for that source.
    const DocumentCorpus* find(ClmSource source, int concept_index) const;

  private:
    std::map<std::pair<std::string, int>, DocumentCorpus> corpora_;
};

const char* source_tag(ClmSource source);

std::vector<ConceptEntry> load_concept_pool(const std::filesystem::path& path);
void save_concept_pool(const std::filesystem::path& path,
                       const std::vector<ConceptEntry>& pool);

EventDescription load_event_kit(const std::filesystem::path& path);
void save_event_kit(const std::filesystem::path& path, const EventDescription& event);

// All *.txt kits in a directory, sorted by file name.
std::vector<EventDescription> load_event_kits(const std::filesystem::path& dir);

}  // namespace evdet
