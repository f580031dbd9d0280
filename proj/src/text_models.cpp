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

#include "evdet/text_models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "evdet/errors.hpp"
#include "evdet/str_util.hpp"

namespace evdet {

namespace {

// Fixed English stop-word list shipped in-repo so tokenization never depends
// on external data.
const char* const kStopwords[] = {
    "a", "about", "above", "after", "again", "against", "all", "am", "an", "and",
    "any", "are", "as", "at", "be", "because", "been", "before", "being", "below",
    "between", "both", "but", "by", "can", "cannot", "could", "did", "do", "does",
    "doing", "down", "during", "each", "few", "for", "from", "further", "had",
    "has", "have", "having", "he", "her", "here", "hers", "herself", "him",
    "himself", "his", "how", "i", "if", "in", "into", "is", "it", "its", "itself",
    "just", "me", "more", "most", "my", "myself", "no", "nor", "not", "now", "of",
    "off", "on", "once", "only", "or", "other", "ought", "our", "ours",
    "ourselves", "out", "over", "own", "same", "she", "should", "so", "some",
    "such", "than", "that", "the", "their", "theirs", "them", "themselves",
    "then", "there", "these", "they", "this", "those", "through", "to", "too",
    "under", "until", "up", "very", "was", "we", "were", "what", "when", "where",
    "which", "while", "who", "whom", "why", "will", "with", "would", "you",
    "your", "yours", "yourself", "yourselves",
};

std::unordered_set<std::string> builtin_stopwords() {
    std::unordered_set<std::string> out;
    for (const char* w : kStopwords) out.insert(w);
    return out;
}

bool is_alnum(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

// Sort a term/weight map into LanguageModel order: weight non-increasing,
// ties by term ascending.
std::vector<LmEntry> sorted_entries(const std::unordered_map<std::string, double>& weights) {
    std::vector<LmEntry> entries;
    entries.reserve(weights.size());
    for (const auto& [term, weight] : weights) entries.push_back({term, weight});
    std::sort(entries.begin(), entries.end(), [](const LmEntry& a, const LmEntry& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        return a.term < b.term;
    });
    return entries;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error(Errc::io_error, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

bool LanguageModel::contains(std::string_view term) const {
    for (const LmEntry& e : entries)
        if (e.term == term) return true;
    return false;
}

Tokenizer::Tokenizer() : stopwords_(builtin_stopwords()) {}

Tokenizer::Tokenizer(std::unordered_set<std::string> stopwords)
    : stopwords_(std::move(stopwords)) {}

Tokenizer Tokenizer::from_file(const std::filesystem::path& stopword_file) {
    std::ifstream in(stopword_file);
    if (!in)
        throw data_error(Errc::io_error, "cannot open stop-word file " + stopword_file.string());
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        std::string w = trim(line);
        if (!w.empty()) words.insert(w);
    }
    return Tokenizer(std::move(words));
}

std::vector<std::string> Tokenizer::tokenize(std::string_view text) const {
    std::vector<std::string> out;
    std::string token;
    bool in_tag = false;
    bool has_alpha = false;
    auto flush = [&] {
        if (!token.empty() && has_alpha && !stopwords_.count(token)) out.push_back(token);
        token.clear();
        has_alpha = false;
    };
    for (unsigned char c : text) {
        if (in_tag) {
            if (c == '>') in_tag = false;
            continue;
        }
        if (c == '<') {
            in_tag = true;
            flush();
            continue;
        }
        if (is_alnum(c)) {
            char lower = static_cast<char>(std::tolower(c));
            if (lower < '0' || lower > '9') has_alpha = true;
            token.push_back(lower);
        } else {
            flush();
        }
    }
    flush();
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    static const Tokenizer tok;
    return tok.tokenize(text);
}

std::unordered_map<std::string, double> build_bow(const DocumentCorpus& corpus,
                                                  BowWeighting weighting,
                                                  const Tokenizer& tok) {
    if (corpus.documents.empty())
        throw data_error(Errc::empty_corpus, "corpus for concept " +
                                                 std::to_string(corpus.concept_index) +
                                                 " has zero documents");
    std::unordered_map<std::string, double> tf;
    std::unordered_map<std::string, int> df;
    for (const std::string& doc : corpus.documents) {
        std::unordered_set<std::string> seen;
        for (const std::string& term : tok.tokenize(doc)) {
            tf[term] += 1.0;
            if (seen.insert(term).second) df[term] += 1;
        }
    }
    if (weighting == BowWeighting::raw_count) return tf;
    double d = static_cast<double>(corpus.documents.size());
    std::unordered_map<std::string, double> out;
    for (const auto& [term, freq] : tf) {
        double w = freq * std::log(d / static_cast<double>(df[term]));
        if (w > 0.0) out.emplace(term, w);
    }
    return out;
}

LanguageModel build_elm(const EventDescription& event, ElmSource source, int cap_n,
                        const Tokenizer& tok) {
    if (cap_n < 1)
        throw config_error(Errc::invalid_argument, "ELM cap must be >= 1");
    std::unordered_map<std::string, double> freq;
    auto count = [&](std::string_view text) {
        for (const std::string& term : tok.tokenize(text)) freq[term] += 1.0;
    };
    switch (source) {
    case ElmSource::title:
        count(event.title);
        break;
    case ElmSource::visual:
        for (const std::string& cue : event.visual_cues) count(cue);
        break;
    case ElmSource::audio_visual:
        for (const std::string& cue : event.visual_cues) count(cue);
        for (const std::string& cue : event.audio_cues) count(cue);
        count(event.free_text);
        break;
    }
    if (freq.empty())
        throw data_error(Errc::empty_source, "event " + event.event_id + " source " +
                                                 to_string(source) +
                                                 " yields no terms after cleaning");
    LanguageModel lm;
    lm.capacity = cap_n;
    lm.entries = sorted_entries(freq);
    if (lm.entries.size() > static_cast<size_t>(cap_n)) lm.entries.resize(cap_n);
    return lm;
}

DocumentCorpus title_corpus(const ConceptEntry& entry) {
    DocumentCorpus corpus;
    corpus.concept_index = entry.concept_index;
    corpus.source_tag = "title-only";
    corpus.documents.push_back(entry.title);
    for (const std::string& s : entry.subtitles) corpus.documents.push_back(s);
    return corpus;
}

LanguageModel build_clm(const ConceptEntry& entry, const DocumentCorpus& corpus,
                        BowWeighting weighting, int cap_m, const Tokenizer& tok) {
    if (cap_m < 1)
        throw config_error(Errc::invalid_argument, "CLM cap must be >= 1");
    if (corpus.concept_index != entry.concept_index)
        throw data_error(Errc::dimension_mismatch,
                         "corpus concept index does not match concept entry");
    std::unordered_map<std::string, double> bow = build_bow(corpus, weighting, tok);

    std::vector<std::string> title_terms;
    std::unordered_set<std::string> title_set;
    auto add_title_terms = [&](std::string_view text) {
        for (const std::string& term : tok.tokenize(text))
            if (title_set.insert(term).second) title_terms.push_back(term);
    };
    add_title_terms(entry.title);
    for (const std::string& s : entry.subtitles) add_title_terms(s);

    // Title and subtitle terms are kept unconditionally and outrank every
    // corpus term: their weight is the maximum corpus weight (1 for
    // title-only corpora, or when no corpus term has positive weight).
    double title_weight = 1.0;
    if (corpus.source_tag != "title-only") {
        for (const auto& [term, weight] : bow) title_weight = std::max(title_weight, weight);
    }

    std::unordered_map<std::string, double> selected;
    for (const std::string& term : title_terms) selected.emplace(term, title_weight);
    if (selected.size() > static_cast<size_t>(cap_m)) {
        // Too many title terms alone: deterministic truncation, all weights
        // equal so the tie-break is lexicographic.
        std::vector<LmEntry> entries = sorted_entries(selected);
        entries.resize(cap_m);
        LanguageModel lm;
        lm.capacity = cap_m;
        lm.entries = std::move(entries);
        return lm;
    }

    size_t budget = static_cast<size_t>(cap_m) - selected.size();
    if (budget > 0 && corpus.source_tag != "title-only") {
        std::vector<LmEntry> corpus_entries;
        corpus_entries.reserve(bow.size());
        for (const auto& [term, weight] : bow)
            if (!title_set.count(term)) corpus_entries.push_back({term, weight});
        std::sort(corpus_entries.begin(), corpus_entries.end(),
                  [](const LmEntry& a, const LmEntry& b) {
                      if (a.weight != b.weight) return a.weight > b.weight;
                      return a.term < b.term;
                  });
        if (corpus_entries.size() > budget) corpus_entries.resize(budget);
        for (const LmEntry& e : corpus_entries) selected.emplace(e.term, e.weight);
    }

    LanguageModel lm;
    lm.capacity = cap_m;
    lm.entries = sorted_entries(selected);
    return lm;
}

const char* source_tag(ClmSource source) {
    switch (source) {
    case ClmSource::title: return "title-only";
    case ClmSource::google: return "google-style";
    case ClmSource::wikipedia: return "wikipedia-style";
    }
    return "?";
}

CorpusSet CorpusSet::load(const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    CorpusSet set;
    for (ClmSource source : {ClmSource::google, ClmSource::wikipedia}) {
        fs::path dir = root / source_tag(source);
        if (!fs::is_directory(dir)) continue;
        std::vector<fs::path> concept_dirs;
        for (const auto& entry : fs::directory_iterator(dir))
            if (entry.is_directory()) concept_dirs.push_back(entry.path());
        std::sort(concept_dirs.begin(), concept_dirs.end());
        for (const fs::path& cdir : concept_dirs) {
            int index = 0;
            try {
                index = std::stoi(cdir.filename().string());
            } catch (const std::exception&) {
                throw data_error(Errc::parse_error,
                                 "corpus directory name is not a concept index: " +
                                     cdir.string());
            }
            DocumentCorpus corpus;
            corpus.concept_index = index;
            corpus.source_tag = source_tag(source);
            std::vector<fs::path> files;
            for (const auto& entry : fs::directory_iterator(cdir))
                if (entry.is_regular_file() && entry.path().extension() == ".txt")
                    files.push_back(entry.path());
            std::sort(files.begin(), files.end());
            for (const fs::path& f : files) corpus.documents.push_back(read_text_file(f));
            if (!corpus.documents.empty()) set.add(std::move(corpus));
        }
    }
    return set;
}

void CorpusSet::add(DocumentCorpus corpus) {
    std::pair<std::string, int> key{corpus.source_tag, corpus.concept_index};
    corpora_[key] = std::move(corpus);
}

const DocumentCorpus* CorpusSet::find(ClmSource source, int concept_index) const {
    auto it = corpora_.find({source_tag(source), concept_index});
    return it == corpora_.end() ? nullptr : &it->second;
}

std::vector<ConceptEntry> load_concept_pool(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error(Errc::io_error, "cannot open concept pool " + path.string());
    std::vector<ConceptEntry> pool;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<std::string> fields = split(line, '\t');
        if (fields.size() != 3)
            throw data_error(Errc::parse_error, path.string() + ":" + std::to_string(line_no) +
                                                     ": expected 3 tab-separated fields");
        ConceptEntry entry;
        try {
            entry.concept_index = std::stoi(fields[0]);
        } catch (const std::exception&) {
            throw data_error(Errc::parse_error, path.string() + ":" + std::to_string(line_no) +
                                                     ": bad concept index '" + fields[0] + "'");
        }
        entry.title = trim(fields[1]);
        if (entry.title.empty())
            throw data_error(Errc::parse_error, path.string() + ":" + std::to_string(line_no) +
                                                     ": empty concept title");
        for (const std::string& sub : split(fields[2], '|')) {
            std::string s = trim(sub);
            if (!s.empty()) entry.subtitles.push_back(s);
        }
        pool.push_back(std::move(entry));
    }
    std::sort(pool.begin(), pool.end(), [](const ConceptEntry& a, const ConceptEntry& b) {
        return a.concept_index < b.concept_index;
    });
    for (size_t i = 0; i < pool.size(); ++i) {
        if (pool[i].concept_index != static_cast<int>(i))
            throw data_error(Errc::parse_error,
                             path.string() + ": concept indices must be dense 0..N_c-1");
    }
    if (pool.empty()) throw data_error(Errc::parse_error, path.string() + ": empty concept pool");
    return pool;
}

void save_concept_pool(const std::filesystem::path& path,
                       const std::vector<ConceptEntry>& pool) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error(Errc::io_error, "cannot write " + path.string());
    for (const ConceptEntry& entry : pool) {
        out << entry.concept_index << '\t' << entry.title << '\t';
        for (size_t i = 0; i < entry.subtitles.size(); ++i) {
            if (i > 0) out << '|';
            out << entry.subtitles[i];
        }
        out << '\n';
    }
}

EventDescription load_event_kit(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error(Errc::io_error, "cannot open event kit " + path.string());
    EventDescription event;
    event.event_id = path.stem().string();
    std::string section;
    std::string line;
    std::vector<std::string> free_text_lines;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.size() >= 2 && t.front() == '[' && t.back() == ']') {
            section = t.substr(1, t.size() - 2);
            continue;
        }
        if (section == "title") {
            if (!t.empty()) {
                if (!event.title.empty()) event.title += ' ';
                event.title += t;
            }
        } else if (section == "free_text") {
            free_text_lines.push_back(line);
        } else if (section == "visual_cues") {
            if (!t.empty()) event.visual_cues.push_back(t);
        } else if (section == "audio_cues") {
            if (!t.empty()) event.audio_cues.push_back(t);
        } else if (!t.empty()) {
            throw data_error(Errc::parse_error,
                             path.string() + ": content before any [section] header");
        }
    }
    for (size_t i = 0; i < free_text_lines.size(); ++i) {
        if (i > 0) event.free_text += '\n';
        event.free_text += free_text_lines[i];
    }
    event.free_text = trim(event.free_text);
    if (event.title.empty())
        throw data_error(Errc::parse_error, path.string() + ": missing or empty [title]");
    return event;
}

void save_event_kit(const std::filesystem::path& path, const EventDescription& event) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error(Errc::io_error, "cannot write " + path.string());
    out << "[title]\n" << event.title << "\n";
    out << "[free_text]\n";
    if (!event.free_text.empty()) out << event.free_text << "\n";
    out << "[visual_cues]\n";
    for (const std::string& cue : event.visual_cues) out << cue << "\n";
    out << "[audio_cues]\n";
    for (const std::string& cue : event.audio_cues) out << cue << "\n";
}

std::vector<EventDescription> load_event_kits(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw data_error(Errc::io_error, "event kit directory not found: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<EventDescription> kits;
    kits.reserve(files.size());
    for (const fs::path& f : files) kits.push_back(load_event_kit(f));
    return kits;
}

}  // namespace evdet
