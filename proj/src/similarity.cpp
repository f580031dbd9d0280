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

#include "evdet/similarity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <mutex>

#include "evdet/errors.hpp"
#include "evdet/str_util.hpp"

namespace evdet {

namespace {

std::string fold_case(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

// Dot product of sparse vectors sorted by article index.
double sparse_dot(const TermVectorStore::SparseVector& a,
                  const TermVectorStore::SparseVector& b) {
    double dot = 0.0;
    size_t i = 0;
    size_t j = 0;
    while (i < a.entries.size() && j < b.entries.size()) {
        int ai = a.entries[i].first;
        int bj = b.entries[j].first;
        if (ai == bj) {
            dot += a.entries[i].second * b.entries[j].second;
            ++i;
            ++j;
        } else if (ai < bj) {
            ++i;
        } else {
            ++j;
        }
    }
    return dot;
}

// Symmetric Gram matrix of the smaller dimension: S^T S when cols <= rows,
// S S^T otherwise. Both share the largest eigenvalue.
std::vector<double> smaller_gram(const SimilarityMatrix& s, int& n) {
    bool by_cols = s.cols <= s.rows;
    n = by_cols ? s.cols : s.rows;
    std::vector<double> g(static_cast<size_t>(n) * n, 0.0);
    if (by_cols) {
        for (int r = 0; r < s.rows; ++r)
            for (int i = 0; i < n; ++i) {
                double si = s.at(r, i);
                if (si == 0.0) continue;
                for (int j = i; j < n; ++j) g[static_cast<size_t>(i) * n + j] += si * s.at(r, j);
            }
    } else {
        for (int c = 0; c < s.cols; ++c)
            for (int i = 0; i < n; ++i) {
                double si = s.at(i, c);
                if (si == 0.0) continue;
                for (int j = i; j < n; ++j) g[static_cast<size_t>(i) * n + j] += si * s.at(j, c);
            }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            g[static_cast<size_t>(i) * n + j] = g[static_cast<size_t>(j) * n + i];
    return g;
}

// Power iteration with the deterministic all-ones start vector. Returns the
// largest eigenvalue estimate; sets converged=false when the 1000-iteration
// cap is hit before the Rayleigh quotient settles to 1e-10.
double power_iteration_lambda(const std::vector<double>& g, int n, bool& converged) {
    std::vector<double> b(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> w(n, 0.0);
    double lambda = 0.0;
    converged = false;
    for (int iter = 0; iter < 1000; ++iter) {
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            const double* row = g.data() + static_cast<size_t>(i) * n;
            for (int j = 0; j < n; ++j) acc += row[j] * b[j];
            w[i] = acc;
        }
        double next = 0.0;
        for (int i = 0; i < n; ++i) next += b[i] * w[i];
        double wnorm = 0.0;
        for (int i = 0; i < n; ++i) wnorm += w[i] * w[i];
        wnorm = std::sqrt(wnorm);
        if (wnorm == 0.0) {
            converged = true;
            return 0.0;
        }
        for (int i = 0; i < n; ++i) b[i] = w[i] / wnorm;
        if (iter > 0 && std::abs(next - lambda) <= 1e-10 * std::max(1.0, std::abs(next))) {
            converged = true;
            return next;
        }
        lambda = next;
    }
    return lambda;
}

// Deterministic cyclic Jacobi fallback for spectra the power iteration cannot
// separate within its iteration cap (near-equal top eigenvalues).
double jacobi_lambda_max(std::vector<double> g, int n) {
    auto at = [&](int i, int j) -> double& { return g[static_cast<size_t>(i) * n + j]; };
    double fnorm = 0.0;
    for (double v : g) fnorm += v * v;
    fnorm = std::sqrt(fnorm);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
        if (std::sqrt(off) <= 1e-15 * (fnorm + 1.0)) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = at(p, q);
                if (apq == 0.0) continue;
                double app = at(p, p);
                double aqq = at(q, q);
                double theta = (aqq - app) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = at(k, p);
                    double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = at(p, k);
                    double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    double lmax = at(0, 0);
    for (int i = 1; i < n; ++i) lmax = std::max(lmax, at(i, i));
    return lmax;
}

double spectral_norm(const SimilarityMatrix& s) {
    int n = 0;
    std::vector<double> g = smaller_gram(s, n);
    bool converged = false;
    double lambda = power_iteration_lambda(g, n, converged);
    if (!converged) lambda = jacobi_lambda_max(std::move(g), n);
    return std::sqrt(std::max(0.0, lambda));
}

double hausdorff_score(const SimilarityMatrix& s) {
    std::vector<double> row_max(s.rows);
    for (int i = 0; i < s.rows; ++i) {
        double m = s.at(i, 0);
        for (int j = 1; j < s.cols; ++j) m = std::max(m, s.at(i, j));
        row_max[i] = m;
    }
    std::sort(row_max.begin(), row_max.end());
    size_t n = row_max.size();
    if (n % 2 == 1) return row_max[n / 2];
    return 0.5 * (row_max[n / 2 - 1] + row_max[n / 2]);
}

}  // namespace

TermVectorStore TermVectorStore::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error(Errc::io_error, "cannot open term-vector file " + path.string());
    TermVectorStore store;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            if (t.rfind("#A=", 0) == 0) {
                try {
                    store.article_dim_ = std::stoi(t.substr(3));
                } catch (const std::exception&) {
                    throw data_error(Errc::parse_error,
                                     path.string() + ": bad article-dimension header");
                }
            }
            continue;
        }
        std::vector<std::string> fields = split(t, ' ');
        if (fields.size() < 2)
            throw data_error(Errc::parse_error, path.string() + ":" + std::to_string(line_no) +
                                                     ": expected 'term idx:weight ...'");
        std::vector<std::pair<int, double>> entries;
        entries.reserve(fields.size() - 1);
        for (size_t i = 1; i < fields.size(); ++i) {
            if (fields[i].empty()) continue;
            size_t colon = fields[i].find(':');
            if (colon == std::string::npos)
                throw data_error(Errc::parse_error,
                                 path.string() + ":" + std::to_string(line_no) +
                                     ": bad idx:weight entry '" + fields[i] + "'");
            try {
                int idx = std::stoi(fields[i].substr(0, colon));
                double w = std::stod(fields[i].substr(colon + 1));
                entries.emplace_back(idx, w);
            } catch (const std::exception&) {
                throw data_error(Errc::parse_error,
                                 path.string() + ":" + std::to_string(line_no) +
                                     ": bad idx:weight entry '" + fields[i] + "'");
            }
        }
        store.insert(fields[0], std::move(entries));
    }
    return store;
}

void TermVectorStore::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error(Errc::io_error, "cannot write " + path.string());
    out << "#A=" << article_dim_ << "\n";
    std::vector<const std::string*> terms;
    terms.reserve(vectors_.size());
    for (const auto& [term, vec] : vectors_) terms.push_back(&term);
    std::sort(terms.begin(), terms.end(),
              [](const std::string* a, const std::string* b) { return *a < *b; });
    for (const std::string* term : terms) {
        const SparseVector& vec = vectors_.at(*term);
        out << *term;
        for (const auto& [idx, w] : vec.entries) out << ' ' << idx << ':' << format_double(w);
        out << "\n";
    }
}

void TermVectorStore::insert(const std::string& term,
                             std::vector<std::pair<int, double>> entries) {
    std::sort(entries.begin(), entries.end());
    double norm_sq = 0.0;
    for (const auto& [idx, w] : entries) {
        if (w < 0.0)
            throw data_error(Errc::parse_error,
                             "negative article weight for term '" + term + "'");
        if (idx < 0)
            throw data_error(Errc::parse_error,
                             "negative article index for term '" + term + "'");
        norm_sq += w * w;
    }
    if (norm_sq == 0.0)
        throw data_error(Errc::parse_error,
                         "term '" + term + "' has no nonzero article weight");
    SparseVector vec;
    vec.entries = std::move(entries);
    vec.norm = std::sqrt(norm_sq);
    if (article_dim_ > 0) {
        for (const auto& [idx, w] : vec.entries)
            if (idx >= article_dim_)
                throw data_error(Errc::parse_error, "article index out of range for term '" +
                                                        term + "'");
    }
    vectors_[fold_case(term)] = std::move(vec);
}

const TermVectorStore::SparseVector* TermVectorStore::find(const std::string& term) const {
    auto it = vectors_.find(fold_case(term));
    return it == vectors_.end() ? nullptr : &it->second;
}

PairCache PairCache::load(const std::filesystem::path& path) {
    PairCache cache;
    std::ifstream in(path);
    if (!in) return cache;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields = split(line, '\t');
        if (fields.size() != 3) continue;
        try {
            cache.values_[fields[0] + "\t" + fields[1]] = std::stod(fields[2]);
        } catch (const std::exception&) {
            // Ignore malformed cache lines: the cache is advisory.
        }
    }
    return cache;
}

void PairCache::save(const std::filesystem::path& path) const {
    std::shared_lock lock(mutex_);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error(Errc::io_error, "cannot write pair cache " + path.string());
    std::vector<const std::string*> keys;
    keys.reserve(values_.size());
    for (const auto& [key, value] : values_) keys.push_back(&key);
    std::sort(keys.begin(), keys.end(),
              [](const std::string* a, const std::string* b) { return *a < *b; });
    for (const std::string* key : keys)
        out << *key << '\t' << format_double(values_.at(*key)) << "\n";
}

std::optional<double> PairCache::get(const std::string& a, const std::string& b) const {
    std::string key = a <= b ? a + "\t" + b : b + "\t" + a;
    std::shared_lock lock(mutex_);
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

void PairCache::put(const std::string& a, const std::string& b, double value) {
    std::string key = a <= b ? a + "\t" + b : b + "\t" + a;
    std::unique_lock lock(mutex_);
    values_[key] = value;
}

size_t PairCache::size() const {
    std::shared_lock lock(mutex_);
    return values_.size();
}

double term_similarity(const std::string& a, const std::string& b,
                       const TermVectorStore& store) {
    std::string fa = fold_case(a);
    std::string fb = fold_case(b);
    if (fa == fb) return 1.0;
    const TermVectorStore::SparseVector* va = store.find(fa);
    const TermVectorStore::SparseVector* vb = store.find(fb);
    if (va == nullptr || vb == nullptr) return 0.0;
    return clamp01(sparse_dot(*va, *vb) / (va->norm * vb->norm));
}

SimilarityMatrix similarity_matrix(const LanguageModel& elm, const LanguageModel& clm,
                                   const TermVectorStore& store, PairCache* cache) {
    if (elm.entries.empty() || clm.entries.empty())
        throw data_error(Errc::empty_model, "similarity matrix needs non-empty models");
    SimilarityMatrix s;
    s.rows = static_cast<int>(elm.entries.size());
    s.cols = static_cast<int>(clm.entries.size());
    s.data.resize(static_cast<size_t>(s.rows) * s.cols);
    for (int i = 0; i < s.rows; ++i) {
        const std::string& a = elm.entries[i].term;
        for (int j = 0; j < s.cols; ++j) {
            const std::string& b = clm.entries[j].term;
            double value;
            if (cache != nullptr) {
                if (std::optional<double> hit = cache->get(a, b)) {
                    value = *hit;
                } else {
                    value = term_similarity(a, b, store);
                    cache->put(a, b, value);
                }
            } else {
                value = term_similarity(a, b, store);
            }
            s.at(i, j) = value;
        }
    }
    return s;
}

double matrix_score(const SimilarityMatrix& s, MatrixOp op) {
    switch (op) {
    case MatrixOp::spectral:
        return spectral_norm(s);
    case MatrixOp::inf_norm: {
        double best = 0.0;
        for (int i = 0; i < s.rows; ++i) {
            double sum = 0.0;
            for (int j = 0; j < s.cols; ++j) sum += std::abs(s.at(i, j));
            best = std::max(best, sum);
        }
        return best;
    }
    case MatrixOp::frobenius: {
        double sum = 0.0;
        for (double v : s.data) sum += v * v;
        return std::sqrt(sum);
    }
    case MatrixOp::max_entry: {
        double best = s.data.empty() ? 0.0 : s.data[0];
        for (double v : s.data) best = std::max(best, v);
        return best;
    }
    case MatrixOp::hausdorff:
        return hausdorff_score(s);
    }
    return 0.0;
}

std::vector<double> all_matrix_scores(const SimilarityMatrix& s) {
    std::vector<double> out;
    out.reserve(5);
    for (MatrixOp op : all_matrix_ops()) out.push_back(matrix_score(s, op));
    return out;
}

}  // namespace evdet
