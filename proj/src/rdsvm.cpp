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

#include "evdet/rdsvm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <list>
#include <unordered_map>

#include "evdet/errors.hpp"
#include "evdet/fusion_eval.hpp"
#include "evdet/rng.hpp"
#include "evdet/str_util.hpp"
#include "evdet/thread_pool.hpp"

namespace evdet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTau = 1e-12;  // floor for the pair curvature

void check_dims(const std::vector<LabeledSample>& data) {
    if (data.empty()) throw data_error(Errc::empty_input, "empty training set");
    size_t d = data[0].features.size();
    for (const LabeledSample& s : data) {
        if (s.features.size() != d)
            throw data_error(Errc::dimension_mismatch, "inconsistent feature dimensions");
        if (s.y != 1 && s.y != -1)
            throw data_error(Errc::parse_error, "labels must be +1 or -1");
        if (s.u != 0 && s.u != 1)
            throw data_error(Errc::parse_error, "relevance flags must be 0 or 1");
        for (double v : s.features)
            if (!std::isfinite(v))
                throw data_error(Errc::parse_error, "non-finite feature value");
    }
}

void check_params(const TrainParams& p) {
    if (!(p.cost > 0.0))
        throw config_error(Errc::invalid_argument, "cost must be positive");
    if (p.kernel == KernelKind::rbf && !(p.gamma > 0.0))
        throw config_error(Errc::invalid_argument, "gamma must be positive");
    if (!(p.relevance > 0.0 && p.relevance <= 1.0))
        throw config_error(Errc::invalid_argument, "relevance must lie in (0, 1]");
    if (!(p.tol > 0.0))
        throw config_error(Errc::invalid_argument, "tolerance must be positive");
}

// LRU cache of kernel matrix rows. Row t holds K(x_t, x_j) for all j.
class KernelCache {
  public:
    KernelCache(const std::vector<LabeledSample>& data, KernelKind kind, double gamma)
        : data_(data), kind_(kind), gamma_(gamma) {
        size_t l = data.size();
        size_t budget_bytes = 256ull << 20;
        capacity_ = std::max<size_t>(2, std::min(l, budget_bytes / (8 * std::max<size_t>(l, 1))));
    }

    const std::vector<double>& row(size_t t) {
        auto it = rows_.find(t);
        if (it != rows_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second.use);
            return it->second.values;
        }
        if (rows_.size() >= capacity_) {
            size_t victim = lru_.back();
            lru_.pop_back();
            rows_.erase(victim);
        }
        lru_.push_front(t);
        Entry entry;
        entry.use = lru_.begin();
        entry.values.resize(data_.size());
        for (size_t j = 0; j < data_.size(); ++j)
            entry.values[j] = kernel_value(kind_, data_[t].features, data_[j].features, gamma_);
        auto [pos, inserted] = rows_.emplace(t, std::move(entry));
        (void)inserted;
        return pos->second.values;
    }

  private:
    struct Entry {
        std::vector<double> values;
        std::list<size_t>::iterator use;
    };
    const std::vector<LabeledSample>& data_;
    KernelKind kind_;
    double gamma_;
    size_t capacity_;
    std::list<size_t> lru_;
    std::unordered_map<size_t, Entry> rows_;
};

// Minimizes f(a) = a'Qa/2 - e'a subject to y'a = 0, 0 <= a_i <= C_i, with
// Q_ij = y_i y_j K_ij and C_i = cost * g(u_i). Maximal-violating-pair SMO.
struct SmoSolver {
    const std::vector<LabeledSample>& data;
    const TrainParams& params;
    size_t l;
    std::vector<double> c_box;
    std::vector<double> alpha;
    std::vector<double> grad;  // G_i = (Qa)_i - 1
    KernelCache cache;
    long long iterations = 0;
    double final_gap = 0.0;

    SmoSolver(const std::vector<LabeledSample>& data_in, const TrainParams& params_in)
        : data(data_in),
          params(params_in),
          l(data_in.size()),
          c_box(l),
          alpha(l, 0.0),
          grad(l, -1.0),
          cache(data_in, params_in.kernel, params_in.gamma) {
        for (size_t i = 0; i < l; ++i)
            c_box[i] = params.cost * (data[i].u == 1 ? params.relevance : 1.0);
    }

    bool in_up(size_t t) const {
        return data[t].y == 1 ? alpha[t] < c_box[t] : alpha[t] > 0.0;
    }
    bool in_low(size_t t) const {
        return data[t].y == 1 ? alpha[t] > 0.0 : alpha[t] < c_box[t];
    }

    void solve() {
        for (;;) {
            double m_up = -kInf;
            double m_low = kInf;
            size_t i = l;
            size_t j = l;
            for (size_t t = 0; t < l; ++t) {
                double v = -static_cast<double>(data[t].y) * grad[t];
                if (in_up(t) && v > m_up) {
                    m_up = v;
                    i = t;
                }
                if (in_low(t) && v < m_low) {
                    m_low = v;
                    j = t;
                }
            }
            final_gap = m_up - m_low;
            if (final_gap <= params.tol || i == l || j == l) return;
            if (iterations >= params.max_iter)
                throw numeric_error(Errc::non_convergence,
                                    "solver hit max iterations with KKT violation " +
                                        format_compact(final_gap));
            ++iterations;
            update_pair(i, j);
        }
    }

    void update_pair(size_t i, size_t j) {
        const std::vector<double>& ki = cache.row(i);
        double kjj;
        double kij = ki[j];
        double kii = ki[i];
        {
            const std::vector<double>& kj = cache.row(j);
            kjj = kj[j];
        }
        double yi = data[i].y;
        double yj = data[j].y;
        double old_ai = alpha[i];
        double old_aj = alpha[j];
        double quad = kii + kjj - 2.0 * kij;
        if (quad <= 0.0) quad = kTau;

        if (yi != yj) {
            double delta = (-grad[i] - grad[j]) / quad;
            double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else {
                if (alpha[i] < 0.0) {
                    alpha[i] = 0.0;
                    alpha[j] = -diff;
                }
            }
            if (diff > c_box[i] - c_box[j]) {
                if (alpha[i] > c_box[i]) {
                    alpha[i] = c_box[i];
                    alpha[j] = c_box[i] - diff;
                }
            } else {
                if (alpha[j] > c_box[j]) {
                    alpha[j] = c_box[j];
                    alpha[i] = c_box[j] + diff;
                }
            }
        } else {
            double delta = (grad[i] - grad[j]) / quad;
            double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c_box[i]) {
                if (alpha[i] > c_box[i]) {
                    alpha[i] = c_box[i];
                    alpha[j] = sum - c_box[i];
                }
            } else {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = sum;
                }
            }
            if (sum > c_box[j]) {
                if (alpha[j] > c_box[j]) {
                    alpha[j] = c_box[j];
                    alpha[i] = sum - c_box[j];
                }
            } else {
                if (alpha[i] < 0.0) {
                    alpha[i] = 0.0;
                    alpha[j] = sum;
                }
            }
        }

        double delta_ai = alpha[i] - old_ai;
        double delta_aj = alpha[j] - old_aj;
        if (delta_ai == 0.0 && delta_aj == 0.0) return;
        const std::vector<double>& ki2 = cache.row(i);
        const std::vector<double>& kj2 = cache.row(j);
        for (size_t t = 0; t < l; ++t) {
            double yt = data[t].y;
            grad[t] += yt * (yi * ki2[t] * delta_ai + yj * kj2[t] * delta_aj);
        }
    }

    double bias() const {
        double ub = kInf;
        double lb = -kInf;
        double sum_free = 0.0;
        size_t n_free = 0;
        for (size_t t = 0; t < l; ++t) {
            double yg = static_cast<double>(data[t].y) * grad[t];
            if (alpha[t] >= c_box[t]) {
                if (data[t].y == -1)
                    ub = std::min(ub, yg);
                else
                    lb = std::max(lb, yg);
            } else if (alpha[t] <= 0.0) {
                if (data[t].y == 1)
                    ub = std::min(ub, yg);
                else
                    lb = std::max(lb, yg);
            } else {
                ++n_free;
                sum_free += yg;
            }
        }
        double rho;
        if (n_free > 0)
            rho = sum_free / static_cast<double>(n_free);
        else
            rho = (ub + lb) / 2.0;
        return -rho;
    }

};

}  // namespace

double rbf_kernel(const std::vector<double>& x, const std::vector<double>& z, double gamma) {
    if (x.size() != z.size())
        throw data_error(Errc::dimension_mismatch, "kernel operands differ in dimension");
    double dist_sq = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        double diff = x[i] - z[i];
        dist_sq += diff * diff;
    }
    return std::exp(-gamma * dist_sq);
}

double kernel_value(KernelKind kind, const std::vector<double>& x,
                    const std::vector<double>& z, double gamma) {
    if (kind == KernelKind::rbf) return rbf_kernel(x, z, gamma);
    if (x.size() != z.size())
        throw data_error(Errc::dimension_mismatch, "kernel operands differ in dimension");
    double dot = 0.0;
    for (size_t i = 0; i < x.size(); ++i) dot += x[i] * z[i];
    return dot;
}

TrainResult train(const std::vector<LabeledSample>& data, const TrainParams& params) {
    check_dims(data);
    check_params(params);
    bool has_pos = false;
    bool has_neg = false;
    for (const LabeledSample& s : data) {
        if (s.y == 1) has_pos = true;
        if (s.y == -1) has_neg = true;
    }
    if (!has_pos || !has_neg)
        throw data_error(Errc::single_class, "training needs at least one sample per class");

    SmoSolver solver(data, params);
    solver.solve();

    TrainResult result;
    result.alpha = solver.alpha;
    result.kkt_gap = solver.final_gap;
    result.iterations = solver.iterations;
    double obj = 0.0;
    for (size_t t = 0; t < data.size(); ++t)
        obj += solver.alpha[t] * (1.0 - solver.grad[t]);
    result.dual_objective = 0.5 * obj;

    SvmModel model;
    model.kernel = params.kernel;
    model.gamma = params.gamma;
    model.cost = params.cost;
    model.relevance = params.relevance;
    model.bias = solver.bias();
    for (size_t t = 0; t < data.size(); ++t) {
        if (solver.alpha[t] > 0.0) {
            SupportVector sv;
            sv.alpha = solver.alpha[t];
            sv.y = data[t].y;
            sv.u = data[t].u;
            sv.x = data[t].features;
            model.svs.push_back(std::move(sv));
        }
    }
    result.model = std::move(model);
    return result;
}

double predict(const SvmModel& model, const std::vector<double>& x) {
    double f = model.bias;
    for (const SupportVector& sv : model.svs) {
        if (sv.x.size() != x.size())
            throw data_error(Errc::dimension_mismatch,
                             "probe dimension does not match training dimension");
        f += sv.alpha * static_cast<double>(sv.y) * kernel_value(model.kernel, sv.x, x, model.gamma);
    }
    return f;
}

Grids default_grids() {
    Grids g;
    for (int e = -5; e <= 15; e += 2) g.cost_grid.push_back(std::ldexp(1.0, e));
    for (int e = -15; e <= 3; e += 2) g.gamma_grid.push_back(std::ldexp(1.0, e));
    for (int i = 1; i <= 10; ++i) g.relevance_grid.push_back(static_cast<double>(i) / 10.0);
    return g;
}

namespace {

// Deterministic stratified folds: shuffle each (y, u) group with a seeded RNG,
// then deal round-robin.
std::vector<int> stratified_folds(const std::vector<LabeledSample>& data, int folds,
                                  uint64_t seed) {
    std::vector<int> assignment(data.size(), 0);
    struct Group {
        int key;
        std::vector<size_t> members;
    };
    std::vector<Group> groups;
    auto group_key = [](const LabeledSample& s) { return (s.y == 1 ? 2 : 0) + s.u; };
    for (int key = 0; key < 4; ++key) groups.push_back({key, {}});
    for (size_t i = 0; i < data.size(); ++i) groups[group_key(data[i])].members.push_back(i);
    for (Group& g : groups) {
        Rng rng(mix_seed(seed, 0x666f6c64, static_cast<uint64_t>(g.key)));
        rng.shuffle(g.members);
        for (size_t p = 0; p < g.members.size(); ++p)
            assignment[g.members[p]] = static_cast<int>(p % static_cast<size_t>(folds));
    }
    return assignment;
}

double fold_mean_ap(const std::vector<LabeledSample>& data, const std::vector<int>& fold_of,
                    int folds, const TrainParams& params) {
    double sum = 0.0;
    int counted = 0;
    for (int f = 0; f < folds; ++f) {
        std::vector<LabeledSample> train_set;
        std::vector<const LabeledSample*> val_set;
        for (size_t i = 0; i < data.size(); ++i) {
            if (fold_of[i] == f)
                val_set.push_back(&data[i]);
            else
                train_set.push_back(data[i]);
        }
        bool has_val_positive = false;
        for (const LabeledSample* s : val_set)
            if (s->y == 1 && s->u == 0) has_val_positive = true;
        if (!has_val_positive) continue;
        try {
            TrainResult trained = train(train_set, params);
            std::vector<std::pair<double, bool>> scored;
            scored.reserve(val_set.size());
            for (const LabeledSample* s : val_set)
                scored.emplace_back(predict(trained.model, s->features),
                                    s->y == 1 && s->u == 0);
            sum += average_precision_scores(scored);
            ++counted;
        } catch (const Error&) {
            // A failing fold contributes AP 0.
            ++counted;
        }
    }
    return counted > 0 ? sum / static_cast<double>(counted) : 0.0;
}

}  // namespace

CvResult cross_validate(const std::vector<LabeledSample>& data, const Grids& grids,
                        uint64_t seed, bool tune_relevance) {
    check_dims(data);
    if (grids.folds < 2)
        throw config_error(Errc::invalid_config, "cross-validation needs at least 2 folds");
    if (grids.cost_grid.empty() || grids.gamma_grid.empty())
        throw config_error(Errc::invalid_config, "empty parameter grid");
    std::vector<int> fold_of = stratified_folds(data, grids.folds, seed);

    bool has_related = false;
    for (const LabeledSample& s : data)
        if (s.u == 1) has_related = true;

    struct Cell {
        TrainParams params;
        double ap = 0.0;
    };
    std::vector<Cell> cells;
    for (double cost : grids.cost_grid) {
        for (double gamma : grids.gamma_grid) {
            TrainParams p;
            p.kernel = grids.kernel;
            p.cost = cost;
            p.gamma = gamma;
            p.relevance = 1.0;
            p.tol = grids.tol;
            p.max_iter = grids.max_iter;
            cells.push_back({p, 0.0});
        }
    }
    parallel_for(cells.size(), grids.jobs, [&](size_t i) {
        cells[i].ap = fold_mean_ap(data, fold_of, grids.folds, cells[i].params);
    });
    size_t best = 0;
    for (size_t i = 1; i < cells.size(); ++i)
        if (cells[i].ap > cells[best].ap) best = i;
    CvResult result;
    result.best = cells[best].params;
    result.mean_ap = cells[best].ap;

    if (tune_relevance && has_related && !grids.relevance_grid.empty()) {
        std::vector<Cell> line;
        for (double c : grids.relevance_grid) {
            if (!(c > 0.0 && c <= 1.0))
                throw config_error(Errc::invalid_config, "relevance grid must lie in (0, 1]");
            TrainParams p = result.best;
            p.relevance = c;
            line.push_back({p, 0.0});
        }
        parallel_for(line.size(), grids.jobs, [&](size_t i) {
            line[i].ap = fold_mean_ap(data, fold_of, grids.folds, line[i].params);
        });
        size_t best_c = 0;
        for (size_t i = 1; i < line.size(); ++i)
            if (line[i].ap > line[best_c].ap) best_c = i;
        result.best = line[best_c].params;
        result.mean_ap = line[best_c].ap;
    }
    return result;
}

namespace {

std::vector<LabeledSample> make_samples(const std::vector<std::vector<double>>& xs, int y,
                                        int u) {
    std::vector<LabeledSample> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back({x, y, u});
    return out;
}

}  // namespace

AutoTrainResult auto_relevance_train(const std::vector<std::vector<double>>& positives,
                                     const std::vector<std::vector<double>>& negatives,
                                     const std::vector<std::vector<double>>& related,
                                     const Grids& grids, uint64_t seed) {
    if (positives.empty() || negatives.empty())
        throw data_error(Errc::empty_input, "need non-empty positives and negatives");

    std::vector<LabeledSample> base = make_samples(positives, 1, 0);
    std::vector<LabeledSample> neg = make_samples(negatives, -1, 0);
    base.insert(base.end(), neg.begin(), neg.end());

    AutoTrainResult result;
    if (related.empty()) {
        CvResult cv = cross_validate(base, grids, seed, false);
        result.model = train(base, cv.best).model;
        result.branch = RelatedBranch::none;
        result.params = cv.best;
        result.cv_ap = cv.mean_ap;
        return result;
    }

    std::vector<LabeledSample> data_p = base;
    for (const auto& x : related) data_p.push_back({x, 1, 1});
    std::vector<LabeledSample> data_n = base;
    for (const auto& x : related) data_n.push_back({x, -1, 1});

    CvResult cv_p = cross_validate(data_p, grids, seed, true);
    CvResult cv_n = cross_validate(data_n, grids, seed, true);

    if (cv_p.mean_ap > cv_n.mean_ap) {
        result.model = train(data_p, cv_p.best).model;
        result.branch = RelatedBranch::positive;
        result.params = cv_p.best;
        result.cv_ap = cv_p.mean_ap;
    } else {
        result.model = train(data_n, cv_n.best).model;
        result.branch = RelatedBranch::negative;
        result.params = cv_n.best;
        result.cv_ap = cv_n.mean_ap;
    }
    return result;
}

std::vector<std::vector<double>> select_related_subset(
    const std::vector<std::vector<double>>& related, int k) {
    if (k < 0 || static_cast<size_t>(k) > related.size())
        throw data_error(Errc::insufficient_samples,
                         "cannot select " + std::to_string(k) + " of " +
                             std::to_string(related.size()) + " related samples");
    if (related.empty() || k == 0) return {};
    size_t dim = related[0].size();
    for (const auto& r : related)
        if (r.size() != dim)
            throw data_error(Errc::dimension_mismatch, "related sample dimensions differ");

    std::vector<double> median(dim, 0.0);
    std::vector<double> column(related.size());
    for (size_t c = 0; c < dim; ++c) {
        for (size_t i = 0; i < related.size(); ++i) column[i] = related[i][c];
        std::sort(column.begin(), column.end());
        size_t n = column.size();
        median[c] = (n % 2 == 1) ? column[n / 2] : 0.5 * (column[n / 2 - 1] + column[n / 2]);
    }

    std::vector<std::pair<double, size_t>> by_distance;
    by_distance.reserve(related.size());
    for (size_t i = 0; i < related.size(); ++i) {
        double dist_sq = 0.0;
        for (size_t c = 0; c < dim; ++c) {
            double diff = related[i][c] - median[c];
            dist_sq += diff * diff;
        }
        by_distance.emplace_back(dist_sq, i);
    }
    std::sort(by_distance.begin(), by_distance.end(),
              [](const auto& a, const auto& b) {
                  if (a.first != b.first) return a.first < b.first;
                  return a.second < b.second;
              });
    std::vector<std::vector<double>> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) out.push_back(related[by_distance[i].second]);
    return out;
}

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error(Errc::io_error, "cannot open dataset " + path.string());
    Dataset dataset;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::vector<std::string> fields = split(t, ',');
        if (fields.size() < 4)
            throw data_error(Errc::parse_error, path.string() + ":" + std::to_string(line_no) +
                                                    ": expected video_id,y,u,f0,...");
        LabeledSample sample;
        try {
            sample.y = std::stoi(fields[1]);
            sample.u = std::stoi(fields[2]);
            for (size_t i = 3; i < fields.size(); ++i)
                sample.features.push_back(std::stod(fields[i]));
        } catch (const std::exception&) {
            throw data_error(Errc::parse_error,
                             path.string() + ":" + std::to_string(line_no) + ": bad value");
        }
        dataset.ids.push_back(fields[0]);
        dataset.samples.push_back(std::move(sample));
    }
    check_dims(dataset.samples);
    return dataset;
}

void save_dataset(const std::filesystem::path& path, const Dataset& dataset) {
    if (dataset.ids.size() != dataset.samples.size())
        throw data_error(Errc::dimension_mismatch, "dataset ids and samples differ in count");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error(Errc::io_error, "cannot write " + path.string());
    for (size_t i = 0; i < dataset.samples.size(); ++i) {
        const LabeledSample& s = dataset.samples[i];
        out << dataset.ids[i] << ',' << s.y << ',' << s.u;
        for (double v : s.features) out << ',' << format_double(v);
        out << "\n";
    }
}

void save_model(const std::filesystem::path& path, const SvmModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error(Errc::io_error, "cannot write model " + path.string());
    out << "# kernel=" << (model.kernel == KernelKind::rbf ? "rbf" : "linear")
        << " gamma=" << format_double(model.gamma) << " cost=" << format_double(model.cost)
        << " relevance=" << format_double(model.relevance)
        << " bias=" << format_double(model.bias) << "\n";
    for (const SupportVector& sv : model.svs) {
        out << format_double(sv.alpha) << ',' << sv.y << ',' << sv.u;
        for (double v : sv.x) out << ',' << format_double(v);
        out << "\n";
    }
}

SvmModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error(Errc::io_error, "cannot open model " + path.string());
    SvmModel model;
    bool have_header = false;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            for (const std::string& field : split(t.substr(1), ' ')) {
                if (field.empty()) continue;
                size_t eq = field.find('=');
                if (eq == std::string::npos) continue;
                std::string key = field.substr(0, eq);
                std::string value = field.substr(eq + 1);
                try {
                    if (key == "kernel")
                        model.kernel = value == "linear" ? KernelKind::linear : KernelKind::rbf;
                    else if (key == "gamma")
                        model.gamma = std::stod(value);
                    else if (key == "cost")
                        model.cost = std::stod(value);
                    else if (key == "relevance")
                        model.relevance = std::stod(value);
                    else if (key == "bias")
                        model.bias = std::stod(value);
                } catch (const std::exception&) {
                    throw data_error(Errc::parse_error,
                                     path.string() + ": bad header field '" + field + "'");
                }
            }
            have_header = true;
            continue;
        }
        std::vector<std::string> fields = split(t, ',');
        if (fields.size() < 4)
            throw data_error(Errc::parse_error,
                             path.string() + ": expected alpha,y,u,features...");
        SupportVector sv;
        try {
            sv.alpha = std::stod(fields[0]);
            sv.y = std::stoi(fields[1]);
            sv.u = std::stoi(fields[2]);
            for (size_t i = 3; i < fields.size(); ++i) sv.x.push_back(std::stod(fields[i]));
        } catch (const std::exception&) {
            throw data_error(Errc::parse_error, path.string() + ": bad support-vector row");
        }
        model.svs.push_back(std::move(sv));
    }
    if (!have_header)
        throw data_error(Errc::parse_error, path.string() + ": missing model header");
    return model;
}

}  // namespace evdet
