#include "adbdiff/ml.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "adbdiff/errors.hpp"
#include "adbdiff/rand.hpp"

namespace adbdiff::ml {
namespace {

constexpr double kVarianceFloor = 1e-9;
constexpr double kGainEpsilon = 1e-12;
constexpr double kPi = 3.14159265358979323846;

using Rows = std::vector<const FeatureVector*>;

int class_index(Label label) { return label == Label::True ? 1 : 0; }

size_t all_index(std::string_view name) {
    for (size_t i = 0; i < kAllFeatureNames.size(); ++i)
        if (name == kAllFeatureNames[i]) return i;
    throw ParameterError("unknown feature name \"" + std::string(name) + "\"");
}

bool is_boolean_feature(std::string_view name) {
    return name == "keyword" || name == "url_change";
}

Rows labeled_rows(const LabeledDataset& ds) {
    Rows rows;
    for (const FeatureVector& row : ds.rows)
        if (row.label != Label::Unlabeled) rows.push_back(&row);
    return rows;
}

double entropy_of(long long a, long long b) {
    long long total = a + b;
    if (total == 0) return 0.0;
    double h = 0.0;
    for (long long c : {a, b}) {
        if (c == 0) continue;
        double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

struct SplitEval {
    double gain = 0.0;
    double ratio = 0.0;
    long long left_n = 0;
    long long right_n = 0;
};

SplitEval eval_split(const Rows& rows, size_t feature_idx, double threshold) {
    std::array<long long, 2> total{0, 0}, left{0, 0}, right{0, 0};
    for (const FeatureVector* row : rows) {
        int c = class_index(row->label);
        ++total[c];
        if (row->feature(feature_idx) <= threshold)
            ++left[c];
        else
            ++right[c];
    }
    SplitEval eval;
    eval.left_n = left[0] + left[1];
    eval.right_n = right[0] + right[1];
    long long n = eval.left_n + eval.right_n;
    if (n == 0) return eval;
    double h = entropy_of(total[0], total[1]);
    double weighted = 0.0;
    if (eval.left_n > 0)
        weighted += static_cast<double>(eval.left_n) / n * entropy_of(left[0], left[1]);
    if (eval.right_n > 0)
        weighted += static_cast<double>(eval.right_n) / n * entropy_of(right[0], right[1]);
    eval.gain = h - weighted;
    if (eval.gain < 0.0) eval.gain = 0.0;  // clamp float dust
    double split_info = entropy_of(eval.left_n, eval.right_n);
    eval.ratio = split_info > 0.0 ? eval.gain / split_info : 0.0;
    return eval;
}

// Midpoints between consecutive distinct values, ascending.
std::vector<double> candidate_thresholds(const Rows& rows, size_t feature_idx) {
    std::vector<double> values;
    values.reserve(rows.size());
    for (const FeatureVector* row : rows) values.push_back(row->feature(feature_idx));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::vector<double> mids;
    for (size_t i = 0; i + 1 < values.size(); ++i)
        mids.push_back((values[i] + values[i + 1]) / 2.0);
    return mids;
}

std::array<long long, 2> class_counts_of(const Rows& rows) {
    std::array<long long, 2> counts{0, 0};
    for (const FeatureVector* row : rows) ++counts[class_index(row->label)];
    return counts;
}

TreeNode make_leaf(const std::array<long long, 2>& counts) {
    TreeNode leaf;
    leaf.class_counts = counts;
    return leaf;
}

// Shared inducer: J48 passes rng = nullptr (all features considered), the
// forest passes its per-tree rng for per-split feature subsampling.
TreeNode build_tree(const Rows& rows, const std::vector<std::string>& schema,
                    const std::vector<size_t>& schema_idx, int min_leaf,
                    std::mt19937_64* rng, size_t features_per_split) {
    std::array<long long, 2> counts = class_counts_of(rows);
    if (counts[0] == 0 || counts[1] == 0) return make_leaf(counts);

    std::vector<size_t> candidates(schema.size());
    std::iota(candidates.begin(), candidates.end(), 0);
    if (rng && features_per_split < candidates.size()) {
        shuffle_values(candidates, *rng);
        candidates.resize(features_per_split);
        std::sort(candidates.begin(), candidates.end());
    }

    size_t best_feature = schema.size();
    double best_threshold = 0.0;
    double best_ratio = 0.0;
    double best_gain = 0.0;
    for (size_t pos : candidates) {
        for (double threshold : candidate_thresholds(rows, schema_idx[pos])) {
            SplitEval eval = eval_split(rows, schema_idx[pos], threshold);
            if (eval.left_n < min_leaf || eval.right_n < min_leaf) continue;
            if (eval.gain <= kGainEpsilon) continue;
            if (eval.ratio > best_ratio) {
                best_ratio = eval.ratio;
                best_gain = eval.gain;
                best_feature = pos;
                best_threshold = threshold;
            }
        }
    }
    if (best_feature == schema.size()) return make_leaf(counts);
    (void)best_gain;

    Rows left, right;
    for (const FeatureVector* row : rows) {
        if (row->feature(schema_idx[best_feature]) <= best_threshold)
            left.push_back(row);
        else
            right.push_back(row);
    }
    TreeNode node;
    node.feature = schema[best_feature];
    node.threshold = best_threshold;
    node.left = std::make_unique<TreeNode>(
        build_tree(left, schema, schema_idx, min_leaf, rng, features_per_split));
    node.right = std::make_unique<TreeNode>(
        build_tree(right, schema, schema_idx, min_leaf, rng, features_per_split));
    return node;
}

std::vector<size_t> schema_indices(const std::vector<std::string>& schema) {
    if (schema.empty()) throw ParameterError("empty feature schema");
    std::vector<size_t> idx;
    idx.reserve(schema.size());
    for (const std::string& name : schema) idx.push_back(all_index(name));
    return idx;
}

double leaf_score(const TreeNode& leaf) {
    long long total = leaf.class_counts[0] + leaf.class_counts[1];
    return total == 0 ? 0.0 : static_cast<double>(leaf.class_counts[1]) / total;
}

Prediction score_to_prediction(double score) {
    return {score >= 0.5 ? Label::True : Label::False, score};
}

void require_both_classes(const std::array<long long, 2>& counts) {
    if (counts[0] == 0 || counts[1] == 0)
        throw ParameterError("training data must contain both TRUE and FALSE rows");
}

}  // namespace

double feature_value(const FeatureVector& vec, std::string_view name) {
    return vec.feature(all_index(name));
}

std::string learner_token(LearnerKind kind) {
    switch (kind) {
        case LearnerKind::NaiveBayes: return "nb";
        case LearnerKind::J48: return "j48";
        case LearnerKind::RandomForest: return "rf";
    }
    return "nb";
}

LearnerKind parse_learner_token(std::string_view token) {
    if (token == "nb") return LearnerKind::NaiveBayes;
    if (token == "j48") return LearnerKind::J48;
    if (token == "rf") return LearnerKind::RandomForest;
    throw ParameterError("unknown learner \"" + std::string(token) + "\" (nb, j48, rf)");
}

double entropy(const std::vector<long long>& counts) {
    long long total = 0;
    for (long long c : counts) {
        if (c < 0) throw ParameterError("negative count in entropy()");
        total += c;
    }
    if (total == 0) throw ParameterError("entropy() needs a nonzero total");
    double h = 0.0;
    for (long long c : counts) {
        if (c == 0) continue;
        double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

double info_gain(const LabeledDataset& ds, std::string_view feature, double threshold) {
    Rows rows = labeled_rows(ds);
    if (rows.size() < 2) throw ParameterError("info_gain needs at least 2 labeled rows");
    return eval_split(rows, all_index(feature), threshold).gain;
}

double gain_ratio(const LabeledDataset& ds, std::string_view feature, double threshold) {
    Rows rows = labeled_rows(ds);
    if (rows.size() < 2) throw ParameterError("gain_ratio needs at least 2 labeled rows");
    return eval_split(rows, all_index(feature), threshold).ratio;
}

std::vector<RankedFeature> rank_features(const LabeledDataset& ds) {
    Rows rows = labeled_rows(ds);
    if (rows.empty()) throw ParameterError("rank_features needs labeled rows");
    std::vector<size_t> idx = schema_indices(ds.schema);

    std::vector<RankedFeature> ranked;
    ranked.reserve(ds.schema.size());
    for (size_t pos = 0; pos < ds.schema.size(); ++pos) {
        RankedFeature entry;
        entry.name = ds.schema[pos];
        double best_gain = 0.0;  // ties keep the lowest threshold
        for (double threshold : candidate_thresholds(rows, idx[pos])) {
            double gain = eval_split(rows, idx[pos], threshold).gain;
            if (gain > best_gain) {
                best_gain = gain;
                entry.best_threshold = threshold;
            }
        }
        entry.gain_percent = best_gain * 100.0;
        ranked.push_back(std::move(entry));
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankedFeature& a, const RankedFeature& b) {
                         return a.gain_percent > b.gain_percent;
                     });
    return ranked;
}

NaiveBayesModel train_nb(const LabeledDataset& ds) {
    Rows rows = labeled_rows(ds);
    if (rows.empty()) throw ParameterError("train_nb needs labeled rows");
    std::vector<size_t> idx = schema_indices(ds.schema);
    std::array<long long, 2> n = class_counts_of(rows);
    require_both_classes(n);

    NaiveBayesModel model;
    model.schema = ds.schema;
    model.priors = {static_cast<double>(n[0]) / rows.size(),
                    static_cast<double>(n[1]) / rows.size()};
    for (size_t pos = 0; pos < ds.schema.size(); ++pos) {
        NaiveBayesModel::FeatureParams params;
        params.name = ds.schema[pos];
        params.boolean = is_boolean_feature(params.name);
        if (params.boolean) {
            std::array<long long, 2> set_count{0, 0};
            for (const FeatureVector* row : rows)
                if (row->feature(idx[pos]) != 0.0) ++set_count[class_index(row->label)];
            for (int c = 0; c < 2; ++c)
                params.bernoulli[c] =
                    (static_cast<double>(set_count[c]) + 1.0) / (static_cast<double>(n[c]) + 2.0);
        } else {
            for (int c = 0; c < 2; ++c) {
                double sum = 0.0;
                for (const FeatureVector* row : rows)
                    if (class_index(row->label) == c) sum += row->feature(idx[pos]);
                double mean = sum / static_cast<double>(n[c]);
                double sq = 0.0;
                for (const FeatureVector* row : rows)
                    if (class_index(row->label) == c) {
                        double d = row->feature(idx[pos]) - mean;
                        sq += d * d;
                    }
                params.gauss[c] = {mean, std::max(sq / static_cast<double>(n[c]), kVarianceFloor)};
            }
        }
        model.features.push_back(std::move(params));
    }
    return model;
}

TreeNode train_j48(const LabeledDataset& ds, int min_leaf) {
    Rows rows = labeled_rows(ds);
    if (rows.empty()) throw ParameterError("train_j48 needs labeled rows");
    if (min_leaf < 1) throw ParameterError("min_leaf must be >= 1");
    std::vector<size_t> idx = schema_indices(ds.schema);
    return build_tree(rows, ds.schema, idx, min_leaf, nullptr, ds.schema.size());
}

ForestModel train_rf(const LabeledDataset& ds, int n_trees, std::uint64_t seed) {
    Rows rows = labeled_rows(ds);
    if (rows.empty()) throw ParameterError("train_rf needs labeled rows");
    if (n_trees < 1) throw ParameterError("n_trees must be >= 1");
    std::vector<size_t> idx = schema_indices(ds.schema);
    require_both_classes(class_counts_of(rows));

    ForestModel model;
    model.schema = ds.schema;
    model.seed = seed;
    model.features_per_split = static_cast<int>(
        std::ceil(std::sqrt(static_cast<double>(ds.schema.size()))));

    std::mt19937_64 master(seed);
    for (int t = 0; t < n_trees; ++t) {
        std::mt19937_64 tree_rng(master());
        Rows sample;
        sample.reserve(rows.size());
        for (size_t i = 0; i < rows.size(); ++i)
            sample.push_back(rows[bounded_draw(tree_rng, rows.size())]);
        model.trees.push_back(build_tree(sample, ds.schema, idx, 1, &tree_rng,
                                         static_cast<size_t>(model.features_per_split)));
    }
    return model;
}

ClassifierModel train(const LabeledDataset& ds, LearnerKind kind, const TrainOptions& opts,
                      std::uint64_t seed) {
    ClassifierModel model;
    model.kind = kind;
    model.schema = ds.schema;
    switch (kind) {
        case LearnerKind::NaiveBayes: model.nb = train_nb(ds); break;
        case LearnerKind::J48: model.tree = train_j48(ds, opts.min_leaf); break;
        case LearnerKind::RandomForest: model.forest = train_rf(ds, opts.n_trees, seed); break;
    }
    return model;
}

Prediction predict(const NaiveBayesModel& model, const FeatureVector& vec) {
    std::array<double, 2> logp{std::log(model.priors[0]), std::log(model.priors[1])};
    for (const auto& params : model.features) {
        double v = feature_value(vec, params.name);
        for (int c = 0; c < 2; ++c) {
            if (params.boolean) {
                double p = v != 0.0 ? params.bernoulli[c] : 1.0 - params.bernoulli[c];
                logp[c] += std::log(p);
            } else {
                const GaussianParams& g = params.gauss[c];
                double d = v - g.mean;
                logp[c] += -0.5 * std::log(2.0 * kPi * g.variance) - d * d / (2.0 * g.variance);
            }
        }
    }
    double peak = std::max(logp[0], logp[1]);
    double e0 = std::exp(logp[0] - peak), e1 = std::exp(logp[1] - peak);
    return score_to_prediction(e1 / (e0 + e1));
}

Prediction predict(const TreeNode& tree, const FeatureVector& vec) {
    const TreeNode* node = &tree;
    while (!node->is_leaf())
        node = feature_value(vec, node->feature) <= node->threshold ? node->left.get()
                                                                    : node->right.get();
    return score_to_prediction(leaf_score(*node));
}

Prediction predict(const ForestModel& model, const FeatureVector& vec) {
    if (model.trees.empty()) throw ParameterError("forest has no trees");
    double sum = 0.0;
    for (const TreeNode& tree : model.trees) sum += predict(tree, vec).score;
    return score_to_prediction(sum / static_cast<double>(model.trees.size()));
}

Prediction predict(const ClassifierModel& model, const FeatureVector& vec) {
    switch (model.kind) {
        case LearnerKind::NaiveBayes: return predict(model.nb, vec);
        case LearnerKind::J48: return predict(model.tree, vec);
        case LearnerKind::RandomForest: return predict(model.forest, vec);
    }
    throw ParameterError("corrupt model kind");
}

EvaluationReport metrics_from_confusion(
    const std::array<std::array<long long, 2>, 2>& confusion) {
    long long total = confusion[0][0] + confusion[0][1] + confusion[1][0] + confusion[1][1];
    if (total == 0) throw ParameterError("confusion matrix is all zero");

    EvaluationReport report;
    report.confusion = confusion;
    std::array<long long, 2> actual{confusion[0][0] + confusion[0][1],
                                    confusion[1][0] + confusion[1][1]};

    for (int c = 0; c < 2; ++c) {
        long long tp = confusion[c][c];
        long long fn = confusion[c][1 - c];
        long long fp = confusion[1 - c][c];
        long long tn = confusion[1 - c][1 - c];
        ClassMetrics& m = report.per_class[c];

        auto ratio = [&m](long long num, long long den, const char* cell) {
            if (den == 0) {
                m.undefined.push_back(cell);
                return 0.0;
            }
            return static_cast<double>(num) / static_cast<double>(den);
        };
        m.recall = ratio(tp, tp + fn, "recall");
        m.tp_rate = m.recall;
        m.fp_rate = ratio(fp, fp + tn, "fp_rate");
        m.precision = ratio(tp, tp + fp, "precision");
        if (m.precision + m.recall == 0.0) {
            m.undefined.push_back("f_measure");
            m.f_measure = 0.0;
        } else {
            m.f_measure = 2.0 * m.precision * m.recall / (m.precision + m.recall);
        }
        double denom = static_cast<double>(tp + fp) * static_cast<double>(tp + fn) *
                       static_cast<double>(tn + fp) * static_cast<double>(tn + fn);
        if (denom == 0.0) {
            m.undefined.push_back("mcc");
            m.mcc = 0.0;
        } else {
            m.mcc = (static_cast<double>(tp) * tn - static_cast<double>(fp) * fn) /
                    std::sqrt(denom);
        }
    }

    ClassMetrics& w = report.weighted;
    for (int c = 0; c < 2; ++c) {
        double weight = static_cast<double>(actual[c]) / static_cast<double>(total);
        const ClassMetrics& m = report.per_class[c];
        w.tp_rate += weight * m.tp_rate;
        w.fp_rate += weight * m.fp_rate;
        w.precision += weight * m.precision;
        w.recall += weight * m.recall;
        w.f_measure += weight * m.f_measure;
        w.mcc += weight * m.mcc;
        for (const std::string& cell : m.undefined)
            if (std::find(w.undefined.begin(), w.undefined.end(), cell) == w.undefined.end())
                w.undefined.push_back(cell);
    }
    return report;
}

double roc_auc(const std::vector<std::pair<double, bool>>& scored) {
    long long pos = 0, neg = 0;
    for (const auto& [score, is_true] : scored) (is_true ? pos : neg)++;
    if (pos == 0 || neg == 0)
        throw ParameterError("roc_auc needs both classes in the score list");

    std::vector<size_t> order(scored.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return scored[a].first < scored[b].first; });

    double pos_rank_sum = 0.0;
    size_t i = 0;
    while (i < order.size()) {
        size_t j = i;
        while (j < order.size() && scored[order[j]].first == scored[order[i]].first) ++j;
        double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (size_t k = i; k < j; ++k)
            if (scored[order[k]].second) pos_rank_sum += avg_rank;
        i = j;
    }
    double auc = (pos_rank_sum - static_cast<double>(pos) * (pos + 1) / 2.0) /
                 (static_cast<double>(pos) * static_cast<double>(neg));
    return auc;
}

double prc_area(const std::vector<std::pair<double, bool>>& scored) {
    long long pos = 0, neg = 0;
    for (const auto& [score, is_true] : scored) (is_true ? pos : neg)++;
    if (pos == 0 || neg == 0)
        throw ParameterError("prc_area needs both classes in the score list");

    std::vector<size_t> order(scored.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return scored[a].first > scored[b].first; });

    double area = 0.0;
    double prev_recall = 0.0, prev_precision = 1.0;
    long long tp = 0, fp = 0;
    bool first = true;
    size_t i = 0;
    while (i < order.size()) {
        size_t j = i;
        while (j < order.size() && scored[order[j]].first == scored[order[i]].first) ++j;
        for (size_t k = i; k < j; ++k) (scored[order[k]].second ? tp : fp)++;
        double recall = static_cast<double>(tp) / static_cast<double>(pos);
        double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        if (first) {
            prev_precision = precision;  // anchor the curve at (0, p_first)
            first = false;
        }
        area += (recall - prev_recall) * (precision + prev_precision) / 2.0;
        prev_recall = recall;
        prev_precision = precision;
        i = j;
    }
    return area;
}

EvaluationReport cross_validate(const LabeledDataset& ds, LearnerKind kind, int k,
                                std::uint64_t seed, const TrainOptions& opts) {
    Rows rows = labeled_rows(ds);
    if (k < 2) throw ParameterError("cross-validation needs k >= 2");
    if (static_cast<size_t>(k) > rows.size())
        throw ParameterError("cross-validation needs k <= labeled rows (" +
                             std::to_string(rows.size()) + ")");

    // Stratified assignment: shuffle each class, then deal all rows onto
    // folds with one running counter so fold sizes differ by at most one.
    std::mt19937_64 master(seed);
    std::vector<int> fold_of(rows.size(), 0);
    size_t dealt = 0;
    for (int c = 0; c < 2; ++c) {
        std::vector<size_t> members;
        for (size_t i = 0; i < rows.size(); ++i)
            if (class_index(rows[i]->label) == c) members.push_back(i);
        shuffle_values(members, master);
        for (size_t m : members) fold_of[m] = static_cast<int>(dealt++ % k);
    }

    std::array<std::array<long long, 2>, 2> pooled{{{0, 0}, {0, 0}}};
    std::vector<std::pair<double, bool>> scores;
    scores.reserve(rows.size());

    for (int fold = 0; fold < k; ++fold) {
        std::uint64_t fold_seed = master();
        LabeledDataset train_ds;
        train_ds.schema = ds.schema;
        std::vector<size_t> test;
        for (size_t i = 0; i < rows.size(); ++i) {
            if (fold_of[i] == fold)
                test.push_back(i);
            else
                train_ds.rows.push_back(*rows[i]);
        }
        if (test.empty()) continue;
        ClassifierModel model = train(train_ds, kind, opts, fold_seed);
        for (size_t i : test) {
            Prediction pred = predict(model, *rows[i]);
            ++pooled[class_index(rows[i]->label)][class_index(pred.label)];
            scores.emplace_back(pred.score, rows[i]->label == Label::True);
        }
    }

    EvaluationReport report = metrics_from_confusion(pooled);
    report.has_areas = true;

    bool both = pooled[0][0] + pooled[0][1] > 0 && pooled[1][0] + pooled[1][1] > 0;
    if (both) {
        std::vector<std::pair<double, bool>> inverted;
        inverted.reserve(scores.size());
        for (const auto& [score, is_true] : scores) inverted.emplace_back(1.0 - score, !is_true);
        report.per_class[1].roc_area = roc_auc(scores);
        report.per_class[1].prc_area = prc_area(scores);
        report.per_class[0].roc_area = roc_auc(inverted);
        report.per_class[0].prc_area = prc_area(inverted);
        long long total = pooled[0][0] + pooled[0][1] + pooled[1][0] + pooled[1][1];
        for (int c = 0; c < 2; ++c) {
            double weight =
                static_cast<double>(pooled[c][0] + pooled[c][1]) / static_cast<double>(total);
            report.weighted.roc_area += weight * report.per_class[c].roc_area;
            report.weighted.prc_area += weight * report.per_class[c].prc_area;
        }
    } else {
        for (int c = 0; c < 2; ++c) {
            report.per_class[c].undefined.push_back("roc_area");
            report.per_class[c].undefined.push_back("prc_area");
        }
    }
    return report;
}

}  // namespace adbdiff::ml
