#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "adbdiff/dataset.hpp"

namespace adbdiff::ml {

// Class index convention everywhere in this module: 0 = FALSE, 1 = TRUE.

// Value of a named feature (booleans as 0/1). Throws ParameterError for a
// name outside the dataset schema.
double feature_value(const FeatureVector& vec, std::string_view name);

// ---------------------------------------------------------------- models --

// Binary-split decision tree. Internal nodes route value <= threshold to
// the left child; leaves carry the training class counts they absorbed.
struct TreeNode {
    std::string feature;      // internal nodes only
    double threshold = 0.0;   // internal nodes only
    std::unique_ptr<TreeNode> left, right;
    std::array<long long, 2> class_counts{0, 0};  // leaves only

    bool is_leaf() const { return left == nullptr; }
};

struct GaussianParams {
    double mean = 0.0;
    double variance = 1.0;  // population variance, floored
};

struct NaiveBayesModel {
    // Numeric features carry per-class Gaussians; the keyword/url_change
    // flags carry per-class Bernoulli probabilities with add-one smoothing.
    struct FeatureParams {
        std::string name;
        bool boolean = false;
        std::array<GaussianParams, 2> gauss{};
        std::array<double, 2> bernoulli{0.5, 0.5};  // P(flag set | class)
    };

    std::vector<std::string> schema;
    std::array<double, 2> priors{0.5, 0.5};
    std::vector<FeatureParams> features;
};

struct ForestModel {
    std::vector<std::string> schema;
    std::vector<TreeNode> trees;
    std::uint64_t seed = 0;
    int features_per_split = 1;
};

enum class LearnerKind { NaiveBayes, J48, RandomForest };

std::string learner_token(LearnerKind kind);            // "nb" / "j48" / "rf"
LearnerKind parse_learner_token(std::string_view token);

// One trained classifier of any kind, as stored in a model file.
struct ClassifierModel {
    LearnerKind kind = LearnerKind::NaiveBayes;
    NaiveBayesModel nb;
    TreeNode tree;
    ForestModel forest;
    std::vector<std::string> schema;  // training schema, all kinds
};

struct TrainOptions {
    int min_leaf = 2;    // J48 minimum rows per child
    int n_trees = 100;   // forest size
};

// ------------------------------------------------------------ evaluation --

struct ClassMetrics {
    double tp_rate = 0, fp_rate = 0, precision = 0, recall = 0;
    double f_measure = 0, mcc = 0, roc_area = 0, prc_area = 0;
    // Names of cells whose denominator was zero and were reported as 0.
    std::vector<std::string> undefined;
};

struct EvaluationReport {
    // confusion[actual][predicted], 0 = FALSE, 1 = TRUE.
    std::array<std::array<long long, 2>, 2> confusion{{{0, 0}, {0, 0}}};
    std::array<ClassMetrics, 2> per_class;  // FALSE row, TRUE row
    ClassMetrics weighted;                  // weighted by actual class size
    bool has_areas = false;                 // roc/prc populated
};

// ------------------------------------------------------------ operations --

// Shannon entropy in bits, 0·log0 = 0. Throws on empty/zero totals.
double entropy(const std::vector<long long>& counts);

// Entropy reduction of the binary split "feature <= threshold" over the
// labeled rows, and the same normalized by the split's own entropy
// (0 when the split puts everything on one side).
double info_gain(const LabeledDataset& ds, std::string_view feature, double threshold);
double gain_ratio(const LabeledDataset& ds, std::string_view feature, double threshold);

struct RankedFeature {
    std::string name;
    double gain_percent = 0.0;     // best info gain in bits x 100
    double best_threshold = 0.0;   // threshold attaining it (0 when gain 0)
};

// Best info gain per schema feature over midpoint thresholds, sorted
// descending; ties keep schema order.
std::vector<RankedFeature> rank_features(const LabeledDataset& ds);

NaiveBayesModel train_nb(const LabeledDataset& ds);
TreeNode train_j48(const LabeledDataset& ds, int min_leaf = 2);
ForestModel train_rf(const LabeledDataset& ds, int n_trees, std::uint64_t seed);

ClassifierModel train(const LabeledDataset& ds, LearnerKind kind, const TrainOptions& opts,
                      std::uint64_t seed);

struct Prediction {
    Label label = Label::False;  // TRUE iff score >= 0.5
    double score = 0.0;          // P(TRUE)
};

Prediction predict(const NaiveBayesModel& model, const FeatureVector& vec);
Prediction predict(const TreeNode& tree, const FeatureVector& vec);
Prediction predict(const ForestModel& model, const FeatureVector& vec);
Prediction predict(const ClassifierModel& model, const FeatureVector& vec);

// Fills everything except the roc/prc areas (those need score rankings).
EvaluationReport metrics_from_confusion(const std::array<std::array<long long, 2>, 2>& confusion);

// (score, is_true) pairs. AUC by rank statistic with ties averaged; PRC by
// trapezoid over the precision-recall sweep. Both need both labels present.
double roc_auc(const std::vector<std::pair<double, bool>>& scored);
double prc_area(const std::vector<std::pair<double, bool>>& scored);

// Stratified k-fold cross-validation over the labeled rows: pooled
// confusion matrix plus pooled scores for the areas. Deterministic for a
// given (dataset order, seed).
EvaluationReport cross_validate(const LabeledDataset& ds, LearnerKind kind, int k,
                                std::uint64_t seed, const TrainOptions& opts = {});

}  // namespace adbdiff::ml
