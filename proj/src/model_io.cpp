#include "adbdiff/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "adbdiff/errors.hpp"

namespace adbdiff {
namespace {

using nlohmann::json;

json tree_to_json(const ml::TreeNode& node) {
    if (node.is_leaf())
        return json{{"counts", {node.class_counts[0], node.class_counts[1]}}};
    return json{{"feature", node.feature},
                {"threshold", node.threshold},
                {"left", tree_to_json(*node.left)},
                {"right", tree_to_json(*node.right)}};
}

ml::TreeNode tree_from_json(const json& j) {
    ml::TreeNode node;
    if (j.contains("counts")) {
        node.class_counts = {j.at("counts").at(0).get<long long>(),
                             j.at("counts").at(1).get<long long>()};
        return node;
    }
    node.feature = j.at("feature").get<std::string>();
    node.threshold = j.at("threshold").get<double>();
    node.left = std::make_unique<ml::TreeNode>(tree_from_json(j.at("left")));
    node.right = std::make_unique<ml::TreeNode>(tree_from_json(j.at("right")));
    return node;
}

json nb_to_json(const ml::NaiveBayesModel& model) {
    json features = json::array();
    for (const auto& params : model.features) {
        json f{{"name", params.name}, {"boolean", params.boolean}};
        if (params.boolean) {
            f["bernoulli"] = {params.bernoulli[0], params.bernoulli[1]};
        } else {
            f["gauss"] = {{params.gauss[0].mean, params.gauss[0].variance},
                          {params.gauss[1].mean, params.gauss[1].variance}};
        }
        features.push_back(std::move(f));
    }
    return json{{"priors", {model.priors[0], model.priors[1]}},
                {"schema", model.schema},
                {"features", std::move(features)}};
}

ml::NaiveBayesModel nb_from_json(const json& j) {
    ml::NaiveBayesModel model;
    model.schema = j.at("schema").get<std::vector<std::string>>();
    model.priors = {j.at("priors").at(0).get<double>(), j.at("priors").at(1).get<double>()};
    for (const json& f : j.at("features")) {
        ml::NaiveBayesModel::FeatureParams params;
        params.name = f.at("name").get<std::string>();
        params.boolean = f.at("boolean").get<bool>();
        if (params.boolean) {
            params.bernoulli = {f.at("bernoulli").at(0).get<double>(),
                                f.at("bernoulli").at(1).get<double>()};
        } else {
            for (int c = 0; c < 2; ++c)
                params.gauss[c] = {f.at("gauss").at(c).at(0).get<double>(),
                                   f.at("gauss").at(c).at(1).get<double>()};
        }
        model.features.push_back(std::move(params));
    }
    return model;
}

}  // namespace

std::string model_to_json(const ml::ClassifierModel& model) {
    json j{{"kind", ml::learner_token(model.kind)}, {"schema", model.schema}};
    switch (model.kind) {
        case ml::LearnerKind::NaiveBayes: j["nb"] = nb_to_json(model.nb); break;
        case ml::LearnerKind::J48: j["tree"] = tree_to_json(model.tree); break;
        case ml::LearnerKind::RandomForest: {
            json trees = json::array();
            for (const ml::TreeNode& tree : model.forest.trees)
                trees.push_back(tree_to_json(tree));
            j["forest"] = {{"seed", model.forest.seed},
                           {"features_per_split", model.forest.features_per_split},
                           {"trees", std::move(trees)}};
            break;
        }
    }
    return j.dump(2) + "\n";
}

ml::ClassifierModel model_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        ml::ClassifierModel model;
        model.kind = ml::parse_learner_token(j.at("kind").get<std::string>());
        model.schema = j.at("schema").get<std::vector<std::string>>();
        switch (model.kind) {
            case ml::LearnerKind::NaiveBayes: model.nb = nb_from_json(j.at("nb")); break;
            case ml::LearnerKind::J48: model.tree = tree_from_json(j.at("tree")); break;
            case ml::LearnerKind::RandomForest: {
                const json& f = j.at("forest");
                model.forest.schema = model.schema;
                model.forest.seed = f.at("seed").get<std::uint64_t>();
                model.forest.features_per_split = f.at("features_per_split").get<int>();
                for (const json& tree : f.at("trees"))
                    model.forest.trees.push_back(tree_from_json(tree));
                break;
            }
        }
        return model;
    } catch (const json::exception& e) {
        throw ParseError(std::string("model file structure: ") + e.what());
    }
}

void save_model(const ml::ClassifierModel& model, const std::filesystem::path& path) {
    write_text_file(path, model_to_json(model));
}

ml::ClassifierModel load_model(const std::filesystem::path& path) {
    return model_from_json(read_text_file(path));
}

namespace {

json metrics_to_json(const ml::ClassMetrics& m, bool has_areas) {
    json j{{"tp_rate", m.tp_rate},       {"fp_rate", m.fp_rate},
           {"precision", m.precision},   {"recall", m.recall},
           {"f_measure", m.f_measure},   {"mcc", m.mcc}};
    if (has_areas) {
        j["roc_area"] = m.roc_area;
        j["prc_area"] = m.prc_area;
    }
    if (!m.undefined.empty()) j["undefined"] = m.undefined;
    return j;
}

std::string fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

std::string report_to_json(const ml::EvaluationReport& report) {
    json j{{"confusion",
            {{report.confusion[0][0], report.confusion[0][1]},
             {report.confusion[1][0], report.confusion[1][1]}}},
           {"class_false", metrics_to_json(report.per_class[0], report.has_areas)},
           {"class_true", metrics_to_json(report.per_class[1], report.has_areas)},
           {"weighted_avg", metrics_to_json(report.weighted, report.has_areas)}};
    return j.dump(2) + "\n";
}

std::string report_to_text(const ml::EvaluationReport& report) {
    std::ostringstream out;
    out << "               TP Rate  FP Rate  Precision  Recall  F-Measure  MCC     "
           "ROC Area  PRC Area  Class\n";
    auto row = [&](const char* head, const ml::ClassMetrics& m, const char* cls) {
        char buf[160];
        std::string roc = report.has_areas ? fixed3(m.roc_area) : "-";
        std::string prc = report.has_areas ? fixed3(m.prc_area) : "-";
        std::snprintf(buf, sizeof buf,
                      "%-14s %-8s %-8s %-10s %-7s %-10s %-7s %-9s %-9s %s\n", head,
                      fixed3(m.tp_rate).c_str(), fixed3(m.fp_rate).c_str(),
                      fixed3(m.precision).c_str(), fixed3(m.recall).c_str(),
                      fixed3(m.f_measure).c_str(), fixed3(m.mcc).c_str(), roc.c_str(),
                      prc.c_str(), cls);
        out << buf;
    };
    row("", report.per_class[0], "FALSE");
    row("", report.per_class[1], "TRUE");
    row("Weighted Avg.", report.weighted, "");

    out << "\nConfusion matrix (rows = actual, columns = predicted):\n";
    char buf[96];
    std::snprintf(buf, sizeof buf, "%8s %8s   <-- classified as\n", "a", "b");
    out << buf;
    std::snprintf(buf, sizeof buf, "%8lld %8lld | a = FALSE\n",
                  report.confusion[0][0], report.confusion[0][1]);
    out << buf;
    std::snprintf(buf, sizeof buf, "%8lld %8lld | b = TRUE\n",
                  report.confusion[1][0], report.confusion[1][1]);
    out << buf;
    return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("read failed for " + path.string());
    return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace adbdiff
