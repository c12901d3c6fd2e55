#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "adbdiff/ml.hpp"

namespace adbdiff {

// Model files are JSON with alphabetically ordered keys, so equal models
// serialize to identical bytes. model_from_json(model_to_json(m)) restores
// every parameter exactly (doubles round-trip via shortest representation).
std::string model_to_json(const ml::ClassifierModel& model);
ml::ClassifierModel model_from_json(std::string_view text);

void save_model(const ml::ClassifierModel& model, const std::filesystem::path& path);
ml::ClassifierModel load_model(const std::filesystem::path& path);

std::string report_to_json(const ml::EvaluationReport& report);

// Aligned accuracy-by-class table plus the confusion matrix, one row per
// class and a weighted-average row.
std::string report_to_text(const ml::EvaluationReport& report);

std::string read_text_file(const std::filesystem::path& path);   // IoError on failure
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace adbdiff
