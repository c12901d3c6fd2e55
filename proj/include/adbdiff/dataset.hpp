#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace adbdiff {

enum class Label { False, True, Unlabeled };

std::string label_token(Label label);            // "FALSE" / "TRUE" / "?"
Label parse_label_token(std::string_view token);  // throws ParseError on anything else

// Signed per-feature diffs (blocked minus baseline) plus the two flags.
// Field order mirrors the dataset CSV schema.
inline constexpr std::array<const char*, 14> kDiffFeatureNames = {
    "a",     "div",  "h1",    "h2",    "h3",   "img",  "table",
    "p",     "iframe", "textnodes", "tags", "lines", "words", "chars",
};

inline constexpr std::array<const char*, 16> kAllFeatureNames = {
    "a",     "div",   "h1",       "h2",   "h3",    "img",   "table",      "p",
    "iframe", "textnodes", "tags", "lines", "words", "chars", "keyword", "url_change",
};

inline constexpr const char* kDatasetCsvHeader =
    "site,a,div,h1,h2,h3,img,table,p,iframe,textnodes,tags,lines,words,chars,"
    "keyword,url_change,label";

struct FeatureVector {
    std::string site;  // normalized host
    std::array<long long, 14> diffs{};
    bool keyword = false;
    bool url_change = false;
    Label label = Label::Unlabeled;

    // Value by position in kAllFeatureNames (booleans as 0/1).
    double feature(size_t index) const;
};

struct LabeledDataset {
    std::vector<std::string> schema;  // feature names, kAllFeatureNames by default
    std::vector<FeatureVector> rows;

    static LabeledDataset with_default_schema();
};

// Dataset CSV: comma-separated, UTF-8, LF line endings, mandatory exact
// header. keyword is 0/1, url_change is yes/no, label is TRUE/FALSE/?.
// write(read(x)) is byte-identical for canonical input.
LabeledDataset read_dataset(std::string_view csv);
std::string write_dataset(const LabeledDataset& ds);

}  // namespace adbdiff
