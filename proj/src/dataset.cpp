#include "adbdiff/dataset.hpp"

#include <charconv>

#include "adbdiff/errors.hpp"

namespace adbdiff {

std::string label_token(Label label) {
    switch (label) {
        case Label::False: return "FALSE";
        case Label::True: return "TRUE";
        case Label::Unlabeled: return "?";
    }
    return "?";
}

Label parse_label_token(std::string_view token) {
    if (token == "TRUE") return Label::True;
    if (token == "FALSE") return Label::False;
    if (token == "?") return Label::Unlabeled;
    throw ParseError("unknown label token '" + std::string(token) + "'");
}

double FeatureVector::feature(size_t index) const {
    if (index < kDiffFeatureNames.size()) return static_cast<double>(diffs[index]);
    if (index == 14) return keyword ? 1.0 : 0.0;
    if (index == 15) return url_change ? 1.0 : 0.0;
    throw ParameterError("feature index out of range: " + std::to_string(index));
}

LabeledDataset LabeledDataset::with_default_schema() {
    LabeledDataset ds;
    ds.schema.assign(kAllFeatureNames.begin(), kAllFeatureNames.end());
    return ds;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    size_t start = 0;
    while (true) {
        size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

long long parse_int_cell(std::string_view cell, long line_no, std::string_view column) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ParseError("non-integer cell '" + std::string(cell) + "' in column " +
                             std::string(column),
                         line_no);
    }
    return value;
}

}  // namespace

LabeledDataset read_dataset(std::string_view csv) {
    LabeledDataset ds = LabeledDataset::with_default_schema();

    size_t pos = 0;
    long line_no = 0;
    auto next_line = [&](std::string_view& out) -> bool {
        if (pos >= csv.size()) return false;
        size_t nl = csv.find('\n', pos);
        if (nl == std::string_view::npos) {
            out = csv.substr(pos);
            pos = csv.size();
        } else {
            out = csv.substr(pos, nl - pos);
            pos = nl + 1;
        }
        if (!out.empty() && out.back() == '\r') out.remove_suffix(1);
        ++line_no;
        return true;
    };

    std::string_view header;
    if (!next_line(header)) throw ParseError("empty dataset: missing header");
    if (header != kDatasetCsvHeader) {
        throw ParseError("dataset header mismatch: got '" + std::string(header) + "'", 1);
    }

    std::string_view line;
    while (next_line(line)) {
        if (line.empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() != 18) {
            throw ParseError("expected 18 fields, got " + std::to_string(fields.size()),
                             line_no);
        }
        FeatureVector row;
        row.site = std::string(fields[0]);
        for (size_t i = 0; i < kDiffFeatureNames.size(); ++i) {
            row.diffs[i] = parse_int_cell(fields[i + 1], line_no, kDiffFeatureNames[i]);
        }
        std::string_view kw = fields[15];
        if (kw == "0") row.keyword = false;
        else if (kw == "1") row.keyword = true;
        else throw ParseError("keyword cell must be 0 or 1, got '" + std::string(kw) + "'",
                              line_no);
        std::string_view uc = fields[16];
        if (uc == "no") row.url_change = false;
        else if (uc == "yes") row.url_change = true;
        else throw ParseError("url_change cell must be yes or no, got '" + std::string(uc) + "'",
                              line_no);
        try {
            row.label = parse_label_token(fields[17]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
        ds.rows.push_back(std::move(row));
    }
    return ds;
}

std::string write_dataset(const LabeledDataset& ds) {
    std::string out = kDatasetCsvHeader;
    out += '\n';
    for (const auto& row : ds.rows) {
        out += row.site;
        for (long long diff : row.diffs) {
            out += ',';
            out += std::to_string(diff);
        }
        out += row.keyword ? ",1" : ",0";
        out += row.url_change ? ",yes" : ",no";
        out += ',';
        out += label_token(row.label);
        out += '\n';
    }
    return out;
}

}  // namespace adbdiff
