#include "adbdiff/arff.hpp"

#include <charconv>
#include <vector>

#include "adbdiff/errors.hpp"
#include "adbdiff/url.hpp"

namespace adbdiff {
namespace {

std::string trim(std::string_view s) {
    size_t begin = s.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) return "";
    size_t end = s.find_last_not_of(" \t\r");
    return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_commas(std::string_view line) {
    std::vector<std::string> cells;
    size_t pos = 0;
    while (pos <= line.size()) {
        size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            cells.push_back(trim(line.substr(pos)));
            break;
        }
        cells.push_back(trim(line.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return cells;
}

std::string unquote(const std::string& cell) {
    if (cell.size() >= 2 && ((cell.front() == '\'' && cell.back() == '\'') ||
                             (cell.front() == '"' && cell.back() == '"')))
        return cell.substr(1, cell.size() - 2);
    return cell;
}

long long parse_integer_cell(const std::string& cell, long line_no) {
    // Numeric cells are integers by construction, but a re-exporting tool
    // may add a ".0" suffix.
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw ParseError("non-numeric cell \"" + cell + "\"", line_no);
    long long integral = static_cast<long long>(value);
    if (static_cast<double>(integral) != value)
        throw ParseError("non-integer feature cell \"" + cell + "\"", line_no);
    return integral;
}

}  // namespace

std::string export_arff(const LabeledDataset& ds) {
    std::string out = "@relation antiadblock-diffs\n\n";
    out += "@attribute site string\n";
    for (const char* name : kAllFeatureNames) {
        out += "@attribute ";
        out += name;
        out += std::string_view(name) == "url_change" ? " {no,yes}\n" : " numeric\n";
    }
    out += "@attribute label {FALSE,TRUE}\n\n@data\n";

    for (const FeatureVector& row : ds.rows) {
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

LabeledDataset import_arff(std::string_view text) {
    // Expected attribute names in declaration order: site, the 16 schema
    // features, label.
    std::vector<std::string> expected = {"site"};
    for (const char* name : kAllFeatureNames) expected.emplace_back(name);
    expected.emplace_back("label");

    LabeledDataset ds = LabeledDataset::with_default_schema();
    size_t attributes_seen = 0;
    bool in_data = false;

    size_t pos = 0;
    long line_no = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view raw =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        ++line_no;
        bool final_chunk = eol == std::string_view::npos;
        pos = final_chunk ? text.size() + 1 : eol + 1;

        std::string line = trim(raw);
        if (line.empty() || line[0] == '%') continue;

        if (!in_data) {
            std::string lower = to_lower(line);
            if (lower.rfind("@relation", 0) == 0) continue;
            if (lower.rfind("@attribute", 0) == 0) {
                std::string rest = trim(line.substr(10));
                size_t name_end = rest.find_first_of(" \t");
                if (name_end == std::string::npos)
                    throw ParseError("attribute without a type", line_no);
                std::string name = unquote(rest.substr(0, name_end));
                if (attributes_seen >= expected.size() || name != expected[attributes_seen])
                    throw ParseError("unexpected attribute \"" + name + "\", wanted \"" +
                                         (attributes_seen < expected.size()
                                              ? expected[attributes_seen]
                                              : "<end>") +
                                         "\"",
                                     line_no);
                ++attributes_seen;
                continue;
            }
            if (lower.rfind("@data", 0) == 0) {
                if (attributes_seen != expected.size())
                    throw ParseError("@data before all " + std::to_string(expected.size()) +
                                         " attributes were declared",
                                     line_no);
                in_data = true;
                continue;
            }
            throw ParseError("unrecognized header line \"" + line + "\"", line_no);
        }

        if (line[0] == '{') throw ParseError("sparse ARFF rows are not supported", line_no);
        std::vector<std::string> cells = split_commas(line);
        if (cells.size() != expected.size())
            throw ParseError("expected " + std::to_string(expected.size()) + " cells, got " +
                                 std::to_string(cells.size()),
                             line_no);

        FeatureVector row;
        row.site = unquote(cells[0]);
        for (size_t i = 0; i < kDiffFeatureNames.size(); ++i)
            row.diffs[i] = parse_integer_cell(cells[1 + i], line_no);
        long long kw = parse_integer_cell(cells[15], line_no);
        if (kw != 0 && kw != 1) throw ParseError("keyword cell must be 0 or 1", line_no);
        row.keyword = kw == 1;
        const std::string& uc = cells[16];
        if (uc == "yes") row.url_change = true;
        else if (uc == "no") row.url_change = false;
        else throw ParseError("url_change cell must be yes or no, got \"" + uc + "\"", line_no);
        try {
            row.label = parse_label_token(cells[17]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
        ds.rows.push_back(std::move(row));
    }

    if (!in_data) throw ParseError("ARFF input has no @data section");
    return ds;
}

}  // namespace adbdiff
