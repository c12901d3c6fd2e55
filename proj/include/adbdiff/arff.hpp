#pragma once

#include <string>
#include <string_view>

#include "adbdiff/dataset.hpp"

namespace adbdiff {

// ARFF rendering of the dataset for interop with external toolkits.
// Attribute order mirrors the CSV columns: site (string), the 16 numeric
// features (url_change as nominal {no,yes}), then label as nominal
// {FALSE,TRUE}. Unlabeled rows carry the ARFF missing marker '?'.
// import_arff(export_arff(ds)) == ds on canonical datasets.
std::string export_arff(const LabeledDataset& ds);
LabeledDataset import_arff(std::string_view text);

}  // namespace adbdiff
