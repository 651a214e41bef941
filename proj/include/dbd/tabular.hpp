#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dbd/dataset.hpp"

namespace dbd {

struct UrlRecord {
    std::string url;
    std::string label; // "malicious" or "benign"
};

/// Reads a `url,label` list (optional `url,label` header, LF or CRLF).
/// The last comma on a line separates the label, so URLs containing
/// commas survive. Order and duplicates are preserved.
std::vector<UrlRecord> load_url_list(std::istream& in);

enum class TabularFormat { Csv, Arff };

/// CSV: header row names the attributes, last column is the class,
/// "?" is missing. A column is numeric when every non-missing cell
/// parses as a finite number, boolean when every cell is false/true,
/// nominal otherwise (values in first-appearance order). The class
/// column is always nominal.
///
/// ARFF subset: @relation / @attribute (numeric, real, integer or
/// {v1,...}) / @data with '%' comments. The last attribute is the
/// class. Sparse rows, string and date attributes are rejected.
Dataset load_tabular(std::istream& in, TabularFormat format);

void save_csv(const Dataset& d, std::ostream& out);
void save_arff(const Dataset& d, std::ostream& out, const std::string& relation = "dataset");

} // namespace dbd
