#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "permci/statistics.hpp"

namespace permci {

enum class AnalysisMode { two_sample, regression };

// Parsed input: K analyzed numeric columns of equal length. In two-sample
// mode the rows carrying the first-seen group label are ordered first, so the
// columns line up with TwoSampleLayout directly.
struct Dataset {
    AnalysisMode mode = AnalysisMode::two_sample;
    std::vector<std::string> column_names;
    std::vector<std::vector<double>> columns;

    // two-sample
    std::string group_column;
    std::string first_label;
    std::string second_label;
    std::size_t n1 = 0;
    std::size_t n2 = 0;

    // regression
    std::string x_column;
    std::vector<double> x;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
    std::size_t k() const { return columns.size(); }

    Model model() const;
};

// Strict CSV: UTF-8, header row, comma separator, '.' decimal, no quoting,
// no missing values in analyzed columns. Errors carry 1-based file line and
// column coordinates.
Dataset ingest_csv(const std::string& path, AnalysisMode mode, const std::string& group_col,
                   const std::string& x_col);

// Writes a dataset-shaped CSV (used for the bundled synthetic fixture).
void write_two_sample_csv(const std::string& path, const std::vector<std::vector<double>>& rows,
                          const std::vector<std::string>& column_names,
                          const std::vector<std::string>& group_labels,
                          const std::string& group_column = "region");

} // namespace permci
