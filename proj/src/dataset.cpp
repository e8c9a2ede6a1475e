#include "permci/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "permci/errors.hpp"
#include "permci/report.hpp"

namespace permci {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

double parse_cell(const std::string& cell, std::size_t line, std::size_t col) {
    if (cell.empty())
        throw parse_error("missing value (empty cell)", line, col);
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value))
        throw parse_error("cell '" + cell + "' is not finite numeric", line, col);
    return value;
}

} // namespace

Model Dataset::model() const {
    if (mode == AnalysisMode::two_sample) return Model{TwoSampleLayout(n1, n2)};
    return Model{RegressionDesign(x)};
}

Dataset ingest_csv(const std::string& path, AnalysisMode mode, const std::string& group_col,
                   const std::string& x_col) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open input file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw parse_error("empty input file: " + path, 1);
    const std::vector<std::string> header = split_line(line);
    if (header.empty()) throw parse_error("empty header row", 1);

    const std::string& special_name =
        (mode == AnalysisMode::two_sample) ? group_col : x_col;
    if (special_name.empty())
        throw parse_error(mode == AnalysisMode::two_sample
                              ? "two-sample mode requires a group column name"
                              : "regression mode requires a regressor column name");

    std::size_t special_idx = header.size();
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] == special_name) special_idx = c;
    if (special_idx == header.size())
        throw parse_error("column '" + special_name + "' not found in header");

    Dataset ds;
    ds.mode = mode;
    for (std::size_t c = 0; c < header.size(); ++c)
        if (c != special_idx) ds.column_names.push_back(header[c]);
    if (ds.column_names.empty())
        throw parse_error("no numeric columns to analyze besides '" + special_name + "'", 1);

    std::vector<std::vector<double>> row_values; // per data row, K cells
    std::vector<std::string> specials;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != header.size()) {
            std::ostringstream msg;
            msg << "row has " << cells.size() << " cells, header has " << header.size();
            throw parse_error(msg.str(), line_no);
        }
        std::vector<double> row;
        row.reserve(header.size() - 1);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c == special_idx) continue;
            row.push_back(parse_cell(cells[c], line_no, c + 1));
        }
        row_values.push_back(std::move(row));
        specials.push_back(cells[special_idx]);
    }
    if (row_values.empty()) throw parse_error("no data rows", line_no);

    const std::size_t k = ds.column_names.size();
    if (mode == AnalysisMode::two_sample) {
        ds.group_column = group_col;
        std::vector<std::string> labels;
        for (const auto& s : specials)
            if (std::find(labels.begin(), labels.end(), s) == labels.end()) labels.push_back(s);
        if (labels.size() != 2) {
            std::ostringstream msg;
            msg << "two-sample mode requires exactly 2 distinct group labels, found "
                << labels.size();
            throw parse_error(msg.str());
        }
        ds.first_label = labels[0];
        ds.second_label = labels[1];

        // First-seen label first; order within a group is preserved.
        std::vector<std::size_t> order;
        for (std::size_t i = 0; i < specials.size(); ++i)
            if (specials[i] == ds.first_label) order.push_back(i);
        ds.n1 = order.size();
        for (std::size_t i = 0; i < specials.size(); ++i)
            if (specials[i] == ds.second_label) order.push_back(i);
        ds.n2 = order.size() - ds.n1;

        ds.columns.assign(k, std::vector<double>(order.size()));
        for (std::size_t pos = 0; pos < order.size(); ++pos)
            for (std::size_t c = 0; c < k; ++c) ds.columns[c][pos] = row_values[order[pos]][c];
    } else {
        ds.x_column = x_col;
        ds.columns.assign(k, std::vector<double>(row_values.size()));
        // The regressor is parsed from its original cells so error coordinates
        // stay meaningful.
        ds.x.reserve(row_values.size());
        for (std::size_t i = 0; i < row_values.size(); ++i)
            ds.x.push_back(parse_cell(specials[i], i + 2, special_idx + 1));
        const double first = ds.x.front();
        if (std::all_of(ds.x.begin(), ds.x.end(), [&](double v) { return v == first; }))
            throw parse_error("regressor column '" + x_col + "' is constant");
        for (std::size_t i = 0; i < row_values.size(); ++i)
            for (std::size_t c = 0; c < k; ++c) ds.columns[c][i] = row_values[i][c];
    }
    return ds;
}

void write_two_sample_csv(const std::string& path, const std::vector<std::vector<double>>& rows,
                          const std::vector<std::string>& column_names,
                          const std::vector<std::string>& group_labels,
                          const std::string& group_column) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << group_column;
    for (const auto& name : column_names) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << group_labels[i];
        for (double v : rows[i]) out << ',' << format_double(v);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

} // namespace permci
