#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace permci {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

// Shortest exact decimal for finite values; infinities become "+inf"/"-inf".
std::string format_double(double v);

// JSON value for a double: a number when finite, otherwise the string
// "+inf"/"-inf" (JSON has no infinity literal).
nlohmann::json encode_double(double v);

// CSV cell plus companion flag: infinite endpoints serialize as an empty cell
// with the flag set to 1.
struct CsvCell {
    std::string value;
    int unbounded = 0;
};
CsvCell csv_endpoint(double v);

void write_text_file(const std::string& path, const std::string& content);
void write_json_file(const std::string& path, const nlohmann::json& j);
void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows);

// FNV-1a 64-bit digest of a file's bytes, as 16 hex digits.
std::uint64_t fnv1a64_file(const std::string& path);
std::string hex64(std::uint64_t v);

// The record that makes a run replayable: tool and schema versions, the exact
// argument vector, and a digest of the input file. Contains nothing volatile.
nlohmann::json make_manifest(const std::string& subcommand,
                             const std::vector<std::string>& argv,
                             const nlohmann::json& options, const std::string& input_path);

} // namespace permci
