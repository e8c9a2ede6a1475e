#include "permci/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace permci {

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    // Shortest representation that round-trips.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) break;
    }
    return buf;
}

nlohmann::json encode_double(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

CsvCell csv_endpoint(double v) {
    if (std::isinf(v)) return {"", 1};
    return {format_double(v), 0};
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path);
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows) {
    std::string content;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c) content += ',';
        content += header[c];
    }
    content += '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) content += ',';
            content += row[c];
        }
        content += '\n';
    }
    write_text_file(path, content);
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file for digest: " + path);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    return hash;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

nlohmann::json make_manifest(const std::string& subcommand,
                             const std::vector<std::string>& argv,
                             const nlohmann::json& options, const std::string& input_path) {
    nlohmann::json m;
    m["schema_version"] = kSchemaVersion;
    m["tool_version"] = kToolVersion;
    m["subcommand"] = subcommand;
    m["argv"] = argv;
    m["options"] = options;
    if (!input_path.empty()) {
        m["input"] = input_path;
        m["input_digest"] = hex64(fnv1a64_file(input_path));
    }
    return m;
}

} // namespace permci
