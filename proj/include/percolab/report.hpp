#pragma once

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace percolab {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kVersion = "0.1.0";

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
    return h;
}

// Fixed-column result table; one row per measurement point. Values are kept
// as strings so CSV bytes are reproducible.
class ResultTable {
public:
    explicit ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    const std::vector<std::string>& columns() const noexcept { return columns_; }
    std::size_t row_count() const noexcept { return rows_.size(); }

    void add_row(std::vector<std::string> values) {
        if (values.size() != columns_.size())
            throw std::invalid_argument("result row arity mismatch");
        rows_.push_back(std::move(values));
    }

    std::string csv() const {
        std::string out = join(columns_);
        out += '\n';
        for (const auto& row : rows_) {
            out += join(row);
            out += '\n';
        }
        return out;
    }

    std::string jsonl() const {
        std::string out;
        for (const auto& row : rows_) {
            nlohmann::ordered_json j;
            for (std::size_t i = 0; i < columns_.size(); ++i) j[columns_[i]] = row[i];
            out += j.dump();
            out += '\n';
        }
        return out;
    }

    std::vector<std::uint64_t> row_checksums() const {
        std::vector<std::uint64_t> sums;
        sums.reserve(rows_.size());
        for (const auto& row : rows_) sums.push_back(fnv1a(join(row)));
        return sums;
    }

private:
    static std::string join(const std::vector<std::string>& parts) {
        std::string out;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) out += ',';
            out += parts[i];
        }
        return out;
    }

    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

inline std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Writes table + JSONL mirror + manifest atomically: everything lands under
// temporary names first and is renamed only on success, so failed runs leave
// no partial outputs behind.
class OutputWriter {
public:
    explicit OutputWriter(std::string base_path) : base_(std::move(base_path)) {}

    void write(const ResultTable& table, const nlohmann::ordered_json& config,
               const std::string& started_at) {
        nlohmann::ordered_json manifest;
        manifest["schema_version"] = kSchemaVersion;
        manifest["binary_version"] = kVersion;
        manifest["config"] = config;
        manifest["started_at"] = started_at;
        manifest["finished_at"] = utc_timestamp();
        manifest["columns"] = table.columns();
        manifest["rows"] = table.row_count();
        auto sums = table.row_checksums();
        std::vector<std::string> hex;
        hex.reserve(sums.size());
        for (std::uint64_t s : sums) {
            char buf[20];
            std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(s));
            hex.push_back(buf);
        }
        manifest["row_checksums"] = hex;

        std::vector<std::string> staged;
        try {
            stage(base_ + ".csv", table.csv(), staged);
            stage(base_ + ".jsonl", table.jsonl(), staged);
            stage(base_ + ".manifest.json", manifest.dump(2) + "\n", staged);
            for (const auto& path : staged)
                if (std::rename((path + ".tmp").c_str(), path.c_str()) != 0)
                    throw std::runtime_error("rename failed for " + path);
        } catch (...) {
            for (const auto& path : staged) std::remove((path + ".tmp").c_str());
            throw;
        }
    }

private:
    static void stage(const std::string& path, const std::string& content,
                      std::vector<std::string>& staged) {
        std::ofstream out(path + ".tmp", std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + path + ".tmp");
        out << content;
        if (!out.good()) throw std::runtime_error("write failed for " + path);
        staged.push_back(path);
    }

    std::string base_;
};

}  // namespace percolab
