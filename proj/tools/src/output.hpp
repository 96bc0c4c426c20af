#pragma once

// Table files with a metadata header, plain or gzip-compressed.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

namespace lorentz::cli {

struct Meta {
    std::string command;
    std::string config_hash;  // 16 hex digits
    std::uint64_t seed{0};
};

/// FNV-1a of the bytes, as 16 hex digits.
std::string hash_hex(const std::string& bytes);

class TableWriter {
public:
    /// Compresses when the file name ends in ".gz". Creates parent directories.
    TableWriter(const std::filesystem::path& path, const Meta& meta, const std::vector<std::string>& columns);
    ~TableWriter();
    TableWriter(const TableWriter&) = delete;
    TableWriter& operator=(const TableWriter&) = delete;

    void row(const std::vector<double>& values);
    void row_text(const std::string& line);
    void close();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Fixed formatting used in every output file: %.10g.
std::string format_number(double v);

/// Writes <table>.json next to a table: tool, version, command, seed, config hash and
/// the full parameter record.
void write_sidecar(const std::filesystem::path& table, const Meta& meta, const nlohmann::json& params);

/// Header lines written before the column names.
std::string meta_header(const Meta& meta);

}  // namespace lorentz::cli
