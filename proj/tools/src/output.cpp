#include "output.hpp"

#include <zlib.h>

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace lorentz::cli {

std::string hash_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string meta_header(const Meta& meta) {
    return "# tool=lorentz-bg version=" + std::string(LORENTZ_VERSION) + " command=" + meta.command +
           " config_hash=" + meta.config_hash + " seed=" + std::to_string(meta.seed) + "\n";
}

void write_sidecar(const std::filesystem::path& table, const Meta& meta, const nlohmann::json& params) {
    const nlohmann::json j = {{"tool", "lorentz-bg"},         {"version", LORENTZ_VERSION}, {"command", meta.command},
                              {"seed", meta.seed},            {"config_hash", meta.config_hash},
                              {"table", table.filename().string()}, {"params", params}};
    std::ofstream out(table.string() + ".json");
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("write failed: " + table.string() + ".json");
}

struct TableWriter::Impl {
    bool gz{false};
    gzFile gzf{nullptr};
    std::ofstream out;
    std::string path;

    void write(const std::string& s) {
        if (gz) {
            if (gzwrite(gzf, s.data(), static_cast<unsigned>(s.size())) != static_cast<int>(s.size()))
                throw std::runtime_error("write failed: " + path);
        } else {
            out << s;
            if (!out) throw std::runtime_error("write failed: " + path);
        }
    }
};

TableWriter::TableWriter(const std::filesystem::path& path, const Meta& meta, const std::vector<std::string>& columns)
    : impl_(std::make_unique<Impl>()) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    impl_->path = path.string();
    impl_->gz = path.extension() == ".gz";
    if (impl_->gz) {
        impl_->gzf = gzopen(impl_->path.c_str(), "wb6");
        if (!impl_->gzf) throw std::runtime_error("cannot open " + impl_->path);
    } else {
        impl_->out.open(path, std::ios::binary);
        if (!impl_->out) throw std::runtime_error("cannot open " + impl_->path);
    }
    std::string head = meta_header(meta);
    for (std::size_t i = 0; i < columns.size(); ++i) head += (i ? "," : "") + columns[i];
    impl_->write(head + "\n");
}

TableWriter::~TableWriter() {
    try {
        close();
    } catch (...) {
    }
}

void TableWriter::row(const std::vector<double>& values) {
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line += ',';
        line += format_number(values[i]);
    }
    impl_->write(line + "\n");
}

void TableWriter::row_text(const std::string& line) { impl_->write(line + "\n"); }

void TableWriter::close() {
    if (impl_->gz && impl_->gzf) {
        if (gzclose(impl_->gzf) != Z_OK) {
            impl_->gzf = nullptr;
            throw std::runtime_error("close failed: " + impl_->path);
        }
        impl_->gzf = nullptr;
    } else if (impl_->out.is_open()) {
        impl_->out.close();
    }
}

}  // namespace lorentz::cli
