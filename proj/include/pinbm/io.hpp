#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pinbm {

inline constexpr const char* kVersion = "pinbm 0.1.0";

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::string to_hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// 17 significant digits: the round-trip format used in every CSV cell.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Stamp {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version = kVersion;

    std::string comment_line() const {
        return "# config_hash=" + config_hash + " seed=" + std::to_string(seed) +
               " version=" + version;
    }
};

/// Plain CSV writer; every file starts with the reproducibility stamp and a
/// header row.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const Stamp& stamp, const std::vector<std::string>& header)
        : out_(path) {
        if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
        out_ << stamp.comment_line() << "\n";
        write_row(header);
    }

    void write_row(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ",";
            out_ << cells[i];
        }
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

}  // namespace pinbm
