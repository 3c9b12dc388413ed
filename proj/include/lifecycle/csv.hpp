#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "lifecycle/assert.hpp"

namespace lifecycle {

inline std::string format_fixed(double v, int dp) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", dp, v);
    return buf;
}

inline std::string format_general(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

// Banker's rounding at a decimal position. nearbyint uses the current FP
// rounding mode, which is round-to-nearest-even unless someone changed it.
inline double round_half_even(double v, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::nearbyint(v * scale) / scale;
}

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::string& header) : out_(path) {
        if (!out_)
            throw IoError("cannot open for writing: " + path.string());
        out_ << header << "\n";
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i)
                out_ << ",";
            out_ << cells[i];
        }
        out_ << "\n";
        if (!out_)
            throw IoError("write failed");
    }

  private:
    std::ofstream out_;
};

}  // namespace lifecycle
