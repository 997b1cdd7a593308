#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace sectorspec {

using json = nlohmann::json;

// FNV-1a 64-bit hash of the canonical (sorted-key) dump, as 0x-prefixed hex.
std::string config_hash(const json& config);

std::string format_g17(double v);

// CSV with a header row, comma separator, LF endings, 17 significant digits.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows);

struct Series {
  std::string label;
  std::vector<double> x, y;
};

// Minimal line plot; log_x switches the abscissa to log10.
std::string svg_line_plot(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<Series>& series,
                          bool log_x = false);

// 16-bit binary PGM (P5, maxval 65535, big-endian samples), values in [0, 1].
std::string pgm16(int width, int height, const std::vector<double>& values);

void write_file(const std::string& path, const std::string& content);

}  // namespace sectorspec
