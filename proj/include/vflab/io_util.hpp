#pragma once

#include <complex>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace vflab {

using json = nlohmann::json;

// CSV writer emitting full-precision scientific notation (17 significant
// digits) so downstream tools never re-quantize.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);

  void header(const std::vector<std::string>& names);
  void row(const std::vector<double>& values);
  void raw_row(const std::string& line);

 private:
  std::ofstream out_;
};

std::string format_full(double v);

void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

// Flat little-endian float64 dump (the binary column option for large runs).
void write_f64(const std::filesystem::path& path, const std::vector<double>& data);

}  // namespace vflab
