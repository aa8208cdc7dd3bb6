#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace frontlab {

/// CSV writer with deterministic formatting: floating-point values are
/// written with 17 significant digits so reruns are byte-identical.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  ~CsvWriter();

  void row(const std::vector<double>& values);
  void raw_row(const std::string& line);

  static std::string format(double v);

 private:
  std::ofstream out_;
  std::size_t width_;
};

/// Creates the directory (and parents) if missing.
void ensure_directory(const std::string& path);

}  // namespace frontlab
