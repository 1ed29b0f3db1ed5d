#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace qft {

// Shortest round-trip decimal representation of a double. Deterministic for
// identical inputs, so repeated runs of the same configuration produce
// byte-identical files.
std::string format_double(double v);

// Minimal CSV emitter: a header row of column names, then numeric rows,
// '\n' line endings, no trailing delimiter.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path,
            const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void close();

 private:
  std::ofstream out_;
  std::size_t n_columns_;
};

} // namespace qft
