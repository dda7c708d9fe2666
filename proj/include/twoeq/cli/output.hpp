#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace twoeq::cli {

/// Failure to create or write an output file; the message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest text of `x` with 17 significant digits, dot decimal separator,
/// independent of the global locale.
std::string format_double(double x);

/// Column-major table for CSV output; all columns share one length.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

std::string to_csv(const CsvTable& table);

/// Writes `content` to `path` through a sibling temporary file and a rename,
/// so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace twoeq::cli
