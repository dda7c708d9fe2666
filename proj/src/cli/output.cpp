#include "twoeq/cli/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "twoeq/errors.hpp"

namespace twoeq::cli {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  if (ec != std::errc()) throw ConstraintError("number formatting failed");
  return std::string(buf, ptr);
}

std::string to_csv(const CsvTable& table) {
  if (table.header.size() != table.columns.size()) {
    throw ConstraintError("CSV header and column count differ");
  }
  const std::size_t rows = table.columns.empty() ? 0 : table.columns[0].size();
  for (const auto& col : table.columns) {
    if (col.size() != rows) throw ConstraintError("CSV columns differ in length");
  }
  std::string out;
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (j) out += ',';
    out += table.header[j];
  }
  out += '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
      if (j) out += ',';
      out += format_double(table.columns[j][i]);
    }
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create directory " + path.parent_path().string() +
                    ": " + ec.message());
    }
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace twoeq::cli
