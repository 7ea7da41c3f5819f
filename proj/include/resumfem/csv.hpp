#ifndef RESUMFEM_CSV_HPP
#define RESUMFEM_CSV_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "resumfem/errors.hpp"

namespace resumfem {

/// CSV writer: comma separator, '.' decimal point, header row, LF endings,
/// 17 significant digits so regression diffs are bit-exact.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out_ << ',';
      out_ << header[i];
    }
    out_ << '\n';
  }

  static std::string format(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  std::string str() const { return out_.str(); }

  void write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    f << out_.str();
    if (!f) throw IoError("write failed: " + path);
  }

 private:
  std::ostringstream out_;
};

} // namespace resumfem

#endif
