#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlpot {

/// Shortest round-trip decimal form of a double ("%.17g"); deterministic for
/// a given binary, so identical runs produce byte-identical CSV fields.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Minimal CSV emitter: one header row, then rows of preformatted cells.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
  }

  void header(const std::vector<std::string>& names) { write_row(names); }

  void row(const std::vector<std::string>& cells) { write_row(cells); }

 private:
  std::ofstream out_;

  void write_row(const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out_ << ',';
      out_ << cells[k];
    }
    out_ << '\n';
  }
};

} // namespace nlpot
