#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace xychain::app {

/// Minimal RFC-4180 writer; '#' lines before the header carry provenance.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void comment(const std::string& text);
  void row(const std::vector<std::string>& cells);

  /// Quotes cells holding a comma, quote, CR or LF; doubles embedded quotes.
  static std::string quote(const std::string& cell);
  /// %.17g: round-trips every double exactly.
  static std::string num(double v);

 private:
  std::ostream& out_;
};

}  // namespace xychain::app
