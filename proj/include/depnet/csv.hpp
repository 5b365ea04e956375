#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace depnet::csv {

// RFC 4180 row reader: quoted fields, embedded commas, quotes and newlines,
// CRLF or LF line endings. A quote opened but never closed before EOF is a
// FormatError (row boundaries are unrecoverable at that point).
class Reader {
  public:
    explicit Reader(std::istream& in) : in_(in) {}

    // Next logical row, or nullopt at end of input. Trailing empty line is
    // not a row.
    std::optional<std::vector<std::string>> next_row();

    // 1-based line number where the last returned row started.
    std::size_t row_line() const { return row_line_; }

  private:
    std::istream& in_;
    std::size_t line_ = 0;
    std::size_t row_line_ = 0;
};

std::string escape_field(const std::string& field);
void write_row(std::ostream& out, std::span<const std::string> fields);

}  // namespace depnet::csv
