#include "depnet/csv.hpp"

#include "depnet/types.hpp"

namespace depnet::csv {

std::optional<std::vector<std::string>> Reader::next_row() {
    int first = in_.peek();
    if (first == std::istream::traits_type::eof()) return std::nullopt;

    row_line_ = line_ + 1;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool quoted_field = false;

    for (;;) {
        int ci = in_.get();
        if (ci == std::istream::traits_type::eof()) {
            if (in_quotes)
                throw FormatError("csv: unterminated quoted field starting near line " +
                                  std::to_string(row_line_));
            fields.push_back(std::move(field));
            return fields;
        }
        char c = static_cast<char>(ci);
        if (in_quotes) {
            if (c == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line_;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field.empty() && !quoted_field) {
                    in_quotes = true;
                    quoted_field = true;
                } else {
                    field.push_back(c);  // stray quote inside unquoted field, keep verbatim
                }
                break;
            case ',':
                fields.push_back(std::move(field));
                field.clear();
                quoted_field = false;
                break;
            case '\r':
                if (in_.peek() == '\n') break;  // swallow, LF ends the row
                field.push_back(c);
                break;
            case '\n':
                ++line_;
                fields.push_back(std::move(field));
                return fields;
            default:
                field.push_back(c);
        }
    }
}

std::string escape_field(const std::string& field) {
    bool needs_quotes = field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

void write_row(std::ostream& out, std::span<const std::string> fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << escape_field(fields[i]);
    }
    out << '\n';
}

}  // namespace depnet::csv
