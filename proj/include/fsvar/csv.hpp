#pragma once

#include <string>
#include <vector>

namespace fsvar {

// A rectangular CSV: a header record plus data records, every record with the
// same field count.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // index, or DataError
};

// Strict RFC-style parsing: fields separated by commas, records by LF or
// CRLF, quoted fields may contain commas/newlines/doubled quotes.  A quote
// inside an unquoted field, text after a closing quote, an unterminated
// quote, or a ragged record are all errors.
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::string& path);

// Emission with minimal quoting (only fields containing a comma, quote or
// newline are quoted).  parse_csv(format_csv(t)) reproduces t exactly.
std::string format_csv(const CsvTable& table);
void write_csv(const std::string& path, const CsvTable& table);

}  // namespace fsvar
