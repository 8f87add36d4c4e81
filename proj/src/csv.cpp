#include "fsvar/csv.hpp"

#include <fstream>
#include <sstream>

#include "fsvar/errors.hpp"

namespace fsvar {

namespace {

// One pass over the text with a three-state field scanner.  `record` is the
// 1-based record number used in error messages.
std::vector<std::vector<std::string>> split_records(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::string field;
    enum class State { Start, Unquoted, Quoted, AfterQuote } state = State::Start;
    long record = 1;

    auto end_field = [&] {
        fields.push_back(std::move(field));
        field.clear();
        state = State::Start;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(fields));
        fields.clear();
        ++record;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        // CRLF counts as one record break; a bare CR is not a break.
        const bool is_break =
            c == '\n' ||
            (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n');
        switch (state) {
            case State::Start:
                if (c == '"') {
                    state = State::Quoted;
                } else if (c == ',') {
                    end_field();
                } else if (is_break) {
                    end_record();
                    if (c == '\r') ++i;
                } else {
                    field += c;
                    state = State::Unquoted;
                }
                break;
            case State::Unquoted:
                if (c == '"')
                    throw DataError("stray quote in unquoted field, record " +
                                    std::to_string(record));
                if (c == ',') {
                    end_field();
                } else if (is_break) {
                    end_record();
                    if (c == '\r') ++i;
                } else {
                    field += c;
                }
                break;
            case State::Quoted:
                if (c == '"') {
                    state = State::AfterQuote;
                } else {
                    field += c;
                }
                break;
            case State::AfterQuote:
                if (c == '"') {  // doubled quote: literal "
                    field += '"';
                    state = State::Quoted;
                } else if (c == ',') {
                    end_field();
                } else if (is_break) {
                    end_record();
                    if (c == '\r') ++i;
                } else {
                    throw DataError("text after closing quote, record " +
                                    std::to_string(record));
                }
                break;
        }
    }
    if (state == State::Quoted)
        throw DataError("unterminated quoted field, record " +
                        std::to_string(record));
    // A final record without a trailing newline still counts.
    if (state != State::Start || !fields.empty() || !field.empty())
        end_record();
    return records;
}

bool needs_quoting(const std::string& field) {
    return field.find_first_of(",\"\r\n") != std::string::npos;
}

void append_field(std::string& out, const std::string& field) {
    if (!needs_quoting(field)) {
        out += field;
        return;
    }
    out += '"';
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

}  // namespace

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    throw DataError("no column named '" + name + "'");
}

CsvTable parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records = split_records(text);
    if (records.empty()) throw DataError("csv has no header record");
    CsvTable table;
    table.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size())
            throw DataError("record " + std::to_string(r + 1) + " has " +
                            std::to_string(records[r].size()) + " fields, header has " +
                            std::to_string(table.header.size()));
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof())
        throw IoError("failed while reading '" + path + "'");
    return parse_csv(buf.str());
}

std::string format_csv(const CsvTable& table) {
    for (const auto& row : table.rows)
        if (row.size() != table.header.size())
            throw DimensionError("csv row width differs from the header");
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out += ',';
        append_field(out, table.header[i]);
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            append_field(out, row[i]);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const std::string& path, const CsvTable& table) {
    const std::string text = format_csv(table);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace fsvar
