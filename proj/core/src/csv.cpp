#include "huffkit/csv.hpp"

#include <istream>
#include <ostream>

#include "huffkit/errors.hpp"

namespace huffkit {

void split_csv_line(std::string_view line, std::vector<std::string>& out) {
    out.clear();
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    if (quoted) throw ValidationError("unterminated quote in CSV row");
    out.push_back(std::move(field));
}

CsvReader::CsvReader(std::istream& in) : in_(in) {
    std::string line;
    if (!std::getline(in_, line)) throw SchemaError("empty CSV input: missing header row");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    split_csv_line(line, header_);
}

std::size_t CsvReader::column(std::string_view name) const {
    for (std::size_t i = 0; i < header_.size(); ++i)
        if (header_[i] == name) return i;
    return static_cast<std::size_t>(-1);
}

bool CsvReader::next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;  // tolerate blank lines
        ++row_number_;
        split_csv_line(line, fields);
        return true;
    }
    return false;
}

std::string csv_escape(std::string_view field) {
    bool needs_quotes = field.find_first_of(",\"\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void CsvWriter::write_row(std::span<const std::string> fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_.put(',');
        out_ << csv_escape(fields[i]);
    }
    out_.put('\n');
}

void CsvWriter::write_row(std::initializer_list<std::string_view> fields) {
    std::size_t i = 0;
    for (auto f : fields) {
        if (i++) out_.put(',');
        out_ << csv_escape(f);
    }
    out_.put('\n');
}

}  // namespace huffkit
