#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace huffkit {

// Header-first CSV reader. Handles quoted fields, embedded commas/quotes
// and CRLF; does not support embedded newlines (none of our tables carry
// free text).
class CsvReader {
public:
    explicit CsvReader(std::istream& in);

    const std::vector<std::string>& header() const { return header_; }

    // Column index for `name`, or npos.
    std::size_t column(std::string_view name) const;

    // Reads the next data row into `fields`. Returns false at end of input.
    bool next(std::vector<std::string>& fields);

    // 1-based index of the data row most recently returned by next().
    std::size_t row_number() const { return row_number_; }

private:
    std::istream& in_;
    std::vector<std::string> header_;
    std::size_t row_number_ = 0;
};

void split_csv_line(std::string_view line, std::vector<std::string>& out);

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void write_row(std::span<const std::string> fields);
    void write_row(std::initializer_list<std::string_view> fields);

private:
    std::ostream& out_;
};

std::string csv_escape(std::string_view field);

}  // namespace huffkit
