#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace wqed {

// Shortest text that round-trips to the same double; "nan", "inf", "-inf" otherwise.
// Independent of the locale.
std::string format_real(double value);

class CsvCell {
public:
    CsvCell(double v) : text_(format_real(v)) {}
    CsvCell(int v) : text_(std::to_string(v)) {}
    CsvCell(std::int64_t v) : text_(std::to_string(v)) {}
    CsvCell(std::size_t v) : text_(std::to_string(v)) {}
    CsvCell(bool v) : text_(v ? "true" : "false") {}
    CsvCell(std::string_view v) : text_(v) {}
    CsvCell(const char* v) : text_(v) {}

    const std::string& text() const { return text_; }

private:
    std::string text_;
};

// One header line, then one line per row; LF line endings. Cells are not quoted, so they
// must not contain commas or newlines.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void row(std::initializer_list<CsvCell> cells);
    std::size_t row_count() const { return rows_; }
    const std::string& str() const { return text_; }

private:
    std::size_t columns_;
    std::size_t rows_ = 0;
    std::string text_;
};

}  // namespace wqed
