#include "wqed/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace wqed {

std::string format_real(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) throw std::logic_error("to_chars failed");
    return {buf.data(), ptr};
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) text_ += ',';
        text_ += header[i];
    }
    text_ += '\n';
}

void CsvWriter::row(std::initializer_list<CsvCell> cells) {
    if (cells.size() != columns_) throw std::logic_error("CSV row width does not match the header");
    bool first = true;
    for (const auto& c : cells) {
        if (!first) text_ += ',';
        first = false;
        text_ += c.text();
    }
    text_ += '\n';
    ++rows_;
}

}  // namespace wqed
