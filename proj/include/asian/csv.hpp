#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace asian {

using CsvCell = std::variant<double, long long, std::string>;

/// Comma-separated output with one header row; doubles use 10 significant digits.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::vector<std::string> header);

    void row(const std::vector<CsvCell>& cells);
    std::size_t rows_written() const { return rows_; }

private:
    std::ostream& out_;
    std::size_t columns_;
    std::size_t rows_ = 0;
};

std::string format_number(double v);
/// Quotes a text field that holds a comma, quote or line break.
std::string quote_field(const std::string& text);

}  // namespace asian
