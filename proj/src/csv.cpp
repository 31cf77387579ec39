#include "asian/csv.hpp"

#include <cmath>
#include <cstdio>

#include "asian/errors.hpp"

namespace asian {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string quote_field(const std::string& text) {
    if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header) : out_(out), columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
    if (cells.size() != columns_) throw ConfigError("csv: row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        if (const auto* d = std::get_if<double>(&cells[i]))
            out_ << format_number(*d);
        else if (const auto* n = std::get_if<long long>(&cells[i]))
            out_ << *n;
        else
            out_ << quote_field(std::get<std::string>(cells[i]));
    }
    out_ << '\n';
    ++rows_;
}

}  // namespace asian
