#include "anosov/csv.hpp"

#include <charconv>
#include <ostream>

namespace anosov {

std::string format_double(double value)
{
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

CsvWriter& CsvWriter::comment(std::string_view text)
{
    if (row_started_) end_row();
    os_ << "# " << text << '\n';
    return *this;
}

void CsvWriter::separator()
{
    if (row_started_) os_ << ',';
    row_started_ = true;
}

CsvWriter& CsvWriter::field(std::string_view value)
{
    separator();
    if (value.find_first_of(",\"\n") == std::string_view::npos) {
        os_ << value;
        return *this;
    }
    os_ << '"';
    for (char c : value) {
        if (c == '"') os_ << '"';
        os_ << c;
    }
    os_ << '"';
    return *this;
}

CsvWriter& CsvWriter::field(double value)
{
    separator();
    os_ << format_double(value);
    return *this;
}

CsvWriter& CsvWriter::field(long long value)
{
    separator();
    os_ << value;
    return *this;
}

CsvWriter& CsvWriter::field(std::uint64_t value)
{
    separator();
    os_ << value;
    return *this;
}

CsvWriter& CsvWriter::end_row()
{
    os_ << '\n';
    row_started_ = false;
    return *this;
}

}  // namespace anosov
