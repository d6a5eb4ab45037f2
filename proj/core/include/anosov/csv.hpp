#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace anosov {

/// Minimal CSV emitter: comma separator, '.' decimal point, LF line endings,
/// doubles printed in the shortest form that round-trips exactly.
class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    /// "# text" line; CSV readers can skip these as comments.
    CsvWriter& comment(std::string_view text);

    CsvWriter& field(std::string_view value);
    CsvWriter& field(const char* value) { return field(std::string_view(value)); }
    CsvWriter& field(const std::string& value) { return field(std::string_view(value)); }
    CsvWriter& field(double value);
    CsvWriter& field(int value) { return field(static_cast<long long>(value)); }
    CsvWriter& field(long long value);
    CsvWriter& field(std::uint64_t value);
    CsvWriter& field(bool value) { return field(value ? std::string_view("1") : std::string_view("0")); }
    CsvWriter& end_row();

  private:
    void separator();

    std::ostream& os_;
    bool row_started_ = false;
};

/// Shortest decimal text that parses back to the same double (C locale).
std::string format_double(double value);

}  // namespace anosov
