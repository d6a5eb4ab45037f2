#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace anosov::lab {

/// Malformed or unknown configuration content. line() is 0 when the problem
/// is not tied to a single line.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& what, int line)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line)
    {
    }
    int line() const noexcept { return line_; }

  private:
    int line_;
};

struct ConfigEntry {
    std::string key;
    std::string value;
    int line = 0;
};

struct ConfigSection {
    std::string name;
    int line = 0;
    std::vector<ConfigEntry> entries;

    const ConfigEntry* find(const std::string& key) const;
};

/// INI-style text: "[section]" headers, "key = value" lines, '#' comments.
/// Keys are unique within a section; a section name may only repeat when
/// it is listed as repeatable.
class Config {
  public:
    static Config parse(const std::string& text, const std::vector<std::string>& repeatable = {"shear"});

    const std::string& text() const noexcept { return text_; }
    const std::vector<ConfigSection>& sections() const noexcept { return sections_; }
    /// First section with this name, if any.
    const ConfigSection* section(const std::string& name) const;
    std::vector<const ConfigSection*> all(const std::string& name) const;

  private:
    std::string text_;
    std::vector<ConfigSection> sections_;
};

/// FNV-1a 64-bit hash.
std::uint64_t fnv1a64(const std::string& bytes) noexcept;

/// Records every parameter a run used, defaults included, in reading order.
class ParameterLog {
  public:
    void record(const std::string& name, const std::string& value);
    const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

  private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

/// Typed access to one section with defaults. A missing section behaves
/// like an empty one. Every value read is logged as "section.key".
class SectionReader {
  public:
    SectionReader(const ConfigSection* section, std::string name, ParameterLog& log)
        : section_(section), name_(std::move(name)), log_(log)
    {
    }

    bool has(const std::string& key) const;
    int line_of(const std::string& key) const;

    double real(const std::string& key, double fallback);
    long long integer(const std::string& key, long long fallback);
    bool boolean(const std::string& key, bool fallback);
    std::string text(const std::string& key, const std::string& fallback);
    std::string choice(const std::string& key, const std::string& fallback, const std::vector<std::string>& allowed);
    std::vector<double> reals(const std::string& key, const std::vector<double>& fallback);
    /// Rows separated by ';', entries by whitespace.
    std::vector<std::vector<long long>> integer_rows(const std::string& key);
    std::optional<std::vector<double>> optional_reals(const std::string& key);

  private:
    const ConfigEntry* entry(const std::string& key) const;
    void log(const std::string& key, const std::string& value) { log_.record(name_ + "." + key, value); }

    const ConfigSection* section_;
    std::string name_;
    ParameterLog& log_;
};

}  // namespace anosov::lab
