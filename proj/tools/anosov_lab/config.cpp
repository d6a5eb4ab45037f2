#include "config.hpp"

#include "anosov/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace anosov::lab {
namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool valid_name(const std::string& s)
{
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::islower(c) || std::isdigit(c) || c == '_' || c == '-';
    });
}

double parse_real(const std::string& token, int line, const std::string& key)
{
    double value = 0.0;
    const char* end = token.data() + token.size();
    const auto result = std::from_chars(token.data(), end, value);
    if (result.ec != std::errc() || result.ptr != end || !std::isfinite(value)) {
        throw ConfigError("'" + key + "': expected a real number, got '" + token + "'", line);
    }
    return value;
}

long long parse_integer(const std::string& token, int line, const std::string& key)
{
    long long value = 0;
    const char* begin = token.data();
    if (!token.empty() && token[0] == '+') ++begin;
    const char* end = token.data() + token.size();
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc() || result.ptr != end || begin == end) {
        throw ConfigError("'" + key + "': expected an integer, got '" + token + "'", line);
    }
    return value;
}

std::vector<std::string> split_ws(const std::string& s)
{
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string t; is >> t;) out.push_back(t);
    return out;
}

std::string join_reals(const std::vector<double>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + format_double(v[i]);
    return out;
}

}  // namespace

const ConfigEntry* ConfigSection::find(const std::string& key) const
{
    for (const auto& e : entries) {
        if (e.key == key) return &e;
    }
    return nullptr;
}

Config Config::parse(const std::string& text, const std::vector<std::string>& repeatable)
{
    Config cfg;
    cfg.text_ = text;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("unterminated section header", line);
            const std::string name = trim(s.substr(1, s.size() - 2));
            if (!valid_name(name)) throw ConfigError("invalid section name '" + name + "'", line);
            const bool repeats = std::find(repeatable.begin(), repeatable.end(), name) != repeatable.end();
            if (!repeats) {
                if (const ConfigSection* prev = cfg.section(name)) {
                    throw ConfigError("section [" + name + "] already defined on line " + std::to_string(prev->line),
                                      line);
                }
            }
            cfg.sections_.push_back({name, line, {}});
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value' or '[section]'", line);
        if (cfg.sections_.empty()) throw ConfigError("key outside of any section", line);
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (!valid_name(key)) throw ConfigError("invalid key '" + key + "'", line);
        if (value.empty()) throw ConfigError("'" + key + "' has no value", line);
        auto& section = cfg.sections_.back();
        if (const ConfigEntry* prev = section.find(key)) {
            throw ConfigError("duplicate key '" + key + "' (first set on line " + std::to_string(prev->line) + ")",
                              line);
        }
        section.entries.push_back({key, value, line});
    }
    return cfg;
}

const ConfigSection* Config::section(const std::string& name) const
{
    for (const auto& s : sections_) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

std::vector<const ConfigSection*> Config::all(const std::string& name) const
{
    std::vector<const ConfigSection*> out;
    for (const auto& s : sections_) {
        if (s.name == name) out.push_back(&s);
    }
    return out;
}

std::uint64_t fnv1a64(const std::string& bytes) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void ParameterLog::record(const std::string& name, const std::string& value)
{
    for (auto& [k, v] : entries_) {
        if (k == name) {
            v = value;
            return;
        }
    }
    entries_.emplace_back(name, value);
}

const ConfigEntry* SectionReader::entry(const std::string& key) const
{
    return section_ ? section_->find(key) : nullptr;
}

bool SectionReader::has(const std::string& key) const { return entry(key) != nullptr; }

int SectionReader::line_of(const std::string& key) const
{
    const ConfigEntry* e = entry(key);
    return e ? e->line : (section_ ? section_->line : 0);
}

double SectionReader::real(const std::string& key, double fallback)
{
    const ConfigEntry* e = entry(key);
    const double v = e ? parse_real(e->value, e->line, key) : fallback;
    log(key, format_double(v));
    return v;
}

long long SectionReader::integer(const std::string& key, long long fallback)
{
    const ConfigEntry* e = entry(key);
    const long long v = e ? parse_integer(e->value, e->line, key) : fallback;
    log(key, std::to_string(v));
    return v;
}

bool SectionReader::boolean(const std::string& key, bool fallback)
{
    const ConfigEntry* e = entry(key);
    bool v = fallback;
    if (e) {
        if (e->value == "true") {
            v = true;
        } else if (e->value == "false") {
            v = false;
        } else {
            throw ConfigError("'" + key + "': expected true or false, got '" + e->value + "'", e->line);
        }
    }
    log(key, v ? "true" : "false");
    return v;
}

std::string SectionReader::text(const std::string& key, const std::string& fallback)
{
    const ConfigEntry* e = entry(key);
    std::string v = e ? e->value : fallback;
    log(key, v);
    return v;
}

std::string SectionReader::choice(const std::string& key, const std::string& fallback,
                                  const std::vector<std::string>& allowed)
{
    const ConfigEntry* e = entry(key);
    const std::string v = e ? e->value : fallback;
    if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
        throw ConfigError("'" + key + "': expected one of {" + list + "}, got '" + v + "'", e ? e->line : 0);
    }
    log(key, v);
    return v;
}

std::vector<double> SectionReader::reals(const std::string& key, const std::vector<double>& fallback)
{
    auto v = optional_reals(key);
    if (!v) {
        log(key, join_reals(fallback));
        return fallback;
    }
    return *v;
}

std::optional<std::vector<double>> SectionReader::optional_reals(const std::string& key)
{
    const ConfigEntry* e = entry(key);
    if (!e) return std::nullopt;
    std::vector<double> out;
    for (const auto& t : split_ws(e->value)) out.push_back(parse_real(t, e->line, key));
    log(key, join_reals(out));
    return out;
}

std::vector<std::vector<long long>> SectionReader::integer_rows(const std::string& key)
{
    const ConfigEntry* e = entry(key);
    if (!e) throw ConfigError("[" + name_ + "]: missing required key '" + key + "'", section_ ? section_->line : 0);
    std::vector<std::vector<long long>> rows;
    std::string normalized;
    std::istringstream in(e->value);
    for (std::string row; std::getline(in, row, ';');) {
        std::vector<long long> r;
        for (const auto& t : split_ws(row)) r.push_back(parse_integer(t, e->line, key));
        if (r.empty()) throw ConfigError("'" + key + "': empty row", e->line);
        for (std::size_t i = 0; i < r.size(); ++i) normalized += (i ? " " : "") + std::to_string(r[i]);
        normalized += "; ";
        rows.push_back(std::move(r));
    }
    if (normalized.size() >= 2) normalized.resize(normalized.size() - 2);
    log(key, normalized);
    return rows;
}

}  // namespace anosov::lab
