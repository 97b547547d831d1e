#include "bsb/output.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace bsb {

std::string format_double(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (res.ec != std::errc{})
        throw std::runtime_error("failed to format floating-point value");
    return {buf.data(), res.ptr};
}

OutputFormat parse_output_format(std::string_view name)
{
    if (name == "csv")
        return OutputFormat::csv;
    if (name == "jsonl" || name == "json")
        return OutputFormat::jsonl;
    throw std::invalid_argument("unknown output format: " + std::string(name));
}

OutputRecord& OutputRecord::add(std::string key, double value)
{
    fields_.emplace_back(std::move(key), value);
    return *this;
}

OutputRecord& OutputRecord::add(std::string key, int value)
{
    fields_.emplace_back(std::move(key), static_cast<std::int64_t>(value));
    return *this;
}

OutputRecord& OutputRecord::add(std::string key, bool value)
{
    fields_.emplace_back(std::move(key), value);
    return *this;
}

OutputRecord& OutputRecord::add(std::string key, std::string value)
{
    fields_.emplace_back(std::move(key), std::move(value));
    return *this;
}

OutputRecord& OutputRecord::add(std::string key, const char* value)
{
    return add(std::move(key), std::string(value));
}

namespace {

struct CsvCell
{
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return v; }
};

std::string json_string(std::string_view s)
{
    std::string out = "\"";
    for (char c : s)
    {
        switch (c)
        {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    out += '"';
    return out;
}

struct JsonValue
{
    std::string operator()(double v) const
    {
        return std::isfinite(v) ? format_double(v) : "null";
    }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return json_string(v); }
};

}  // namespace

std::string OutputRecord::csv_header() const
{
    std::string out;
    for (const auto& [key, value] : fields_)
    {
        if (!out.empty())
            out += ',';
        out += key;
    }
    return out;
}

std::string OutputRecord::csv_row() const
{
    std::string out;
    bool first = true;
    for (const auto& [key, value] : fields_)
    {
        if (!first)
            out += ',';
        first = false;
        out += std::visit(CsvCell{}, value);
    }
    return out;
}

std::string OutputRecord::json_object() const
{
    std::string out = "{";
    bool first = true;
    for (const auto& [key, value] : fields_)
    {
        if (!first)
            out += ',';
        first = false;
        out += json_string(key);
        out += ':';
        out += std::visit(JsonValue{}, value);
    }
    out += '}';
    return out;
}

void write_records(std::ostream& out, const std::vector<OutputRecord>& records,
                   OutputFormat format)
{
    if (records.empty())
        return;
    if (format == OutputFormat::csv)
    {
        out << records.front().csv_header() << '\n';
        for (const auto& r : records)
            out << r.csv_row() << '\n';
    }
    else
    {
        for (const auto& r : records)
            out << r.json_object() << '\n';
    }
}

}  // namespace bsb
