#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace bsb {

// Shortest decimal string that parses back to the same double.
// Non-finite values print as "inf", "-inf" or "nan".
std::string format_double(double value);

enum class OutputFormat
{
    csv,
    jsonl
};

OutputFormat parse_output_format(std::string_view name);

// Ordered flat key/value record. Keys are fixed identifiers chosen by the
// caller and are written verbatim.
class OutputRecord
{
  public:
    using Value = std::variant<double, std::int64_t, bool, std::string>;

    OutputRecord& add(std::string key, double value);
    OutputRecord& add(std::string key, int value);
    OutputRecord& add(std::string key, bool value);
    OutputRecord& add(std::string key, std::string value);
    OutputRecord& add(std::string key, const char* value);

    const std::vector<std::pair<std::string, Value>>& fields() const { return fields_; }

    std::string csv_header() const;
    std::string csv_row() const;
    // Non-finite doubles become null.
    std::string json_object() const;

  private:
    std::vector<std::pair<std::string, Value>> fields_;
};

// CSV gets one header taken from the first record; JSON lines get one object
// per record. Every line ends in '\n'.
void write_records(std::ostream& out, const std::vector<OutputRecord>& records,
                   OutputFormat format);

}  // namespace bsb
