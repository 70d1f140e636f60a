#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fb {

// Tokenized "name:key=value,key=value" text. Values wrapped in [...] may
// contain commas, colons and nested brackets; the brackets are stripped.
struct SpecText {
    std::string name;
    std::vector<std::pair<std::string, std::string>> params;
};

SpecText parse_spec_text(std::string_view text, std::string_view what);

// Splits on `sep` at bracket depth zero.
std::vector<std::string> split_top_level(std::string_view text, char sep);

// Consumes parameters by key; finish() rejects anything left over.
class ParamReader {
public:
    ParamReader(SpecText text, std::string context);

    [[nodiscard]] std::optional<std::string> take(std::string_view key);
    [[nodiscard]] std::optional<double> take_double(std::string_view key);
    double take_double(std::string_view key, double fallback);
    void finish() const;

    [[nodiscard]] const std::string& name() const { return text_.name; }

private:
    SpecText text_;
    std::vector<bool> used_;
    std::string context_;
};

// Builds "name:k=v,..." (or just "name" without params).
std::string join_spec_text(std::string_view name, const std::vector<std::pair<std::string, std::string>>& params);

// Wraps a value in brackets if it contains a separator.
std::string bracket_if_needed(const std::string& value);

}  // namespace fb
