#include "funcbandit/core/spec_text.hpp"

#include "funcbandit/core/format.hpp"
#include "funcbandit/errors.hpp"

namespace fb {

std::vector<std::string> split_top_level(std::string_view text, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char ch : text) {
        if (ch == '[') ++depth;
        if (ch == ']') {
            if (--depth < 0) throw ConfigError("unbalanced ']' in '" + std::string(text) + "'");
        }
        if (ch == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (depth != 0) throw ConfigError("unbalanced '[' in '" + std::string(text) + "'");
    out.push_back(cur);
    return out;
}

static std::string strip_brackets(const std::string& v) {
    if (v.size() >= 2 && v.front() == '[' && v.back() == ']') return v.substr(1, v.size() - 2);
    return v;
}

SpecText parse_spec_text(std::string_view text, std::string_view what) {
    SpecText out;
    if (text.empty()) throw ConfigError("empty " + std::string(what) + " spec");
    const auto colon = text.find(':');
    out.name = std::string(text.substr(0, colon));
    if (out.name.empty()) throw ConfigError("missing " + std::string(what) + " name in '" + std::string(text) + "'");
    if (colon == std::string_view::npos) return out;
    const auto rest = text.substr(colon + 1);
    if (rest.empty()) return out;
    for (const auto& item : split_top_level(rest, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("expected key=value in " + std::string(what) + " spec, got '" + item + "'");
        }
        std::string key = item.substr(0, eq);
        for (const auto& kv : out.params) {
            if (kv.first == key) throw ConfigError("duplicate key '" + key + "' in '" + std::string(text) + "'");
        }
        out.params.emplace_back(std::move(key), strip_brackets(item.substr(eq + 1)));
    }
    return out;
}

ParamReader::ParamReader(SpecText text, std::string context)
    : text_(std::move(text)), used_(text_.params.size(), false), context_(std::move(context)) {}

std::optional<std::string> ParamReader::take(std::string_view key) {
    for (std::size_t i = 0; i < text_.params.size(); ++i) {
        if (text_.params[i].first == key) {
            used_[i] = true;
            return text_.params[i].second;
        }
    }
    return std::nullopt;
}

std::optional<double> ParamReader::take_double(std::string_view key) {
    auto v = take(key);
    if (!v) return std::nullopt;
    return parse_double(*v, context_ + " parameter " + std::string(key));
}

double ParamReader::take_double(std::string_view key, double fallback) {
    auto v = take_double(key);
    return v ? *v : fallback;
}

void ParamReader::finish() const {
    for (std::size_t i = 0; i < used_.size(); ++i) {
        if (!used_[i]) throw ConfigError("unknown parameter '" + text_.params[i].first + "' for " + context_);
    }
}

std::string bracket_if_needed(const std::string& value) {
    if (value.find_first_of(",;[]=") != std::string::npos) return "[" + value + "]";
    return value;
}

std::string join_spec_text(std::string_view name, const std::vector<std::pair<std::string, std::string>>& params) {
    std::string out(name);
    for (std::size_t i = 0; i < params.size(); ++i) {
        out += i == 0 ? ':' : ',';
        out += params[i].first;
        out += '=';
        out += bracket_if_needed(params[i].second);
    }
    return out;
}

}  // namespace fb
