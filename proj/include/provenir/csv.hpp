#pragma once

#include <string>
#include <string_view>

namespace provenir {

/// RFC-4180 field: quoted (with doubled quotes) only when it contains a comma,
/// quote, CR or LF.
inline std::string csv_field(std::string_view value) {
    if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace provenir
