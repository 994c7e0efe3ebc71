#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tdl::csv {

// Splits one comma-delimited row. Double-quoted fields may contain commas and
// "" escapes. Unquoted fields are trimmed of surrounding whitespace. Returns
// nullopt when a quoted field is left unterminated.
std::optional<std::vector<std::string>> split_row(std::string_view row);

// Quotes a field only when it needs it (comma, quote, or edge whitespace).
std::string quote_field(std::string_view field);

std::string_view trim(std::string_view text);

}  // namespace tdl::csv
