#include "tdl/csv.hpp"

namespace tdl::csv {

std::string_view trim(std::string_view text) {
    constexpr std::string_view ws = " \t\r\n";
    const auto first = text.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(ws);
    return text.substr(first, last - first + 1);
}

std::optional<std::vector<std::string>> split_row(std::string_view row) {
    std::vector<std::string> fields;
    std::size_t i = 0;
    const std::size_t n = row.size();
    while (true) {
        // skip leading blanks before a possible opening quote
        std::size_t j = i;
        while (j < n && (row[j] == ' ' || row[j] == '\t')) ++j;
        if (j < n && row[j] == '"') {
            std::string value;
            std::size_t k = j + 1;
            bool closed = false;
            while (k < n) {
                if (row[k] == '"') {
                    if (k + 1 < n && row[k + 1] == '"') {
                        value.push_back('"');
                        k += 2;
                        continue;
                    }
                    closed = true;
                    ++k;
                    break;
                }
                value.push_back(row[k++]);
            }
            if (!closed) return std::nullopt;
            while (k < n && row[k] != ',') ++k;  // tolerate trailing blanks after the closing quote
            fields.push_back(std::move(value));
            if (k >= n) break;
            i = k + 1;
        } else {
            const auto comma = row.find(',', i);
            const auto end = comma == std::string_view::npos ? n : comma;
            fields.emplace_back(trim(row.substr(i, end - i)));
            if (comma == std::string_view::npos) break;
            i = comma + 1;
        }
    }
    return fields;
}

std::string quote_field(std::string_view field) {
    const bool needs = field.find_first_of(",\"\r\n") != std::string_view::npos ||
                       (!field.empty() && (field.front() == ' ' || field.back() == ' '));
    if (!needs) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace tdl::csv
