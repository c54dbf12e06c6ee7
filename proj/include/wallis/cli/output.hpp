#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace wallis::cli {

enum ExitCode : int {
    kPass = 0,
    kViolation = 1,
    kUndecidable = 2,
    kInconsistentTrend = 3,
    kUsage = 64,
};

/// Bad command-line input; maps to exit code 64.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Table-shaped result of one command. Every cell is a string; decimals
/// travel with a sibling "<column>_digits" column.
struct OutputRecord {
    std::string command;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    nlohmann::ordered_json summary;  // null when the command has none
    int exit_code = kPass;

    void add_row(std::vector<std::string> cells)
    {
        if (cells.size() != columns.size()) {
            throw std::logic_error("OutputRecord: row width does not match columns for " + command);
        }
        rows.push_back(std::move(cells));
    }
};

inline nlohmann::ordered_json exit_semantics()
{
    return {{"0", "pass"}, {"1", "violation"}, {"2", "undecidable"}, {"3", "inconsistent trend"}, {"64", "usage"}};
}

inline nlohmann::ordered_json to_json_value(const OutputRecord& record)
{
    nlohmann::ordered_json j;
    j["command"] = record.command;
    j["parameters"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : record.parameters) {
        j["parameters"][k] = v;
    }
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : record.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            r[record.columns[i]] = row[i];
        }
        j["rows"].push_back(std::move(r));
    }
    if (!record.summary.is_null()) {
        j["summary"] = record.summary;
    }
    j["exit_semantics"] = exit_semantics();
    return j;
}

inline std::string render_json(const OutputRecord& record) { return to_json_value(record).dump(2) + "\n"; }

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

/// Header row plus one line per row, LF-terminated.
inline std::string render_csv(const OutputRecord& record)
{
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            os << (i ? "," : "") << csv_field(cells[i]);
        }
        os << '\n';
    };
    line(record.columns);
    for (const auto& row : record.rows) {
        line(row);
    }
    return os.str();
}

/// Inverse of render_csv for the quoting it produces.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> out;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            row.push_back(std::move(field));
            field.clear();
            out.push_back(std::move(row));
            row.clear();
        } else {
            field += c;
        }
    }
    if (!field.empty() || !row.empty()) {
        row.push_back(std::move(field));
        out.push_back(std::move(row));
    }
    return out;
}

/// Rebuilds the JSON rows array from CSV text.
inline nlohmann::ordered_json csv_to_json_rows(const std::string& csv)
{
    const auto table = parse_csv(csv);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    if (table.empty()) {
        return rows;
    }
    for (std::size_t r = 1; r < table.size(); ++r) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < table[0].size() && c < table[r].size(); ++c) {
            obj[table[0][c]] = table[r][c];
        }
        rows.push_back(std::move(obj));
    }
    return rows;
}

} // namespace wallis::cli
