#include "ekin/output.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "ekin/errors.hpp"

namespace ekin {

namespace {

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

void Table::add_column(const std::string& name) {
    names.push_back(name);
    columns.emplace_back();
}

void Table::push_row(const std::vector<double>& row) {
    if (row.size() != columns.size())
        throw ValidationError("row width does not match the column count");
    for (std::size_t i = 0; i < row.size(); ++i) columns[i].push_back(row[i]);
}

std::size_t Table::rows() const { return columns.empty() ? 0 : columns[0].size(); }

std::string to_csv(const Table& table, const std::string& config_json) {
    std::string out = "# config: " + config_json + "\n";
    for (std::size_t i = 0; i < table.names.size(); ++i) {
        if (i) out += ',';
        out += table.names[i];
    }
    out += '\n';
    const std::size_t n = table.rows();
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            if (i) out += ',';
            out += format_value(table.columns[i][r]);
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const Table& table, const std::string& config_json) {
    nlohmann::json j;
    j["config"] = nlohmann::json::parse(config_json);
    j["columns"] = nlohmann::json::array();
    for (std::size_t i = 0; i < table.names.size(); ++i) {
        nlohmann::json col;
        col["name"] = table.names[i];
        col["values"] = table.columns[i];
        j["columns"].push_back(col);
    }
    return j.dump(2) + "\n";
}

ParsedCsv parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# config: ", 0) != 0)
        throw ValidationError("artifact is missing the config header line");
    ParsedCsv out;
    out.config = line.substr(10);
    if (!std::getline(in, line)) throw ValidationError("artifact is missing the column header");
    for (const std::string& name : split(line, ',')) out.table.add_column(name);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> cells = split(line, ',');
        std::vector<double> row;
        row.reserve(cells.size());
        for (const std::string& cell : cells) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) throw ValidationError("bad numeric cell: " + cell);
            row.push_back(v);
        }
        out.table.push_row(row);
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open for writing: " + path);
    f << text;
    f.flush();
    if (!f) throw ValidationError("write failed: " + path);
}

} // namespace ekin
