#pragma once

#include <string>
#include <vector>

// Tabular artifact emission. Every artifact is self-describing: the first
// CSV line (or the "config" field of a JSON file) records the fully resolved
// run configuration, so a file can be traced back to the exact invocation.
// Numbers are written with 17 significant digits; identical runs produce
// byte-identical files.

namespace ekin {

struct Table {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns; // one vector per name, equal lengths

    void add_column(const std::string& name);
    void push_row(const std::vector<double>& row); // one value per column
    std::size_t rows() const;
};

// CSV: "# config: <json>" line, header line, comma-separated %.17g rows.
std::string to_csv(const Table& table, const std::string& config_json);

// JSON mirror: {"config": ..., "columns": [{"name":..., "values": [...]}]}.
std::string to_json(const Table& table, const std::string& config_json);

struct ParsedCsv {
    std::string config; // the JSON text after "# config: "
    Table table;
};

// Inverse of to_csv for round-trip checks and downstream tooling.
ParsedCsv parse_csv(const std::string& text);

// Write to a file, or to stdout when path is "-". I/O failures name the path.
void write_text(const std::string& path, const std::string& text);

} // namespace ekin
