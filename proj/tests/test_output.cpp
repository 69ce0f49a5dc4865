#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ekin/errors.hpp"
#include "ekin/output.hpp"

using namespace ekin;

namespace {

Table sample_table() {
    Table t;
    t.add_column("x");
    t.add_column("y");
    t.push_row({0.1, -2.0});
    t.push_row({3.0, 1e-17});
    t.push_row({-0.0, 12345678901234567.0});
    return t;
}

} // namespace

TEST_SUITE("output") {

TEST_CASE("rows must match the column count") {
    Table t;
    t.add_column("a");
    t.add_column("b");
    CHECK_THROWS_AS(t.push_row({1.0}), ValidationError);
    t.push_row({1.0, 2.0});
    CHECK(t.rows() == 1);
}

TEST_CASE("csv layout is exact") {
    Table t;
    t.add_column("x");
    t.add_column("y");
    t.push_row({0.1, 2.0});
    const std::string csv = to_csv(t, "{\"k\":1}");
    CHECK(csv == "# config: {\"k\":1}\nx,y\n0.10000000000000001,2\n");
}

TEST_CASE("csv round trip preserves bits and config") {
    const Table t = sample_table();
    const std::string config = "{\"command\":\"demo\",\"seed\":7}";
    const ParsedCsv back = parse_csv(to_csv(t, config));
    CHECK(back.config == config);
    REQUIRE(back.table.names == t.names);
    REQUIRE(back.table.rows() == t.rows());
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        for (std::size_t r = 0; r < t.columns[c].size(); ++r)
            CHECK(back.table.columns[c][r] == t.columns[c][r]);
}

TEST_CASE("parser rejects malformed input") {
    CHECK_THROWS_AS(parse_csv("x,y\n1,2\n"), ValidationError);
    CHECK_THROWS_AS(parse_csv("# config: {}\nx,y\n1,oops\n"), ValidationError);
    CHECK_THROWS_AS(parse_csv(""), ValidationError);
}

TEST_CASE("json mirror carries the same data") {
    const Table t = sample_table();
    const std::string text = to_json(t, "{\"seed\":7}");
    const nlohmann::json j = nlohmann::json::parse(text);
    CHECK(j["config"]["seed"] == 7);
    REQUIRE(j["columns"].size() == 2);
    CHECK(j["columns"][0]["name"] == "x");
    CHECK(j["columns"][1]["name"] == "y");
    for (std::size_t c = 0; c < 2; ++c) {
        REQUIRE(j["columns"][c]["values"].size() == t.rows());
        for (std::size_t r = 0; r < t.rows(); ++r)
            CHECK(j["columns"][c]["values"][r].get<double>() == t.columns[c][r]);
    }
}

TEST_CASE("file writing round trips and reports failures") {
    const std::string path = "test_output_tmp.csv";
    const std::string text = to_csv(sample_table(), "{}");
    write_text(path, text);
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == text);
    std::remove(path.c_str());

    CHECK_THROWS_AS(write_text("no_such_dir/impossible.csv", text), ValidationError);
}

}
