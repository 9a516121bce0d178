#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "gcollapse/csv.hpp"
#include "gcollapse/error.hpp"

using namespace gcollapse;

TEST_CASE("field quoting") {
    CHECK(csv::quote("plain") == "plain");
    CHECK(csv::quote("a,b") == "\"a,b\"");
    CHECK(csv::quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv::quote("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("numbers keep 17 significant digits") {
    CHECK(std::stod(csv::number(0.1)) == 0.1);
    CHECK(std::stod(csv::number(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(csv::integer(42) == "42");
}

TEST_CASE("render, width mismatch and file output") {
    csv::Table t;
    t.header = {"x", "label"};
    t.add({"1", "a,b"});
    CHECK_THROWS_AS(t.add({"1"}), DimensionError);
    CHECK(csv::render(t) == "x,label\n1,\"a,b\"\n");

    const std::string path = "gcollapse_test_csv.csv";
    csv::write(t, path);
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == csv::render(t));
    std::remove(path.c_str());
}
