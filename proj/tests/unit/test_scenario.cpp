#include <doctest.h>

#include <cmath>
#include <string>

#include "gcollapse/error.hpp"
#include "gcollapse/scenario.hpp"
#include "gcollapse/units.hpp"

using namespace gcollapse;
using namespace gcollapse::scenario;

namespace {

const char* kTwoBranch = R"(# comment line
name = demo
kind = two_branch
seed = 12
alpha1 = 0.6
alpha2 = 0.8i   # trailing comment
mass = 1 GeV
phi1 = -0.02
phi2 = -0.03
duration = 100 /GeV
nodes = 201
)";

std::string without(const std::string& text, const std::string& line) {
    std::string out = text;
    const auto at = out.find(line);
    REQUIRE(at != std::string::npos);
    out.erase(at, out.find('\n', at) - at + 1);
    return out;
}

std::string message_of(const std::string& text) {
    try {
        (void)parse(text);
    } catch (const ParseError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("parse a two-branch scenario") {
    const auto s = parse(kTwoBranch);
    CHECK(s.name == "demo");
    CHECK(s.kind == Kind::two_branch);
    CHECK(s.seed == 12);
    CHECK(s.real("alpha1") == 0.6);
    CHECK(s.complex("alpha2") == std::complex<double>(0.0, 0.8));
    CHECK(s.real("mass") == 1.0);
    CHECK(s.real("duration") == 100.0);
    CHECK(s.integer("nodes") == 201);
    CHECK(s.real("absent", 2.5) == 2.5);
    CHECK_THROWS_AS(s.real("alpha2"), ParseError);
    CHECK_THROWS_AS(s.word("mass"), ParseError);
}

TEST_CASE("units convert to natural units") {
    CHECK(*unit_factor("MeV", Dimension::mass) == doctest::Approx(1e-3));
    CHECK(*unit_factor("fm", Dimension::length) == doctest::Approx(units::kFemtometre).epsilon(1e-15));
    CHECK(*unit_factor("s", Dimension::time) == doctest::Approx(units::kInvGeVPerSecond).epsilon(1e-15));
    CHECK_FALSE(unit_factor("s", Dimension::mass));
    CHECK_FALSE(unit_factor("parsec_per_fortnight", Dimension::length));
    const auto s = parse(std::string(kTwoBranch).replace(std::string(kTwoBranch).find("1 GeV"), 5, "500 MeV"));
    CHECK(s.real("mass") == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("serialise round-trips") {
    const auto s = parse(kTwoBranch);
    const std::string text = serialise(s);
    const auto back = parse(text);
    CHECK(serialise(back) == text);
    CHECK(back.seed == s.seed);
    CHECK(back.complex("alpha2") == s.complex("alpha2"));
    CHECK(format_number(0.1) == "0.1");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("missing required key names the key") {
    const std::string msg = message_of(without(kTwoBranch, "mass = 1 GeV"));
    CHECK(msg.find("'mass'") != std::string::npos);
    CHECK(message_of(without(kTwoBranch, "kind = two_branch")).find("'kind'") != std::string::npos);
}

TEST_CASE("units are mandatory on dimensional keys and forbidden elsewhere") {
    CHECK(message_of(std::string(kTwoBranch).replace(std::string(kTwoBranch).find("1 GeV"), 5, "1")).find("mass") !=
          std::string::npos);
    CHECK_THROWS_AS(parse(std::string(kTwoBranch).replace(std::string(kTwoBranch).find("201"), 3, "201 GeV")), ParseError);
    CHECK_THROWS_AS(parse(std::string(kTwoBranch).replace(std::string(kTwoBranch).find("1 GeV"), 5, "1 s")), ParseError);
}

TEST_CASE("unknown, duplicate and malformed lines are rejected") {
    CHECK(message_of(std::string(kTwoBranch) + "colour = 3\n").find("colour") != std::string::npos);
    CHECK(message_of(std::string(kTwoBranch) + "mass = 2 GeV\n").find("duplicate") != std::string::npos);
    CHECK_THROWS_AS(parse(std::string(kTwoBranch) + "no equals sign\n"), ParseError);
    CHECK_THROWS_AS(parse(std::string(kTwoBranch) + "empty =\n"), ParseError);
    CHECK_THROWS_AS(parse(without(kTwoBranch, "kind = two_branch") + "kind = teleport\n"), ParseError);
    CHECK_THROWS_AS(parse(std::string(kTwoBranch).replace(std::string(kTwoBranch).find("201"), 3, "20.5")), ParseError);
    CHECK_THROWS_AS(parse_file("/nonexistent/scenario.scn"), ParseError);
}

TEST_CASE("every kind has a name that parses back") {
    for (Kind k : all_kinds()) CHECK(parse_kind(kind_name(k)) == k);
    CHECK_FALSE(parse_kind("nothing"));
}
