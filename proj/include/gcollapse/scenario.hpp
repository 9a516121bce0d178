#pragma once

// Scenario files: flat `key = value [unit]` lines, `#` comments. Values are a
// bare word, or a comma-separated list of real or complex numbers (`0.6`,
// `0.3+0.4i`, `-2i`) followed by an optional unit. Dimensional keys must
// carry a unit; dimensionless keys must not.

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gcollapse::scenario {

enum class Kind { two_branch, rotation, born_race, estimate, sn_ground, sn_evolve, pd_compare, weak_measure };

std::string_view kind_name(Kind kind);
std::optional<Kind> parse_kind(std::string_view text);
std::vector<Kind> all_kinds();

enum class Dimension { none, mass, length, time, word, integer };

struct Value {
    std::string word;                          // set for word values
    std::vector<std::complex<double>> numbers; // set for numeric values
    std::string unit;                          // as written, empty if none

    bool is_word() const { return !word.empty(); }
};

struct Scenario {
    std::string name;
    Kind kind = Kind::estimate;
    std::uint64_t seed = 0;
    std::string output;  // optional
    std::map<std::string, Value> params;

    bool has(const std::string& key) const { return params.count(key) != 0; }

    // Typed accessors. Dimensional values are returned in natural units
    // (GeV, 1/GeV). Missing keys throw ParseError naming the key unless a
    // fallback is given.
    double real(const std::string& key) const;
    double real(const std::string& key, double fallback) const;
    std::complex<double> complex(const std::string& key) const;
    std::vector<double> reals(const std::string& key) const;
    std::vector<std::complex<double>> complexes(const std::string& key) const;
    std::uint64_t integer(const std::string& key) const;
    std::uint64_t integer(const std::string& key, std::uint64_t fallback) const;
    std::string word(const std::string& key) const;
    std::string word(const std::string& key, const std::string& fallback) const;
};

struct KeySpec {
    std::string key;
    Dimension dimension = Dimension::none;
    bool required = false;
};

// Parameter keys accepted by each kind (besides name, kind, seed, output).
const std::vector<KeySpec>& keys_for(Kind kind);

// Conversion factor of `unit` to natural units, or nullopt if the unit is
// unknown or belongs to another dimension.
std::optional<double> unit_factor(std::string_view unit, Dimension dimension);

Scenario parse(std::string_view text, const std::string& source = "<input>");
Scenario parse_file(const std::string& path);

// Canonical text: fixed header order, parameters sorted by key, numbers in
// shortest round-trip form.
std::string serialise(const Scenario& scenario);

// Shortest decimal that parses back to the same double.
std::string format_number(double value);

}  // namespace gcollapse::scenario
