#include "gcollapse/scenario.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gcollapse/error.hpp"
#include "gcollapse/units.hpp"

namespace gcollapse::scenario {

namespace {

constexpr std::array<std::pair<Kind, std::string_view>, 8> kKindNames{{
    {Kind::two_branch, "two_branch"},
    {Kind::rotation, "rotation"},
    {Kind::born_race, "born_race"},
    {Kind::estimate, "estimate"},
    {Kind::sn_ground, "sn_ground"},
    {Kind::sn_evolve, "sn_evolve"},
    {Kind::pd_compare, "pd_compare"},
    {Kind::weak_measure, "weak_measure"},
}};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool has_space(std::string_view s) {
    return std::any_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

std::optional<double> parse_real(std::string_view s) {
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<std::complex<double>> parse_number(std::string_view s) {
    if (s.empty()) return std::nullopt;
    if (s.back() != 'i') {
        const auto re = parse_real(s);
        if (!re) return std::nullopt;
        return std::complex<double>(*re, 0.0);
    }
    s.remove_suffix(1);
    // Split at the last sign that is not leading and not part of an exponent.
    std::size_t split = std::string_view::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    auto imag_of = [](std::string_view t) -> std::optional<double> {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return parse_real(t);
    };
    if (split == std::string_view::npos) {
        const auto im = imag_of(s);
        if (!im) return std::nullopt;
        return std::complex<double>(0.0, *im);
    }
    const auto re = parse_real(s.substr(0, split));
    const auto im = imag_of(s.substr(split));
    if (!re || !im) return std::nullopt;
    return std::complex<double>(*re, *im);
}

std::string format_complex(std::complex<double> z) {
    if (z.imag() == 0.0) return format_number(z.real());
    std::string im = format_number(std::abs(z.imag())) + "i";
    if (z.real() == 0.0) return (z.imag() < 0.0 ? "-" : "") + im;
    return format_number(z.real()) + (z.imag() < 0.0 ? "-" : "+") + im;
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
    std::ostringstream msg;
    msg << source;
    if (line > 0) msg << ":" << line;
    msg << ": " << what;
    throw ParseError(msg.str());
}

const KeySpec* find_spec(Kind kind, const std::string& key) {
    for (const auto& spec : keys_for(kind)) {
        if (spec.key == key) return &spec;
    }
    return nullptr;
}

bool is_integral(std::complex<double> z) {
    return z.imag() == 0.0 && z.real() >= 0.0 && std::floor(z.real()) == z.real() && z.real() < 1.8e19;
}

void check_value(const std::string& source, const std::string& key, const Value& v, const KeySpec& spec) {
    switch (spec.dimension) {
        case Dimension::word:
            if (!v.is_word()) fail(source, 0, "key '" + key + "' expects a word");
            return;
        case Dimension::integer:
            if (v.is_word() || v.numbers.size() != 1 || !is_integral(v.numbers[0]) || !v.unit.empty()) {
                fail(source, 0, "key '" + key + "' expects a single non-negative integer without unit");
            }
            return;
        case Dimension::none:
            if (v.is_word()) fail(source, 0, "key '" + key + "' expects a number");
            if (!v.unit.empty()) fail(source, 0, "key '" + key + "' is dimensionless; unit '" + v.unit + "' not allowed");
            return;
        case Dimension::mass:
        case Dimension::length:
        case Dimension::time:
            if (v.is_word()) fail(source, 0, "key '" + key + "' expects a number with unit");
            if (v.unit.empty()) fail(source, 0, "key '" + key + "' requires a unit");
            if (!unit_factor(v.unit, spec.dimension)) {
                fail(source, 0, "key '" + key + "': unit '" + v.unit + "' does not fit this quantity");
            }
            return;
    }
}

const Value& lookup(const Scenario& s, const std::string& key) {
    const auto it = s.params.find(key);
    if (it == s.params.end()) {
        throw ParseError("scenario '" + s.name + "': missing required key '" + key + "'");
    }
    return it->second;
}

double factor_for(const Scenario& s, const std::string& key, const Value& v) {
    const KeySpec* spec = find_spec(s.kind, key);
    if (spec == nullptr || v.unit.empty()) return 1.0;
    const auto f = unit_factor(v.unit, spec->dimension);
    if (!f) throw ParseError("scenario '" + s.name + "': bad unit for key '" + key + "'");
    return *f;
}

}  // namespace

std::string_view kind_name(Kind kind) {
    for (const auto& [k, n] : kKindNames) {
        if (k == kind) return n;
    }
    return "unknown";
}

std::optional<Kind> parse_kind(std::string_view text) {
    for (const auto& [k, n] : kKindNames) {
        if (n == text) return k;
    }
    return std::nullopt;
}

std::vector<Kind> all_kinds() {
    std::vector<Kind> out;
    for (const auto& entry : kKindNames) out.push_back(entry.first);
    return out;
}

const std::vector<KeySpec>& keys_for(Kind kind) {
    using D = Dimension;
    static const std::map<Kind, std::vector<KeySpec>> table{
        {Kind::two_branch,
         {{"alpha1", D::none, true}, {"alpha2", D::none, true}, {"mass", D::mass, true},
          {"phi1", D::none, true}, {"phi2", D::none, true}, {"duration", D::time, true},
          {"nodes", D::integer, false}}},
        {Kind::rotation,
         {{"alpha1", D::none, true}, {"alpha2", D::none, true}, {"duration", D::time, true},
          {"t_start", D::time, true}, {"t_end", D::time, true}, {"shape", D::word, false},
          {"survivor", D::word, false}, {"energy1", D::mass, false}, {"energy2", D::mass, false},
          {"nodes", D::integer, false}}},
        {Kind::born_race,
         {{"weights", D::none, true}, {"samples", D::integer, true}, {"shape", D::word, false},
          {"nodes", D::integer, false}, {"threads", D::integer, false}}},
        {Kind::estimate,
         {{"mode", D::word, true}, {"mass", D::mass, false}, {"radius", D::length, false},
          {"displacement", D::length, false}, {"constituents", D::integer, false},
          {"fraction", D::none, false}, {"profile", D::word, false}, {"convention", D::word, false},
          {"tau", D::time, false}, {"electrons_per_qubit", D::integer, false},
          {"weight", D::none, false}}},
        {Kind::sn_ground,
         {{"mass", D::none, true}, {"G", D::none, true}, {"r_max", D::none, true},
          {"n_points", D::integer, true}, {"dtau", D::none, false}, {"residual_tol", D::none, false},
          {"max_iterations", D::integer, false}}},
        {Kind::sn_evolve,
         {{"mass", D::none, true}, {"G", D::none, true}, {"r_max", D::none, true},
          {"n_points", D::integer, true}, {"initial", D::word, false}, {"sigma", D::none, false},
          {"omega", D::none, false}, {"dt", D::none, true}, {"steps", D::integer, true},
          {"sample_every", D::integer, false}}},
        {Kind::pd_compare,
         {{"mass", D::mass, true}, {"radius", D::length, true}, {"separations", D::length, true},
          {"profile", D::word, false}, {"fraction", D::none, false}, {"constituents", D::integer, false}}},
        {Kind::weak_measure,
         {{"state", D::none, true}, {"probe", D::none, true}, {"p", D::none, true},
          {"repetitions", D::integer, true}}},
    };
    return table.at(kind);
}

std::optional<double> unit_factor(std::string_view unit, Dimension dimension) {
    using namespace units;
    static const std::map<std::string_view, double> mass{
        {"TeV", 1e3}, {"GeV", 1.0}, {"MeV", 1e-3}, {"keV", 1e-6}, {"eV", 1e-9},
        {"kg", grams_to_natural(1e3)}, {"g", grams_to_natural(1.0)}, {"mg", grams_to_natural(1e-3)},
        {"ug", grams_to_natural(1e-6)}, {"ng", grams_to_natural(1e-9)}, {"pg", grams_to_natural(1e-12)},
    };
    static const std::map<std::string_view, double> length{
        {"m", metres_to_natural(1.0)}, {"cm", metres_to_natural(1e-2)}, {"mm", metres_to_natural(1e-3)},
        {"um", metres_to_natural(1e-6)}, {"nm", metres_to_natural(1e-9)}, {"pm", metres_to_natural(1e-12)},
        {"fm", metres_to_natural(1e-15)}, {"/GeV", 1.0},
    };
    static const std::map<std::string_view, double> time{
        {"s", seconds_to_natural(1.0)}, {"ms", seconds_to_natural(1e-3)}, {"us", seconds_to_natural(1e-6)},
        {"ns", seconds_to_natural(1e-9)}, {"ps", seconds_to_natural(1e-12)}, {"/GeV", 1.0},
    };
    const std::map<std::string_view, double>* table = nullptr;
    switch (dimension) {
        case Dimension::mass: table = &mass; break;
        case Dimension::length: table = &length; break;
        case Dimension::time: table = &time; break;
        default: return std::nullopt;
    }
    const auto it = table->find(unit);
    if (it == table->end()) return std::nullopt;
    return it->second;
}

Scenario parse(std::string_view text, const std::string& source) {
    Scenario s;
    bool have_name = false;
    bool have_kind = false;
    std::map<std::string, std::size_t> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(source, line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view rhs = trim(line.substr(eq + 1));
        if (key.empty() || !std::all_of(key.begin(), key.end(), [](char c) {
                return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
            })) {
            fail(source, line_no, "invalid key '" + key + "'");
        }
        if (rhs.empty()) fail(source, line_no, "key '" + key + "' has no value");
        if (seen.count(key)) fail(source, line_no, "duplicate key '" + key + "'");
        seen[key] = line_no;

        // Numeric list with optional trailing unit, else a single word.
        Value v;
        std::vector<std::string_view> items;
        for (std::size_t start = 0;;) {
            const std::size_t comma = rhs.find(',', start);
            items.push_back(trim(rhs.substr(start, comma == std::string_view::npos ? rhs.npos : comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        std::string_view last = items.back();
        if (const auto sp = last.find_first_of(" \t"); sp != std::string_view::npos) {
            v.unit = std::string(trim(last.substr(sp)));
            items.back() = trim(last.substr(0, sp));
        }
        bool numeric = true;
        for (auto item : items) {
            const auto z = parse_number(item);
            if (!z) {
                numeric = false;
                break;
            }
            v.numbers.push_back(*z);
        }
        if (!numeric) {
            if (items.size() > 1 || has_space(rhs)) {
                fail(source, line_no, "key '" + key + "': cannot parse value '" + std::string(rhs) + "'");
            }
            v = Value{};
            v.word = std::string(rhs);
        } else if (has_space(v.unit)) {
            fail(source, line_no, "key '" + key + "': malformed unit '" + v.unit + "'");
        }

        if (key == "name") {
            if (!v.is_word()) fail(source, line_no, "name must be a word");
            s.name = v.word;
            have_name = true;
        } else if (key == "kind") {
            const auto k = v.is_word() ? parse_kind(v.word) : std::nullopt;
            if (!k) fail(source, line_no, "unknown kind '" + std::string(rhs) + "'");
            s.kind = *k;
            have_kind = true;
        } else if (key == "seed") {
            if (v.is_word() || v.numbers.size() != 1 || !is_integral(v.numbers[0]) || !v.unit.empty()) {
                fail(source, line_no, "seed must be a non-negative integer");
            }
            s.seed = static_cast<std::uint64_t>(v.numbers[0].real());
        } else if (key == "output") {
            if (!v.is_word()) fail(source, line_no, "output must be a path");
            s.output = v.word;
        } else {
            s.params.emplace(key, std::move(v));
        }
    }
    if (!have_name) fail(source, 0, "missing required key 'name'");
    if (!have_kind) fail(source, 0, "missing required key 'kind'");
    for (const auto& [key, value] : s.params) {
        const KeySpec* spec = find_spec(s.kind, key);
        if (spec == nullptr) {
            std::ostringstream msg;
            msg << "line " << seen[key] << ": unknown key '" << key << "' for kind " << kind_name(s.kind);
            fail(source, 0, msg.str());
        }
        check_value(source, key, value, *spec);
    }
    for (const auto& spec : keys_for(s.kind)) {
        if (spec.required && !s.has(spec.key)) fail(source, 0, "missing required key '" + spec.key + "'");
    }
    return s;
}

Scenario parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open scenario file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

std::string format_number(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) throw ParseError("format_number: conversion failed");
    return std::string(buf.data(), ptr);
}

std::string serialise(const Scenario& s) {
    std::ostringstream out;
    out << "name = " << s.name << "\n";
    out << "kind = " << kind_name(s.kind) << "\n";
    out << "seed = " << s.seed << "\n";
    if (!s.output.empty()) out << "output = " << s.output << "\n";
    for (const auto& [key, v] : s.params) {
        out << key << " = ";
        if (v.is_word()) {
            out << v.word;
        } else {
            for (std::size_t i = 0; i < v.numbers.size(); ++i) {
                if (i > 0) out << ", ";
                out << format_complex(v.numbers[i]);
            }
            if (!v.unit.empty()) out << " " << v.unit;
        }
        out << "\n";
    }
    return out.str();
}

double Scenario::real(const std::string& key) const {
    const Value& v = lookup(*this, key);
    if (v.is_word() || v.numbers.size() != 1 || v.numbers[0].imag() != 0.0) {
        throw ParseError("scenario '" + name + "': key '" + key + "' expects a single real number");
    }
    return v.numbers[0].real() * factor_for(*this, key, v);
}

double Scenario::real(const std::string& key, double fallback) const {
    return has(key) ? real(key) : fallback;
}

std::complex<double> Scenario::complex(const std::string& key) const {
    const Value& v = lookup(*this, key);
    if (v.is_word() || v.numbers.size() != 1) {
        throw ParseError("scenario '" + name + "': key '" + key + "' expects a single number");
    }
    return v.numbers[0] * factor_for(*this, key, v);
}

std::vector<double> Scenario::reals(const std::string& key) const {
    const Value& v = lookup(*this, key);
    if (v.is_word()) throw ParseError("scenario '" + name + "': key '" + key + "' expects numbers");
    const double f = factor_for(*this, key, v);
    std::vector<double> out;
    for (const auto& z : v.numbers) {
        if (z.imag() != 0.0) throw ParseError("scenario '" + name + "': key '" + key + "' expects real numbers");
        out.push_back(z.real() * f);
    }
    return out;
}

std::vector<std::complex<double>> Scenario::complexes(const std::string& key) const {
    const Value& v = lookup(*this, key);
    if (v.is_word()) throw ParseError("scenario '" + name + "': key '" + key + "' expects numbers");
    const double f = factor_for(*this, key, v);
    std::vector<std::complex<double>> out;
    for (const auto& z : v.numbers) out.push_back(z * f);
    return out;
}

std::uint64_t Scenario::integer(const std::string& key) const {
    const Value& v = lookup(*this, key);
    if (v.is_word() || v.numbers.size() != 1 || !is_integral(v.numbers[0])) {
        throw ParseError("scenario '" + name + "': key '" + key + "' expects a non-negative integer");
    }
    return static_cast<std::uint64_t>(v.numbers[0].real());
}

std::uint64_t Scenario::integer(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? integer(key) : fallback;
}

std::string Scenario::word(const std::string& key) const {
    const Value& v = lookup(*this, key);
    if (!v.is_word()) throw ParseError("scenario '" + name + "': key '" + key + "' expects a word");
    return v.word;
}

std::string Scenario::word(const std::string& key, const std::string& fallback) const {
    return has(key) ? word(key) : fallback;
}

}  // namespace gcollapse::scenario
