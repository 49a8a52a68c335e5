#include "co2cast/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "co2cast/error.hpp"
#include "detail/csv.hpp"

namespace co2cast {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Schema: return "schema";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::DuplicateKey: return "duplicate_key";
        case ErrorKind::Validation: return "validation";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::InsufficientData: return "insufficient_data";
        case ErrorKind::UnfillableGap: return "unfillable_gap";
        case ErrorKind::DegenerateInput: return "degenerate_input";
        case ErrorKind::Convergence: return "convergence";
        case ErrorKind::Constraint: return "constraint";
        case ErrorKind::Io: return "io";
        case ErrorKind::Config: return "config";
        case ErrorKind::ExhaustiveFailure: return "exhaustive_failure";
    }
    return "unknown";
}

bool is_valid_country_code(const std::string& code) {
    return code.size() == 3 &&
           std::all_of(code.begin(), code.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

bool AnnualSeries::has_gaps() const {
    return std::any_of(flags.begin(), flags.end(), [](FlagSet f) { return has_flag(f, ObsFlag::Missing); });
}

void AnnualSeries::validate() const {
    if (values.empty()) {
        throw Error(ErrorKind::Validation, fmt::format("series {} is empty", country));
    }
    if (flags.size() != values.size()) {
        throw Error(ErrorKind::Validation, fmt::format("series {}: flags/values length mismatch", country));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (has_flag(flags[i], ObsFlag::Missing)) continue;
        if (!std::isfinite(values[i]) || values[i] < 0.0) {
            throw Error(ErrorKind::Validation,
                        fmt::format("series {}: invalid value at year {}", country, year_at(i)));
        }
    }
}

AnnualSeries AnnualSeries::from_values(std::string country, int start_year, std::vector<double> values) {
    AnnualSeries s;
    s.country = std::move(country);
    s.start_year = start_year;
    s.flags.assign(values.size(), flag_bit(ObsFlag::None));
    s.values = std::move(values);
    return s;
}

AnnualSeries AnnualSeries::slice(std::size_t first, std::size_t count) const {
    if (first + count > values.size()) {
        throw Error(ErrorKind::Domain, "slice out of range");
    }
    AnnualSeries s;
    s.country = country;
    s.start_year = year_at(first);
    s.values.assign(values.begin() + static_cast<std::ptrdiff_t>(first),
                    values.begin() + static_cast<std::ptrdiff_t>(first + count));
    s.flags.assign(flags.begin() + static_cast<std::ptrdiff_t>(first),
                   flags.begin() + static_cast<std::ptrdiff_t>(first + count));
    return s;
}

bool operator==(const AnnualSeries& a, const AnnualSeries& b) {
    if (a.country != b.country || a.start_year != b.start_year || a.flags != b.flags ||
        a.values.size() != b.values.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const bool na = std::isnan(a.values[i]);
        const bool nb = std::isnan(b.values[i]);
        if (na != nb) return false;
        if (!na && a.values[i] != b.values[i]) return false;
    }
    return true;
}

EnergyMode parse_energy_mode(std::string_view text) {
    if (text == "shares") return EnergyMode::Shares;
    if (text == "generation") return EnergyMode::Generation;
    throw Error(ErrorKind::Config, fmt::format("unknown energy mode '{}' (expected shares|generation)", text));
}

std::string_view to_string(EnergyMode mode) {
    return mode == EnergyMode::Shares ? "shares" : "generation";
}

SourceGroup source_group(std::string_view label) {
    static const std::map<std::string_view, SourceGroup> groups = {
        {"coal", SourceGroup::Fossil},           {"oil", SourceGroup::Fossil},
        {"gas", SourceGroup::Fossil},            {"nuclear", SourceGroup::Nuclear},
        {"hydro", SourceGroup::Renewable},       {"solar", SourceGroup::Renewable},
        {"wind", SourceGroup::Renewable},        {"bioenergy", SourceGroup::Renewable},
        {"geothermal", SourceGroup::Renewable},  {"other_renewable", SourceGroup::Renewable},
    };
    const auto it = groups.find(label);
    if (it == groups.end()) {
        throw Error(ErrorKind::Parse, fmt::format("unknown energy source label '{}'", label));
    }
    return it->second;
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Io, fmt::format("cannot open '{}'", path.string()));
    }
    return in;
}

struct CsvReader {
    std::istream& in;
    std::string_view source;
    std::size_t line_no = 0;
    std::string line;

    // Returns false at end of input; skips blank lines.
    bool next(std::vector<std::string_view>& fields) {
        while (std::getline(in, line)) {
            ++line_no;
            if (detail::trim(line).empty()) continue;
            fields = detail::split_fields(line);
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(ErrorKind kind, std::string_view what) const {
        throw Error(kind, fmt::format("{}:{}: {}", source, line_no, what));
    }
};

void expect_header(CsvReader& reader, const std::vector<std::string_view>& expected) {
    std::vector<std::string_view> fields;
    if (!reader.next(fields)) {
        throw Error(ErrorKind::Schema, fmt::format("{}: missing header row", reader.source));
    }
    if (!fields.empty() && fields[0].substr(0, 3) == "\xEF\xBB\xBF") {
        fields[0].remove_prefix(3);
    }
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i >= fields.size()) {
            throw Error(ErrorKind::Schema,
                        fmt::format("{}: header is missing column '{}'", reader.source, expected[i]));
        }
        if (fields[i] != expected[i]) {
            throw Error(ErrorKind::Schema, fmt::format("{}: header column {} is '{}', expected '{}'",
                                                       reader.source, i + 1, fields[i], expected[i]));
        }
    }
    if (fields.size() > expected.size()) {
        throw Error(ErrorKind::Schema,
                    fmt::format("{}: unexpected header column '{}'", reader.source, fields[expected.size()]));
    }
}

std::string parse_country(const CsvReader& reader, std::string_view field) {
    std::string code(field);
    if (!is_valid_country_code(code)) {
        reader.fail(ErrorKind::Parse, fmt::format("country code '{}' is not a 3-letter ISO code", field));
    }
    return code;
}

int parse_year(const CsvReader& reader, std::string_view field) {
    const auto y = detail::parse_int(field);
    if (!y || field.size() != 4 || *y < 1000) {
        reader.fail(ErrorKind::Parse, fmt::format("year '{}' is not a 4-digit integer", field));
    }
    return static_cast<int>(*y);
}

double parse_non_negative(const CsvReader& reader, std::string_view field, std::string_view column) {
    const auto v = detail::parse_double(field);
    if (!v || !std::isfinite(*v)) {
        reader.fail(ErrorKind::Parse, fmt::format("{} '{}' is not numeric", column, field));
    }
    if (*v < 0.0) {
        reader.fail(ErrorKind::Parse, fmt::format("{} '{}' is negative", column, field));
    }
    return *v;
}

void expect_arity(const CsvReader& reader, const std::vector<std::string_view>& fields, std::size_t n) {
    if (fields.size() != n) {
        reader.fail(ErrorKind::Parse, fmt::format("expected {} fields, found {}", n, fields.size()));
    }
}

}  // namespace

std::vector<AnnualSeries> parse_emissions_csv(std::istream& in, std::string_view source_name) {
    CsvReader reader{in, source_name, 0, {}};
    expect_header(reader, {"country", "year", "emissions_mt"});

    std::map<std::string, std::map<int, double>> by_country;
    std::vector<std::string_view> fields;
    while (reader.next(fields)) {
        expect_arity(reader, fields, 3);
        auto country = parse_country(reader, fields[0]);
        const int year = parse_year(reader, fields[1]);
        const double value = parse_non_negative(reader, fields[2], "emission");
        auto [it, inserted] = by_country[country].emplace(year, value);
        if (!inserted) {
            throw Error(ErrorKind::DuplicateKey,
                        fmt::format("{}:{}: duplicate entry for ({}, {})", source_name, reader.line_no, country, year));
        }
    }

    std::vector<AnnualSeries> out;
    out.reserve(by_country.size());
    for (const auto& [country, rows] : by_country) {
        const int first = rows.begin()->first;
        const int last = rows.rbegin()->first;
        AnnualSeries s;
        s.country = country;
        s.start_year = first;
        const auto n = static_cast<std::size_t>(last - first + 1);
        s.values.assign(n, std::numeric_limits<double>::quiet_NaN());
        s.flags.assign(n, flag_bit(ObsFlag::Missing));
        for (const auto& [year, value] : rows) {
            const auto i = static_cast<std::size_t>(year - first);
            s.values[i] = value;
            s.flags[i] = flag_bit(ObsFlag::None);
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<AnnualSeries> load_emissions_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_emissions_csv(in, path.string());
}

std::vector<EnergyMixTable> parse_energy_csv(std::istream& in, EnergyMode mode, std::string_view source_name) {
    CsvReader reader{in, source_name, 0, {}};
    expect_header(reader, {"country", "year", "source", "value"});

    // Values are kept per source label and summed in label order, so row order
    // never changes the floating-point result.
    std::map<std::string, std::map<int, std::map<std::string, double>>> acc;
    std::vector<std::string_view> fields;
    while (reader.next(fields)) {
        expect_arity(reader, fields, 4);
        auto country = parse_country(reader, fields[0]);
        const int year = parse_year(reader, fields[1]);
        try {
            source_group(fields[2]);
        } catch (const Error& e) {
            reader.fail(ErrorKind::Parse, e.what());
        }
        const double value = parse_non_negative(reader, fields[3], "value");
        if (!acc[country][year].emplace(std::string(fields[2]), value).second) {
            throw Error(ErrorKind::DuplicateKey, fmt::format("{}:{}: duplicate entry for ({}, {}, {})", source_name,
                                                             reader.line_no, country, year, fields[2]));
        }
    }

    std::vector<EnergyMixTable> out;
    for (const auto& [country, years] : acc) {
        EnergyMixTable table;
        table.country = country;
        for (const auto& [year, sources] : years) {
            struct {
                double fossil = 0.0;
                double renewable = 0.0;
                double nuclear = 0.0;
            } t;
            for (const auto& [label, value] : sources) {
                switch (source_group(label)) {
                    case SourceGroup::Fossil: t.fossil += value; break;
                    case SourceGroup::Renewable: t.renewable += value; break;
                    case SourceGroup::Nuclear: t.nuclear += value; break;
                }
            }
            MixRow row{year, t.fossil, t.renewable, t.nuclear};
            if (mode == EnergyMode::Generation) {
                const double total = t.fossil + t.renewable + t.nuclear;
                if (!(total > 0.0)) {
                    throw Error(ErrorKind::Validation,
                                fmt::format("{}: {} {} has zero total generation", source_name, country, year));
                }
                row.fossil = t.fossil / total;
                row.renewable = t.renewable / total;
                row.nuclear = t.nuclear / total;
            } else {
                const double sum = t.fossil + t.renewable + t.nuclear;
                if (std::abs(sum - 1.0) > kShareSumTolerance) {
                    throw Error(ErrorKind::Validation,
                                fmt::format("{}: shares for {} {} sum to {:.4f}, outside 1 +/- {}", source_name,
                                            country, year, sum, kShareSumTolerance));
                }
            }
            table.rows.push_back(row);
        }
        out.push_back(std::move(table));
    }
    return out;
}

std::vector<EnergyMixTable> load_energy_csv(const std::filesystem::path& path, EnergyMode mode) {
    auto in = open_input(path);
    return parse_energy_csv(in, mode, path.string());
}

std::vector<PopulationSeries> parse_population_csv(std::istream& in, std::string_view source_name) {
    CsvReader reader{in, source_name, 0, {}};
    expect_header(reader, {"country", "year", "population"});

    std::map<std::string, std::map<int, double>> acc;
    std::vector<std::string_view> fields;
    while (reader.next(fields)) {
        expect_arity(reader, fields, 3);
        auto country = parse_country(reader, fields[0]);
        const int year = parse_year(reader, fields[1]);
        const auto v = detail::parse_double(fields[2]);
        if (!v || !std::isfinite(*v)) {
            reader.fail(ErrorKind::Parse, fmt::format("population '{}' is not numeric", fields[2]));
        }
        if (*v <= 0.0) {
            reader.fail(ErrorKind::Parse, fmt::format("population '{}' must be positive", fields[2]));
        }
        if (!acc[country].emplace(year, *v).second) {
            throw Error(ErrorKind::DuplicateKey,
                        fmt::format("{}:{}: duplicate entry for ({}, {})", source_name, reader.line_no, country, year));
        }
    }

    std::vector<PopulationSeries> out;
    for (const auto& [country, rows] : acc) {
        PopulationSeries p;
        p.country = country;
        for (const auto& [year, value] : rows) p.rows.push_back({year, value});
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<PopulationSeries> load_population_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_population_csv(in, path.string());
}

void write_emissions_csv(std::ostream& out, const std::vector<AnnualSeries>& series) {
    out << "country,year,emissions_mt\n";
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (has_flag(s.flags[i], ObsFlag::Missing)) continue;
            out << s.country << ',' << s.year_at(i) << ',' << detail::format_double(s.values[i]) << '\n';
        }
    }
}

}  // namespace co2cast
