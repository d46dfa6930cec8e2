#include "hardy/field_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

namespace hardy {
namespace {

constexpr const char* kMagic = "hardy-field v1";

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string expect_key(std::istream& is, const std::string& key) {
    std::string k, v;
    if (!(is >> k >> v) || k != key)
        throw InvalidArgument("read_field: expected key '" + key + "', found '" + k + "'");
    return v;
}

}  // namespace

void write_field(std::ostream& os, const CoefficientField& field) {
    os << kMagic << '\n';
    os << "dim " << field.dim() << '\n';
    os << "radius " << field.domain().radius() << '\n';
    os << "lambda " << format_double(field.lambda()) << '\n';
    os << "source " << to_string(field.source()) << '\n';
    if (field.source() == FieldSource::iid) {
        os << "delta " << format_double(field.delta()) << '\n';
        os << "dist " << to_string(field.distribution()) << '\n';
        os << "seed " << field.seed() << '\n';
    }
    const auto e = field.edges();
    os << "edges " << e.size() << '\n';
    for (double v : e) os << format_double(v) << '\n';
}

CoefficientField read_field(std::istream& is) {
    std::string line;
    std::getline(is, line);
    if (line != kMagic) throw InvalidArgument("read_field: missing 'hardy-field v1' header");
    const int dim = std::stoi(expect_key(is, "dim"));
    const int radius = std::stoi(expect_key(is, "radius"));
    const double lambda = std::stod(expect_key(is, "lambda"));
    const std::string source = expect_key(is, "source");

    const BoxDomain domain(dim, radius);
    if (source == "iid") {
        const double delta = std::stod(expect_key(is, "delta"));
        const Distribution dist = parse_distribution(expect_key(is, "dist"));
        const auto seed = static_cast<std::uint64_t>(std::stoull(expect_key(is, "seed")));
        auto field = build_iid_field(domain, delta, dist, seed);
        // The stored values must match the regenerated ones.
        const auto count = std::stoull(expect_key(is, "edges"));
        require(count == field.edges().size(), "read_field: edge count mismatch");
        for (double expected : field.edges()) {
            std::string tok;
            is >> tok;
            require(std::stod(tok) == expected, "read_field: iid values disagree with (seed, dist, delta)");
        }
        return field;
    }
    if (source != "constant" && source != "explicit")
        throw InvalidArgument("read_field: unknown source '" + source + "'");

    const auto count = std::stoull(expect_key(is, "edges"));
    std::vector<double> edges;
    edges.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::string tok;
        if (!(is >> tok)) throw InvalidArgument("read_field: truncated edge list");
        edges.push_back(std::stod(tok));
    }
    return CoefficientField(domain, lambda, std::move(edges),
                            source == "constant" ? FieldSource::constant : FieldSource::explicit_values);
}

void save_field(const std::string& path, const CoefficientField& field) {
    std::ofstream os(path);
    if (!os) throw Error("save_field: cannot open " + path);
    write_field(os, field);
}

CoefficientField load_field(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("load_field: cannot open " + path);
    return read_field(is);
}

}  // namespace hardy
