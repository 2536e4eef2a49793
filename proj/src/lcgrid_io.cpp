#include "logcone/lcgrid_io.hpp"

#include <charconv>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "logcone/error.hpp"

namespace logcone {

namespace {

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] void parse_fail(const std::string& what) {
    throw Error(ErrorCode::ParseError, "LCGRID: " + what);
}

std::string next_line(std::istream& is, const char* what) {
    std::string line;
    if (!std::getline(is, line)) parse_fail(std::string("missing ") + what + " line");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

double parse_real(const std::string& tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || end != tok.c_str() + tok.size()) parse_fail("bad real '" + tok + "'");
    return v;
}

template <typename T>
std::vector<T> parse_keyed(const std::string& line, const std::string& key, std::size_t count) {
    std::istringstream ss(line);
    std::string k;
    ss >> k;
    if (k != key) parse_fail("expected '" + key + "' line, got '" + line + "'");
    std::vector<T> out;
    std::string tok;
    while (ss >> tok) {
        if constexpr (std::is_same_v<T, double>) {
            out.push_back(parse_real(tok));
        } else {
            T v{};
            const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc() || p != tok.data() + tok.size()) parse_fail("bad integer '" + tok + "'");
            out.push_back(v);
        }
    }
    if (out.size() != count) parse_fail("wrong number of entries on '" + key + "' line");
    return out;
}

}  // namespace

void write_lcgrid(std::ostream& os, const DensityGrid& g) {
    os << "LCGRID v1\n";
    os << "dim " << g.dim() << '\n';
    os << "shape";
    for (std::size_t n : g.shape()) os << ' ' << n;
    os << "\norigin";
    for (double o : g.origin()) os << ' ' << format_real(o);
    os << "\nspacing";
    for (double h : g.spacing()) os << ' ' << format_real(h);
    os << '\n';
    for (double v : g.values()) os << format_real(v) << '\n';
}

DensityGrid read_lcgrid(std::istream& is) {
    if (next_line(is, "header") != "LCGRID v1") parse_fail("bad header");
    const auto dim = parse_keyed<std::size_t>(next_line(is, "dim"), "dim", 1).front();
    if (dim < 1 || dim > kMaxDim) parse_fail("dim must be 1..3");
    GridGeometry geom;
    geom.shape = parse_keyed<std::size_t>(next_line(is, "shape"), "shape", dim);
    geom.origin = parse_keyed<double>(next_line(is, "origin"), "origin", dim);
    geom.spacing = parse_keyed<double>(next_line(is, "spacing"), "spacing", dim);
    try {
        geom.validate();
    } catch (const Error& e) {
        parse_fail(e.what());
    }
    std::vector<double> values;
    values.reserve(geom.size());
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        values.push_back(parse_real(line));
    }
    if (values.size() != geom.size()) parse_fail("value count does not match shape");
    try {
        return DensityGrid(std::move(geom), std::move(values));
    } catch (const Error& e) {
        parse_fail(e.what());
    }
}

void save_lcgrid(const std::string& path, const DensityGrid& g) {
    std::ofstream os(path);
    if (!os) throw Error(ErrorCode::ParseError, "cannot open '" + path + "' for writing");
    write_lcgrid(os, g);
}

DensityGrid load_lcgrid(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
    return read_lcgrid(is);
}

}  // namespace logcone
