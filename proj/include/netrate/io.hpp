#pragma once

// Text formats for cascade sets and networks.
//
// Cascade file:
//   #nodes <n>
//   #horizon <T>
//   <node>:<time>,<node>:<time>,...      one cascade per line, nondecreasing time
//
// Network file:
//   #nodes <n>
//   <src> <dst> <rate>                    one edge per line
//
// Uninfected nodes are omitted from a cascade line; `<node>:-` is also read as
// uninfected. Blank lines and lines starting with "# " are comments. Numbers are
// written with 9 significant digits and are never locale-formatted.

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "netrate/cascade.hpp"
#include "netrate/errors.hpp"
#include "netrate/network.hpp"

namespace netrate {

inline constexpr int kFormatVersion = 1;
inline constexpr int kSignificantDigits = 9;

inline std::string format_number(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, kSignificantDigits);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline bool is_comment_or_blank(std::string_view line) {
    line = trim(line);
    return line.empty() || (line.size() >= 2 && line[0] == '#' && line[1] == ' ') || line == "#";
}

inline double parse_double(std::string_view s, std::size_t line, const char* what) {
    s = trim(s);
    double value = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty())
        throw ParseError(line, std::string("bad ") + what + " '" + std::string(s) + "'");
    return value;
}

inline std::size_t parse_count(std::string_view s, std::size_t line, const char* what) {
    s = trim(s);
    std::size_t value = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty())
        throw ParseError(line, std::string("bad ") + what + " '" + std::string(s) + "'");
    return value;
}

// Reads the next non-comment line. Returns false at end of input.
inline bool next_line(std::istream& in, std::string& line, std::size_t& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        if (!is_comment_or_blank(line)) return true;
    }
    return false;
}

inline std::string_view header_value(std::string_view line, std::string_view key, std::size_t lineno) {
    line = trim(line);
    if (line.substr(0, key.size()) != key || line.size() == key.size() ||
        (line[key.size()] != ' ' && line[key.size()] != '\t'))
        throw ParseError(lineno, "expected '" + std::string(key) + " <value>'");
    return line.substr(key.size() + 1);
}

inline void require_node(std::size_t v, std::size_t n, std::size_t lineno) {
    if (v >= n) throw ValidationError("line " + std::to_string(lineno) + ": node " + std::to_string(v) +
                                      " out of range [0, " + std::to_string(n) + ")");
}

}  // namespace detail

inline CascadeSet read_cascades(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!detail::next_line(in, line, lineno)) throw ParseError(lineno + 1, "missing '#nodes' header");
    const std::size_t n = detail::parse_count(detail::header_value(line, "#nodes", lineno), lineno, "node count");
    if (!detail::next_line(in, line, lineno)) throw ParseError(lineno + 1, "missing '#horizon' header");
    const double horizon = detail::parse_double(detail::header_value(line, "#horizon", lineno), lineno, "horizon");
    if (!(horizon > 0) || !std::isfinite(horizon)) throw ValidationError("horizon must be positive and finite");

    CascadeSet set(n, horizon);
    while (detail::next_line(in, line, lineno)) {
        std::vector<double> times(n, kUninfected);
        std::vector<bool> seen(n, false);
        std::string_view rest = detail::trim(line);
        double last = -kUninfected;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view field = rest.substr(0, comma);
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
            const auto colon = field.find(':');
            if (colon == std::string_view::npos) throw ParseError(lineno, "expected 'node:time', got '" + std::string(field) + "'");
            const std::size_t v = detail::parse_count(field.substr(0, colon), lineno, "node id");
            detail::require_node(v, n, lineno);
            if (seen[v]) throw ValidationError("line " + std::to_string(lineno) + ": node " + std::to_string(v) +
                                               " appears twice in one cascade");
            seen[v] = true;
            const std::string_view tfield = detail::trim(field.substr(colon + 1));
            if (tfield == "-") continue;
            const double t = detail::parse_double(tfield, lineno, "time");
            if (!std::isfinite(t)) throw ParseError(lineno, "non-finite time");
            if (t > horizon)
                throw ValidationError("line " + std::to_string(lineno) + ": time " + format_number(t) +
                                      " exceeds horizon " + format_number(horizon));
            if (t < last) throw ParseError(lineno, "times must be in nondecreasing order");
            last = t;
            times[v] = t;
        }
        try {
            set.add(Cascade(std::move(times), horizon));
        } catch (const ValidationError& e) {
            throw ValidationError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return set;
}

inline void write_cascades(const CascadeSet& set, std::ostream& out) {
    out << "#nodes " << set.node_count() << '\n';
    out << "#horizon " << format_number(set.horizon()) << '\n';
    for (const auto& c : set.cascades()) {
        bool first = true;
        for (NodeId v : c.infection_order()) {
            if (!first) out << ',';
            first = false;
            out << v << ':' << format_number(c.time(v));
        }
        out << '\n';
    }
}

inline Network read_network(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!detail::next_line(in, line, lineno)) throw ParseError(lineno + 1, "missing '#nodes' header");
    const std::size_t n = detail::parse_count(detail::header_value(line, "#nodes", lineno), lineno, "node count");
    Network net(n);
    while (detail::next_line(in, line, lineno)) {
        std::istringstream fields{std::string(detail::trim(line))};
        std::string a, b, r, extra;
        if (!(fields >> a >> b >> r) || (fields >> extra)) throw ParseError(lineno, "expected 'src dst rate'");
        const std::size_t src = detail::parse_count(a, lineno, "source node");
        const std::size_t dst = detail::parse_count(b, lineno, "target node");
        const double rate = detail::parse_double(r, lineno, "rate");
        detail::require_node(src, n, lineno);
        detail::require_node(dst, n, lineno);
        if (net.has_edge(static_cast<NodeId>(src), static_cast<NodeId>(dst)))
            throw ValidationError("line " + std::to_string(lineno) + ": duplicate edge");
        try {
            net.set_rate(static_cast<NodeId>(src), static_cast<NodeId>(dst), rate);
        } catch (const ValidationError& e) {
            throw ValidationError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return net;
}

inline void write_network(const Network& net, std::ostream& out) {
    out << "#nodes " << net.node_count() << '\n';
    for (const auto& [e, rate] : net.rates()) out << e.src << ' ' << e.dst << ' ' << format_number(rate) << '\n';
}

namespace detail {

inline std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    return in;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace detail

inline CascadeSet read_cascades(const std::string& path) {
    auto in = detail::open_in(path);
    return read_cascades(in);
}

inline void write_cascades(const CascadeSet& set, const std::string& path) {
    auto out = detail::open_out(path);
    write_cascades(set, out);
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

inline Network read_network(const std::string& path) {
    auto in = detail::open_in(path);
    return read_network(in);
}

inline void write_network(const Network& net, const std::string& path) {
    auto out = detail::open_out(path);
    write_network(net, out);
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace netrate
