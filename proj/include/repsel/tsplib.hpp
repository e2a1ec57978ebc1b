#pragma once

#include "repsel/error.hpp"
#include "repsel/point_set.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace repsel::tsplib {

/// Structured parse failure. `line` is 1-based, 0 when not tied to a line.
class ParseError : public validation_error {
  public:
    ParseError(std::size_t line, const std::string& message)
      : validation_error(line ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

struct Instance {
    std::string name;
    std::size_t dimension = 0;
    std::string edge_weight_type;
    /// Node coordinates ordered by node index, interleaved (x, y).
    std::vector<double> coords;
    /// Source line of each node, in the same order.
    std::vector<std::size_t> source_lines;

    double x(std::size_t node) const { return coords[2 * node]; }
    double y(std::size_t node) const { return coords[2 * node + 1]; }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\f\v");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\f\v");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        pos = s.find_first_not_of(" \t\r\f\v", pos);
        if (pos == std::string_view::npos) break;
        auto end = s.find_first_of(" \t\r\f\v", pos);
        if (end == std::string_view::npos) end = s.size();
        out.push_back(s.substr(pos, end - pos));
        pos = end;
    }
    return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view token) {
    T value{};
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) return std::nullopt;
    return value;
}

struct Node {
    std::size_t index;
    double x;
    double y;
    std::size_t line;
};

}  // namespace detail

/// Parses a TSPlib EUC_2D node-coordinate instance.
inline Instance parse(std::string_view text) {
    Instance inst;
    std::optional<std::size_t> dimension;
    bool in_nodes = false;
    bool saw_section = false;
    std::vector<detail::Node> nodes;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view line = detail::trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (line == "EOF") break;

        if (in_nodes) {
            const auto tokens = detail::split_ws(line);
            if (tokens.size() == 1 && tokens[0].find_first_not_of("0123456789+-.eE") != std::string_view::npos) {
                throw ParseError(line_no, "unsupported section '" + std::string(tokens[0]) +
                                              "' after NODE_COORD_SECTION");
            }
            if (tokens.size() != 3) {
                throw ParseError(line_no, "malformed node line: expected 'index x y'");
            }
            const auto index = detail::parse_number<std::size_t>(tokens[0]);
            const auto x = detail::parse_number<double>(tokens[1]);
            const auto y = detail::parse_number<double>(tokens[2]);
            if (!index || !x || !y) throw ParseError(line_no, "malformed node line: bad number");
            if (!std::isfinite(*x) || !std::isfinite(*y)) {
                throw ParseError(line_no, "malformed node line: non-finite coordinate");
            }
            nodes.push_back({*index, *x, *y, line_no});
            continue;
        }

        std::string_view key = line;
        std::string_view value;
        if (const auto colon = line.find(':'); colon != std::string_view::npos) {
            key = detail::trim(line.substr(0, colon));
            value = detail::trim(line.substr(colon + 1));
        }
        if (key == "NODE_COORD_SECTION") {
            if (!dimension) throw ParseError(line_no, "NODE_COORD_SECTION before DIMENSION");
            if (inst.edge_weight_type.empty()) {
                throw ParseError(line_no, "NODE_COORD_SECTION before EDGE_WEIGHT_TYPE");
            }
            in_nodes = true;
            saw_section = true;
        } else if (key == "NAME") {
            inst.name = std::string(value);
        } else if (key == "DIMENSION") {
            const auto parsed = detail::parse_number<std::size_t>(value);
            if (!parsed || *parsed == 0) throw ParseError(line_no, "invalid DIMENSION '" + std::string(value) + "'");
            dimension = *parsed;
        } else if (key == "EDGE_WEIGHT_TYPE") {
            if (value != "EUC_2D") {
                throw ParseError(line_no, "unsupported EDGE_WEIGHT_TYPE '" + std::string(value) +
                                              "' (only EUC_2D)");
            }
            inst.edge_weight_type = std::string(value);
        } else if (key == "TYPE") {
            if (value != "TSP") throw ParseError(line_no, "unsupported TYPE '" + std::string(value) + "'");
        } else if (key == "COMMENT" || key == "NODE_COORD_TYPE" || key == "DISPLAY_DATA_TYPE") {
            // informational
        } else if (key.ends_with("_SECTION")) {
            throw ParseError(line_no, "unsupported section '" + std::string(key) + "'");
        } else {
            throw ParseError(line_no, "unrecognized header line '" + std::string(line.substr(0, 40)) + "'");
        }
    }

    if (!dimension) throw ParseError(0, "missing DIMENSION");
    if (inst.edge_weight_type.empty()) throw ParseError(0, "missing EDGE_WEIGHT_TYPE");
    if (!saw_section) throw ParseError(0, "missing NODE_COORD_SECTION");
    if (nodes.size() != *dimension) {
        throw ParseError(0, "dimension mismatch: DIMENSION is " + std::to_string(*dimension) +
                                " but " + std::to_string(nodes.size()) + " node lines were read");
    }
    inst.dimension = *dimension;
    std::vector<std::size_t> slot(inst.dimension, 0);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const auto& node = nodes[k];
        if (node.index < 1 || node.index > inst.dimension) {
            throw ParseError(node.line, "node index " + std::to_string(node.index) +
                                            " outside 1.." + std::to_string(inst.dimension));
        }
        if (slot[node.index - 1] != 0) {
            throw ParseError(node.line, "duplicate node index " + std::to_string(node.index));
        }
        slot[node.index - 1] = k + 1;
    }
    inst.coords.resize(2 * inst.dimension);
    inst.source_lines.resize(inst.dimension);
    for (std::size_t i = 0; i < inst.dimension; ++i) {
        const auto& node = nodes[slot[i] - 1];
        inst.coords[2 * i] = node.x;
        inst.coords[2 * i + 1] = node.y;
        inst.source_lines[i] = node.line;
    }
    return inst;
}

inline Instance load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot open TSPlib file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

/// Point set with d = 2 and ids equal to the 1-based node indices.
inline PointSet to_point_set(const Instance& inst) {
    std::vector<std::string> ids;
    ids.reserve(inst.dimension);
    for (std::size_t i = 1; i <= inst.dimension; ++i) ids.push_back(std::to_string(i));
    return PointSet(std::move(ids), inst.coords, 2);
}

}  // namespace repsel::tsplib
