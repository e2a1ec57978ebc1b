#pragma once

#include "repsel/error.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace repsel {

enum class Method {
    greedy,
    greedy_minimax,
    greedy_maximin,
    kmedoids,
    random,
    random_class_balanced,
    exhaustive,
};

inline std::string_view to_string(Method method) {
    switch (method) {
        case Method::greedy: return "greedy";
        case Method::greedy_minimax: return "greedy-minimax";
        case Method::greedy_maximin: return "greedy-maximin";
        case Method::kmedoids: return "kmedoids";
        case Method::random: return "random";
        case Method::random_class_balanced: return "random-class-balanced";
        case Method::exhaustive: return "exhaustive";
    }
    return "unknown";
}

inline Method parse_method(std::string_view name) {
    for (auto m : {Method::greedy, Method::greedy_minimax, Method::greedy_maximin, Method::kmedoids,
                   Method::random, Method::random_class_balanced, Method::exhaustive}) {
        if (name == to_string(m)) return m;
    }
    if (name == "kmediods") return Method::kmedoids;
    throw validation_error("unknown method '" + std::string(name) + "'");
}

/// Objective values of a selection. maximin is absent for single-point selections.
struct Objectives {
    double minimax = 0.0;
    std::optional<double> maximin;
    double kmedoids = 0.0;
};

struct Selection {
    std::vector<std::size_t> indices;
    Method method = Method::greedy;
    std::uint64_t seed = 0;
    std::optional<Objectives> objectives;

    std::size_t size() const noexcept { return indices.size(); }
};

}  // namespace repsel
