#pragma once

#include "repsel/error.hpp"
#include "repsel/rng.hpp"
#include "repsel/selection.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace repsel {

/// n distinct indices drawn uniformly without replacement (partial Fisher-Yates).
inline Selection random_select(std::size_t count, std::size_t n, std::uint64_t seed) {
    detail::require(n >= 1 && n <= count, "random_select: n must be in [1, N]");
    Rng rng(seed);
    std::vector<std::size_t> pool(count);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < n; ++i) {
        std::swap(pool[i], pool[i + rng.index(count - i)]);
    }
    pool.resize(n);

    Selection out;
    out.indices = std::move(pool);
    out.method = Method::random;
    out.seed = seed;
    return out;
}

/// Stratified random selection: one point per class first, then the rest of
/// the budget round-robin over classes in a freshly shuffled class order each
/// round, skipping exhausted classes. Classes are ordered by label before
/// any shuffling.
inline Selection random_class_balanced(const std::vector<std::string>& labels, std::size_t n,
                                       std::uint64_t seed) {
    detail::require(!labels.empty(), "random_class_balanced: no labels");
    detail::require(n <= labels.size(), "random_class_balanced: n exceeds the number of points");
    std::map<std::string, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
    detail::require(n >= by_class.size(),
                    "random_class_balanced: n (" + std::to_string(n) +
                        ") is smaller than the number of classes (" +
                        std::to_string(by_class.size()) + ")");

    Rng rng(seed);
    std::vector<std::vector<std::size_t>> classes;
    classes.reserve(by_class.size());
    for (auto& [label, members] : by_class) {
        rng.shuffle(members);
        classes.push_back(std::move(members));
    }

    std::vector<std::size_t> taken(classes.size(), 0);
    std::vector<std::size_t> picked;
    picked.reserve(n);
    for (std::size_t c = 0; c < classes.size(); ++c) {
        picked.push_back(classes[c][taken[c]++]);
    }
    std::vector<std::size_t> order(classes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    while (picked.size() < n) {
        rng.shuffle(order);
        for (auto c : order) {
            if (picked.size() == n) break;
            if (taken[c] < classes[c].size()) picked.push_back(classes[c][taken[c]++]);
        }
    }

    Selection out;
    out.indices = std::move(picked);
    out.method = Method::random_class_balanced;
    out.seed = seed;
    return out;
}

}  // namespace repsel
