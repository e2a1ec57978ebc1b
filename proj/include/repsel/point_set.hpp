#pragma once

#include "repsel/error.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace repsel {

enum class Metric {
    euclidean,
    cosine,
    /// Euclidean rounded to the nearest integer (TSPlib EUC_2D convention).
    euclidean_rounded,
};

inline std::string_view to_string(Metric metric) {
    switch (metric) {
        case Metric::euclidean: return "euclidean";
        case Metric::cosine: return "cosine";
        case Metric::euclidean_rounded: return "euclidean-rounded";
    }
    return "unknown";
}

inline Metric parse_metric(std::string_view name) {
    if (name == "euclidean") return Metric::euclidean;
    if (name == "cosine" || name == "cosine-distance") return Metric::cosine;
    if (name == "euclidean-rounded") return Metric::euclidean_rounded;
    throw validation_error("unknown metric '" + std::string(name) + "'");
}

/// Immutable N x d matrix of finite feature vectors with unique string ids.
class PointSet {
  public:
    PointSet() = default;

    PointSet(std::vector<std::string> ids, std::vector<double> coords, std::size_t dim)
      : ids_(std::move(ids)), coords_(std::move(coords)), dim_(dim) {
        detail::require(dim_ >= 1, "point set dimension must be at least 1");
        detail::require(!ids_.empty(), "point set must contain at least one point");
        detail::require(coords_.size() == ids_.size() * dim_,
                        "coordinate count does not match ids.size() * dim");
        std::unordered_set<std::string_view> seen;
        seen.reserve(ids_.size());
        for (const auto& id : ids_) {
            detail::require(seen.insert(id).second, "duplicate point id '" + id + "'");
        }
        for (std::size_t k = 0; k < coords_.size(); ++k) {
            detail::require(std::isfinite(coords_[k]),
                            "non-finite coordinate for point '" + ids_[k / dim_] + "'");
        }
    }

    /// Points with ids "0", "1", ...
    static PointSet from_rows(const std::vector<std::vector<double>>& rows) {
        detail::require(!rows.empty(), "point set must contain at least one point");
        const std::size_t dim = rows.front().size();
        std::vector<std::string> ids;
        std::vector<double> coords;
        ids.reserve(rows.size());
        coords.reserve(rows.size() * dim);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            detail::require(rows[i].size() == dim, "ragged rows in point set");
            ids.push_back(std::to_string(i));
            coords.insert(coords.end(), rows[i].begin(), rows[i].end());
        }
        return PointSet(std::move(ids), std::move(coords), dim);
    }

    std::size_t size() const noexcept { return ids_.size(); }
    std::size_t dim() const noexcept { return dim_; }

    std::span<const double> operator[](std::size_t i) const noexcept {
        return {coords_.data() + i * dim_, dim_};
    }

    const std::vector<std::string>& ids() const noexcept { return ids_; }
    const std::vector<double>& coords() const noexcept { return coords_; }

  private:
    std::vector<std::string> ids_;
    std::vector<double> coords_;
    std::size_t dim_ = 0;
};

namespace detail {

inline double squared_norm(std::span<const double> a) {
    double sum = 0.0;
    for (double v : a) sum += v * v;
    return sum;
}

inline double euclidean(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

// 1 - cos(a, b) evaluated as |a/|a| - b/|b||^2 / 2 on unit vectors, which is
// exactly zero on identical inputs and exactly symmetric.
inline double cosine_unit(std::span<const double> ua, std::span<const double> ub) {
    double sum = 0.0;
    for (std::size_t k = 0; k < ua.size(); ++k) {
        const double diff = ua[k] - ub[k];
        sum += diff * diff;
    }
    return 0.5 * sum;
}

}  // namespace detail

/// Distance between two raw vectors, fully validated.
inline double distance(std::span<const double> a, std::span<const double> b, Metric metric) {
    detail::require(a.size() == b.size(), "dimension mismatch in distance");
    detail::require(!a.empty(), "distance of empty vectors");
    for (std::size_t k = 0; k < a.size(); ++k) {
        detail::require(std::isfinite(a[k]) && std::isfinite(b[k]), "non-finite input to distance");
    }
    switch (metric) {
        case Metric::euclidean: return detail::euclidean(a, b);
        case Metric::euclidean_rounded: return std::floor(detail::euclidean(a, b) + 0.5);
        case Metric::cosine: {
            const double na = std::sqrt(detail::squared_norm(a));
            const double nb = std::sqrt(detail::squared_norm(b));
            detail::require(na > 0.0 && nb > 0.0, "zero-norm vector under cosine distance");
            std::vector<double> ua(a.begin(), a.end());
            std::vector<double> ub(b.begin(), b.end());
            for (auto& v : ua) v /= na;
            for (auto& v : ub) v /= nb;
            return detail::cosine_unit(ua, ub);
        }
    }
    return 0.0;
}

/// Index-based distance evaluation over one PointSet. Validation (zero norms
/// under cosine) happens once at construction; calls are unchecked.
class Distances {
  public:
    Distances(const PointSet& points, Metric metric) : points_(&points), metric_(metric) {
        if (metric_ == Metric::cosine) {
            const std::size_t d = points.dim();
            unit_.resize(points.size() * d);
            for (std::size_t i = 0; i < points.size(); ++i) {
                const auto row = points[i];
                const double norm = std::sqrt(detail::squared_norm(row));
                if (!(norm > 0.0)) {
                    throw validation_error("point '" + points.ids()[i] +
                                           "' has zero norm under cosine distance");
                }
                for (std::size_t k = 0; k < d; ++k) unit_[i * d + k] = row[k] / norm;
            }
        }
    }

    double operator()(std::size_t i, std::size_t j) const noexcept {
        switch (metric_) {
            case Metric::euclidean: return detail::euclidean((*points_)[i], (*points_)[j]);
            case Metric::euclidean_rounded:
                return std::floor(detail::euclidean((*points_)[i], (*points_)[j]) + 0.5);
            case Metric::cosine: {
                const std::size_t d = points_->dim();
                return detail::cosine_unit({unit_.data() + i * d, d}, {unit_.data() + j * d, d});
            }
        }
        return 0.0;
    }

    const PointSet& points() const noexcept { return *points_; }
    std::size_t size() const noexcept { return points_->size(); }
    Metric metric() const noexcept { return metric_; }

  private:
    const PointSet* points_;
    Metric metric_;
    std::vector<double> unit_;
};

}  // namespace repsel
