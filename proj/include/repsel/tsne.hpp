#pragma once

#include "repsel/error.hpp"
#include "repsel/parallel.hpp"
#include "repsel/point_set.hpp"
#include "repsel/rng.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace repsel::tsne {

struct Params {
    double perplexity = 40.0;
    std::size_t iterations = 1000;
    std::size_t output_dim = 2;
    double learning_rate = 200.0;
    double early_exaggeration = 12.0;
    std::size_t exaggeration_iters = 250;
    double initial_momentum = 0.5;
    double final_momentum = 0.8;
    std::size_t momentum_switch_iter = 250;
    double min_gain = 0.01;
    /// Tolerance on |2^H - perplexity| for the per-point bandwidth search.
    double entropy_tolerance = 1e-5;
    std::size_t bandwidth_search_max_steps = 50;
    double initial_stddev = 1e-4;
    std::size_t kl_record_interval = 50;
    std::size_t threads = 1;
};

enum class AffinityForm { conditional, joint };

/// Dense N x N affinities, row-major. Row i of the conditional form holds p_{j|i}.
struct AffinityMatrix {
    std::size_t size = 0;
    std::vector<double> values;
    AffinityForm form = AffinityForm::conditional;

    double operator()(std::size_t i, std::size_t j) const noexcept { return values[i * size + j]; }
};

struct Calibration {
    std::vector<double> sigmas;
    AffinityMatrix affinities;
    /// 2^H actually reached per row; equals the target within tolerance unless
    /// the row is listed in `unconverged_rows`.
    std::vector<double> achieved_perplexity;
    std::vector<std::size_t> unconverged_rows;
};

namespace detail {

inline void validate(const Params& params, std::size_t count) {
    repsel::detail::require(count >= 3, "t-SNE needs at least three points");
    repsel::detail::require(params.output_dim == 2, "t-SNE output dimension is fixed at 2");
    repsel::detail::require(params.iterations >= 1, "t-SNE iterations must be at least 1");
    repsel::detail::require(params.perplexity > 0.0 &&
                                params.perplexity < static_cast<double>(count),
                            "perplexity must lie in (0, N); got " +
                                std::to_string(params.perplexity) + " for N = " +
                                std::to_string(count));
    repsel::detail::require(params.learning_rate > 0.0, "learning rate must be positive");
}

// Dissimilarity fed to the Gaussian kernel: squared distance for the
// euclidean family, the raw distance for cosine.
inline double kernel_input(const Distances& dist, std::size_t i, std::size_t j) {
    const double d = dist(i, j);
    return dist.metric() == Metric::cosine ? d : d * d;
}

struct RowFit {
    double beta = 0.0;
    double perplexity = 0.0;
    bool converged = false;
};

// Fills row[j] = p_{j|i} for the given precision beta and returns exp(H).
inline double conditional_row(std::span<const double> input, std::size_t self, double beta,
                              double shift, std::span<double> row) {
    double total = 0.0;
    double weighted = 0.0;
    for (std::size_t j = 0; j < input.size(); ++j) {
        if (j == self) {
            row[j] = 0.0;
            continue;
        }
        const double w = std::exp(-beta * (input[j] - shift));
        row[j] = w;
        total += w;
        weighted += (input[j] - shift) * w;
    }
    for (auto& v : row) v /= total;
    const double entropy = std::log(total) + beta * weighted / total;
    return std::exp(entropy);
}

inline RowFit fit_row(std::span<const double> input, std::size_t self, const Params& params,
                      std::span<double> row) {
    double shift = std::numeric_limits<double>::infinity();
    double mean = 0.0;
    for (std::size_t j = 0; j < input.size(); ++j) {
        if (j == self) continue;
        shift = std::min(shift, input[j]);
        mean += input[j];
    }
    mean /= static_cast<double>(input.size() - 1);
    const double spread = mean - shift;

    double beta = spread > 0.0 ? 1.0 / spread : 1.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    RowFit best;
    double best_gap = std::numeric_limits<double>::infinity();
    std::vector<double> scratch(input.size());
    for (std::size_t step = 0; step < params.bandwidth_search_max_steps; ++step) {
        const double perp = conditional_row(input, self, beta, shift, scratch);
        const double gap = std::abs(perp - params.perplexity);
        if (gap < best_gap) {
            best_gap = gap;
            best = {beta, perp, gap <= params.entropy_tolerance};
            std::copy(scratch.begin(), scratch.end(), row.begin());
        }
        if (best.converged) break;
        if (perp > params.perplexity) {
            lo = beta;
            beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (lo + hi);
        } else {
            hi = beta;
            beta = 0.5 * (lo + hi);
        }
    }
    return best;
}

}  // namespace detail

/// Per-point Gaussian bandwidths found by bisection on the precision so that
/// 2^H(p_{.|i}) matches the target perplexity, plus the conditional affinities.
inline Calibration calibrate_bandwidths(const PointSet& points, Metric metric, const Params& params) {
    const std::size_t count = points.size();
    detail::validate(params, count);
    const Distances dist(points, metric);

    Calibration out;
    out.sigmas.assign(count, 0.0);
    out.achieved_perplexity.assign(count, 0.0);
    out.affinities.size = count;
    out.affinities.form = AffinityForm::conditional;
    out.affinities.values.assign(count * count, 0.0);
    std::vector<char> converged(count, 0);

    parallel_for(count, params.threads, [&](std::size_t i) {
        std::vector<double> input(count);
        for (std::size_t j = 0; j < count; ++j) input[j] = detail::kernel_input(dist, i, j);
        std::span<double> row(out.affinities.values.data() + i * count, count);
        const auto fit = detail::fit_row(input, i, params, row);
        out.sigmas[i] = std::sqrt(1.0 / (2.0 * fit.beta));
        out.achieved_perplexity[i] = fit.perplexity;
        converged[i] = fit.converged ? 1 : 0;
    });
    for (std::size_t i = 0; i < count; ++i) {
        if (!converged[i]) out.unconverged_rows.push_back(i);
    }
    return out;
}

/// p_ij = (p_{j|i} + p_{i|j}) / 2N.
inline AffinityMatrix symmetrize(const AffinityMatrix& conditional) {
    repsel::detail::require(conditional.form == AffinityForm::conditional,
                            "symmetrize expects conditional affinities");
    const std::size_t count = conditional.size;
    AffinityMatrix joint;
    joint.size = count;
    joint.form = AffinityForm::joint;
    joint.values.assign(count * count, 0.0);
    const double scale = 1.0 / (2.0 * static_cast<double>(count));
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < count; ++j) {
            if (i != j) joint.values[i * count + j] = (conditional(i, j) + conditional(j, i)) * scale;
        }
    }
    return joint;
}

namespace detail {

inline void check_layout(const AffinityMatrix& joint, std::span<const double> layout) {
    repsel::detail::require(joint.form == AffinityForm::joint, "expected joint affinities");
    repsel::detail::require(layout.size() == 2 * joint.size,
                            "layout must hold N x 2 coordinates for N = " +
                                std::to_string(joint.size));
}

inline double student_t(std::span<const double> y, std::size_t i, std::size_t j) {
    const double dx = y[2 * i] - y[2 * j];
    const double dy = y[2 * i + 1] - y[2 * j + 1];
    return 1.0 / (1.0 + dx * dx + dy * dy);
}

// Sum of Student-t weights over ordered pairs i != j, accumulated row by row.
inline double normalizer(std::span<const double> y, std::size_t count, std::size_t threads) {
    std::vector<double> row_sums(count, 0.0);
    parallel_for(count, threads, [&](std::size_t i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < count; ++j) {
            if (j != i) sum += student_t(y, i, j);
        }
        row_sums[i] = sum;
    });
    double total = 0.0;
    for (double s : row_sums) total += s;
    return total;
}

}  // namespace detail

/// KL(P || Q) with Q the normalized Student-t (one degree of freedom) affinities
/// of a 2-D layout stored as interleaved (x, y) pairs.
inline double kl_divergence(const AffinityMatrix& joint, std::span<const double> layout,
                            std::size_t threads = 1) {
    detail::check_layout(joint, layout);
    const std::size_t count = joint.size;
    const double z = detail::normalizer(layout, count, threads);
    std::vector<double> row_kl(count, 0.0);
    parallel_for(count, threads, [&](std::size_t i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < count; ++j) {
            const double p = joint(i, j);
            if (j == i || p <= 0.0) continue;
            const double q = detail::student_t(layout, i, j) / z;
            sum += p * std::log(p / q);
        }
        row_kl[i] = sum;
    });
    double total = 0.0;
    for (double v : row_kl) total += v;
    return total;
}

/// Analytic gradient of KL(exaggeration * P || Q) with respect to the layout:
/// dC/dy_i = 4 sum_j (e p_ij - q_ij) (1 + |y_i - y_j|^2)^-1 (y_i - y_j).
inline std::vector<double> kl_gradient(const AffinityMatrix& joint, std::span<const double> layout,
                                       double exaggeration = 1.0, std::size_t threads = 1) {
    detail::check_layout(joint, layout);
    const std::size_t count = joint.size;
    const double z = detail::normalizer(layout, count, threads);
    std::vector<double> grad(2 * count, 0.0);
    parallel_for(count, threads, [&](std::size_t i) {
        double gx = 0.0;
        double gy = 0.0;
        for (std::size_t j = 0; j < count; ++j) {
            if (j == i) continue;
            const double w = detail::student_t(layout, i, j);
            const double coeff = (exaggeration * joint(i, j) - w / z) * w;
            gx += coeff * (layout[2 * i] - layout[2 * j]);
            gy += coeff * (layout[2 * i + 1] - layout[2 * j + 1]);
        }
        grad[2 * i] = 4.0 * gx;
        grad[2 * i + 1] = 4.0 * gy;
    });
    return grad;
}

struct Result {
    PointSet embedding;
    /// (iteration, KL) pairs: iteration 0, every kl_record_interval steps, and the last step.
    std::vector<std::pair<std::size_t, double>> kl_trace;
    Calibration calibration;

    double initial_kl() const { return kl_trace.front().second; }
    double final_kl() const { return kl_trace.back().second; }

    double kl_at(std::size_t iteration) const {
        for (const auto& [it, kl] : kl_trace) {
            if (it == iteration) return kl;
        }
        throw validation_error("no KL recorded at iteration " + std::to_string(iteration));
    }
};

/// Isotropic Gaussian initial layout, interleaved (x, y).
inline std::vector<double> initial_layout(std::size_t count, double stddev, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> layout(2 * count);
    for (auto& v : layout) v = stddev * rng.normal();
    return layout;
}

/// Exact t-SNE from a caller-supplied initial layout.
inline Result embed_from(const PointSet& points, Metric metric, const Params& params,
                         std::vector<double> layout) {
    const std::size_t count = points.size();
    detail::validate(params, count);
    repsel::detail::require(layout.size() == 2 * count, "initial layout must be N x 2");

    Result out;
    out.calibration = calibrate_bandwidths(points, metric, params);
    const AffinityMatrix joint = symmetrize(out.calibration.affinities);

    std::vector<double> update(layout.size(), 0.0);
    std::vector<double> gains(layout.size(), 1.0);
    out.kl_trace.emplace_back(0, kl_divergence(joint, layout, params.threads));

    for (std::size_t iter = 1; iter <= params.iterations; ++iter) {
        const bool exaggerating = iter <= params.exaggeration_iters;
        const double exaggeration = exaggerating ? params.early_exaggeration : 1.0;
        const double momentum =
            iter <= params.momentum_switch_iter ? params.initial_momentum : params.final_momentum;
        if (iter == params.momentum_switch_iter + 1) {
            std::fill(update.begin(), update.end(), 0.0);
            std::fill(gains.begin(), gains.end(), 1.0);
        }
        const auto grad = kl_gradient(joint, layout, exaggeration, params.threads);
        for (std::size_t k = 0; k < layout.size(); ++k) {
            const bool descending = (update[k] * grad[k]) < 0.0;
            gains[k] = descending ? gains[k] + 0.2 : gains[k] * 0.8;
            if (gains[k] < params.min_gain) gains[k] = params.min_gain;
            update[k] = momentum * update[k] - params.learning_rate * gains[k] * grad[k];
            layout[k] += update[k];
        }
        if (iter % params.kl_record_interval == 0 || iter == params.iterations) {
            out.kl_trace.emplace_back(iter, kl_divergence(joint, layout, params.threads));
        }
    }
    out.embedding = PointSet(points.ids(), std::move(layout), 2);
    return out;
}

/// Exact t-SNE to two dimensions. The initial layout is drawn from `seed`.
inline Result embed(const PointSet& points, Metric metric, const Params& params, std::uint64_t seed) {
    detail::validate(params, points.size());
    return embed_from(points, metric, params,
                      initial_layout(points.size(), params.initial_stddev, seed));
}

}  // namespace repsel::tsne
