#pragma once

#include "repsel/benchmark.hpp"
#include "repsel/coverage.hpp"
#include "repsel/error.hpp"
#include "repsel/point_set.hpp"
#include "repsel/selection.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unistd.h>
#include <unordered_map>
#include <vector>

namespace repsel::io {

using nlohmann::ordered_json;

/// Rounds to 12 significant decimal digits, the precision reports carry.
inline double round12(double value) {
    if (!std::isfinite(value)) return value;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return std::strtod(buf, nullptr);
}

inline std::string format_full(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// Writes via a sibling temp file and rename, so readers never see a torn file.
/// Path "-" writes to stdout.
inline void write_atomic(const std::string& path, std::string_view content) {
    if (path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    const std::filesystem::path target(path);
    auto tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw runtime_failure("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw runtime_failure("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw runtime_failure("cannot move output into place at '" + path + "': " + ec.message());
    }
}

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(pos));
            break;
        }
        out.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return out;
}

inline std::string_view strip(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    return s;
}

// Non-empty, non-comment lines with their 1-based line numbers.
inline std::vector<std::pair<std::size_t, std::string_view>> data_lines(std::string_view text) {
    std::vector<std::pair<std::size_t, std::string_view>> out;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        const auto line = strip(text.substr(pos, end - pos));
        pos = end + 1;
        if (line.empty() || line.front() == '#') continue;
        out.emplace_back(line_no, line);
    }
    return out;
}

}  // namespace detail

/// Embedding CSV: header "id,f0,...,f{d-1}", one row per point. Lines starting
/// with '#' are comments.
inline PointSet parse_embeddings(std::string_view text, const std::string& source = "<input>") {
    const auto lines = detail::data_lines(text);
    repsel::detail::require(!lines.empty(), source + ": empty embedding file");
    const auto header = detail::split_commas(lines.front().second);
    repsel::detail::require(header.size() >= 2 && detail::strip(header[0]) == "id",
                            source + ": header must be 'id,f0,...'");
    const std::size_t dim = header.size() - 1;
    repsel::detail::require(lines.size() >= 2, source + ": no data rows");

    std::vector<std::string> ids;
    std::vector<double> coords;
    ids.reserve(lines.size() - 1);
    coords.reserve((lines.size() - 1) * dim);
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto& [line_no, line] = lines[r];
        const auto fields = detail::split_commas(line);
        const std::string where = source + ":" + std::to_string(line_no);
        repsel::detail::require(fields.size() == dim + 1,
                                where + ": expected " + std::to_string(dim + 1) + " columns, got " +
                                    std::to_string(fields.size()));
        const auto id = detail::strip(fields[0]);
        repsel::detail::require(!id.empty(), where + ": empty id");
        ids.emplace_back(id);
        for (std::size_t k = 1; k < fields.size(); ++k) {
            auto token = detail::strip(fields[k]);
            if (!token.empty() && token.front() == '+') token.remove_prefix(1);
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
            repsel::detail::require(ec == std::errc{} && ptr == token.data() + token.size() && !token.empty(),
                                    where + ": bad number '" + std::string(token) + "'");
            repsel::detail::require(std::isfinite(value), where + ": non-finite value");
            coords.push_back(value);
        }
    }
    try {
        return PointSet(std::move(ids), std::move(coords), dim);
    } catch (const validation_error& e) {
        throw validation_error(source + ": " + e.what());
    }
}

inline PointSet load_embeddings(const std::string& path) { return parse_embeddings(read_file(path), path); }

inline std::string format_embeddings(const PointSet& points, std::string_view footer = {}) {
    std::string out = "id";
    for (std::size_t k = 0; k < points.dim(); ++k) out += ",f" + std::to_string(k);
    out += "\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        out += points.ids()[i];
        for (double v : points[i]) {
            out += ",";
            out += format_full(v);
        }
        out += "\n";
    }
    if (!footer.empty()) {
        out += "# ";
        out += footer;
        out += "\n";
    }
    return out;
}

/// Label CSV: header "id,label".
inline std::unordered_map<std::string, std::string> parse_labels(std::string_view text,
                                                                 const std::string& source = "<labels>") {
    const auto lines = detail::data_lines(text);
    repsel::detail::require(!lines.empty(), source + ": empty label file");
    const auto header = detail::split_commas(lines.front().second);
    repsel::detail::require(header.size() == 2 && detail::strip(header[0]) == "id",
                            source + ": header must be 'id,label'");
    std::unordered_map<std::string, std::string> out;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto& [line_no, line] = lines[r];
        const auto fields = detail::split_commas(line);
        const std::string where = source + ":" + std::to_string(line_no);
        repsel::detail::require(fields.size() == 2, where + ": expected 'id,label'");
        const std::string id(detail::strip(fields[0]));
        repsel::detail::require(!id.empty(), where + ": empty id");
        repsel::detail::require(out.emplace(id, std::string(detail::strip(fields[1]))).second,
                                where + ": duplicate id '" + id + "'");
    }
    return out;
}

inline std::unordered_map<std::string, std::string> load_labels(const std::string& path) {
    return parse_labels(read_file(path), path);
}

/// Labels in the row order of `points`; every id must be labelled.
inline std::vector<std::string> align_labels(const PointSet& points,
                                             const std::unordered_map<std::string, std::string>& labels) {
    std::vector<std::string> out;
    out.reserve(points.size());
    std::vector<std::string> missing;
    for (const auto& id : points.ids()) {
        const auto it = labels.find(id);
        if (it == labels.end()) {
            missing.push_back(id);
            continue;
        }
        out.push_back(it->second);
    }
    if (!missing.empty()) {
        std::string msg = "ids without labels:";
        for (std::size_t i = 0; i < missing.size() && i < 10; ++i) msg += " '" + missing[i] + "'";
        if (missing.size() > 10) msg += " (+" + std::to_string(missing.size() - 10) + " more)";
        throw validation_error(msg);
    }
    return out;
}

/// Reorders `other` to the row order of `reference`; both must carry the same id set.
inline PointSet align_rows(const PointSet& reference, const PointSet& other) {
    std::unordered_map<std::string_view, std::size_t> row_of;
    for (std::size_t i = 0; i < other.size(); ++i) row_of.emplace(other.ids()[i], i);
    std::vector<std::string> missing;
    for (const auto& id : reference.ids()) {
        if (!row_of.contains(id)) missing.push_back(id);
    }
    std::vector<std::string> extra;
    if (other.size() != reference.size() || !missing.empty()) {
        std::unordered_map<std::string_view, bool> in_ref;
        for (const auto& id : reference.ids()) in_ref.emplace(id, true);
        for (const auto& id : other.ids()) {
            if (!in_ref.contains(id)) extra.push_back(id);
        }
    }
    if (!missing.empty() || !extra.empty()) {
        std::string msg = "id misalignment between embedding files;";
        auto list = [&](const char* what, const std::vector<std::string>& ids) {
            if (ids.empty()) return;
            msg += std::string(" ") + what + ":";
            for (std::size_t i = 0; i < ids.size() && i < 10; ++i) msg += " '" + ids[i] + "'";
            if (ids.size() > 10) msg += " (+" + std::to_string(ids.size() - 10) + " more)";
        };
        list("missing from second file", missing);
        list("only in second file", extra);
        throw validation_error(msg);
    }
    std::vector<double> coords;
    coords.reserve(reference.size() * other.dim());
    for (const auto& id : reference.ids()) {
        const auto row = other[row_of.at(id)];
        coords.insert(coords.end(), row.begin(), row.end());
    }
    return PointSet(reference.ids(), std::move(coords), other.dim());
}

// ---------------------------------------------------------------------------
// Reports

inline ordered_json number_or_null(const std::optional<double>& v) {
    return v ? ordered_json(round12(*v)) : ordered_json(nullptr);
}

inline std::optional<double> optional_number(const ordered_json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

/// A selection as written by `select`.
struct SelectionRecord {
    std::vector<std::string> ids;
    std::vector<std::size_t> indices;
    Method method = Method::greedy;
    std::string metric;
    std::string transform = "none";
    std::uint64_t seed = 0;
    std::optional<Objectives> objectives;
    std::optional<tsne::Params> tsne;
    std::optional<double> tsne_final_kl;

    friend bool operator==(const SelectionRecord& a, const SelectionRecord& b) {
        auto same_obj = [](const std::optional<Objectives>& x, const std::optional<Objectives>& y) {
            if (x.has_value() != y.has_value()) return false;
            if (!x) return true;
            return x->minimax == y->minimax && x->maximin == y->maximin && x->kmedoids == y->kmedoids;
        };
        auto same_tsne = [](const std::optional<tsne::Params>& x, const std::optional<tsne::Params>& y) {
            if (x.has_value() != y.has_value()) return false;
            if (!x) return true;
            return x->perplexity == y->perplexity && x->iterations == y->iterations &&
                   x->learning_rate == y->learning_rate && x->early_exaggeration == y->early_exaggeration;
        };
        return a.ids == b.ids && a.indices == b.indices && a.method == b.method && a.metric == b.metric &&
               a.transform == b.transform && a.seed == b.seed && same_obj(a.objectives, b.objectives) &&
               same_tsne(a.tsne, b.tsne) && a.tsne_final_kl == b.tsne_final_kl;
    }
};

inline ordered_json to_json(const SelectionRecord& r) {
    ordered_json j;
    j["kind"] = "selection";
    j["method"] = std::string(to_string(r.method));
    j["metric"] = r.metric;
    j["transform"] = r.transform;
    j["seed"] = r.seed;
    j["n"] = r.indices.size();
    j["ids"] = r.ids;
    j["indices"] = r.indices;
    if (r.objectives) {
        j["objectives"] = {{"minimax", round12(r.objectives->minimax)},
                           {"maximin", number_or_null(r.objectives->maximin)},
                           {"kmedoids", round12(r.objectives->kmedoids)}};
    } else {
        j["objectives"] = nullptr;
    }
    if (r.tsne) {
        j["tsne"] = {{"perplexity", round12(r.tsne->perplexity)},
                     {"iterations", r.tsne->iterations},
                     {"learning_rate", round12(r.tsne->learning_rate)},
                     {"early_exaggeration", round12(r.tsne->early_exaggeration)},
                     {"final_kl", number_or_null(r.tsne_final_kl)}};
    } else {
        j["tsne"] = nullptr;
    }
    return j;
}

inline SelectionRecord selection_from_json(const ordered_json& j) {
    repsel::detail::require(j.value("kind", "") == "selection", "not a selection report");
    SelectionRecord r;
    r.method = parse_method(j.at("method").get<std::string>());
    r.metric = j.at("metric").get<std::string>();
    r.transform = j.at("transform").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.ids = j.at("ids").get<std::vector<std::string>>();
    r.indices = j.at("indices").get<std::vector<std::size_t>>();
    if (!j.at("objectives").is_null()) {
        const auto& o = j.at("objectives");
        r.objectives = Objectives{o.at("minimax").get<double>(), optional_number(o.at("maximin")),
                                  o.at("kmedoids").get<double>()};
    }
    if (!j.at("tsne").is_null()) {
        const auto& t = j.at("tsne");
        tsne::Params p;
        p.perplexity = t.at("perplexity").get<double>();
        p.iterations = t.at("iterations").get<std::size_t>();
        p.learning_rate = t.at("learning_rate").get<double>();
        p.early_exaggeration = t.at("early_exaggeration").get<double>();
        r.tsne = p;
        r.tsne_final_kl = optional_number(t.at("final_kl"));
    }
    return r;
}

inline ordered_json to_json(const BenchReport& r) {
    ordered_json j;
    j["instance"] = r.instance;
    j["k"] = r.k;
    j["method"] = std::string(to_string(r.method));
    j["objective"] = r.objective;
    j["runs"] = r.runs;
    j["seeds"] = r.seeds;
    ordered_json values = ordered_json::array();
    for (double v : r.values) values.push_back(round12(v));
    j["values"] = values;
    j["mean"] = round12(r.mean);
    j["std"] = number_or_null(r.std);
    ordered_json times = ordered_json::array();
    for (double t : r.wall_time_seconds) times.push_back(round12(t));
    j["wall_time_seconds"] = times;
    return j;
}

inline BenchReport bench_report_from_json(const ordered_json& j) {
    BenchReport r;
    r.instance = j.at("instance").get<std::string>();
    r.k = j.at("k").get<std::size_t>();
    r.method = parse_method(j.at("method").get<std::string>());
    r.objective = j.at("objective").get<std::string>();
    r.runs = j.at("runs").get<std::size_t>();
    r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    r.values = j.at("values").get<std::vector<double>>();
    r.mean = j.at("mean").get<double>();
    r.std = optional_number(j.at("std"));
    r.wall_time_seconds = j.at("wall_time_seconds").get<std::vector<double>>();
    return r;
}

inline ordered_json to_json(const StrategySpec& s) {
    ordered_json j;
    j["name"] = s.name();
    j["method"] = std::string(to_string(s.method));
    j["metric"] = s.metric ? ordered_json(std::string(to_string(*s.metric))) : ordered_json(nullptr);
    j["transform"] = std::string(to_string(s.transform));
    j["layer"] = s.layer ? ordered_json(std::string(to_string(*s.layer))) : ordered_json(nullptr);
    return j;
}

inline ordered_json to_json(const CoverageReport& r) {
    ordered_json j;
    j["dataset"] = r.dataset;
    j["strategy"] = to_json(r.strategy);
    j["budgets"] = r.budgets;
    j["runs_per_budget"] = r.runs_per_budget;
    j["covered"] = r.covered;
    ordered_json props = ordered_json::array();
    for (double p : r.proportion) props.push_back(round12(p));
    j["proportion"] = props;
    j["dataset_score"] = round12(r.dataset_score);
    if (!r.selections.empty()) j["selections"] = r.selections;
    return j;
}

inline CoverageReport coverage_report_from_json(const ordered_json& j) {
    CoverageReport r;
    r.dataset = j.at("dataset").get<std::string>();
    r.strategy = parse_strategy(j.at("strategy").at("name").get<std::string>());
    r.budgets = j.at("budgets").get<std::vector<std::size_t>>();
    r.runs_per_budget = j.at("runs_per_budget").get<std::size_t>();
    r.covered = j.at("covered").get<std::vector<std::size_t>>();
    r.proportion = j.at("proportion").get<std::vector<double>>();
    r.dataset_score = j.at("dataset_score").get<double>();
    if (j.contains("selections")) {
        r.selections = j.at("selections").get<std::vector<std::vector<std::vector<std::size_t>>>>();
    }
    return r;
}

inline std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace repsel::io
