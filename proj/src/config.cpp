#include "qchaos/config.hpp"

#include "qchaos/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qchaos {

namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& field, const std::string& message) {
    throw Error(ErrorKind::Config, field + ": " + message);
}

template <class T>
T get_field(const json& doc, const char* key, T fallback) {
    if (!doc.contains(key)) return fallback;
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception&) {
        field_error(key, "has the wrong type");
    }
}

double get_number(const json& doc, const char* key, double fallback) {
    if (!doc.contains(key)) return fallback;
    if (!doc.at(key).is_number()) field_error(key, "must be a number");
    return doc.at(key).get<double>();
}

std::size_t get_count(const json& doc, const char* key, std::size_t fallback) {
    if (!doc.contains(key)) return fallback;
    const auto& v = doc.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
        field_error(key, "must be a non-negative integer");
    return v.get<std::size_t>();
}

std::vector<double> get_list(const json& doc, const char* key, std::vector<double> fallback) {
    if (!doc.contains(key)) return fallback;
    const auto& v = doc.at(key);
    if (!v.is_array()) field_error(key, "must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) field_error(key, "must be an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

const std::set<std::string> kKnownKeys = {
    "n",           "lx",          "ly",           "delta",          "j",
    "window_fraction", "window_kind", "parity",  "j_grid",       "n_d",            "master_seed",
    "output_dir",  "threads",     "energy_bins",  "hist_bin_width", "hist_s_max",
    "eta_target",  "sq_target",   "scaling_over", "scaling_values",
};

} // namespace

RunConfig config_from_json(const json& doc) {
    if (!doc.is_object()) throw Error(ErrorKind::Config, "config must be a JSON object");
    for (const auto& [key, value] : doc.items())
        if (!kKnownKeys.contains(key)) field_error(key, "unknown key");

    RunConfig c;
    ModelParams& m = c.model;
    if (doc.contains("n") && !doc.contains("lx") && !doc.contains("ly")) {
        const auto n = static_cast<int>(get_count(doc, "n", 12));
        if (n < 2) field_error("n", "must be >= 2");
        std::tie(m.lx, m.ly) = default_lattice(n);
    } else {
        m.lx = static_cast<int>(get_count(doc, "lx", static_cast<std::size_t>(m.lx)));
        m.ly = static_cast<int>(get_count(doc, "ly", static_cast<std::size_t>(m.ly)));
        if (doc.contains("n") && get_count(doc, "n", 0) != static_cast<std::size_t>(m.n()))
            field_error("n", "does not equal lx * ly");
    }
    m.delta = get_number(doc, "delta", m.delta);
    m.j_bound = get_number(doc, "j", m.j_bound);
    m.window_fraction = get_number(doc, "window_fraction", m.window_fraction);
    const auto window_kind = get_field<std::string>(doc, "window_kind", "levels");
    if (window_kind == "levels") m.window_kind = WindowKind::Levels;
    else if (window_kind == "energy") m.window_kind = WindowKind::Energy;
    else field_error("window_kind", "must be \"levels\" or \"energy\"");
    const auto parity = get_field<std::string>(doc, "parity", "even");
    if (parity == "even") m.parity = Parity::Even;
    else if (parity == "odd") m.parity = Parity::Odd;
    else field_error("parity", "must be \"even\" or \"odd\"");

    c.j_grid = get_list(doc, "j_grid", c.j_grid);
    c.n_d = get_count(doc, "n_d", c.n_d);
    if (doc.contains("master_seed")) {
        const auto& v = doc.at("master_seed");
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
            field_error("master_seed", "must be a non-negative 64-bit integer");
        c.master_seed = v.get<std::uint64_t>();
    }
    c.output_dir = get_field<std::string>(doc, "output_dir", c.output_dir);
    c.threads = static_cast<int>(get_count(doc, "threads", static_cast<std::size_t>(c.threads)));
    c.energy_bins = get_count(doc, "energy_bins", c.energy_bins);
    c.hist_bin_width = get_number(doc, "hist_bin_width", c.hist_bin_width);
    c.hist_s_max = get_number(doc, "hist_s_max", c.hist_s_max);
    c.eta_target = get_number(doc, "eta_target", c.eta_target);
    c.sq_target = get_number(doc, "sq_target", c.sq_target);
    const auto axis = get_field<std::string>(doc, "scaling_over", "n");
    if (axis == "n") c.scaling_over = ScalingAxis::QubitCount;
    else if (axis == "delta") c.scaling_over = ScalingAxis::Disorder;
    else field_error("scaling_over", "must be \"n\" or \"delta\"");
    c.scaling_values = get_list(doc, "scaling_values",
                                c.scaling_over == ScalingAxis::QubitCount
                                    ? std::vector<double>{6, 9, 12}
                                    : std::vector<double>{0.25, 0.5, 1.0});

    // Field-level validation.
    if (m.lx < 1) field_error("lx", "must be >= 1");
    if (m.ly < 1) field_error("ly", "must be >= 1");
    if (m.n() < 2) field_error("lx*ly", "lattice needs at least 2 qubits");
    if (!(m.delta >= 0.0 && m.delta <= kDelta0)) field_error("delta", "must lie in [0, 1]");
    if (!(m.j_bound >= 0.0) || !std::isfinite(m.j_bound)) field_error("j", "must be >= 0");
    if (!(m.window_fraction > 0.0 && m.window_fraction <= 0.5))
        field_error("window_fraction", "must lie in (0, 0.5]");
    if (c.j_grid.empty()) field_error("j_grid", "must not be empty");
    for (std::size_t k = 0; k < c.j_grid.size(); ++k) {
        if (!(c.j_grid[k] >= 0.0) || !std::isfinite(c.j_grid[k]))
            field_error("j_grid", "values must be >= 0");
        if (k > 0 && !(c.j_grid[k] > c.j_grid[k - 1]))
            field_error("j_grid", "must be strictly ascending");
    }
    if (c.n_d < 1) field_error("n_d", "must be >= 1");
    if (c.energy_bins < 2) field_error("energy_bins", "must be >= 2");
    if (!(c.hist_bin_width > 0.0)) field_error("hist_bin_width", "must be > 0");
    if (!(c.hist_s_max > 0.0)) field_error("hist_s_max", "must be > 0");
    if (c.output_dir.empty()) field_error("output_dir", "must not be empty");
    if (c.scaling_values.empty()) field_error("scaling_values", "must not be empty");
    for (double v : c.scaling_values) {
        if (c.scaling_over == ScalingAxis::QubitCount) {
            if (v < 2 || v != std::floor(v)) field_error("scaling_values", "qubit counts must be integers >= 2");
        } else if (!(v > 0.0 && v <= kDelta0)) {
            field_error("scaling_values", "disorder widths must lie in (0, 1]");
        }
    }
    return c;
}

RunConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Config, std::string("malformed JSON: ") + e.what());
    }
    return config_from_json(doc);
}

json to_json(const RunConfig& c) {
    return json{
        {"lx", c.model.lx},
        {"ly", c.model.ly},
        {"delta", c.model.delta},
        {"j", c.model.j_bound},
        {"window_fraction", c.model.window_fraction},
        {"window_kind", to_string(c.model.window_kind)},
        {"parity", c.model.parity == Parity::Even ? "even" : "odd"},
        {"j_grid", c.j_grid},
        {"n_d", c.n_d},
        {"master_seed", c.master_seed},
        {"output_dir", c.output_dir},
        {"threads", c.threads},
        {"energy_bins", c.energy_bins},
        {"hist_bin_width", c.hist_bin_width},
        {"hist_s_max", c.hist_s_max},
        {"eta_target", c.eta_target},
        {"sq_target", c.sq_target},
        {"scaling_over", c.scaling_over == ScalingAxis::QubitCount ? "n" : "delta"},
        {"scaling_values", c.scaling_values},
    };
}

} // namespace qchaos
