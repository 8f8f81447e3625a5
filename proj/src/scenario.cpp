#include "flocksim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "flocksim/detail/uniform.hpp"
#include "flocksim/errors.hpp"
#include "flocksim/schedule.hpp"

namespace flocksim {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw ParseError("scenario." + path + ": " + why);
}

void expect_keys(const ordered_json& obj, const std::string& path,
                 const std::set<std::string>& allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) fail(path, "unknown key '" + key + "'");
    }
}

double get_number(const ordered_json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) fail(path + "." + key, "missing required value");
    if (!obj[key].is_number()) fail(path + "." + key, "expected a number");
    return obj[key].get<double>();
}

double get_number_or(const ordered_json& obj, const std::string& path, const std::string& key,
                     double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) fail(path + "." + key, "expected a number");
    return obj[key].get<double>();
}

int get_int_or(const ordered_json& obj, const std::string& path, const std::string& key,
               int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) fail(path + "." + key, "expected an integer");
    return obj[key].get<int>();
}

std::uint64_t get_seed_or(const ordered_json& obj, const std::string& path, const std::string& key,
                          std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) fail(path + "." + key, "expected an integer seed");
    return obj[key].get<std::uint64_t>();
}

std::string get_string(const ordered_json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) fail(path + "." + key, "missing required value");
    if (!obj[key].is_string()) fail(path + "." + key, "expected a string");
    return obj[key].get<std::string>();
}

InfluenceFunction parse_influence(const ordered_json& obj, const std::string& path) {
    expect_keys(obj, path, {"family", "k", "gamma", "a", "b", "omega", "knots"});
    const auto family = get_string(obj, path, "family");
    try {
        if (family == "constant") return InfluenceFunction::constant(get_number(obj, path, "k"));
        if (family == "power_law")
            return InfluenceFunction::power_law(get_number(obj, path, "k"),
                                                get_number(obj, path, "gamma"));
        if (family == "oscillating")
            return InfluenceFunction::oscillating(get_number(obj, path, "a"),
                                                  get_number(obj, path, "b"),
                                                  get_number(obj, path, "omega"));
        if (family == "tabulated") {
            if (!obj.contains("knots") || !obj["knots"].is_array())
                fail(path + ".knots", "expected an array of [r, value] pairs");
            std::vector<std::pair<double, double>> knots;
            for (const auto& kn : obj["knots"]) {
                if (!kn.is_array() || kn.size() != 2) fail(path + ".knots", "entries must be pairs");
                knots.emplace_back(kn[0].get<double>(), kn[1].get<double>());
            }
            return InfluenceFunction::tabulated(std::move(knots));
        }
    } catch (const ConfigError& e) {
        fail(path, e.what());
    }
    fail(path + ".family", "unknown influence family '" + family + "'");
}

TimeFunction parse_time_function(const ordered_json& obj, const std::string& path) {
    expect_keys(obj, path, {"family", "value", "mean", "amplitude", "period"});
    const auto family = get_string(obj, path, "family");
    if (family == "constant") return TimeFunction::constant(get_number(obj, path, "value"));
    if (family == "sinusoidal") {
        const double period = get_number(obj, path, "period");
        if (!(period > 0.0)) fail(path + ".period", "must be > 0");
        return TimeFunction::sinusoidal(get_number(obj, path, "mean"),
                                        get_number(obj, path, "amplitude"), period);
    }
    fail(path + ".family", "unknown time function family '" + family + "'");
}

BetaKernel parse_beta(const ordered_json& obj, const std::string& path) {
    expect_keys(obj, path, {"family", "value", "slope", "intercept", "rate"});
    const auto family = get_string(obj, path, "family");
    try {
        if (family == "constant") return BetaKernel::constant(get_number(obj, path, "value"));
        if (family == "linear")
            return BetaKernel::linear(get_number(obj, path, "slope"),
                                      get_number(obj, path, "intercept"));
        if (family == "exponential") return BetaKernel::exponential(get_number(obj, path, "rate"));
    } catch (const ConfigError& e) {
        fail(path, e.what());
    }
    fail(path + ".family", "unknown beta family '" + family + "'");
}

DelaySpec parse_delay(const ordered_json& obj, const std::string& path) {
    expect_keys(obj, path, {"type", "tau_bar", "tau", "tau1", "tau2", "beta", "quadrature_nodes"});
    const auto type = get_string(obj, path, "type");
    const double tau_bar = get_number(obj, path, "tau_bar");
    if (tau_bar < 0.0) fail(path + ".tau_bar", "must be >= 0");
    try {
        if (type == "pointwise") {
            TimeFunction tau = obj.contains("tau") ? parse_time_function(obj["tau"], path + ".tau")
                                                   : TimeFunction::constant(tau_bar);
            return DelaySpec{PointwiseDelay{tau, tau_bar}};
        }
        if (type == "distributed") {
            if (!(tau_bar > 0.0)) fail(path + ".tau_bar", "must be > 0 for a distributed delay");
            if (!obj.contains("tau1") || !obj.contains("tau2"))
                fail(path, "distributed delay needs tau1 and tau2");
            auto beta = obj.contains("beta") ? parse_beta(obj["beta"], path + ".beta")
                                             : BetaKernel::constant(1.0);
            const int m = get_int_or(obj, path, "quadrature_nodes", 8);
            return DelaySpec{DistributedDelayKernel(parse_time_function(obj["tau1"], path + ".tau1"),
                                                    parse_time_function(obj["tau2"], path + ".tau2"),
                                                    tau_bar, beta, m)};
        }
    } catch (const ConfigError& e) {
        fail(path, e.what());
    }
    fail(path + ".type", "unknown delay type '" + type + "'");
}

WeightSchedule parse_schedule(const ordered_json& obj, const std::string& path) {
    expect_keys(obj, path, {"family", "period", "duty", "phase", "off_intervals", "off_fraction",
                            "seed", "pe"});
    if (!obj.contains("pe")) fail(path + ".pe", "missing declared PE pair {window, mass}");
    expect_keys(obj["pe"], path + ".pe", {"window", "mass"});
    WeightSchedule::PePair pe{get_number(obj["pe"], path + ".pe", "window"),
                              get_number(obj["pe"], path + ".pe", "mass")};
    const auto family = get_string(obj, path, "family");
    try {
        if (family == "always_on") return WeightSchedule::always_on(pe);
        if (family == "square_wave")
            return WeightSchedule::square_wave(get_number(obj, path, "period"),
                                               get_number(obj, path, "duty"),
                                               get_number_or(obj, path, "phase", 0.0), pe);
        if (family == "blackout_list") {
            if (!obj.contains("off_intervals") || !obj["off_intervals"].is_array())
                fail(path + ".off_intervals", "expected an array of [start, end] pairs");
            std::vector<std::pair<double, double>> intervals;
            for (const auto& iv : obj["off_intervals"]) {
                if (!iv.is_array() || iv.size() != 2)
                    fail(path + ".off_intervals", "entries must be pairs");
                intervals.emplace_back(iv[0].get<double>(), iv[1].get<double>());
            }
            return WeightSchedule::blackout_list(std::move(intervals), pe);
        }
        if (family == "seeded_random_blackouts")
            return WeightSchedule::seeded_random_blackouts(
                get_number(obj, path, "period"), get_number(obj, path, "off_fraction"),
                get_seed_or(obj, path, "seed", 0), pe);
    } catch (const ConfigError& e) {
        fail(path, e.what());
    }
    fail(path + ".family", "unknown schedule family '" + family + "'");
}

// Per-agent value table from an explicit list, a seeded box, or a two-group split.
std::vector<double> parse_values(const ordered_json& obj, const std::string& path, int n_agents,
                                 int dim) {
    expect_keys(obj, path, {"kind", "values", "seed", "low", "high", "first", "rest"});
    const auto kind = get_string(obj, path, "kind");
    const auto total = static_cast<std::size_t>(n_agents) * dim;
    std::vector<double> out(total, 0.0);
    if (kind == "explicit") {
        if (!obj.contains("values") || !obj["values"].is_array() ||
            obj["values"].size() != static_cast<std::size_t>(n_agents))
            fail(path + ".values", "expected one row per agent");
        for (int i = 0; i < n_agents; ++i) {
            const auto& row = obj["values"][i];
            if (!row.is_array() || row.size() != static_cast<std::size_t>(dim))
                fail(path + ".values", "each row needs `dimension` components");
            for (int k = 0; k < dim; ++k) out[static_cast<std::size_t>(i) * dim + k] = row[k];
        }
        return out;
    }
    if (kind == "random_box") {
        const auto seed = get_seed_or(obj, path, "seed", 0);
        if (!obj.contains("low") || !obj.contains("high"))
            fail(path, "random_box needs 'low' and 'high' corner arrays");
        const auto& low = obj["low"];
        const auto& high = obj["high"];
        if (!low.is_array() || low.size() != static_cast<std::size_t>(dim) || !high.is_array() ||
            high.size() != static_cast<std::size_t>(dim))
            fail(path, "corner arrays need `dimension` components");
        for (int i = 0; i < n_agents; ++i)
            for (int k = 0; k < dim; ++k) {
                const double u =
                    detail::mixed_uniform(seed, static_cast<std::uint64_t>(i) * dim + k);
                const double lo = low[k].get<double>(), hi = high[k].get<double>();
                out[static_cast<std::size_t>(i) * dim + k] = lo + u * (hi - lo);
            }
        return out;
    }
    if (kind == "two_group") {
        if (!obj.contains("first") || !obj.contains("rest"))
            fail(path, "two_group needs 'first' and 'rest' value arrays");
        const auto& first = obj["first"];
        const auto& rest = obj["rest"];
        if (!first.is_array() || first.size() != static_cast<std::size_t>(dim) ||
            !rest.is_array() || rest.size() != static_cast<std::size_t>(dim))
            fail(path, "group arrays need `dimension` components");
        for (int i = 0; i < n_agents; ++i)
            for (int k = 0; k < dim; ++k)
                out[static_cast<std::size_t>(i) * dim + k] =
                    i == 0 ? first[k].get<double>() : rest[k].get<double>();
        return out;
    }
    fail(path + ".kind", "unknown value kind '" + kind + "'");
}

std::vector<std::vector<double>> parse_sample_rows(const ordered_json& arr, const std::string& path,
                                                   int n_agents, int dim) {
    if (!arr.is_array() || arr.size() < 2) fail(path, "expected at least two sample rows");
    std::vector<std::vector<double>> rows;
    for (const auto& row : arr) {
        if (!row.is_array() || row.size() != static_cast<std::size_t>(n_agents))
            fail(path, "each row needs one entry per agent");
        std::vector<double> flat(static_cast<std::size_t>(n_agents) * dim);
        for (int i = 0; i < n_agents; ++i) {
            const auto& cell = row[i];
            if (!cell.is_array() || cell.size() != static_cast<std::size_t>(dim))
                fail(path, "each agent entry needs `dimension` components");
            for (int k = 0; k < dim; ++k) flat[static_cast<std::size_t>(i) * dim + k] = cell[k];
        }
        rows.push_back(std::move(flat));
    }
    return rows;
}

InitialData parse_initial(const ordered_json& obj, const std::string& path, int n_agents, int dim,
                          double tau_bar) {
    expect_keys(obj, path,
                {"type", "positions", "velocities", "position_slopes", "velocity_slopes",
                 "position_samples", "velocity_samples"});
    const auto type = get_string(obj, path, "type");
    try {
        if (type == "constant") {
            return InitialData{
                InitialField::constant(n_agents, dim,
                                       parse_values(obj.at("positions"), path + ".positions",
                                                    n_agents, dim)),
                InitialField::constant(n_agents, dim,
                                       parse_values(obj.at("velocities"), path + ".velocities",
                                                    n_agents, dim))};
        }
        if (type == "linear_in_time") {
            auto zeros = [&](const char* key, const std::string& sub) {
                if (obj.contains(key)) return parse_values(obj[key], path + "." + sub, n_agents, dim);
                return std::vector<double>(static_cast<std::size_t>(n_agents) * dim, 0.0);
            };
            return InitialData{
                InitialField::linear_in_time(n_agents, dim,
                                             parse_values(obj.at("positions"), path + ".positions",
                                                          n_agents, dim),
                                             zeros("position_slopes", "position_slopes")),
                InitialField::linear_in_time(n_agents, dim,
                                             parse_values(obj.at("velocities"),
                                                          path + ".velocities", n_agents, dim),
                                             zeros("velocity_slopes", "velocity_slopes"))};
        }
        if (type == "sampled_grid") {
            if (!obj.contains("position_samples") || !obj.contains("velocity_samples"))
                fail(path, "sampled_grid needs position_samples and velocity_samples");
            return InitialData{
                InitialField::sampled_grid(n_agents, dim, tau_bar,
                                           parse_sample_rows(obj["position_samples"],
                                                             path + ".position_samples", n_agents,
                                                             dim)),
                InitialField::sampled_grid(n_agents, dim, tau_bar,
                                           parse_sample_rows(obj["velocity_samples"],
                                                             path + ".velocity_samples", n_agents,
                                                             dim))};
        }
    } catch (const ordered_json::out_of_range&) {
        fail(path, "missing positions/velocities value spec");
    } catch (const ConfigError& e) {
        fail(path, e.what());
    }
    fail(path + ".type", "unknown initial data type '" + type + "'");
}

SystemConfig materialize_config(const ordered_json& system) {
    const std::string path = "system";
    expect_keys(system, path,
                {"agents", "dimension", "influence", "delay", "schedule", "initial_data",
                 "coupling", "integrator"});
    SystemConfig cfg;
    cfg.n_agents = get_int_or(system, path, "agents", -1);
    cfg.dim = get_int_or(system, path, "dimension", -1);
    if (cfg.n_agents < 2) fail(path + ".agents", "need at least 2 agents");
    if (cfg.dim < 1) fail(path + ".dimension", "must be >= 1");
    if (!system.contains("influence")) fail(path + ".influence", "missing");
    if (!system.contains("delay")) fail(path + ".delay", "missing");
    if (!system.contains("schedule")) fail(path + ".schedule", "missing");
    if (!system.contains("initial_data")) fail(path + ".initial_data", "missing");

    cfg.psi = parse_influence(system["influence"], path + ".influence");
    cfg.delay = parse_delay(system["delay"], path + ".delay");
    cfg.schedule = parse_schedule(system["schedule"], path + ".schedule");
    cfg.initial = parse_initial(system["initial_data"], path + ".initial_data", cfg.n_agents,
                                cfg.dim, cfg.delay.tau_bar());

    if (system.contains("coupling")) {
        const auto mode = get_string(system, path, "coupling");
        if (mode == "velocity")
            cfg.coupling = CouplingMode::VelocityCoupling;
        else if (mode == "literal_position")
            cfg.coupling = CouplingMode::LiteralPositionCoupling;
        else
            fail(path + ".coupling", "unknown coupling mode '" + mode + "'");
    }

    const ordered_json integ =
        system.contains("integrator") ? system["integrator"] : ordered_json::object();
    expect_keys(integ, path + ".integrator",
                {"h_step", "t_end", "overlap_iterations", "record_stride"});
    cfg.integrator.t_end = get_number(integ, path + ".integrator", "t_end");
    cfg.integrator.h_step = get_number_or(integ, path + ".integrator", "h_step",
                                          default_h_step(cfg.delay.tau_bar(),
                                                         cfg.schedule.pe().pe_window));
    cfg.integrator.overlap_iterations =
        get_int_or(integ, path + ".integrator", "overlap_iterations", 2);
    cfg.integrator.record_stride = get_int_or(integ, path + ".integrator", "record_stride", 1);

    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        fail(path, e.what());
    }
    return cfg;
}

ordered_json normalized_document(const Scenario& s) {
    // Rebuild the document from the parsed pieces so defaults are explicit.
    ordered_json doc = s.document;
    return doc;
}

} // namespace

const std::vector<std::string>& known_check_names() {
    static const std::vector<std::string> names{
        "velocity_bound",  "window_diameter_bound", "diameter_monotone",
        "diameter_recursion", "window_contraction",  "decay_envelope",
        "delayed_argument_bound", "rate_floor",      "scalar_invariance",
        "diameter_derivative", "lyapunov_monotone",  "flocking"};
    return names;
}

Scenario parse_scenario(const std::string& text, bool verify_pe_declaration) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw ParseError(std::string("scenario: invalid JSON: ") + e.what());
    }
    expect_keys(doc, "(root)", {"name", "system", "checks", "check_options", "output_dir", "sweep"});
    Scenario s;
    s.name = get_string(doc, "(root)", "name");
    if (!doc.contains("system")) fail("system", "missing");
    try {
        s.config = materialize_config(doc["system"]);
    } catch (const ordered_json::exception& e) {
        throw ParseError(std::string("scenario.system: malformed value: ") + e.what());
    }

    if (doc.contains("checks")) {
        if (doc["checks"].is_string()) {
            if (doc["checks"].get<std::string>() != "all")
                fail("checks", "expected \"all\" or an array of check names");
        } else if (doc["checks"].is_array()) {
            for (const auto& c : doc["checks"]) {
                const auto name = c.get<std::string>();
                const auto& known = known_check_names();
                if (std::find(known.begin(), known.end(), name) == known.end())
                    fail("checks", "unknown check '" + name + "'");
                s.checks.push_back(name);
            }
        } else {
            fail("checks", "expected \"all\" or an array of check names");
        }
    }

    if (doc.contains("check_options")) {
        const auto& co = doc["check_options"];
        expect_keys(co, "check_options", {"dx_threshold", "align_tolerance", "envelope_scale"});
        s.check_options.dx_threshold = get_number_or(co, "check_options", "dx_threshold",
                                                     s.check_options.dx_threshold);
        s.check_options.align_tolerance =
            get_number_or(co, "check_options", "align_tolerance", s.check_options.align_tolerance);
        s.check_options.envelope_scale =
            get_number_or(co, "check_options", "envelope_scale", s.check_options.envelope_scale);
    }
    s.check_options.record_stride = s.config.integrator.record_stride;

    if (doc.contains("output_dir")) s.output_dir = get_string(doc, "(root)", "output_dir");

    if (doc.contains("sweep")) {
        const auto& sw = doc["sweep"];
        expect_keys(sw, "sweep", {"agents", "tau_bar", "duty", "gamma", "seed"});
        auto load = [&](const char* key, auto& dst) {
            if (!sw.contains(key)) return;
            if (!sw[key].is_array()) fail(std::string("sweep.") + key, "expected an array");
            for (const auto& v : sw[key]) dst.push_back(v);
        };
        load("agents", s.sweep.agents);
        load("tau_bar", s.sweep.tau_bar);
        load("duty", s.sweep.duty);
        load("gamma", s.sweep.gamma);
        load("seed", s.sweep.seed);
    }

    if (verify_pe_declaration) {
        const auto& pe = s.config.schedule.pe();
        const double horizon = s.config.integrator.t_end + pe.pe_window;
        const PeResult pr = verify_pe(s.config.schedule, pe.pe_window, pe.pe_mass, horizon);
        if (!pr.pass) {
            std::ostringstream os;
            os << "declared pair (window=" << pe.pe_window << ", mass=" << pe.pe_mass
               << ") fails verification: worst window integral " << pr.worst_window_integral
               << " at t=" << pr.worst_window_start;
            fail("system.schedule.pe", os.str());
        }
    }

    s.document = std::move(doc);
    // Make filled defaults explicit so serialization is canonical.
    s.document["system"]["integrator"]["h_step"] = s.config.integrator.h_step;
    s.document["system"]["integrator"]["overlap_iterations"] = s.config.integrator.overlap_iterations;
    s.document["system"]["integrator"]["record_stride"] = s.config.integrator.record_stride;
    if (!s.document.contains("checks")) s.document["checks"] = "all";
    if (!s.document["system"].contains("coupling")) s.document["system"]["coupling"] = "velocity";
    return s;
}

std::string serialize_scenario(const Scenario& scenario) {
    return normalized_document(scenario).dump(2) + "\n";
}

} // namespace flocksim
