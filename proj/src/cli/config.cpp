#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "funcbandit/cli/cli.hpp"
#include "funcbandit/core/format.hpp"
#include "funcbandit/core/spec_text.hpp"
#include "funcbandit/errors.hpp"
#include "funcbandit/functionals/spec.hpp"
#include "funcbandit/policies/policy.hpp"
#include "json.hpp"

namespace fb::cli {

using nlohmann::json;

namespace {

std::string str(const json& v, const std::string& key) {
    if (!v.is_string()) throw ConfigError("config field '" + key + "' must be a string");
    return v.get<std::string>();
}

std::size_t count(const json& v, const std::string& key) {
    if (!v.is_number_unsigned()) throw ConfigError("config field '" + key + "' must be a non-negative integer");
    return v.get<std::size_t>();
}

double number(const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError("config field '" + key + "' must be a number");
    return v.get<double>();
}

bool boolean(const json& v, const std::string& key) {
    if (!v.is_boolean()) throw ConfigError("config field '" + key + "' must be true or false");
    return v.get<bool>();
}

template <class F>
auto list(const json& v, const std::string& key, F each) {
    if (!v.is_array()) throw ConfigError("config field '" + key + "' must be an array");
    std::vector<decltype(each(v, key))> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(each(v[i], key + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    for (const auto& part : split_top_level(text, ';')) out.push_back(parse_double(part, what));
    return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig c;
    for (const auto& [key, v] : j.items()) {
        if (key == "functional") {
            c.functional = str(v, key);
        } else if (key == "functionals") {
            c.functionals = list(v, key, str);
        } else if (key == "policies") {
            c.policies = list(v, key, str);
        } else if (key == "instances") {
            c.instances = list(v, key, [](const json& inst, const std::string& k) { return list(inst, k, str); });
        } else if (key == "grid") {
            if (v.is_string()) {
                c.grid = v.get<std::string>();
            } else {
                c.grid_values = list(v, key, number);
            }
        } else if (key == "data") {
            if (!v.is_object()) throw ConfigError("config field 'data' must be an object");
            DataSource d;
            bool has_path = false;
            for (const auto& [dk, dv] : v.items()) {
                const std::string name = "data." + dk;
                if (dk == "path") {
                    d.path = str(dv, name);
                    has_path = true;
                } else if (dk == "transform") {
                    d.transform = str(dv, name);
                } else if (dk == "flip") {
                    d.flip = boolean(dv, name);
                } else if (dk == "arms") {
                    d.arms = list(dv, name, str);
                } else {
                    throw ConfigError("unknown config field '" + name + "'");
                }
            }
            if (!has_path) throw ConfigError("config field 'data.path' is required");
            c.data = d;
        } else if (key == "n") {
            c.n = count(v, key);
        } else if (key == "ns") {
            c.ns = list(v, key, count);
        } else if (key == "reps") {
            c.reps = count(v, key);
        } else if (key == "seed") {
            c.seed = static_cast<std::uint64_t>(count(v, key));
        } else if (key == "checkpoints") {
            if (v.is_string()) {
                c.checkpoints = v.get<std::string>();
                if (c.checkpoints != "geometric" && c.checkpoints != "all")
                    throw ConfigError("config field 'checkpoints' must be \"geometric\", \"all\" or a list");
            } else {
                c.checkpoints = "list";
                c.checkpoint_list = list(v, key, count);
            }
        } else if (key == "out") {
            c.out = str(v, key);
        } else if (key == "workers") {
            c.workers = count(v, key);
        } else {
            throw ConfigError("unknown config field '" + key + "'");
        }
    }
    return c;
}

std::string config_to_json(const ExperimentConfig& c) {
    json j;
    j["functional"] = c.functional;
    if (!c.functionals.empty()) j["functionals"] = c.functionals;
    j["policies"] = c.policies;
    if (!c.instances.empty()) j["instances"] = c.instances;
    if (c.grid) j["grid"] = *c.grid;
    if (!c.grid_values.empty()) j["grid"] = c.grid_values;
    if (c.data) {
        j["data"] = {{"path", c.data->path}, {"transform", c.data->transform}, {"flip", c.data->flip}, {"arms", c.data->arms}};
    }
    j["n"] = c.n;
    if (!c.ns.empty()) j["ns"] = c.ns;
    j["reps"] = c.reps;
    if (c.seed) j["seed"] = *c.seed;
    if (c.checkpoints == "list") {
        j["checkpoints"] = c.checkpoint_list;
    } else {
        j["checkpoints"] = c.checkpoints;
    }
    j["out"] = c.out;
    j["workers"] = c.workers;
    return j.dump(2) + "\n";
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

ArmDistribution parse_arm(const std::string& text) {
    ParamReader r(parse_spec_text(text, "arm"), "arm '" + text + "'");
    std::optional<ArmDistribution> out;
    if (r.name() == "beta") {
        const double s1 = r.take_double("s1", 1.0);
        const double s2 = r.take_double("s2", 1.0);
        if (!(s1 > 0.0 && s2 > 0.0)) throw ConfigError("arm '" + text + "': beta shapes must be positive");
        out = ArmDistribution::beta(s1, s2);
    } else if (r.name() == "uniform") {
        out = ArmDistribution::beta(1.0, 1.0);
    } else if (r.name() == "point") {
        auto x = r.take_double("x");
        if (!x) throw ConfigError("arm '" + text + "': point needs x");
        out = ArmDistribution::point_mass(*x);
    } else if (r.name() == "discrete") {
        auto values = r.take("values");
        auto probs = r.take("probs");
        if (!values || !probs) throw ConfigError("arm '" + text + "': discrete needs values and probs");
        out = ArmDistribution::discrete(parse_number_list(*values, "values"), parse_number_list(*probs, "probs"));
    } else {
        throw ConfigError("unknown arm '" + r.name() + "' (known: beta, uniform, point, discrete)");
    }
    r.finish();
    return *out;
}

void validate_config(const ExperimentConfig& c, bool needs_policies) {
    auto field = [](const std::string& name, auto&& fn) {
        try {
            fn();
        } catch (const ConfigError& e) {
            throw ConfigError("config field '" + name + "': " + e.what());
        }
    };
    field("functional", [&] { (void)func::decode(c.functional); });
    for (std::size_t i = 0; i < c.functionals.size(); ++i)
        field("functionals[" + std::to_string(i) + "]", [&] { (void)func::decode(c.functionals[i]); });
    if (needs_policies && c.policies.empty()) throw ConfigError("config field 'policies': empty policy list");
    for (std::size_t i = 0; i < c.policies.size(); ++i)
        field("policies[" + std::to_string(i) + "]", [&] { (void)policy::decode(c.policies[i]); });
    const int sources = (!c.instances.empty()) + (c.grid.has_value() || !c.grid_values.empty()) + c.data.has_value();
    if (sources > 1) throw ConfigError("config fields 'instances', 'grid' and 'data' are mutually exclusive");
    for (std::size_t i = 0; i < c.instances.size(); ++i) {
        if (c.instances[i].size() < 2) throw ConfigError("config field 'instances[" + std::to_string(i) + "]': needs at least 2 arms");
        for (const auto& a : c.instances[i]) field("instances[" + std::to_string(i) + "]", [&] { (void)parse_arm(a); });
    }
    if (c.grid && *c.grid != "paper21" && *c.grid != "paper11")
        throw ConfigError("config field 'grid': unknown preset '" + *c.grid + "' (known: paper21, paper11)");
    for (double p : c.grid_values) {
        if (!(p > 0.0) || !std::isfinite(p)) throw ConfigError("config field 'grid': Beta parameters must be positive");
    }
    if (c.data) {
        field("data.transform", [&] { (void)sim::parse_transform(c.data->transform); });
        if (!std::filesystem::is_regular_file(c.data->path))
            throw ConfigError("config field 'data.path': file '" + c.data->path + "' does not exist");
    }
    if (c.n == 0) throw ConfigError("config field 'n': must be at least 1");
    for (std::size_t n : c.ns) {
        if (n == 0) throw ConfigError("config field 'ns': horizons must be at least 1");
    }
    if (c.reps == 0) throw ConfigError("config field 'reps': must be at least 1");
    if (c.workers == 0) throw ConfigError("config field 'workers': must be at least 1");
    if (c.checkpoints == "list") {
        if (c.checkpoint_list.empty()) throw ConfigError("config field 'checkpoints': empty list");
        for (std::size_t i = 0; i < c.checkpoint_list.size(); ++i) {
            if (c.checkpoint_list[i] < 1 || c.checkpoint_list[i] > c.n ||
                (i > 0 && c.checkpoint_list[i] <= c.checkpoint_list[i - 1]))
                throw ConfigError("config field 'checkpoints': must increase strictly within [1, n]");
        }
    } else if (c.checkpoints != "geometric" && c.checkpoints != "all") {
        throw ConfigError("config field 'checkpoints': unknown mode '" + c.checkpoints + "'");
    }
}

std::vector<sim::Instance> build_instances(const ExperimentConfig& c, const std::string& functional) {
    const auto spec = func::decode(functional);
    if (c.grid) return sim::beta_pair_grid(*c.grid == "paper21" ? sim::paper21_values() : sim::paper11_values(), spec);
    if (!c.grid_values.empty()) {
        auto g = sim::beta_pair_grid(c.grid_values, spec);
        if (g.empty()) throw ConfigError("config field 'grid': needs at least two distinct values");
        return g;
    }
    if (c.data) {
        auto arms = sim::ingest_empirical(c.data->path, sim::parse_transform(c.data->transform), c.data->flip, c.data->arms);
        if (arms.size() < 2) throw DataError("data file has fewer than 2 arms");
        std::vector<ArmDistribution> dists;
        std::string label;
        for (const auto& a : arms) {
            dists.push_back(a.dist);
            label += (label.empty() ? "" : " x ") + a.id;
        }
        return {sim::make_instance(std::move(dists), spec, label)};
    }
    if (c.instances.empty()) throw ConfigError("no instances: set 'instances', 'grid' or 'data'");
    std::vector<sim::Instance> out;
    for (const auto& inst : c.instances) {
        std::vector<ArmDistribution> dists;
        std::string label;
        for (const auto& a : inst) {
            dists.push_back(parse_arm(a));
            label += (label.empty() ? "" : " x ") + a;
        }
        out.push_back(sim::make_instance(std::move(dists), spec, label));
    }
    return out;
}

}  // namespace fb::cli
