#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "funcbandit/core/distribution.hpp"
#include "funcbandit/simulation/simulation.hpp"

namespace fb::cli {

struct DataSource {
    std::string path;
    std::string transform = "none";
    bool flip = false;
    std::vector<std::string> arms;
    bool operator==(const DataSource&) const = default;
};

// One JSON file; every key optional, unknown keys rejected. Exactly one of
// instances, grid and data selects the instances.
struct ExperimentConfig {
    std::string functional = "gini-welfare";
    std::vector<std::string> functionals;  // table1 rows
    std::vector<std::string> policies;
    std::vector<std::vector<std::string>> instances;  // arm specs per instance
    std::optional<std::string> grid;                  // paper21 | paper11
    std::vector<double> grid_values;
    std::optional<DataSource> data;
    std::size_t n = 1000;
    std::vector<std::size_t> ns;  // table1 horizons
    std::size_t reps = 1;
    std::optional<std::uint64_t> seed;
    std::string checkpoints = "geometric";  // geometric | all | list
    std::vector<std::size_t> checkpoint_list;
    std::string out = ".";
    std::size_t workers = 1;
    bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(const std::string& json_text);
std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

// "beta:s1=1,s2=2", "uniform", "point:x=0.5",
// "discrete:values=[0;0.5;1],probs=[0.25;0.25;0.5]".
ArmDistribution parse_arm(const std::string& text);

// Instances selected by the config, with oracle values for `functional`.
std::vector<sim::Instance> build_instances(const ExperimentConfig& cfg, const std::string& functional);

// Checks every spec string and referenced file. Throws ConfigError naming the field.
void validate_config(const ExperimentConfig& cfg, bool needs_policies);

// One polyline per policy over max_regret; log-scaled x axis when logx.
std::string render_svg(const sim::SweepResult& sweep, bool logx);

// Entry point; returns the process exit code (0 ok, 2 config, 3 data, 4 numeric).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fb::cli
