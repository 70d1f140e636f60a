#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "funcbandit/cli/cli.hpp"
#include "funcbandit/core/format.hpp"
#include "funcbandit/core/spec_text.hpp"
#include "funcbandit/errors.hpp"
#include "funcbandit/functionals/evaluate.hpp"
#include "funcbandit/inference/inference.hpp"
#include "funcbandit/policies/policy.hpp"

namespace fb::cli {

namespace {

// Flags shared by simulate, sweep and table1; unset flags leave the config alone.
struct ExperimentFlags {
    std::string config;
    std::optional<std::string> functional;
    std::vector<std::string> functionals;
    std::vector<std::string> policies;
    std::vector<std::string> instances;
    std::optional<std::string> preset;
    std::vector<double> grid;
    std::optional<std::string> data;
    std::optional<std::string> transform;
    bool flip = false;
    std::optional<std::size_t> n;
    std::vector<std::size_t> ns;
    std::optional<std::size_t> reps;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> workers;
    bool all_checkpoints = false;
    bool svg = false;
    bool logx = false;
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& f, bool table) {
    cmd->add_option("--config", f.config, "JSON config file");
    if (table) {
        cmd->add_option("--functional", f.functionals, "functional spec (repeatable, one table row each)");
        cmd->add_option("--n", f.ns, "horizon (repeatable, one column each)");
    } else {
        cmd->add_option("--functional", f.functional, "functional spec, e.g. gini-welfare");
        cmd->add_option("--policy", f.policies, "policy spec (repeatable), e.g. fucb:beta=2.01");
        cmd->add_option("--instance", f.instances, "arms separated by ';', e.g. 'beta:s1=1,s2=1;beta:s1=1,s2=2'");
        cmd->add_option("--n", f.n, "horizon");
        cmd->add_flag("--all-checkpoints", f.all_checkpoints, "record every round");
        cmd->add_flag("--svg", f.svg, "also write an SVG chart of the maximal expected regret");
        cmd->add_flag("--logx", f.logx, "log-scaled x axis in the SVG");
        cmd->add_option("--data", f.data, "CSV file arm_id,outcome; resample from its arms");
        cmd->add_option("--transform", f.transform, "transform for --data");
        cmd->add_flag("--flip", f.flip, "map x to 1 - x after the transform");
    }
    cmd->add_option("--preset", f.preset, "Beta(1,p) pair grid: paper21 or paper11");
    cmd->add_option("--grid", f.grid, "explicit Beta(1,p) grid values");
    cmd->add_option("--reps", f.reps, "replications per instance");
    cmd->add_option("--seed", f.seed, "master seed (falls back to FB_SEED)");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--workers", f.workers, "worker threads");
}

std::uint64_t resolve_seed(const ExperimentConfig& c) {
    if (c.seed) return *c.seed;
    if (const char* env = std::getenv("FB_SEED")) {
        const long long v = parse_integer(env, "FB_SEED");
        if (v < 0) throw ConfigError("FB_SEED must be non-negative");
        return static_cast<std::uint64_t>(v);
    }
    return 1;
}

ExperimentConfig merge(const ExperimentFlags& f) {
    ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
    if (f.functional) c.functional = *f.functional;
    if (!f.functionals.empty()) c.functionals = f.functionals;
    if (!f.policies.empty()) c.policies = f.policies;
    auto clear_sources = [&] {
        c.instances.clear();
        c.grid.reset();
        c.grid_values.clear();
        c.data.reset();
    };
    if (!f.instances.empty()) {
        clear_sources();
        for (const auto& text : f.instances) c.instances.push_back(split_top_level(text, ';'));
    }
    if (f.preset) {
        clear_sources();
        c.grid = *f.preset;
    }
    if (!f.grid.empty()) {
        clear_sources();
        c.grid_values = f.grid;
    }
    if (f.data) {
        clear_sources();
        c.data = DataSource{*f.data, f.transform.value_or("none"), f.flip, {}};
    } else if (c.data) {
        if (f.transform) c.data->transform = *f.transform;
        if (f.flip) c.data->flip = true;
    }
    if (f.n) c.n = *f.n;
    if (!f.ns.empty()) c.ns = f.ns;
    if (f.reps) c.reps = *f.reps;
    if (f.seed) c.seed = *f.seed;
    if (f.out) c.out = *f.out;
    if (f.workers) c.workers = *f.workers;
    if (f.all_checkpoints) c.checkpoints = "all";
    return c;
}

std::vector<std::size_t> checkpoints_of(const ExperimentConfig& c) {
    if (c.checkpoints == "list") return c.checkpoint_list;
    return sim::default_checkpoints(c.n, c.checkpoints == "all");
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw DataError("failed writing '" + path.string() + "'");
}

sim::SweepResult run_sweep(const ExperimentConfig& c) {
    std::vector<policy::PolicyRule> rules;
    for (const auto& p : c.policies) rules.push_back(policy::decode(p));
    const auto grid = build_instances(c, c.functional);
    return sim::max_regret_sweep(grid, rules, c.n, c.reps, resolve_seed(c), checkpoints_of(c), c.workers);
}

int cmd_simulate(const ExperimentFlags& f, bool sweep_only, std::ostream& out) {
    const auto c = merge(f);
    validate_config(c, true);
    const auto sweep = run_sweep(c);
    const std::filesystem::path dir(c.out);
    std::ostringstream csv;
    if (sweep_only) {
        sim::write_maxregret_csv(csv, sweep);
        write_file(dir / "maxregret.csv", csv.str());
        out << "wrote " << (dir / "maxregret.csv").string() << "\n";
    } else {
        std::vector<std::string> names;
        std::vector<std::vector<sim::MeanTrajectory>> runs;
        for (const auto& p : sweep.policies) {
            names.push_back(p.policy);
            runs.push_back(p.per_instance);
        }
        sim::write_trajectory_csv(csv, names, runs);
        write_file(dir / "trajectory.csv", csv.str());
        out << "wrote " << (dir / "trajectory.csv").string() << "\n";
    }
    if (f.svg) {
        write_file(dir / "maxregret.svg", render_svg(sweep, f.logx));
        out << "wrote " << (dir / "maxregret.svg").string() << "\n";
    }
    for (const auto& p : sweep.policies) {
        out << p.policy << " t=" << sweep.checkpoints.back() << " max_expected_regret=" << format_short(p.max_regret.back())
            << "\n";
    }
    return 0;
}

int cmd_table1(const ExperimentFlags& f, std::ostream& out) {
    auto c = merge(f);
    if (c.functionals.empty())
        c.functionals = {"gini-welfare", "schutz-welfare", "atkinson-welfare:eps=0.1", "atkinson-welfare:eps=0.5"};
    if (c.ns.empty()) c.ns = {1000, 5000, 10000, 20000, 40000, 60000};
    if (!c.grid && c.grid_values.empty()) c.grid = "paper11";
    if (!c.instances.empty() || c.data) throw ConfigError("table1 runs on a Beta(1,p) grid: use 'grid' or --preset");
    validate_config(c, false);
    std::vector<func::FunctionalSpec> specs;
    for (const auto& s : c.functionals) specs.push_back(func::decode(s));
    const auto values = c.grid ? (*c.grid == "paper21" ? sim::paper21_values() : sim::paper11_values()) : c.grid_values;
    const auto table = sim::relative_regret_table(c.ns, values, specs, c.reps, resolve_seed(c), c.workers);
    std::ostringstream csv;
    sim::write_table_csv(csv, table);
    const std::filesystem::path dir(c.out);
    write_file(dir / "table.csv", csv.str());
    for (const auto& row : table.rows) {
        out << row.functional;
        for (double r : row.ratios) out << " " << format_short(std::round(r * 100.0) / 100.0);
        out << "\n";
    }
    out << "wrote " << (dir / "table.csv").string() << "\n";
    return 0;
}

struct DataFlags {
    std::string functional;
    std::string data;
    std::string transform = "none";
    bool flip = false;
    double alpha = 0.05;
};

std::vector<sim::EmpiricalArm> read_data(const DataFlags& f) {
    return sim::ingest_empirical(f.data, sim::parse_transform(f.transform), f.flip);
}

EmpiricalCdf pool_of(const sim::EmpiricalArm& a, const SupportInterval& s) {
    return EmpiricalCdf(std::vector<double>(std::get<ResamplerArm>(a.dist.variant()).pool->samples()), s);
}

int cmd_eval(const DataFlags& f, std::ostream& out) {
    const auto spec = func::decode(f.functional);
    for (const auto& a : read_data(f)) out << a.id << " " << format_double(func::evaluate(spec, pool_of(a, spec.support))) << "\n";
    return 0;
}

int cmd_ci(const DataFlags& f, std::ostream& out) {
    const auto spec = func::decode(f.functional);
    out << "arm center lower upper half_width level\n";
    for (const auto& a : read_data(f)) {
        const auto ci = inference::dkwm_ci(spec, pool_of(a, spec.support), f.alpha);
        out << a.id << " " << format_double(ci.center) << " " << format_double(ci.lower()) << " "
            << format_double(ci.upper()) << " " << format_double(ci.half_width) << " " << format_short(ci.level) << "\n";
    }
    return 0;
}

struct FormulaFlags {
    std::string kind;
    std::optional<double> c;
    std::optional<std::string> functional;
    double delta = 0.0;
    std::size_t k = 2;
    double alpha = 0.1;
    double eta = 0.1;
    double beta = 0.0;
    std::size_t n = 0;
    std::vector<double> gaps;
    double x = 1.0;
};

double constant_of(const FormulaFlags& f) {
    if (f.c && f.functional) throw ConfigError("give either --c or --functional, not both");
    if (f.c) return *f.c;
    if (f.functional) return func::lipschitz_constant(func::decode(*f.functional));
    throw ConfigError("--c (or --functional) is required");
}

int cmd_samplesize(const FormulaFlags& f, std::ostream& out) {
    const double c = constant_of(f);
    if (f.kind == "etc-es") {
        out << inference::n1_for_es_regret(c, f.delta, f.k) << "\n";
    } else if (f.kind == "etc-t") {
        out << inference::n1_for_power(c, f.delta, f.alpha, f.eta) << "\n";
    } else {
        throw ConfigError("samplesize kind must be etc-es or etc-t, got '" + f.kind + "'");
    }
    return 0;
}

int cmd_bound(const FormulaFlags& f, std::ostream& out) {
    const double c = constant_of(f);
    if (f.kind == "hpb") {
        const auto r = inference::hpb_bound(f.gaps, c, f.beta, f.n, f.x);
        out << format_double(r.threshold) << "\nthreshold " << format_double(r.threshold) << "\nprob_bound "
            << format_double(r.prob_bound) << "\n";
        return 0;
    }
    inference::BoundReport r;
    if (f.kind == "fucb") {
        r = inference::fucb_regret_bound(f.beta, c, f.k, f.n);
    } else if (f.kind == "famoss") {
        r = inference::famoss_regret_bound(f.beta, c, f.k, f.n);
    } else {
        throw ConfigError("bound kind must be fucb, famoss or hpb, got '" + f.kind + "'");
    }
    out << format_double(r.bound) << "\n";
    for (const auto& [name, v] : r.breakdown) out << name << " " << format_double(v) << "\n";
    return 0;
}

struct IngestFlags {
    std::string data;
    std::string transform = "unit-rescale";
    bool flip = false;
    std::vector<std::string> arms;
    std::optional<std::string> out;
};

int cmd_ingest(const IngestFlags& f, std::ostream& out) {
    const auto arms = sim::ingest_empirical(f.data, sim::parse_transform(f.transform), f.flip, f.arms);
    std::ostringstream csv;
    csv << "arm_id,outcome\n";
    for (const auto& a : arms) {
        for (double x : std::get<ResamplerArm>(a.dist.variant()).pool->samples()) csv << a.id << "," << format_double(x) << "\n";
    }
    if (f.out) {
        write_file(*f.out, csv.str());
        for (const auto& a : arms) out << a.id << " " << a.observations << " observations\n";
        out << "wrote " << *f.out << "\n";
    } else {
        out << csv.str();
    }
    return 0;
}

}  // namespace

std::string render_svg(const sim::SweepResult& sweep, bool logx) {
    const double w = 640, h = 400, left = 60, right = 20, top = 20, bottom = 40;
    const auto& t = sweep.checkpoints;
    auto xv = [&](std::size_t v) { return logx ? std::log10(static_cast<double>(v)) : static_cast<double>(v); };
    const double x0 = xv(t.front());
    const double x1 = std::max(xv(t.back()), x0 + 1e-9);
    double ymax = 0.0;
    for (const auto& p : sweep.policies) {
        for (double v : p.max_regret) ymax = std::max(ymax, v);
    }
    if (!(ymax > 0.0)) ymax = 1.0;
    auto px = [&](std::size_t v) { return left + (xv(v) - x0) / (x1 - x0) * (w - left - right); };
    auto py = [&](double v) { return h - bottom - v / ymax * (h - top - bottom); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(2);
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<line x1=\"" << left << "\" y1=\"" << h - bottom << "\" x2=\"" << w - right << "\" y2=\"" << h - bottom
      << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << h - bottom
      << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << w / 2 << "\" y=\"" << h - 8 << "\" text-anchor=\"middle\" font-size=\"12\">t"
      << (logx ? " (log scale)" : "") << "</text>\n";
    s << "<text x=\"" << left - 6 << "\" y=\"" << top + 4 << "\" text-anchor=\"end\" font-size=\"10\">"
      << format_short(ymax) << "</text>\n";
    s << "<text x=\"" << left - 6 << "\" y=\"" << h - bottom << "\" text-anchor=\"end\" font-size=\"10\">0</text>\n";
    for (std::size_t i = 0; i < sweep.policies.size(); ++i) {
        const auto& p = sweep.policies[i];
        const char* color = colors[i % 6];
        s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t j = 0; j < t.size(); ++j) s << (j ? " " : "") << px(t[j]) << "," << py(p.max_regret[j]);
        s << "\"/>\n";
        s << "<text x=\"" << left + 10 << "\" y=\"" << top + 14 * (i + 1) << "\" font-size=\"11\" fill=\"" << color
          << "\">" << p.policy << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"funcbandit: bandit policies for distributional functionals"};
    app.name("funcbandit");
    app.require_subcommand(1);
    app.set_version_flag("--version", "funcbandit 1.0");

    ExperimentFlags sim_flags, sweep_flags, table_flags;
    auto* simulate = app.add_subcommand("simulate", "expected regret per instance, writes trajectory.csv");
    add_experiment_flags(simulate, sim_flags, false);
    auto* sweep = app.add_subcommand("sweep", "maximal expected regret over instances, writes maxregret.csv");
    add_experiment_flags(sweep, sweep_flags, false);
    auto* table1 = app.add_subcommand("table1", "ETC over F-UCB maximal regret ratios, writes table.csv");
    add_experiment_flags(table1, table_flags, true);

    DataFlags eval_flags, ci_flags;
    auto* eval = app.add_subcommand("eval", "evaluate a functional on each arm of a data file");
    auto* ci = app.add_subcommand("ci", "DKWM confidence interval per arm");
    for (auto [cmd, f] : {std::pair{eval, &eval_flags}, std::pair{ci, &ci_flags}}) {
        cmd->add_option("--functional", f->functional, "functional spec")->required();
        cmd->add_option("--data", f->data, "CSV file arm_id,outcome")->required();
        cmd->add_option("--transform", f->transform, "transform into [0, 1]");
        cmd->add_flag("--flip", f->flip, "map x to 1 - x");
    }
    ci->add_option("--alpha", ci_flags.alpha, "1 - confidence level");

    FormulaFlags size_flags, bound_flags;
    auto* samplesize = app.add_subcommand("samplesize", "exploration length n1 (etc-es or etc-t)");
    samplesize->add_option("kind", size_flags.kind, "etc-es or etc-t")->required();
    samplesize->add_option("--c", size_flags.c, "Lipschitz constant");
    samplesize->add_option("--functional", size_flags.functional, "take C from this functional");
    samplesize->add_option("--delta", size_flags.delta, "delta (etc-es) or detectable gap (etc-t)")->required();
    samplesize->add_option("--k", size_flags.k, "number of arms");
    samplesize->add_option("--alpha", size_flags.alpha, "test size");
    samplesize->add_option("--eta", size_flags.eta, "type II error");
    auto* bound = app.add_subcommand("bound", "theoretical regret bounds (fucb, famoss, hpb)");
    bound->add_option("kind", bound_flags.kind, "fucb, famoss or hpb")->required();
    bound->add_option("--c", bound_flags.c, "Lipschitz constant");
    bound->add_option("--functional", bound_flags.functional, "take C from this functional");
    bound->add_option("--beta", bound_flags.beta, "policy parameter")->required();
    bound->add_option("--k", bound_flags.k, "number of arms");
    bound->add_option("--n", bound_flags.n, "horizon")->required();
    bound->add_option("--gaps", bound_flags.gaps, "per-arm gaps (hpb)");
    bound->add_option("--x", bound_flags.x, "threshold multiplier x >= 1 (hpb)");

    IngestFlags ingest_flags;
    auto* ingest = app.add_subcommand("ingest", "transform an arm_id,outcome file into [0, 1]");
    ingest->add_option("--data", ingest_flags.data, "CSV file arm_id,outcome")->required();
    ingest->add_option("--transform", ingest_flags.transform, "unit-rescale, trim-top:q=.., normal-percentile:loc=..,scale=.., duration:max-weeks=..");
    ingest->add_flag("--flip", ingest_flags.flip, "map x to 1 - x");
    ingest->add_option("--arms", ingest_flags.arms, "declared arm ids, in order");
    ingest->add_option("--out", ingest_flags.out, "output CSV (default stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }
    try {
        if (simulate->parsed()) return cmd_simulate(sim_flags, false, out);
        if (sweep->parsed()) return cmd_simulate(sweep_flags, true, out);
        if (table1->parsed()) return cmd_table1(table_flags, out);
        if (eval->parsed()) return cmd_eval(eval_flags, out);
        if (ci->parsed()) return cmd_ci(ci_flags, out);
        if (samplesize->parsed()) return cmd_samplesize(size_flags, out);
        if (bound->parsed()) return cmd_bound(bound_flags, out);
        if (ingest->parsed()) return cmd_ingest(ingest_flags, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        err << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

}  // namespace fb::cli
