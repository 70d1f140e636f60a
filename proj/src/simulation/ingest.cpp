#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "funcbandit/core/format.hpp"
#include "funcbandit/core/spec_text.hpp"
#include "funcbandit/errors.hpp"
#include "funcbandit/simulation/simulation.hpp"

namespace fb::sim {

namespace {

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

Transform parse_transform(const std::string& text) {
    ParamReader r(parse_spec_text(text, "transform"), "transform '" + text + "'");
    Transform t;
    if (r.name() == "none") {
        t.kind = Transform::Kind::None;
    } else if (r.name() == "unit-rescale") {
        t.kind = Transform::Kind::UnitRescale;
    } else if (r.name() == "trim-top") {
        t.kind = Transform::Kind::TrimTop;
        t.q = r.take_double("q", 0.01);
        if (!(t.q >= 0.0 && t.q < 1.0)) throw ConfigError("trim-top needs q in [0, 1)");
    } else if (r.name() == "normal-percentile") {
        t.kind = Transform::Kind::NormalPercentile;
        t.loc = r.take_double("loc", 0.0);
        t.scale = r.take_double("scale", 1.0);
        if (!(t.scale > 0.0)) throw ConfigError("normal-percentile needs scale > 0");
    } else if (r.name() == "duration") {
        t.kind = Transform::Kind::Duration;
        t.max_weeks = r.take_double("max-weeks", 52.0);
        if (!(t.max_weeks > 1.0)) throw ConfigError("duration needs max-weeks > 1");
    } else {
        throw ConfigError("unknown transform '" + r.name() +
                          "' (known: none, unit-rescale, trim-top, normal-percentile, duration)");
    }
    r.finish();
    return t;
}

std::string encode(const Transform& t) {
    switch (t.kind) {
        case Transform::Kind::None: return "none";
        case Transform::Kind::UnitRescale: return "unit-rescale";
        case Transform::Kind::TrimTop: return join_spec_text("trim-top", {{"q", format_short(t.q)}});
        case Transform::Kind::NormalPercentile:
            return join_spec_text("normal-percentile", {{"loc", format_short(t.loc)}, {"scale", format_short(t.scale)}});
        case Transform::Kind::Duration: return join_spec_text("duration", {{"max-weeks", format_short(t.max_weeks)}});
    }
    return "";
}

std::vector<EmpiricalArm> ingest_empirical(std::istream& in, const Transform& transform, bool flip,
                                           const std::vector<std::string>& declared) {
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    std::vector<std::string> order = declared;
    std::map<std::string, std::vector<double>> data;
    for (const auto& id : declared) data[id];
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        line = trim(line);
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw DataError("line " + std::to_string(lineno) + ": expected two fields arm_id,outcome");
        const std::string id = trim(line.substr(0, comma));
        const std::string val = trim(line.substr(comma + 1));
        if (!header) {
            if (id != "arm_id" || val != "outcome") throw DataError("missing header arm_id,outcome");
            header = true;
            continue;
        }
        if (id.empty()) throw DataError("line " + std::to_string(lineno) + ": empty arm_id");
        double x;
        try {
            x = parse_double(val, "outcome");
        } catch (const ConfigError&) {
            throw DataError("line " + std::to_string(lineno) + ": outcome '" + val + "' is not a number");
        }
        if (!std::isfinite(x)) throw DataError("line " + std::to_string(lineno) + ": outcome is not finite");
        auto it = data.find(id);
        if (it == data.end()) {
            if (!declared.empty()) throw DataError("line " + std::to_string(lineno) + ": unknown arm id '" + id + "'");
            order.push_back(id);
            it = data.emplace(id, std::vector<double>{}).first;
        }
        it->second.push_back(x);
    }
    if (!header) throw DataError("empty input: missing header arm_id,outcome");
    for (const auto& id : order) {
        if (data[id].empty()) throw DataError("arm '" + id + "' has no observations");
    }
    if (order.empty()) throw DataError("no observations");

    switch (transform.kind) {
        case Transform::Kind::None: break;
        case Transform::Kind::UnitRescale: {
            double lo = INFINITY, hi = -INFINITY;
            for (const auto& [id, xs] : data) {
                for (double x : xs) {
                    lo = std::min(lo, x);
                    hi = std::max(hi, x);
                }
            }
            if (!(hi > lo)) throw DataError("unit-rescale needs at least two distinct outcomes");
            for (auto& [id, xs] : data) {
                for (double& x : xs) x = (x - lo) / (hi - lo);
            }
            break;
        }
        case Transform::Kind::TrimTop: {
            double hi = -INFINITY;
            for (auto& [id, xs] : data) {
                std::sort(xs.begin(), xs.end());
                const auto drop = static_cast<std::size_t>(std::floor(transform.q * static_cast<double>(xs.size()) + 1e-9));
                if (drop >= xs.size()) throw DataError("trim-top removes every observation of arm '" + id + "'");
                xs.resize(xs.size() - drop);
                hi = std::max(hi, xs.back());
            }
            if (!(hi > 0.0)) throw DataError("trim-top needs a positive maximum outcome");
            for (auto& [id, xs] : data) {
                for (double& x : xs) x /= hi;
            }
            break;
        }
        case Transform::Kind::NormalPercentile:
            for (auto& [id, xs] : data) {
                for (double& x : xs) x = normal_cdf((x - transform.loc) / transform.scale);
            }
            break;
        case Transform::Kind::Duration:
            for (auto& [id, xs] : data) {
                for (double& x : xs) x = 1.0 - (x - 1.0) / (transform.max_weeks - 1.0);
            }
            break;
    }
    std::vector<EmpiricalArm> out;
    for (const auto& id : order) {
        auto xs = data[id];
        for (double& x : xs) {
            if (flip) x = 1.0 - x;
            if (!(x >= 0.0 && x <= 1.0))
                throw DataError("arm '" + id + "': transformed outcome " + format_double(x) + " outside [0, 1]");
        }
        const std::size_t m = xs.size();
        out.push_back(EmpiricalArm{id, ArmDistribution::resampler(EmpiricalCdf(std::move(xs), {})), m});
    }
    return out;
}

std::vector<EmpiricalArm> ingest_empirical(const std::string& path, const Transform& transform, bool flip,
                                           const std::vector<std::string>& declared) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    return ingest_empirical(in, transform, flip, declared);
}

void write_trajectory_csv(std::ostream& out, const std::vector<std::string>& policies,
                          const std::vector<std::vector<MeanTrajectory>>& runs) {
    out << "policy,instance,rep,t,regret\n";
    for (std::size_t p = 0; p < policies.size(); ++p) {
        for (std::size_t i = 0; i < runs[p].size(); ++i) {
            const auto& m = runs[p][i];
            for (std::size_t r = 0; r < m.runs.size(); ++r) {
                for (std::size_t j = 0; j < m.checkpoints.size(); ++j) {
                    out << csv_field(policies[p]) << ',' << i << ',' << r << ',' << m.checkpoints[j] << ','
                        << format_double(m.runs[r].regret[j]) << '\n';
                }
            }
        }
    }
}

void write_maxregret_csv(std::ostream& out, const SweepResult& sweep) {
    out << "policy,t,max_expected_regret,argmax_instance\n";
    for (const auto& p : sweep.policies) {
        for (std::size_t j = 0; j < sweep.checkpoints.size(); ++j) {
            out << csv_field(p.policy) << ',' << sweep.checkpoints[j] << ',' << format_double(p.max_regret[j]) << ','
                << p.argmax[j] << '\n';
        }
    }
}

void write_table_csv(std::ostream& out, const RelativeRegretTable& table) {
    out << "functional,n,ratio\n";
    for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < table.ns.size(); ++j) {
            out << csv_field(row.functional) << ',' << table.ns[j] << ',' << format_double(row.ratios[j]) << '\n';
        }
    }
}

}  // namespace fb::sim
