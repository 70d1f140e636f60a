#include "funcbandit/policies/policy.hpp"

#include <cmath>
#include <limits>
#include <type_traits>

#include "funcbandit/core/format.hpp"
#include "funcbandit/core/spec_text.hpp"
#include "funcbandit/errors.hpp"
#include "funcbandit/functionals/evaluate.hpp"
#include "funcbandit/inference/inference.hpp"

namespace fb::policy {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* explore_name(Exploration e) { return e == Exploration::Cyclic ? "cyclic" : "uniform"; }

Exploration parse_explore(const std::optional<std::string>& text, Exploration fallback) {
    if (!text) return fallback;
    if (*text == "cyclic") return Exploration::Cyclic;
    if (*text == "uniform" || *text == "uniform-random") return Exploration::UniformRandom;
    throw ConfigError("explore must be cyclic or uniform, got '" + *text + "'");
}

double parse_beta(ParamReader& r, double fallback, bool allow_optimal) {
    auto text = r.take("beta");
    if (!text) return fallback;
    if (allow_optimal && *text == "optimal") return 2.0 + std::sqrt(2.0);
    return parse_double(*text, "beta");
}

// ceil(n^{2/3}) in exact integer arithmetic
std::size_t ceil_two_thirds(std::size_t n) {
    using u128 = unsigned __int128;
    const u128 sq = static_cast<u128>(n) * n;
    auto cube = [](std::size_t c) { return static_cast<u128>(c) * c * c; };
    std::size_t c = static_cast<std::size_t>(std::llround(std::cbrt(static_cast<double>(n) * static_cast<double>(n))));
    while (cube(c) < sq) ++c;
    while (c > 0 && cube(c - 1) >= sq) --c;
    return c;
}

Exploration exploration_of(const PolicyRule& rule) {
    if (const auto* p = std::get_if<ETCHorizon>(&rule)) return p->explore;
    if (const auto* p = std::get_if<ETCES>(&rule)) return p->explore;
    if (const auto* p = std::get_if<ETCT>(&rule)) return p->explore;
    return Exploration::Cyclic;
}

bool is_etc(const PolicyRule& rule) {
    return std::holds_alternative<ETCHorizon>(rule) || std::holds_alternative<ETCES>(rule) ||
           std::holds_alternative<ETCT>(rule);
}

double value_of(PolicyState& s, std::size_t i) {
    if (s.pulls[i] == 0) return kNaN;
    if (std::isnan(s.values[i])) s.values[i] = s.estimates[i].value();
    return s.values[i];
}

}  // namespace

double fucb_bonus(double c, double beta, std::size_t t, std::size_t s) {
    return c * std::sqrt(beta * std::log(static_cast<double>(t)) / (2.0 * static_cast<double>(s)));
}

double famoss_bonus(double c, double beta, std::size_t t, std::size_t s, std::size_t arms) {
    const double ratio = static_cast<double>(t - 1) / (static_cast<double>(arms) * static_cast<double>(s));
    const double logp = std::max(std::log(ratio), 0.0);
    return c * std::sqrt(beta / static_cast<double>(s) * logp);
}

const std::vector<RhoEntry>& rho_registry() {
    static const std::vector<RhoEntry> reg{
        {"fucb", 2.0, [](double c, double beta, std::size_t t, std::size_t s, std::size_t) {
             return fucb_bonus(c, beta, t, s);
         }},
        {"famoss", 0.25, [](double c, double beta, std::size_t t, std::size_t s, std::size_t k) {
             return famoss_bonus(c, beta, t, s, k);
         }},
    };
    return reg;
}

const RhoEntry& find_rho(const std::string& name) {
    for (const auto& e : rho_registry()) {
        if (e.name == name) return e;
    }
    throw ConfigError("unknown index bonus rho '" + name + "' (known: fucb, famoss)");
}

std::string rule_name(const PolicyRule& rule) {
    return std::visit(
        [](const auto& r) -> std::string {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, FUCB>) return "fucb";
            else if constexpr (std::is_same_v<T, FaMOSS>) return "famoss";
            else if constexpr (std::is_same_v<T, ETCHorizon>) return "etc-horizon";
            else if constexpr (std::is_same_v<T, ETCES>) return "etc-es";
            else if constexpr (std::is_same_v<T, ETCT>) return "etc-t";
            else return "generic";
        },
        rule);
}

bool is_anytime(const PolicyRule& rule) { return !std::holds_alternative<ETCHorizon>(rule); }

std::string encode(const PolicyRule& rule) {
    std::vector<std::pair<std::string, std::string>> kv;
    std::visit(
        [&](const auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, FUCB> || std::is_same_v<T, FaMOSS>) {
                kv.emplace_back("beta", format_short(r.beta));
            } else if constexpr (std::is_same_v<T, ETCHorizon>) {
                if (r.explore != Exploration::UniformRandom) kv.emplace_back("explore", explore_name(r.explore));
            } else if constexpr (std::is_same_v<T, ETCES>) {
                kv.emplace_back("delta", format_short(r.delta));
                if (r.explore != Exploration::Cyclic) kv.emplace_back("explore", explore_name(r.explore));
            } else if constexpr (std::is_same_v<T, ETCT>) {
                kv.emplace_back("delta", format_short(r.delta));
                kv.emplace_back("alpha", format_short(r.alpha));
                kv.emplace_back("eta", format_short(r.eta));
                if (r.explore != Exploration::Cyclic) kv.emplace_back("explore", explore_name(r.explore));
            } else {
                kv.emplace_back("rho", r.rho);
                kv.emplace_back("beta", format_short(r.beta));
            }
        },
        rule);
    return join_spec_text(rule_name(rule), kv);
}

PolicyRule decode(const std::string& text) {
    ParamReader r(parse_spec_text(text, "policy"), "policy '" + text + "'");
    PolicyRule out;
    const std::string& name = r.name();
    if (name == "fucb") {
        out = FUCB{parse_beta(r, 2.01, true)};
    } else if (name == "famoss") {
        out = FaMOSS{parse_beta(r, 1.0 / 3.99, false)};
    } else if (name == "etc-horizon") {
        out = ETCHorizon{parse_explore(r.take("explore"), Exploration::UniformRandom)};
    } else if (name == "etc-es") {
        auto d = r.take_double("delta");
        if (!d) throw ConfigError("etc-es needs delta");
        out = ETCES{*d, parse_explore(r.take("explore"), Exploration::Cyclic)};
    } else if (name == "etc-t") {
        auto d = r.take_double("delta");
        if (!d) throw ConfigError("etc-t needs delta");
        ETCT t;
        t.delta = *d;
        t.alpha = r.take_double("alpha", 0.1);
        t.eta = r.take_double("eta", 0.1);
        t.explore = parse_explore(r.take("explore"), Exploration::Cyclic);
        out = t;
    } else if (name == "generic") {
        GenericUCB g;
        if (auto rho = r.take("rho")) g.rho = *rho;
        g.beta = parse_beta(r, g.beta, false);
        out = g;
    } else {
        throw ConfigError("unknown policy '" + name + "' (known: fucb, famoss, etc-horizon, etc-es, etc-t, generic)");
    }
    r.finish();
    std::visit(
        [](const auto& rule) {
            using T = std::decay_t<decltype(rule)>;
            if constexpr (std::is_same_v<T, FUCB>) {
                if (!(rule.beta > 2.0)) throw ConfigError("fucb needs beta > 2, got " + format_double(rule.beta));
            } else if constexpr (std::is_same_v<T, FaMOSS>) {
                if (!(rule.beta > 0.25)) throw ConfigError("famoss needs beta > 1/4, got " + format_double(rule.beta));
            } else if constexpr (std::is_same_v<T, ETCES>) {
                if (!(rule.delta > 0.0)) throw ConfigError("etc-es needs delta > 0");
            } else if constexpr (std::is_same_v<T, ETCT>) {
                if (!(rule.delta > 0.0)) throw ConfigError("etc-t needs delta > 0");
                if (!(rule.alpha > 0.0 && rule.alpha < 1.0)) throw ConfigError("etc-t needs alpha in (0, 1)");
                if (!(rule.eta > 0.0 && rule.eta < 1.0)) throw ConfigError("etc-t needs eta in (0, 1)");
            } else if constexpr (std::is_same_v<T, GenericUCB>) {
                const auto& e = find_rho(rule.rho);
                if (!(rule.beta > e.min_beta))
                    throw ConfigError("generic rho=" + rule.rho + " needs beta > " + format_short(e.min_beta));
            }
        },
        out);
    return out;
}

double policy_constant(const PolicySpec& spec) {
    if (spec.lipschitz) {
        if (!(*spec.lipschitz > 0.0) || !std::isfinite(*spec.lipschitz))
            throw ConfigError("Lipschitz constant must be positive and finite");
        return *spec.lipschitz;
    }
    return func::lipschitz_constant(spec.functional);
}

void validate(const PolicySpec& spec) {
    if (spec.arms < 2) throw ConfigError("a policy needs K >= 2 arms, got " + std::to_string(spec.arms));
    // decode validates parameter ranges
    (void)decode(encode(spec.rule));
    if (std::holds_alternative<ETCT>(spec.rule) && spec.arms != 2)
        throw ConfigError("etc-t is defined for K = 2 arms only, got K = " + std::to_string(spec.arms));
    func::validate(spec.functional);
    (void)policy_constant(spec);
}

PolicyState policy_init(const PolicySpec& spec, std::optional<std::size_t> horizon, bool verify) {
    validate(spec);
    PolicyState s;
    s.spec = spec;
    s.c = policy_constant(spec);
    s.horizon = horizon;
    s.pulls.assign(spec.arms, 0);
    s.values.assign(spec.arms, kNaN);
    s.estimates.reserve(spec.arms);
    for (std::size_t i = 0; i < spec.arms; ++i) s.estimates.emplace_back(spec.functional, verify);
    if (std::holds_alternative<ETCHorizon>(spec.rule)) {
        if (!horizon || *horizon == 0) throw ConfigError("etc-horizon needs the horizon n >= 1");
        s.n1 = std::min(spec.arms * ceil_two_thirds(*horizon), *horizon);
    } else if (const auto* es = std::get_if<ETCES>(&spec.rule)) {
        s.n1 = inference::n1_for_es_regret(s.c, es->delta, spec.arms);
    } else if (const auto* et = std::get_if<ETCT>(&spec.rule)) {
        s.n1 = inference::n1_for_power(s.c, et->delta, et->alpha, et->eta);
    }
    return s;
}

std::size_t min_argmax(const std::vector<double>& v) {
    std::size_t best = v.size();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::isnan(v[i])) continue;
        if (best == v.size() || v[i] > v[best]) best = i;
    }
    if (best == v.size()) throw NumericError("no arm has a defined value");
    return best;
}

std::size_t select_arm(PolicyState& s, RandomStream& rng) {
    const std::size_t k = s.spec.arms;
    const std::size_t t = s.t + 1;
    std::size_t arm = 0;
    if (is_etc(s.spec.rule)) {
        if (std::holds_alternative<ETCHorizon>(s.spec.rule) && s.t >= *s.horizon)
            throw ConfigError("etc-horizon called past its horizon n = " + std::to_string(*s.horizon));
        if (s.t < s.n1) {
            arm = exploration_of(s.spec.rule) == Exploration::Cyclic ? t % k : rng.index(k);
        } else {
            if (!s.committed) throw NumericError("explore-then-commit policy has no commitment at t = n1");
            arm = *s.committed;
        }
    } else if (t <= k) {
        arm = t - 1;
    } else {
        double beta = 0.0;
        const RhoEntry* rho = nullptr;
        if (const auto* p = std::get_if<FUCB>(&s.spec.rule)) {
            beta = p->beta;
            rho = &find_rho("fucb");
        } else if (const auto* p = std::get_if<FaMOSS>(&s.spec.rule)) {
            beta = p->beta;
            rho = &find_rho("famoss");
        } else {
            const auto& g = std::get<GenericUCB>(s.spec.rule);
            beta = g.beta;
            rho = &find_rho(g.rho);
        }
        std::size_t best = 0;
        double best_index = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < k; ++i) {
            const double index = s.values[i] + rho->bonus(s.c, beta, t, s.pulls[i], k);
            if (index > best_index) {
                best_index = index;
                best = i;
            }
        }
        arm = best;
    }
    s.last_selected = arm;
    return arm;
}

void update(PolicyState& s, std::size_t arm, double outcome, RandomStream& rng) {
    if (!s.last_selected || *s.last_selected != arm)
        throw ConfigError("update for arm " + std::to_string(arm) + " which was not the last selected arm");
    s.estimates[arm].add(outcome);
    s.last_selected.reset();
    ++s.pulls[arm];
    ++s.t;
    if (is_etc(s.spec.rule)) {
        s.values[arm] = kNaN;
        if (s.t == s.n1) (void)etc_commit(s, rng);
    } else {
        s.values[arm] = s.estimates[arm].value();
    }
}

std::size_t etc_commit(PolicyState& s, RandomStream& rng) {
    if (s.committed) return *s.committed;
    std::vector<double> v(s.spec.arms);
    for (std::size_t i = 0; i < s.spec.arms; ++i) v[i] = value_of(s, i);
    if (const auto* et = std::get_if<ETCT>(&s.spec.rule)) {
        bool reject = false;
        if (!std::isnan(v[0]) && !std::isnan(v[1])) {
            const double c_alpha = inference::test_critical_value(s.c, et->alpha, s.n1);
            reject = std::fabs(v[0] - v[1]) >= c_alpha;
        }
        s.committed = reject ? min_argmax(v) : rng.index(2);
    } else {
        s.committed = min_argmax(v);
    }
    return *s.committed;
}

}  // namespace fb::policy
