#pragma once

// Control policies: the always-on and random baselines, the greedy
// idle-cell heuristic, the exhaustive per-hour optimizer, and the trained
// DQN wrapper. Policies see only KPM reports plus the traffic oracle the
// greedy rule is allowed to peek at.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "skycell/dqn.hpp"
#include "skycell/world.hpp"

namespace skycell {

struct PolicyContext {
    const Environment& env;
    const LinkTable& table;                       // links for state.day
    const WorldState& state;                      // before this hour's actions
    const std::vector<KpmReport>& last_reports;   // previous hour, ascending cell id
};

class Policy {
  public:
    virtual ~Policy() = default;
    virtual std::string name() const = 0;
    virtual std::vector<RcAction> decide(const PolicyContext& ctx) = 0;
    virtual void reset() {}
};

class AlwaysOnPolicy : public Policy {
  public:
    std::string name() const override { return "always_on"; }
    std::vector<RcAction> decide(const PolicyContext&) override { return {}; }
};

// Uniform random toggle of one capacity cell (or no-op) per hour.
class RandomTogglePolicy : public Policy {
  public:
    explicit RandomTogglePolicy(std::uint64_t seed) : seed_(seed), rng_(mix_seed(seed, "random-policy")) {}
    std::string name() const override { return "random"; }
    std::vector<RcAction> decide(const PolicyContext& ctx) override {
        const int n_capacity = ctx.env.n_cells() - 1;
        const int action = static_cast<int>(rng_.uniform_u64(static_cast<std::uint64_t>(n_capacity + 1)));
        return action_to_controls(action, ctx.state, n_capacity);
    }
    void reset() override { rng_ = Rng(mix_seed(seed_, "random-policy")); }

  private:
    std::uint64_t seed_;
    Rng rng_;
};

// One action per hour: turn off the lowest-id on capacity cell that served
// nothing last hour; otherwise turn on the lowest-id off cell whose
// strongest-signal UEs (all-on map) have demand this hour; otherwise no-op.
class GreedyIdlePolicy : public Policy {
  public:
    std::string name() const override { return "greedy_idle"; }
    std::vector<RcAction> decide(const PolicyContext& ctx) override {
        const Environment& env = ctx.env;
        for (int c = 0; c < env.n_cells(); ++c) {
            if (!env.cells[c].switchable || !ctx.state.on[c]) continue;
            const KpmReport& r = ctx.last_reports[static_cast<std::size_t>(c)];
            if (r.on && r.throughput_mbps == 0.0)
                return {{CellCommand::turn_off, c}};
        }
        for (int c = 0; c < env.n_cells(); ++c) {
            if (!env.cells[c].switchable || ctx.state.on[c]) continue;
            for (int u = 0; u < env.n_ues(); ++u) {
                if (env.strongest_cell[u] != c) continue;
                if (env.demand(u, ctx.state.day, ctx.state.hour) > 0.0)
                    return {{CellCommand::turn_on, c}};
            }
        }
        return {};
    }
};

struct HourOptimum {
    std::vector<std::uint8_t> on;
    double efficiency_bits_per_joule = 0.0;
    double throughput_mbps = 0.0;
    double energy_wh = 0.0;
};

// Evaluates every on/off pattern of the switchable cells for one hour's
// demand, starting from the given association state, and returns the
// efficiency maximizer. Ties go to the pattern that switches off the
// lowest-id cells first (patterns are scanned in that order, so the first
// maximum wins; with zero demand everywhere that is the all-off pattern).
inline HourOptimum exhaustive_hour_optimum(const Environment& env, const LinkTable& table,
                                           const std::vector<int>& prev_serving,
                                           const std::vector<double>& demand,
                                           const std::vector<std::uint8_t>& current_on) {
    std::vector<int> sw;
    for (int c = 0; c < env.n_cells(); ++c)
        if (env.cells[c].switchable) sw.push_back(c);
    if (sw.size() > 20) throw std::domain_error("exhaustive optimum: too many switchable cells");
    HourOptimum best;
    bool have = false;
    std::vector<std::uint8_t> on = current_on;
    const std::uint64_t n_masks = 1ull << sw.size();
    for (std::uint64_t mask = 0; mask < n_masks; ++mask) {
        for (std::size_t i = 0; i < sw.size(); ++i)  // lowest id on the most significant bit
            on[static_cast<std::size_t>(sw[i])] =
                (mask >> (sw.size() - 1 - i)) & 1ull ? 1 : 0;
        const HourOutcome out = evaluate_hour(env, table, on, prev_serving, demand);
        const double eff = out.total_energy_wh > 0.0
                               ? efficiency_bits_per_joule(out.total_throughput_mbps,
                                                           out.total_energy_wh)
                               : 0.0;
        if (!have || eff > best.efficiency_bits_per_joule) {
            have = true;
            best.on = on;
            best.efficiency_bits_per_joule = eff;
            best.throughput_mbps = out.total_throughput_mbps;
            best.energy_wh = out.total_energy_wh;
        }
    }
    return best;
}

// Plays the exhaustive per-hour optimum (may switch several cells per hour).
class ExhaustiveHourlyPolicy : public Policy {
  public:
    std::string name() const override { return "exhaustive"; }
    std::vector<RcAction> decide(const PolicyContext& ctx) override {
        std::vector<double> demand(static_cast<std::size_t>(ctx.env.n_ues()));
        for (int u = 0; u < ctx.env.n_ues(); ++u)
            demand[static_cast<std::size_t>(u)] = ctx.env.demand(u, ctx.state.day, ctx.state.hour);
        const HourOptimum opt = exhaustive_hour_optimum(ctx.env, ctx.table, ctx.state.serving,
                                                        demand, ctx.state.on);
        std::vector<RcAction> actions;
        for (int c = 0; c < ctx.env.n_cells(); ++c) {
            if (!ctx.env.cells[c].switchable) continue;
            if (opt.on[static_cast<std::size_t>(c)] != ctx.state.on[static_cast<std::size_t>(c)])
                actions.push_back({opt.on[static_cast<std::size_t>(c)] ? CellCommand::turn_on
                                                                       : CellCommand::turn_off,
                                   c});
        }
        return actions;
    }
};

// Greedy play of a trained Q-network (no exploration).
class DqnPolicy : public Policy {
  public:
    DqnPolicy(std::shared_ptr<DqnAgent> agent, StateNormalizer normalizer)
        : agent_(std::move(agent)), norm_(std::move(normalizer)) {}
    std::string name() const override { return "dqn"; }
    std::vector<RcAction> decide(const PolicyContext& ctx) override {
        const std::vector<double> s = encode_state(norm_, ctx.last_reports, ctx.state.hour);
        const int action = agent_->greedy_action(s);
        return action_to_controls(action, ctx.state, ctx.env.n_cells() - 1);
    }

  private:
    std::shared_ptr<DqnAgent> agent_;
    StateNormalizer norm_;
};

}  // namespace skycell
