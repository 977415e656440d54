#pragma once

// DQN agent over the cell on/off action space: epsilon-greedy exploration,
// experience replay, a periodically synced target network, and plain SGD on
// the squared TD error.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "skycell/mlp.hpp"
#include "skycell/replay_buffer.hpp"
#include "skycell/world.hpp"

namespace skycell {

struct DqnConfig {
    std::vector<int> hidden_sizes{128, 128, 128};
    double learning_rate = 1e-3;
    double gamma = 0.95;
    double eps_start = 1.0;
    double eps_end = 0.05;
    int eps_decay_episodes = 200;
    int batch_size = 64;
    int target_sync_interval = 24;  // in training steps
    std::size_t replay_capacity = 20000;
    int episodes = 300;
};

// Normalizers so every state feature lands roughly in [0, 1].
struct StateNormalizer {
    std::vector<double> cell_capacity_mbps;  // per cell, single-UE ceiling
    double max_on_power_w = 1.0;
    int n_ues = 1;
};

inline StateNormalizer make_normalizer(const Environment& env) {
    StateNormalizer n;
    n.n_ues = std::max(1, env.n_ues());
    for (const CellConfig& c : env.cells) {
        n.cell_capacity_mbps.push_back(link_capacity_mbps(
            1e9, c.bandwidth_mhz, env.config.link.dl_fraction(c.duplex),
            env.config.link.overhead_factor, env.config.link.se_cap_bps_hz, 1));
        n.max_on_power_w = std::max(n.max_on_power_w, c.on_power_w());
    }
    return n;
}

// Feature vector: per cell [on, connected/nUE, throughput/cap, energy/maxP],
// ascending cell id, then the decision hour as (sin, cos) on the day circle.
inline std::vector<double> encode_state(const StateNormalizer& norm,
                                        const std::vector<KpmReport>& last_reports,
                                        int decision_hour) {
    std::vector<double> s;
    s.reserve(last_reports.size() * 4 + 2);
    for (const KpmReport& r : last_reports) {
        s.push_back(r.on ? 1.0 : 0.0);
        s.push_back(static_cast<double>(r.connected_ues) / norm.n_ues);
        const double cap = norm.cell_capacity_mbps.at(static_cast<std::size_t>(r.cell_id));
        s.push_back(cap > 0.0 ? r.throughput_mbps / cap : 0.0);
        s.push_back(r.energy_wh / norm.max_on_power_w);
    }
    const double ang = 2.0 * kPi * decision_hour / 24.0;
    s.push_back(std::sin(ang));
    s.push_back(std::cos(ang));
    return s;
}

// Action a < n_capacity toggles capacity cell id a+1; the last action is a
// no-op.
inline std::vector<RcAction> action_to_controls(int action, const WorldState& state,
                                                int n_capacity_cells) {
    if (action < 0 || action > n_capacity_cells)
        throw std::domain_error("dqn: action index out of range");
    if (action == n_capacity_cells) return {};
    const int cell = action + 1;
    RcAction a;
    a.target_cell_id = cell;
    a.command = state.on[static_cast<std::size_t>(cell)] ? CellCommand::turn_off
                                                         : CellCommand::turn_on;
    return {a};
}

class DqnAgent {
  public:
    DqnAgent(int state_dim, int n_actions, const DqnConfig& cfg, std::uint64_t seed)
        : cfg_(cfg),
          n_actions_(n_actions),
          replay_(cfg.replay_capacity),
          init_rng_(mix_seed(seed, "dqn-init")),
          explore_rng_(mix_seed(seed, "dqn-explore")),
          sample_rng_(mix_seed(seed, "dqn-sample")) {
        std::vector<int> sizes{state_dim};
        sizes.insert(sizes.end(), cfg.hidden_sizes.begin(), cfg.hidden_sizes.end());
        sizes.push_back(n_actions);
        online_ = Mlp::create(sizes, init_rng_);
        target_ = online_;
    }

    double epsilon(int episode) const {
        const double frac =
            cfg_.eps_decay_episodes <= 0
                ? 1.0
                : std::min(1.0, static_cast<double>(episode) / cfg_.eps_decay_episodes);
        return cfg_.eps_start + (cfg_.eps_end - cfg_.eps_start) * frac;
    }

    // Epsilon-greedy; greedy ties resolve to the lowest action index.
    int select_action(const std::vector<double>& state, double eps) {
        if (eps > 0.0 && explore_rng_.uniform() < eps)
            return static_cast<int>(explore_rng_.uniform_u64(static_cast<std::uint64_t>(n_actions_)));
        return greedy_action(state);
    }

    int greedy_action(const std::vector<double>& state) const {
        const std::vector<double> q = online_.forward(state);
        int best = 0;
        for (int a = 1; a < n_actions_; ++a)
            if (q[a] > q[best]) best = a;
        return best;
    }

    void remember(Transition t) { replay_.push(std::move(t)); }
    std::size_t replay_size() const { return replay_.size(); }

    // One SGD step on a uniform minibatch; returns the batch TD loss, or
    // nothing while the buffer is still shorter than a batch.
    std::optional<double> train_step() {
        if (replay_.size() < static_cast<std::size_t>(cfg_.batch_size)) return std::nullopt;
        const auto batch = replay_.sample(static_cast<std::size_t>(cfg_.batch_size), sample_rng_);
        MlpGradients acc = online_.zero_gradients();
        double loss = 0.0;
        const double inv_n = 1.0 / static_cast<double>(batch.size());
        for (const Transition* t : batch) {
            double y = t->reward;
            if (!t->done) {
                const std::vector<double> qn = target_.forward(t->next_state);
                y += cfg_.gamma * *std::max_element(qn.begin(), qn.end());
            }
            const MlpCache cache = online_.forward_cached(t->state);
            const double err = cache.activations.back()[static_cast<std::size_t>(t->action)] - y;
            loss += err * err * inv_n;
            std::vector<double> dout(static_cast<std::size_t>(n_actions_), 0.0);
            dout[static_cast<std::size_t>(t->action)] = 2.0 * err * inv_n;
            online_.accumulate(acc, online_.backward(cache, dout), 1.0);
        }
        online_.sgd_step(acc, cfg_.learning_rate);
        if (++train_steps_ % cfg_.target_sync_interval == 0) sync_target();
        return loss;
    }

    void sync_target() { target_ = online_; }
    std::uint64_t train_steps() const { return train_steps_; }

    // Lets a training loop anneal the step size between episodes.
    void set_learning_rate(double lr) { cfg_.learning_rate = lr; }

    const Mlp& online() const { return online_; }
    const DqnConfig& config() const { return cfg_; }
    int n_actions() const { return n_actions_; }

    void save_checkpoint(const std::string& path) const { online_.save(path); }
    void load_checkpoint(const std::string& path) {
        online_ = Mlp::load(path);
        target_ = online_;
    }

    // In-memory counterpart of load_checkpoint, for snapshot/restore during
    // training (e.g. keeping the best-validated parameters).
    void restore(const Mlp& net) {
        online_ = net;
        target_ = net;
    }

  private:
    DqnConfig cfg_;
    int n_actions_;
    Mlp online_;
    Mlp target_;
    ReplayBuffer replay_;
    Rng init_rng_;
    Rng explore_rng_;
    Rng sample_rng_;
    std::uint64_t train_steps_ = 0;
};

}  // namespace skycell
