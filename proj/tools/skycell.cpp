// skycell command-line front end: scenario simulation, DQN training and
// evaluation, coverage-map generation, and recorded-stream replay.
//
// Exit codes: 0 success, 1 usage error, 2 configuration error, 3 runtime
// failure (including replay mismatches).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "skycell/skycell.hpp"

namespace fs = std::filesystem;
using namespace skycell;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
};

SimConfig load_config(const CommonArgs& args) {
    if (args.config_path.empty()) {
        SimConfig c;
        c.validate();
        return c;
    }
    return load_config_file(args.config_path);
}

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_manifest(const CommonArgs& args, const SimConfig& config, const Environment& env,
                    const std::string& subcommand, ordered_json extra) {
    ordered_json j;
    j["tool"] = "skycell";
    j["version"] = kVersion;
    j["subcommand"] = subcommand;
    j["seed"] = args.seed;
    j["env_seed"] = env.env_seed;
    j["config_file"] = args.config_path.empty() ? "<builtin defaults>" : args.config_path;
    j["config_hash"] = hex64(config_hash(config));
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    std::ofstream out(fs::path(args.out_dir) / "run_manifest.json");
    if (!out) throw std::runtime_error("cannot write run_manifest.json");
    out << j.dump(2) << '\n';
}

std::unique_ptr<Policy> make_policy(const std::string& name, const Environment& env,
                                    std::uint64_t seed, const std::string& checkpoint,
                                    std::shared_ptr<DqnAgent>* agent_out) {
    if (name == "always_on") return std::make_unique<AlwaysOnPolicy>();
    if (name == "random") return std::make_unique<RandomTogglePolicy>(seed);
    if (name == "greedy_idle") return std::make_unique<GreedyIdlePolicy>();
    if (name == "exhaustive") return std::make_unique<ExhaustiveHourlyPolicy>();
    if (name == "dqn") {
        if (checkpoint.empty())
            throw CLI::ValidationError("--policy dqn requires --checkpoint");
        auto agent = std::make_shared<DqnAgent>(4 * env.n_cells() + 2, env.n_cells(), DqnConfig{},
                                                seed);
        agent->load_checkpoint(checkpoint);
        if (agent_out) *agent_out = agent;
        return std::make_unique<DqnPolicy>(agent, make_normalizer(env));
    }
    throw CLI::ValidationError("unknown policy '" + name + "'");
}

int cmd_simulate(const CommonArgs& args, const SimConfig& config, int days,
                 const std::string& policy_name, const std::string& checkpoint) {
    const Environment env = build_environment(args.seed, config);
    std::unique_ptr<Policy> policy = make_policy(policy_name, env, args.seed, checkpoint, nullptr);
    RicBus bus(switchable_flags(env));
    RunOptions opt;
    opt.n_days = days;
    opt.bus = &bus;
    const RunResult res = run_days(env, *policy, opt);

    write_metrics_csv((fs::path(args.out_dir) / "metrics.csv").string(), res.reports);
    bus.write_ndjson((fs::path(args.out_dir) / "stream.ndjson").string());
    write_manifest(args, config, env, "simulate",
                   {{"days", days}, {"policy", policy_name}});
    std::printf("simulate: policy=%s days=%d energy=%.1f Wh/day efficiency=%.1f bits/J\n",
                policy_name.c_str(), days, res.mean_daily_energy_wh(),
                res.mean_daily_efficiency());
    return 0;
}

int cmd_train(const CommonArgs& args, const SimConfig& config, int episodes) {
    const Environment env = build_environment(args.seed, config);
    DqnConfig cfg;
    cfg.episodes = episodes;
    const TrainResult res = train_dqn(env, cfg, args.seed, [](const LearningCurveRow& row) {
        if (row.episode % 50 == 0)
            std::printf("episode %d: efficiency=%.1f bits/J epsilon=%.2f loss=%.5f\n", row.episode,
                        row.mean_efficiency, row.epsilon, row.loss);
    });
    write_learning_curve_csv((fs::path(args.out_dir) / "learning_curve.csv").string(), res.curve);
    res.agent->save_checkpoint((fs::path(args.out_dir) / "dqn.ckpt").string());
    write_manifest(args, config, env, "train", {{"episodes", episodes}});
    std::printf("train: %d episodes, baseline=%.1f bits/J, final=%.1f bits/J\n", episodes,
                res.baseline_efficiency_bits_per_joule,
                res.curve.empty() ? 0.0 : res.curve.back().mean_efficiency);
    return 0;
}

int cmd_evaluate(const CommonArgs& args, const SimConfig& config, int days,
                 const std::string& checkpoint) {
    const Environment env = build_environment(args.seed, config);
    AlwaysOnPolicy always_on;
    RandomTogglePolicy random(args.seed);
    GreedyIdlePolicy greedy;
    std::vector<Policy*> policies{&always_on, &random, &greedy};
    std::shared_ptr<DqnAgent> agent;
    std::unique_ptr<Policy> dqn;
    if (!checkpoint.empty()) {
        dqn = make_policy("dqn", env, args.seed, checkpoint, &agent);
        policies.push_back(dqn.get());
    }
    const std::vector<EvaluationRow> rows = evaluate_policies(env, policies, days, 10000);
    write_evaluation_csv((fs::path(args.out_dir) / "evaluation.csv").string(), rows);
    write_manifest(args, config, env, "evaluate",
                   {{"days", days}, {"checkpoint", checkpoint.empty() ? "<none>" : checkpoint}});
    for (const EvaluationRow& r : rows)
        std::printf("%-12s energy=%.1f Wh/day (%.1f%% of always-on) efficiency=%.1f bits/J "
                    "(%.1f%% of always-on)\n",
                    r.policy.c_str(), r.mean_daily_energy_wh, r.pct_energy_vs_always_on,
                    r.mean_efficiency, r.pct_efficiency_vs_always_on);
    return 0;
}

int cmd_coverage(const CommonArgs& args, const SimConfig& config, double resolution,
                 const std::string& terrain_path) {
    SimConfig cfg = config;
    Environment env = build_environment(args.seed, cfg);
    if (!terrain_path.empty())
        env.radio.terrain = std::make_shared<TerrainGrid>(TerrainGrid::load_csv(terrain_path));
    const BoundingBox bbox{0.0, 0.0, cfg.arena_m, cfg.arena_m};
    const CoverageGrid grid =
        coverage_grid(env.cells.at(0), env.radio, bbox, resolution, cfg.ues.height_m);
    write_coverage_csv(grid, (fs::path(args.out_dir) / "coverage.csv").string());
    write_manifest(args, cfg, env, "coverage",
                   {{"resolution_m", resolution},
                    {"terrain", terrain_path.empty() ? "<none>" : terrain_path}});
    double lo = grid.rsrp_dbm.front(), hi = grid.rsrp_dbm.front();
    for (double v : grid.rsrp_dbm) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::printf("coverage: %dx%d points, rsrp [%.2f, %.2f] dBm, %.1f%% above %.1f dBm\n", grid.nx,
                grid.ny, lo, hi, 100.0 * grid.covered_fraction(cfg.ues.sensitivity_dbm),
                cfg.ues.sensitivity_dbm);
    return 0;
}

int cmd_replay(const CommonArgs& args, const SimConfig& config, const std::string& stream_path) {
    const Environment env = build_environment(args.seed, config);
    const std::vector<RicEnvelope> recorded = RicBus::read_ndjson(stream_path);
    const ReplayOutcome outcome = replay_stream(env, recorded);
    {
        std::ofstream out(fs::path(args.out_dir) / "replay_stream.ndjson");
        if (!out) throw std::runtime_error("cannot write replay_stream.ndjson");
        for (const RicEnvelope& m : outcome.regenerated) out << to_ndjson_line(m) << '\n';
    }
    write_metrics_csv((fs::path(args.out_dir) / "replay_metrics.csv").string(), outcome.reports);
    write_manifest(args, config, env, "replay", {{"stream", stream_path}});
    if (!outcome.match) {
        std::fprintf(stderr, "replay mismatch: %s\n", outcome.diagnostic.c_str());
        return kExitRuntime;
    }
    std::printf("replay: %zu messages verified\n", outcome.regenerated.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic aerial-network energy-saving simulator"};
    app.require_subcommand(1);

    CommonArgs args;
    app.add_option("--config", args.config_path, "Scenario config JSON (defaults built in)");
    app.add_option("--seed", args.seed, "Run seed")->required();
    app.add_option("--out", args.out_dir, "Output directory")->capture_default_str();

    int days = 30;
    int episodes = 300;
    std::string policy_name = "greedy_idle";
    std::string checkpoint;
    double resolution = 0.0;
    std::string terrain_path;
    std::string stream_path;

    CLI::App* sim = app.add_subcommand("simulate", "Run one policy and record the RIC stream");
    sim->fallthrough();
    sim->add_option("--days", days, "Days to simulate")->capture_default_str();
    sim->add_option("--policy", policy_name,
                    "always_on | random | greedy_idle | exhaustive | dqn")
        ->capture_default_str();
    sim->add_option("--checkpoint", checkpoint, "DQN checkpoint (for --policy dqn)");

    CLI::App* train = app.add_subcommand("train", "Train the DQN energy-saving agent");
    train->fallthrough();
    train->add_option("--episodes", episodes, "Training episodes (one day each)")
        ->capture_default_str();

    CLI::App* eval = app.add_subcommand("evaluate", "Compare policies on held-out days");
    eval->fallthrough();
    eval->add_option("--days", days, "Evaluation days")->capture_default_str();
    eval->add_option("--checkpoint", checkpoint, "DQN checkpoint to include");

    CLI::App* cov = app.add_subcommand("coverage", "Sample the coverage cell's ground RSRP");
    cov->fallthrough();
    cov->add_option("--resolution", resolution, "Grid spacing in meters")->required();
    cov->add_option("--terrain", terrain_path, "Terrain raster CSV");

    CLI::App* replay = app.add_subcommand("replay", "Re-verify a recorded stream");
    replay->fallthrough();
    replay->add_option("stream", stream_path, "Recorded NDJSON stream")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        const SimConfig config = load_config(args);
        if (days < 1) throw ConfigError("--days must be >= 1");
        if (episodes < 1) throw ConfigError("--episodes must be >= 1");
        if (cov->parsed() && !(resolution > 0.0)) throw ConfigError("--resolution must be > 0");
        fs::create_directories(args.out_dir);
        if (sim->parsed()) return cmd_simulate(args, config, days, policy_name, checkpoint);
        if (train->parsed()) return cmd_train(args, config, episodes);
        if (eval->parsed()) return cmd_evaluate(args, config, days, checkpoint);
        if (cov->parsed()) return cmd_coverage(args, config, resolution, terrain_path);
        if (replay->parsed()) return cmd_replay(args, config, stream_path);
        std::fprintf(stderr, "no subcommand\n");
        return kExitUsage;
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
}
