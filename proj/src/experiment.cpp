#include "rirl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <thread>

#include "rirl/errors.hpp"
#include "rirl/learners.hpp"
#include "rirl/nature.hpp"
#include "rirl/oracle.hpp"
#include "rirl/serialize.hpp"

namespace rirl {

namespace {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string run_log_path(const ExperimentConfig& config, std::uint64_t seed) {
  return config.out_dir + "/rounds_seed" + std::to_string(seed) + ".jsonl";
}

double pow_iter(double base, int exponent) {
  double out = 1.0;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// ---------------------------------------------------------------------------
// Per-seed runners
// ---------------------------------------------------------------------------

RunRow run_identify_seed(const ExperimentConfig& config, std::uint64_t seed) {
  Stopwatch watch;
  SplitMix64 rng(seed);
  const ThetaVector theta_star = sample_theta(config.num_states, 0, rng);
  const HumanOracle oracle(theta_star, config.epsilon);
  const IdentificationResult result =
      omniscient_identify(oracle, config.num_states, config.gamma, config.epsilon);

  RunRow row;
  row.seed = seed;
  row.dim = config.num_states;
  row.epsilon = config.epsilon;
  row.mistakes = result.tasks_used;
  row.bound = identification_task_count(config.epsilon);
  row.final_center_error =
      (result.theta_hat.theta - theta_star.theta).lpNorm<Eigen::Infinity>();
  row.bound_satisfied =
      result.tasks_used <= row.bound && row.final_center_error <= config.epsilon;
  row.wall_time_s = watch.seconds();

  if (!config.out_dir.empty()) {
    RunLog log;
    nlohmann::json intervals = nlohmann::json::array();
    for (const auto& [lo, hi] : result.per_state_intervals) intervals.push_back({lo, hi});
    log.add({{"type", "run"},
             {"tasks_used", result.tasks_used},
             {"error_inf", row.final_center_error},
             {"intervals", std::move(intervals)}});
    log.write(run_log_path(config, seed));
  }
  return row;
}

RunRow run_mistake_stream_seed(const ExperimentConfig& config, std::uint64_t seed) {
  Stopwatch watch;
  SplitMix64 rng(seed);
  SplitMix64 theta_rng = rng.split();
  SplitMix64 stream_rng = rng.split();

  const ThetaVector theta_star = sample_theta(config.dim, std::nullopt, theta_rng);
  const HumanOracle oracle(theta_star, config.epsilon);
  EllipsoidLearner learner(config.dim, config.epsilon);

  std::unique_ptr<BanditTaskSource> source;
  const std::string stream =
      config.kind == ExperimentKind::kLowerBound ? "adversary" : config.stream;
  if (stream == "adversary") {
    source = std::make_unique<AdversaryTaskSource>(theta_star.theta, config.epsilon);
  } else if (stream == "random") {
    source = std::make_unique<RandomTaskSource>(config.dim, config.num_arms, stream_rng);
  } else if (stream == "replay") {
    source = std::make_unique<ReplayTaskSource>(read_task_stream(config.stream_file));
  } else {
    throw ConfigError("unknown stream kind: " + stream);
  }

  RunLog log;
  BanditRunOptions options;
  options.max_rounds = config.rounds;
  options.log = config.out_dir.empty() ? nullptr : &log;
  options.theta_star_diag = &theta_star.theta;
  options.record_stream = !config.out_dir.empty() && stream == "adversary";
  const BanditRunStats stats = run_bandit_protocol(learner, *source, oracle, options);

  RunRow row;
  row.seed = seed;
  row.dim = config.dim;
  row.epsilon = config.epsilon;
  row.mistakes = stats.mistakes;
  row.final_center_error =
      (stats.final_center - theta_star.theta).lpNorm<Eigen::Infinity>();
  const double min_required_drop =
      1.0 / (2.0 * (config.dim + 1.0)) - 1e-9;
  const bool drops_ok = stats.cuts == 0 || stats.min_cut_log_drop >= min_required_drop;
  if (config.kind == ExperimentKind::kLowerBound) {
    row.bound = adversary_mistake_floor(config.dim, config.epsilon);
    row.bound_satisfied = stats.theta_always_contained && drops_ok;
  } else {
    row.bound = ellipsoid_mistake_bound(config.dim, config.epsilon);
    row.bound_satisfied =
        stats.mistakes <= row.bound && stats.theta_always_contained && drops_ok;
  }
  row.wall_time_s = watch.seconds();

  if (!config.out_dir.empty()) {
    log.write(run_log_path(config, seed));
    if (options.record_stream) {
      write_task_stream(config.out_dir + "/stream_seed" + std::to_string(seed) + ".jsonl",
                        stats.emitted_tasks);
    }
  }
  return row;
}

RunRow run_fixedenv_seed(const ExperimentConfig& config, std::uint64_t seed) {
  Stopwatch watch;
  if (!config.feature_matrix) throw ConfigError("fixedenv requires feature_matrix");
  SplitMix64 rng(seed);
  const ThetaVector theta_star = sample_theta(config.dim, std::nullopt, rng);
  const HumanOracle oracle(theta_star, config.epsilon);
  EllipsoidLearner learner(config.dim, config.epsilon);

  Designer designer(config.selected_features());
  const double error_bound = designer.error_bound(config.epsilon);
  DesignerTaskSource source(std::move(designer));
  const TieBreakFn worst_case = [&oracle](const BanditTask& task,
                                          const std::vector<int>& tied) {
    return oracle.worst_tied_action(task, tied);
  };

  RunLog log;
  BanditRunOptions options;
  options.max_rounds = config.rounds;
  options.tie_break = &worst_case;
  options.log = config.out_dir.empty() ? nullptr : &log;
  options.theta_star_diag = &theta_star.theta;
  const BanditRunStats stats = run_bandit_protocol(learner, source, oracle, options);

  RunRow row;
  row.seed = seed;
  row.dim = config.dim;
  row.epsilon = config.epsilon;
  row.mistakes = stats.mistakes;
  row.bound = error_bound;
  row.final_center_error =
      (stats.final_center - theta_star.theta).lpNorm<Eigen::Infinity>();
  row.bound_satisfied =
      row.final_center_error <= error_bound && stats.theta_always_contained &&
      static_cast<double>(stats.mistakes) <=
          ellipsoid_mistake_bound(config.dim, config.epsilon);
  row.wall_time_s = watch.seconds();
  if (!config.out_dir.empty()) log.write(run_log_path(config, seed));
  return row;
}

RunRow run_trajectory_seed(const ExperimentConfig& config, std::uint64_t seed) {
  Stopwatch watch;
  SplitMix64 rng(seed);
  SplitMix64 theta_rng = rng.split();
  SplitMix64 task_rng = rng.split();
  SplitMix64 episode_rng = rng.split();

  const int horizon = config.horizon_override > 0
                          ? config.horizon_override
                          : trajectory_demo_horizon(config.epsilon, config.gamma);
  const int batch = config.batch_override > 0
                        ? config.batch_override
                        : trajectory_batch_size(config.epsilon, config.delta,
                                                config.num_states);

  const ThetaVector theta_star = sample_theta(config.num_states, std::nullopt, theta_rng);
  const HumanOracle oracle(theta_star, config.epsilon);
  TrajectoryLearner learner(config.num_states, config.epsilon, horizon, batch);

  RunLog log;
  RunLog* log_ptr = config.out_dir.empty() ? nullptr : &log;
  const double expected_mass = 1.0 - pow_iter(config.gamma, horizon);
  double max_mass_error = 0.0;
  bool flags_consistent = true;
  bool theta_always_contained = true;
  for (long episode = 0; episode < config.rounds; ++episode) {
    const Environment env =
        random_environment(config.num_states, config.num_actions, config.gamma, task_rng);
    TaskReward r(config.num_states);
    for (int s = 0; s < config.num_states; ++s) r(s) = task_rng.uniform(-1.0, 1.0);
    const EpisodeResult result =
        learner.episode(env, r, oracle, episode_rng, log_ptr, &theta_star.theta);
    if (result.mistake) {
      max_mass_error = std::max(max_mass_error, std::abs(result.demo_mass - expected_mass));
      flags_consistent = flags_consistent && result.flag_consistent;
    }
    theta_always_contained =
        theta_always_contained && learner.contains_candidate(theta_star.theta);
  }

  RunRow row;
  row.seed = seed;
  row.dim = config.num_states;
  row.epsilon = config.epsilon;
  row.mistakes = learner.mistake_count();
  row.bound = trajectory_mistake_bound(config.num_states, config.epsilon, batch);
  row.final_center_error =
      (learner.center() - theta_star.theta).lpNorm<Eigen::Infinity>();
  row.bound_satisfied = static_cast<double>(row.mistakes) <= row.bound &&
                        max_mass_error <= 1e-12 && flags_consistent &&
                        theta_always_contained;
  row.wall_time_s = watch.seconds();
  if (!config.out_dir.empty()) log.write(run_log_path(config, seed));
  return row;
}

BanditTask random_nonnegative_task(int dim, int num_actions, SplitMix64& rng) {
  BanditTask task;
  task.features.resize(dim, num_actions);
  for (int a = 0; a < num_actions; ++a) {
    Eigen::VectorXd col(dim);
    for (int i = 0; i < dim; ++i) col(i) = rng.next_double();
    const double norm = col.lpNorm<1>();
    if (norm > 0.0) col *= rng.next_double() / norm;
    task.features.col(a) = col;
  }
  task.r.resize(dim);
  for (int i = 0; i < dim; ++i) task.r(i) = rng.uniform(-1.0, 1.0);
  return task;
}

RunRow run_convert_seed(const ExperimentConfig& config, std::uint64_t seed) {
  Stopwatch watch;
  SplitMix64 rng(seed);
  double worst = 0.0;
  long count = 0;
  if (!config.input_file.empty()) {
    for (const BanditTask& task : read_task_stream(config.input_file)) {
      worst = std::max(worst, embedding_round_trip_error(task, config.gamma));
      if (!config.out_dir.empty()) {
        const MdpTask mdp = bandit_to_mdp(task, config.gamma);
        write_json_file(config.out_dir + "/mdp_task_" + std::to_string(count) + ".json",
                        {{"environment", environment_to_json(mdp.env)},
                         {"task_reward", vector_to_json(mdp.task_reward)},
                         {"s_ref", mdp.s_ref}});
      }
      ++count;
    }
  } else {
    for (long t = 0; t < config.rounds; ++t) {
      const BanditTask task = random_nonnegative_task(config.dim, config.num_arms, rng);
      worst = std::max(worst, embedding_round_trip_error(task, config.gamma));
      ++count;
    }
  }

  RunRow row;
  row.seed = seed;
  row.dim = config.dim;
  row.epsilon = config.epsilon;
  row.mistakes = count;
  row.bound = 1e-9;
  row.final_center_error = worst;
  row.bound_satisfied = worst <= 1e-9;
  row.wall_time_s = watch.seconds();
  return row;
}

Eigen::MatrixXd load_feature_matrix(const ExperimentConfig& config) {
  if (config.feature_matrix) return config.selected_features();
  if (config.input_file.empty()) throw ConfigError("spread requires a feature matrix");
  const nlohmann::json j = load_json_file(config.input_file);
  return matrix_from_json(j.contains("features") ? j.at("features") : j);
}

RunRow run_spread_seed(const ExperimentConfig& config, std::uint64_t seed) {
  Stopwatch watch;
  const double value = spread(load_feature_matrix(config));
  RunRow row;
  row.seed = seed;
  row.dim = config.dim;
  row.epsilon = config.epsilon;
  row.mistakes = 0;
  row.bound = value;
  row.final_center_error = value;
  row.bound_satisfied = true;
  row.wall_time_s = watch.seconds();
  return row;
}

RunRow run_seed(const ExperimentConfig& config, std::uint64_t seed) {
  switch (config.kind) {
    case ExperimentKind::kIdentify:
      return run_identify_seed(config, seed);
    case ExperimentKind::kMistakes:
    case ExperimentKind::kLowerBound:
      return run_mistake_stream_seed(config, seed);
    case ExperimentKind::kFixedEnv:
      return run_fixedenv_seed(config, seed);
    case ExperimentKind::kTrajectory:
      return run_trajectory_seed(config, seed);
    case ExperimentKind::kConvert:
      return run_convert_seed(config, seed);
    case ExperimentKind::kSpread:
      return run_spread_seed(config, seed);
  }
  throw ConfigError("unknown experiment kind");
}

}  // namespace

// ---------------------------------------------------------------------------
// Config plumbing
// ---------------------------------------------------------------------------

std::string kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kIdentify: return "identify";
    case ExperimentKind::kMistakes: return "mistakes";
    case ExperimentKind::kLowerBound: return "lowerbound";
    case ExperimentKind::kFixedEnv: return "fixedenv";
    case ExperimentKind::kTrajectory: return "trajectory";
    case ExperimentKind::kConvert: return "convert";
    case ExperimentKind::kSpread: return "spread";
  }
  return "unknown";
}

ExperimentKind kind_from_name(const std::string& name) {
  if (name == "identify") return ExperimentKind::kIdentify;
  if (name == "mistakes") return ExperimentKind::kMistakes;
  if (name == "lowerbound") return ExperimentKind::kLowerBound;
  if (name == "fixedenv") return ExperimentKind::kFixedEnv;
  if (name == "trajectory") return ExperimentKind::kTrajectory;
  if (name == "convert") return ExperimentKind::kConvert;
  if (name == "spread") return ExperimentKind::kSpread;
  throw ConfigError("unknown experiment kind: " + name);
}

void ExperimentConfig::validate() const {
  if (schema_version != kConfigSchemaVersion) {
    throw ConfigError("unsupported schema_version");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must be in (0, 1)");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("gamma must be in [0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must be in (0, 1)");
  if (dim < 1) throw ConfigError("dim must be >= 1");
  if (num_states < 2) throw ConfigError("num_states must be >= 2");
  if (num_actions < 2) throw ConfigError("num_actions must be >= 2");
  if (num_arms < 2) throw ConfigError("num_arms must be >= 2");
  if (rounds < 1) throw ConfigError("rounds must be >= 1");
  if (seeds.empty()) throw ConfigError("seeds must be nonempty");
  if (stream != "adversary" && stream != "random" && stream != "replay") {
    throw ConfigError("stream must be adversary, random, or replay");
  }
  if (stream == "replay" && stream_file.empty()) {
    throw ConfigError("replay stream requires stream_file");
  }
  if (kind == ExperimentKind::kFixedEnv && !feature_matrix) {
    throw ConfigError("fixedenv requires feature_matrix");
  }
  if (!feature_columns.empty()) {
    if (!feature_matrix) throw ConfigError("feature_columns requires feature_matrix");
    for (int c : feature_columns) {
      if (c < 0 || c >= feature_matrix->cols()) {
        throw ConfigError("feature_columns index out of range");
      }
    }
    if (static_cast<int>(feature_columns.size()) < 2) {
      throw ConfigError("feature_columns must keep at least two columns");
    }
  }
}

Eigen::MatrixXd ExperimentConfig::selected_features() const {
  if (!feature_matrix) throw ConfigError("no feature matrix configured");
  if (feature_columns.empty()) return *feature_matrix;
  Eigen::MatrixXd out(feature_matrix->rows(), feature_columns.size());
  for (std::size_t i = 0; i < feature_columns.size(); ++i) {
    out.col(static_cast<int>(i)) = feature_matrix->col(feature_columns[i]);
  }
  return out;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  if (j.contains("kind")) c.kind = kind_from_name(j.at("kind").get<std::string>());
  c.schema_version = j.value("schema_version", kConfigSchemaVersion);
  c.dim = j.value("dim", c.dim);
  c.num_states = j.value("num_states", c.num_states);
  c.num_actions = j.value("num_actions", c.num_actions);
  c.num_arms = j.value("num_arms", c.num_arms);
  c.gamma = j.value("gamma", c.gamma);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.delta = j.value("delta", c.delta);
  c.horizon_override = j.value("horizon", 0);
  c.batch_override = j.value("batch", 0);
  c.rounds = j.value("rounds", c.rounds);
  c.stream = j.value("stream", c.stream);
  c.stream_file = j.value("stream_file", std::string());
  c.input_file = j.value("input_file", std::string());
  c.out_dir = j.value("out_dir", std::string());
  if (j.contains("seeds")) {
    for (const auto& s : j.at("seeds")) c.seeds.push_back(s.get<std::uint64_t>());
  } else {
    const std::uint64_t start = j.value("seed_start", 0);
    const std::uint64_t count = j.value("seed_count", 1);
    for (std::uint64_t s = 0; s < count; ++s) c.seeds.push_back(start + s);
  }
  if (j.contains("feature_matrix")) {
    c.feature_matrix = matrix_from_json(j.at("feature_matrix"));
    c.dim = static_cast<int>(c.feature_matrix->rows());
    c.num_arms = static_cast<int>(c.feature_matrix->cols());
  }
  if (j.contains("feature_columns")) {
    for (const auto& idx : j.at("feature_columns")) c.feature_columns.push_back(idx.get<int>());
    if (!c.feature_columns.empty()) c.num_arms = static_cast<int>(c.feature_columns.size());
  }
  return c;
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  nlohmann::json j{{"kind", kind_name(config.kind)},
                   {"schema_version", config.schema_version},
                   {"dim", config.dim},
                   {"num_states", config.num_states},
                   {"num_actions", config.num_actions},
                   {"num_arms", config.num_arms},
                   {"gamma", config.gamma},
                   {"epsilon", config.epsilon},
                   {"delta", config.delta},
                   {"horizon", config.horizon_override},
                   {"batch", config.batch_override},
                   {"rounds", config.rounds},
                   {"stream", config.stream},
                   {"stream_file", config.stream_file},
                   {"input_file", config.input_file},
                   {"out_dir", config.out_dir},
                   {"seeds", config.seeds}};
  if (config.feature_matrix) j["feature_matrix"] = matrix_to_json(*config.feature_matrix);
  if (!config.feature_columns.empty()) j["feature_columns"] = config.feature_columns;
  return j;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

double RunReport::mean_mistakes() const {
  if (rows.empty()) return 0.0;
  double total = 0.0;
  for (const RunRow& row : rows) total += static_cast<double>(row.mistakes);
  return total / static_cast<double>(rows.size());
}

long RunReport::max_mistakes() const {
  long worst = 0;
  for (const RunRow& row : rows) worst = std::max(worst, row.mistakes);
  return worst;
}

double RunReport::fraction_bound_satisfied() const {
  if (rows.empty()) return 1.0;
  double ok = 0.0;
  for (const RunRow& row : rows) ok += row.bound_satisfied ? 1.0 : 0.0;
  return ok / static_cast<double>(rows.size());
}

double RunReport::max_final_error() const {
  double worst = 0.0;
  for (const RunRow& row : rows) worst = std::max(worst, row.final_center_error);
  return worst;
}

nlohmann::json report_to_json(const RunReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const RunRow& row : report.rows) {
    rows.push_back({{"seed", row.seed},
                    {"d", row.dim},
                    {"epsilon", row.epsilon},
                    {"mistakes", row.mistakes},
                    {"bound", row.bound},
                    {"bound_satisfied", row.bound_satisfied},
                    {"final_center_error", row.final_center_error},
                    {"wall_time_s", row.wall_time_s}});
  }
  nlohmann::json aggregate{{"mean_mistakes", report.mean_mistakes()},
                           {"max_mistakes", report.max_mistakes()},
                           {"fraction_bound_satisfied", report.fraction_bound_satisfied()},
                           {"max_final_error", report.max_final_error()}};
  if (report.config.kind == ExperimentKind::kLowerBound) {
    const double floor =
        adversary_mistake_floor(report.config.dim, report.config.epsilon);
    aggregate["mistake_floor"] = floor;
    aggregate["mistake_floor_with_tolerance"] = kLowerBoundStatFactor * floor;
    aggregate["mistake_floor_satisfied"] =
        report.mean_mistakes() >= kLowerBoundStatFactor * floor;
  }
  return nlohmann::json{{"config", config_to_json(report.config)},
                        {"rows", std::move(rows)},
                        {"aggregate", std::move(aggregate)}};
}

RunReport report_from_json(const nlohmann::json& j) {
  RunReport report;
  report.config = config_from_json(j.at("config"));
  for (const auto& r : j.at("rows")) {
    RunRow row;
    row.seed = r.at("seed").get<std::uint64_t>();
    row.dim = r.at("d").get<int>();
    row.epsilon = r.at("epsilon").get<double>();
    row.mistakes = r.at("mistakes").get<long>();
    row.bound = r.at("bound").get<double>();
    row.bound_satisfied = r.at("bound_satisfied").get<bool>();
    row.final_center_error = r.at("final_center_error").get<double>();
    row.wall_time_s = r.value("wall_time_s", 0.0);
    report.rows.push_back(row);
  }
  return report;
}

std::string report_to_csv(const RunReport& report) {
  std::string csv = "seed,d,epsilon,mistakes,bound,bound_satisfied,final_center_error\n";
  for (const RunRow& row : report.rows) {
    csv += std::to_string(row.seed) + ',' + std::to_string(row.dim) + ',' +
           format_double(row.epsilon) + ',' + std::to_string(row.mistakes) + ',' +
           format_double(row.bound) + ',' + (row.bound_satisfied ? "1" : "0") + ',' +
           format_double(row.final_center_error) + '\n';
  }
  return csv;
}

// ---------------------------------------------------------------------------
// Bounds
// ---------------------------------------------------------------------------

double adversary_mistake_floor(int dim, double epsilon) {
  return (static_cast<double>(dim) / 4.0) *
         std::floor(std::log2(2.0 / (5.0 * epsilon)));
}

double bound_for_kind(const ExperimentConfig& config) {
  switch (config.kind) {
    case ExperimentKind::kIdentify:
      return identification_task_count(config.epsilon);
    case ExperimentKind::kMistakes:
      return ellipsoid_mistake_bound(config.dim, config.epsilon);
    case ExperimentKind::kLowerBound:
      return adversary_mistake_floor(config.dim, config.epsilon);
    case ExperimentKind::kFixedEnv: {
      if (!config.feature_matrix) throw ConfigError("fixedenv requires feature_matrix");
      Designer designer(config.selected_features());
      return designer.error_bound(config.epsilon);
    }
    case ExperimentKind::kTrajectory: {
      const int batch = config.batch_override > 0
                            ? config.batch_override
                            : trajectory_batch_size(config.epsilon, config.delta,
                                                    config.num_states);
      return trajectory_mistake_bound(config.num_states, config.epsilon, batch);
    }
    case ExperimentKind::kConvert:
      return 1e-9;
    case ExperimentKind::kSpread:
      if (config.feature_matrix) return spread(*config.feature_matrix);
      return 0.0;
  }
  throw ConfigError("unknown experiment kind");
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

int worker_pool_size(std::size_t jobs) {
  int n = 0;
  if (const char* env = std::getenv("RIRL_THREADS")) n = std::atoi(env);
  if (n < 1) n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  return static_cast<int>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

RunReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
  }

  RunReport report;
  report.config = config;
  report.rows.resize(config.seeds.size());

  const int workers = worker_pool_size(config.seeds.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= config.seeds.size()) return;
      try {
        report.rows[i] = run_seed(config, config.seeds[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  if (!config.out_dir.empty()) {
    std::ofstream csv(config.out_dir + "/summary.csv");
    csv << report_to_csv(report);
    write_json_file(config.out_dir + "/report.json", report_to_json(report));
  }
  return report;
}

int check_bounds(const RunReport& report) {
  switch (report.config.kind) {
    case ExperimentKind::kLowerBound: {
      const double floor = kLowerBoundStatFactor *
                           adversary_mistake_floor(report.config.dim, report.config.epsilon);
      const bool invariants_ok = report.fraction_bound_satisfied() == 1.0;
      return (report.mean_mistakes() >= floor && invariants_ok) ? 0 : 1;
    }
    case ExperimentKind::kTrajectory:
      return report.fraction_bound_satisfied() >= 1.0 - report.config.delta ? 0 : 1;
    case ExperimentKind::kSpread:
      return 0;
    default:
      return report.fraction_bound_satisfied() == 1.0 ? 0 : 1;
  }
}

}  // namespace rirl
