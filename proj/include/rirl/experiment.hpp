#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace rirl {

inline constexpr int kConfigSchemaVersion = 1;
/// Finite-sampling tolerance applied to the aggregate lower-bound check.
inline constexpr double kLowerBoundStatFactor = 0.8;

enum class ExperimentKind {
  kIdentify,    // reward identification through chosen probe tasks
  kMistakes,    // ellipsoid learner mistake bound
  kLowerBound,  // adversarial stream, aggregate expected-mistake floor
  kFixedEnv,    // fixed feature matrix, designer-chosen task rewards
  kTrajectory,  // mini-batched trajectory demonstrations
  kConvert,     // bandit -> MDP -> bandit embedding round trip
  kSpread,      // diversity score of a stored feature matrix
};

std::string kind_name(ExperimentKind kind);
ExperimentKind kind_from_name(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kIdentify;
  int schema_version = kConfigSchemaVersion;
  int dim = 2;           // d (bandit kinds)
  int num_states = 2;    // |S| (MDP kinds)
  int num_actions = 2;   // |A|
  int num_arms = 2;      // K for generated bandit tasks
  double gamma = 0.9;
  double epsilon = 0.1;
  double delta = 0.1;
  int horizon_override = 0;  // 0 = derive from the theory formula
  int batch_override = 0;
  long rounds = 500;  // episodes / safety cap on adversarial streams
  std::vector<std::uint64_t> seeds;
  std::string stream = "adversary";  // adversary | random | replay
  std::string stream_file;
  std::string input_file;  // convert / spread inputs
  std::optional<Eigen::MatrixXd> feature_matrix;
  std::vector<int> feature_columns;  // manual column subset; empty = all
  std::string out_dir;

  void validate() const;  // throws ConfigError

  /// The designer's feature matrix after applying the manual column subset.
  Eigen::MatrixXd selected_features() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);

struct RunRow {
  std::uint64_t seed = 0;
  int dim = 0;
  double epsilon = 0.0;
  long mistakes = 0;
  double bound = 0.0;
  bool bound_satisfied = true;
  double final_center_error = 0.0;
  double wall_time_s = 0.0;  // report-only; never serialized into the CSV
};

struct RunReport {
  ExperimentConfig config;
  std::vector<RunRow> rows;

  double mean_mistakes() const;
  long max_mistakes() const;
  double fraction_bound_satisfied() const;
  double max_final_error() const;
};

nlohmann::json report_to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);

/// Fixed-column CSV {seed,d,epsilon,mistakes,bound,bound_satisfied,
/// final_center_error}; floats carry 17 significant digits so reruns are
/// byte-identical.
std::string report_to_csv(const RunReport& report);

/// Worker pool size: RIRL_THREADS if set, else hardware concurrency, capped
/// by the job count.
int worker_pool_size(std::size_t jobs);

/// Executes every seed (fanned out over the worker pool, reduced in seed
/// order), writes per-run JSONL logs, the CSV summary and the JSON report
/// when out_dir is set, and returns the report.
RunReport run_experiment(const ExperimentConfig& config);

/// 0 when every applicable bound holds, 1 otherwise. Upper bounds are
/// per-run; the adversarial lower bound is checked on the seed-mean with the
/// 0.8 finite-sampling factor; trajectory runs must satisfy their bound in at
/// least a (1 - delta) fraction of seeds.
int check_bounds(const RunReport& report);

/// Closed-form bound column for one run of the given kind, recomputed from
/// config fields only.
double bound_for_kind(const ExperimentConfig& config);

/// Expected-mistake floor of the adversarial stream: (d / 4) floor(log2(2 / (5 eps))).
double adversary_mistake_floor(int dim, double epsilon);

}  // namespace rirl
