#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "rirl/bandit.hpp"
#include "rirl/mdp.hpp"

namespace rirl {

nlohmann::json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const nlohmann::json& j);

/// Columns as a nested array (column-major).
nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);

/// {num_states, num_actions, gamma, mu, transitions[s][a][s']}; decimal
/// literals round-trip bit-exactly.
nlohmann::json environment_to_json(const Environment& env);
Environment environment_from_json(const nlohmann::json& j);

/// {features: column-major nested array, r: array}
nlohmann::json bandit_task_to_json(const BanditTask& task);
BanditTask bandit_task_from_json(const nlohmann::json& j);

/// Replayable task streams: one task per line.
void write_task_stream(const std::string& path, const std::vector<BanditTask>& tasks);
std::vector<BanditTask> read_task_stream(const std::string& path);

nlohmann::json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

/// In-memory JSONL buffer flushed once per run.
class RunLog {
 public:
  void add(nlohmann::json line) { lines_.push_back(std::move(line)); }
  const std::vector<nlohmann::json>& lines() const { return lines_; }
  void write(const std::string& path) const;

 private:
  std::vector<nlohmann::json> lines_;
};

}  // namespace rirl
