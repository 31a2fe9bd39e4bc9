#include "rirl/serialize.hpp"

#include <fstream>
#include <stdexcept>

#include "rirl/errors.hpp"

namespace rirl {

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json j = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = j[i].get<double>();
  return v;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json cols = nlohmann::json::array();
  for (int c = 0; c < m.cols(); ++c) cols.push_back(vector_to_json(m.col(c)));
  return cols;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  if (j.empty()) throw ConfigError("matrix: empty column list");
  const int cols = static_cast<int>(j.size());
  const int rows = static_cast<int>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (int c = 0; c < cols; ++c) {
    if (static_cast<int>(j[c].size()) != rows) throw ConfigError("matrix: ragged columns");
    m.col(c) = vector_from_json(j[c]);
  }
  return m;
}

nlohmann::json environment_to_json(const Environment& env) {
  nlohmann::json j;
  j["num_states"] = env.num_states;
  j["num_actions"] = env.num_actions;
  j["gamma"] = env.gamma;
  j["mu"] = vector_to_json(env.mu);
  nlohmann::json rows = nlohmann::json::array();
  for (int s = 0; s < env.num_states; ++s) {
    nlohmann::json per_action = nlohmann::json::array();
    for (int a = 0; a < env.num_actions; ++a) {
      per_action.push_back(vector_to_json(env.transitions[a].row(s).transpose()));
    }
    rows.push_back(std::move(per_action));
  }
  j["transitions"] = std::move(rows);
  return j;
}

Environment environment_from_json(const nlohmann::json& j) {
  Environment env;
  env.num_states = j.at("num_states").get<int>();
  env.num_actions = j.at("num_actions").get<int>();
  env.gamma = j.at("gamma").get<double>();
  env.mu = vector_from_json(j.at("mu"));
  env.transitions.assign(env.num_actions,
                         Eigen::MatrixXd::Zero(env.num_states, env.num_states));
  const auto& rows = j.at("transitions");
  if (static_cast<int>(rows.size()) != env.num_states) {
    throw ConfigError("environment: transitions row count mismatch");
  }
  for (int s = 0; s < env.num_states; ++s) {
    const auto& per_action = rows[s];
    if (static_cast<int>(per_action.size()) != env.num_actions) {
      throw ConfigError("environment: transitions action count mismatch");
    }
    for (int a = 0; a < env.num_actions; ++a) {
      env.transitions[a].row(s) = vector_from_json(per_action[a]).transpose();
    }
  }
  env.validate();
  return env;
}

nlohmann::json bandit_task_to_json(const BanditTask& task) {
  nlohmann::json j;
  j["features"] = matrix_to_json(task.features);
  j["r"] = vector_to_json(task.r);
  return j;
}

BanditTask bandit_task_from_json(const nlohmann::json& j) {
  BanditTask task;
  task.features = matrix_from_json(j.at("features"));
  task.r = vector_from_json(j.at("r"));
  task.validate();
  return task;
}

void write_task_stream(const std::string& path, const std::vector<BanditTask>& tasks) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (const BanditTask& t : tasks) out << bandit_task_to_json(t).dump() << '\n';
}

std::vector<BanditTask> read_task_stream(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open task stream " + path);
  std::vector<BanditTask> tasks;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    tasks.push_back(bandit_task_from_json(nlohmann::json::parse(line)));
  }
  return tasks;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

void RunLog::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (const nlohmann::json& line : lines_) out << line.dump() << '\n';
}

}  // namespace rirl
