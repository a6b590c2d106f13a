#include "config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <string>

#include "misinfo/error.hpp"

namespace misinfo::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  if (!obj.is_object()) throw InvalidInput(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw InvalidInput(where + ": unknown key '" + key + "'");
    }
  }
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw InvalidInput(field + ": expected a number");
  return v.get<double>();
}

std::size_t count(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw InvalidInput(field + ": expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

Mat matrix(const json& v, Eigen::Index dim, const std::string& field) {
  Mat m = Mat::Zero(dim, dim);
  if (v.is_object()) {
    reject_unknown(v, {"diag"}, field);
    if (!v.contains("diag") || !v["diag"].is_array() ||
        static_cast<Eigen::Index>(v["diag"].size()) != dim) {
      throw InvalidInput(field + ".diag: expected " + std::to_string(dim) +
                         " numbers");
    }
    for (Eigen::Index i = 0; i < dim; ++i) {
      m(i, i) = number(v["diag"][i], field + ".diag");
    }
    return m;
  }
  if (!v.is_array()) {
    throw InvalidInput(field + ": expected a row-major list or {\"diag\": [...]}");
  }
  const auto n = static_cast<std::size_t>(dim);
  if (v.size() == n && !v.empty() && v[0].is_array()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!v[i].is_array() || v[i].size() != n) {
        throw InvalidInput(field + ": row " + std::to_string(i) + " must have " +
                           std::to_string(n) + " entries");
      }
      for (std::size_t j = 0; j < n; ++j) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            number(v[i][j], field);
      }
    }
    return m;
  }
  if (v.size() == n * n) {
    for (std::size_t k = 0; k < n * n; ++k) {
      m(static_cast<Eigen::Index>(k / n), static_cast<Eigen::Index>(k % n)) =
          number(v[k], field);
    }
    return m;
  }
  throw InvalidInput(field + ": expected a " + std::to_string(dim) + "x" +
                     std::to_string(dim) + " matrix");
}

Covariance covariance(const json& v, Eigen::Index dim, const std::string& field) {
  try {
    return Covariance(matrix(v, dim, field));
  } catch (const DegenerateModel& e) {
    throw InvalidInput(field + ": " + e.what());
  }
}

json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

void RunConfig::validate() const {
  try {
    scenario.validate();
    policy.validate();
  } catch (const Error& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  if (!(epsilon_grid.step > 0.0)) {
    throw InvalidInput("epsilon_grid.step must be > 0");
  }
  if (!(epsilon_grid.start < epsilon_grid.stop)) {
    throw InvalidInput("epsilon_grid.start must be < epsilon_grid.stop");
  }
  if (!(epsilon_grid.start > 0.0)) {
    throw InvalidInput("epsilon_grid.start must be > 0");
  }
  if (n_draws == 0) throw InvalidInput("n_draws must be >= 1");
}

RunConfig config_from_json(const json& doc) {
  reject_unknown(doc,
                 {"scenario", "policy", "epsilon_grid", "n_draws", "seed",
                  "output_dir", "emit_svg"},
                 "config");
  RunConfig cfg;
  if (doc.contains("scenario")) {
    const json& s = doc["scenario"];
    reject_unknown(s,
                   {"dim", "sigma", "sigma_s", "mu_spread", "n_viewers",
                    "audience"},
                   "scenario");
    ScenarioSpec& spec = cfg.scenario;
    if (s.contains("dim")) {
      const std::size_t dim = count(s["dim"], "scenario.dim");
      if (dim < 1) throw InvalidInput("scenario.dim must be >= 1");
      spec.dim = static_cast<Eigen::Index>(dim);
      spec.sigma = Covariance::scaled_identity(spec.dim, 1.0);
      spec.sigma_s = Covariance::scaled_identity(spec.dim, 0.5);
      spec.mu_spread = 0.1 * Mat::Identity(spec.dim, spec.dim);
    }
    if (s.contains("sigma")) {
      spec.sigma = covariance(s["sigma"], spec.dim, "scenario.sigma");
    }
    if (s.contains("sigma_s")) {
      spec.sigma_s = covariance(s["sigma_s"], spec.dim, "scenario.sigma_s");
    }
    if (s.contains("mu_spread")) {
      spec.mu_spread = matrix(s["mu_spread"], spec.dim, "scenario.mu_spread");
    }
    if (s.contains("n_viewers")) {
      spec.n_viewers = count(s["n_viewers"], "scenario.n_viewers");
    }
    if (s.contains("audience")) {
      if (!s["audience"].is_string()) {
        throw InvalidInput("scenario.audience: expected a string");
      }
      spec.audience = parse_audience(s["audience"].get<std::string>());
    }
  }
  if (doc.contains("policy")) {
    const json& p = doc["policy"];
    reject_unknown(p, {"epsilon", "beta", "d_min", "delta", "alpha"}, "policy");
    if (p.contains("epsilon")) {
      cfg.policy.epsilon = number(p["epsilon"], "policy.epsilon");
    }
    if (p.contains("beta")) cfg.policy.beta = number(p["beta"], "policy.beta");
    if (p.contains("d_min")) {
      cfg.policy.d_min = number(p["d_min"], "policy.d_min");
    }
    if (p.contains("delta")) {
      cfg.policy.delta = number(p["delta"], "policy.delta");
    }
    if (p.contains("alpha")) {
      cfg.policy.alpha = number(p["alpha"], "policy.alpha");
    }
  }
  cfg.scenario.d_min = cfg.policy.d_min;
  if (doc.contains("epsilon_grid")) {
    const json& g = doc["epsilon_grid"];
    reject_unknown(g, {"start", "stop", "step"}, "epsilon_grid");
    if (g.contains("start")) {
      cfg.epsilon_grid.start = number(g["start"], "epsilon_grid.start");
    }
    if (g.contains("stop")) {
      cfg.epsilon_grid.stop = number(g["stop"], "epsilon_grid.stop");
    }
    if (g.contains("step")) {
      cfg.epsilon_grid.step = number(g["step"], "epsilon_grid.step");
    }
  }
  if (doc.contains("n_draws")) cfg.n_draws = count(doc["n_draws"], "n_draws");
  if (doc.contains("seed")) {
    const json& s = doc["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      throw InvalidInput("seed: expected an unsigned 64-bit integer");
    }
    cfg.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) {
      throw InvalidInput("output_dir: expected a string");
    }
    cfg.output_dir = doc["output_dir"].get<std::string>();
  }
  if (doc.contains("emit_svg")) {
    if (!doc["emit_svg"].is_boolean()) {
      throw InvalidInput("emit_svg: expected true or false");
    }
    cfg.emit_svg = doc["emit_svg"].get<bool>();
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw InvalidInput("config " + path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

json config_to_json(const RunConfig& config) {
  json doc;
  doc["scenario"] = {
      {"dim", config.scenario.dim},
      {"sigma", matrix_to_json(config.scenario.sigma.matrix())},
      {"sigma_s", matrix_to_json(config.scenario.sigma_s.matrix())},
      {"mu_spread", matrix_to_json(config.scenario.mu_spread)},
      {"n_viewers", config.scenario.n_viewers},
      {"audience", std::string(to_string(config.scenario.audience))},
  };
  doc["policy"] = {{"epsilon", config.policy.epsilon},
                   {"beta", config.policy.beta},
                   {"d_min", config.policy.d_min},
                   {"delta", config.policy.delta},
                   {"alpha", config.policy.alpha}};
  doc["epsilon_grid"] = {{"start", config.epsilon_grid.start},
                         {"stop", config.epsilon_grid.stop},
                         {"step", config.epsilon_grid.step}};
  doc["n_draws"] = config.n_draws;
  if (config.seed) doc["seed"] = *config.seed;
  doc["output_dir"] = config.output_dir.string();
  doc["emit_svg"] = config.emit_svg;
  return doc;
}

Vec parse_vector(std::string_view text, std::string_view field) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string_view token = text.substr(pos, comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    double value = 0.0;
    const auto [end, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() ||
        end != token.data() + token.size()) {
      throw InvalidInput(std::string(field) + ": cannot parse '" +
                         std::string(token) + "' as a number");
    }
    values.push_back(value);
    pos = comma + 1;
  }
  Vec v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = values[i];
  }
  require_finite(v, field);
  return v;
}

}  // namespace misinfo::cli
