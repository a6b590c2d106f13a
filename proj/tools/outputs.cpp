#include "outputs.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "misinfo/error.hpp"
#include "svg_plot.hpp"

namespace misinfo::cli {

using nlohmann::json;

namespace {

json vec_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json mat_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Vec vec_from(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) {
    throw InvalidInput(field + ": expected a non-empty array");
  }
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw InvalidInput(field + ": expected numbers");
    out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
  }
  return out;
}

Mat mat_from(const json& v, Eigen::Index dim, const std::string& field) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != dim) {
    throw InvalidInput(field + ": expected " + std::to_string(dim) + " rows");
  }
  Mat m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Vec row = vec_from(v[static_cast<std::size_t>(i)], field);
    if (row.size() != dim) throw InvalidInput(field + ": ragged row");
    m.row(i) = row.transpose();
  }
  return m;
}

std::vector<double> plus(const std::vector<double>& a,
                         const std::vector<double>& b, double sign) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + sign * b[i];
  return out;
}

}  // namespace

std::string format_sci(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.8e", value);
  return buf;
}

std::string sweep_csv(const ConvergenceCurve& curve) {
  std::string out = "epsilon,true_mean,true_std,false_mean,false_std\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out += format_sci(curve.epsilons[i]) + ',' + format_sci(curve.true_mean[i]) +
           ',' + format_sci(curve.true_std[i]) + ',' +
           format_sci(curve.false_mean[i]) + ',' +
           format_sci(curve.false_std[i]) + '\n';
  }
  return out;
}

std::string utility_csv(const std::vector<UtilityBreakdown>& curve) {
  std::string out = "epsilon,u1,u2,total,u1_pass_delta,u2_pass_alpha\n";
  for (const auto& b : curve) {
    out += format_sci(b.epsilon) + ',' + format_sci(b.u1) + ',' +
           format_sci(b.u2) + ',' + format_sci(b.total) + ',' +
           (b.u1_pass_delta ? "1" : "0") + ',' + (b.u2_pass_alpha ? "1" : "0") +
           '\n';
  }
  return out;
}

std::string sweep_svg(const ConvergenceCurve& curve, const std::string& title) {
  SvgPlot plot(title, "filter radius epsilon", "mean convergence distance");
  plot.add_band(curve.epsilons, plus(curve.true_mean, curve.true_std, -1.0),
                plus(curve.true_mean, curve.true_std, 1.0), "#1f5fbf");
  plot.add_band(curve.epsilons, plus(curve.false_mean, curve.false_std, -1.0),
                plus(curve.false_mean, curve.false_std, 1.0), "#cc2222");
  plot.add_line(curve.epsilons, curve.true_mean, "#1f5fbf", "true source");
  plot.add_line(curve.epsilons, curve.false_mean, "#cc2222", "false source");
  return plot.render();
}

std::string utility_svg(const PolicyOptimum& optimum, double beta) {
  std::vector<double> eps, u1, u2, total;
  for (const auto& b : optimum.curve) {
    eps.push_back(b.epsilon);
    u1.push_back(b.u1);
    u2.push_back(b.u2);
    total.push_back(b.total);
  }
  char title[64];
  std::snprintf(title, sizeof title, "network utility, beta = %g", beta);
  SvgPlot plot(title, "filter radius epsilon", "utility");
  plot.add_line(eps, u1, "#cc2222", "U1 separation");
  plot.add_line(eps, u2, "#1f5fbf", "U2 permissiveness");
  plot.add_line(eps, total, "#222222", "U = U1 + beta U2");
  plot.add_marker(optimum.epsilon_star, "#2a9d2a", "epsilon*");
  return plot.render();
}

json design_json(const ReportDesign& design, double epsilon, bool admissible,
                 const SampleStats& convergence) {
  json doc;
  doc["y_star"] = vec_json(design.y_star);
  doc["lambda_star"] = design.lambda_star;
  doc["binding"] = design.binding;
  doc["objective"] = design.objective;
  doc["admissible"] = admissible;
  doc["epsilon"] = std::isfinite(epsilon) ? json(epsilon) : json(nullptr);
  doc["convergence_mean"] = convergence.mean;
  doc["convergence_std"] = convergence.std;
  return doc;
}

json summary_json(const PolicyOptimum& optimum, const PolicyConfig& policy,
                  Audience audience, std::size_t n_samples,
                  std::uint64_t seed) {
  const auto& star = optimum.curve[optimum.index];
  json doc;
  doc["epsilon_star"] = optimum.epsilon_star;
  doc["total_at_star"] = optimum.total_at_star;
  doc["u1_at_star"] = star.u1;
  doc["u2_at_star"] = star.u2;
  doc["interior"] =
      optimum.index > 0 && optimum.index + 1 < optimum.curve.size();
  doc["beta"] = policy.beta;
  doc["d_min"] = policy.d_min;
  doc["delta"] = policy.delta;
  doc["alpha"] = policy.alpha;
  doc["audience"] = std::string(to_string(audience));
  doc["n_samples"] = n_samples;
  doc["seed"] = seed;
  doc["grid_size"] = optimum.curve.size();
  return doc;
}

json instance_json(const OracleInstance& instance) {
  json viewers = json::array();
  for (const auto& v : instance.population.viewers()) {
    viewers.push_back({{"mu", vec_json(v.mu())},
                       {"sigma", mat_json(v.sigma().matrix())},
                       {"sigma_s", mat_json(v.sigma_s().matrix())}});
  }
  return {{"x_s", vec_json(instance.x_s)},
          {"x_t", vec_json(instance.x_t)},
          {"epsilon", instance.epsilon},
          {"viewers", viewers}};
}

OracleInstance instance_from_json(const json& doc) {
  if (!doc.is_object()) throw InvalidInput("instance: expected an object");
  for (const char* key : {"x_s", "x_t", "epsilon", "viewers"}) {
    if (!doc.contains(key)) {
      throw InvalidInput(std::string("instance: missing '") + key + "'");
    }
  }
  Vec x_s = vec_from(doc["x_s"], "x_s");
  Vec x_t = vec_from(doc["x_t"], "x_t");
  const auto dim = x_s.size();
  require_vector(x_t, dim, "x_t");
  if (!doc["epsilon"].is_number()) throw InvalidInput("epsilon: expected a number");
  if (!doc["viewers"].is_array()) throw InvalidInput("viewers: expected an array");
  std::vector<ViewerProfile> viewers;
  for (const auto& v : doc["viewers"]) {
    try {
      viewers.emplace_back(vec_from(v.at("mu"), "mu"),
                           Covariance(mat_from(v.at("sigma"), dim, "sigma")),
                           Covariance(mat_from(v.at("sigma_s"), dim, "sigma_s")));
    } catch (const json::exception& e) {
      throw InvalidInput(std::string("instance viewer: ") + e.what());
    } catch (const DegenerateModel& e) {
      throw InvalidInput(std::string("instance viewer: ") + e.what());
    }
  }
  return OracleInstance{Population(std::move(viewers)), std::move(x_s),
                        std::move(x_t), doc["epsilon"].get<double>()};
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw InvalidInput("cannot create output directory " + dir.string() +
                       (ec ? ": " + ec.message() : ""));
  }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw InvalidInput("failed writing " + path.string());
}

}  // namespace misinfo::cli
