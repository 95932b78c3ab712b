#include "stopbound/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace stopbound {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument("ModelParams: " + msg);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

ModelParams::ModelParams(double r_, double alpha1_, double alpha2_, double sigma1_,
                         double sigma2_, double q1_, double q2_, double cost_)
    : r(r_),
      alpha1(alpha1_),
      alpha2(alpha2_),
      sigma1(sigma1_),
      sigma2(sigma2_),
      q1(q1_),
      q2(q2_),
      cost(cost_),
      delta1(r_ - alpha1_),
      delta2(r_ - alpha2_),
      lambda((r_ - alpha2_) / q2_) {
  require(std::isfinite(r) && std::isfinite(alpha1) && std::isfinite(alpha2) &&
              std::isfinite(sigma1) && std::isfinite(sigma2) && std::isfinite(q1) &&
              std::isfinite(q2) && std::isfinite(cost),
          "all parameters must be finite");
  require(r > 0.0, "r must be positive");
  require(sigma1 > 0.0, "sigma1 must be positive");
  require(sigma2 > 0.0, "sigma2 must be positive");
  require(q1 > 0.0, "Q1 must be positive");
  require(q2 > 0.0, "Q2 must be positive");
  require(cost > 0.0, "I must be positive");
  require(r > std::max(alpha1, alpha2), "r must exceed both drift rates");
  // Implied by the check above; keep as a hard assertion on the derived state.
  require(delta1 > 0.0 && delta2 > 0.0, "net discount rates must be positive");
}

double payoff(const ModelParams& p, double x, double y) {
  return p.q1 * x / p.delta1 + p.q2 * y / p.delta2 - p.cost;
}

double indifference_line(const ModelParams& p, double x) {
  return (p.delta2 / p.q2) * (p.cost - p.q1 * x / p.delta1);
}

double kill_line(const ModelParams& p, double x) {
  return (p.r * p.cost - p.q1 * x) / p.q2;
}

ModelParams parse_model_config(std::istream& in) {
  static const char* const kKeys[] = {"r",      "alpha1", "alpha2", "sigma1",
                                      "sigma2", "Q1",     "Q2",     "I"};
  std::map<std::string, double> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (std::find_if(std::begin(kKeys), std::end(kKeys),
                     [&](const char* k) { return key == k; }) == std::end(kKeys)) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": unknown key '" + key + "'");
    }
    if (seen.count(key)) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": duplicate key '" + key + "'");
    }
    std::size_t consumed = 0;
    double parsed = 0.0;
    try {
      parsed = std::stod(value, &consumed);
    } catch (const std::exception&) {
      consumed = 0;
    }
    if (consumed != value.size() || value.empty()) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": malformed number '" + value + "'");
    }
    seen[key] = parsed;
  }
  for (const char* k : kKeys) {
    if (!seen.count(k)) {
      throw std::invalid_argument(std::string("config: missing key '") + k + "'");
    }
  }
  return ModelParams(seen["r"], seen["alpha1"], seen["alpha2"], seen["sigma1"],
                     seen["sigma2"], seen["Q1"], seen["Q2"], seen["I"]);
}

ModelParams load_model_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("config: cannot open '" + path.string() + "'");
  }
  try {
    return parse_model_config(in);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

}  // namespace stopbound
