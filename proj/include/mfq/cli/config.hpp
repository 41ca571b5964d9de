#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfq/numerics.hpp"

namespace mfq::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, int line = 0, std::string key = {});
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

struct ModelConfig {
  std::string kind = "twobody";  // twobody | lll | hvn
  int d = 2;
  double q_norm = 1.0;
  std::uint64_t seed = 0;  // 0: use the run seed
  double h = 0.5;
  int M = 4;
  std::vector<double> alphas{1.0};  // alpha_2, alpha_3, ...
  int m = 3;
  double v_scale = 1.0;
  double dx = 1.0;
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct StateConfig {
  std::string kind = "hermite";  // hermite | coherent | tensor | gibbs
  std::vector<cplx> phi;         // empty: seeded random unit vector
  std::vector<cplx> xi;
  std::vector<double> lambda;
  std::vector<double> nu;
  double localize_R = 0.0;  // 0: no localization
  friend bool operator==(const StateConfig&, const StateConfig&) = default;
};

struct RunConfig {
  std::vector<double> eps;
  std::vector<double> times;
  std::vector<std::string> observables{"rand11:3"};
  std::vector<int> orders{1};
  std::string n_max = "adaptive";  // adaptive | integer
  double tail_budget = 1e-10;
  std::uint64_t seed = 1;
  int workers = 1;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct ApproxSection {
  std::vector<int> K{1, 2, 3, 4};
  double R = 1.0;
  double t_fraction = 0.5;  // t = t_fraction * small_time(h, R, 1/2)
  int samples = 10;
  int quadrature_order = 8;
  friend bool operator==(const ApproxSection&, const ApproxSection&) = default;
};

struct GibbsSection {
  std::vector<double> x{-0.2, 0.2};
  int k_max = 2;
  friend bool operator==(const GibbsSection&, const GibbsSection&) = default;
};

struct OutputConfig {
  std::string path;  // empty or "-": stdout
  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct ExperimentConfig {
  ModelConfig model;
  StateConfig state;
  RunConfig run;
  ApproxSection approx;
  GibbsSection gibbs;
  OutputConfig output;
  // Source line of each "section.key" that was set; not part of equality.
  std::map<std::string, int> lines;

  bool operator==(const ExperimentConfig& o) const {
    return model == o.model && state == o.state && run == o.run && approx == o.approx && gibbs == o.gibbs && output == o.output;
  }
  int line_of(const std::string& key) const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
// Canonical text form; parse_config(print_config(c)) == c.
std::string print_config(const ExperimentConfig& c);
// Semantic checks that do not depend on the subcommand.
void validate(const ExperimentConfig& c);

// Shortest round-trip text of a double.
std::string format_real(double v);
// 17 significant digits, '.' decimal point, no locale.
std::string format_csv(double v);

}  // namespace mfq::cli
