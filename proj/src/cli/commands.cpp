#include "mfq/cli/commands.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "mfq/cli/checks.hpp"
#include "mfq/errors.hpp"
#include "mfq/models.hpp"
#include "mfq/quantum_dynamics.hpp"

namespace mfq::cli {

namespace {

std::uint64_t model_seed(const ExperimentConfig& c) { return c.model.seed != 0 ? c.model.seed : c.run.seed; }

int fixed_n_max(const ExperimentConfig& c) { return c.run.n_max == "adaptive" ? -1 : std::stoi(c.run.n_max); }

Vec to_vec(const std::vector<cplx>& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

RVec to_rvec(const std::vector<double>& v) {
  RVec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

void require_dim(const ExperimentConfig& c, const std::string& key, std::size_t got, int d) {
  if (got != static_cast<std::size_t>(d))
    throw ConfigError("expected " + std::to_string(d) + " entries for the model dimension, got " + std::to_string(got), c.line_of(key), key);
}

// Replaces the family's truncation policy by a fixed n_max.
StateFamily with_fixed_n_max(StateFamily f, const ExperimentConfig& c, int d, int n_max) {
  const std::string kind = c.state.kind;
  const double budget = c.run.tail_budget;
  const Vec xi = to_vec(c.state.xi);
  const RVec lambda = to_rvec(c.state.lambda), nu = to_rvec(c.state.nu);
  std::function<DensityMatrix(double)> gen;
  if (kind == "coherent") {
    gen = [=](double eps) { return coherent_state(xi, build_space(d, n_max, eps), budget); };
  } else if (kind == "gibbs") {
    gen = [=](double eps) { return gibbs_state(nu, build_space(d, n_max, eps), budget); };
  } else if (kind == "tensor") {
    gen = [=](double eps) {
      const int N = particle_number(eps);
      if (N > n_max) throw CapacityError("tensor state needs n_max >= " + std::to_string(N));
      return tensor_state(lambda, N, build_space(d, n_max, eps));
    };
  } else {
    const Vec unit = std::get<CircleDiracMeasure>(f.predicted_measure.variant()).phi;
    gen = [=](double eps) {
      const int N = particle_number(eps);
      if (N > n_max) throw CapacityError("Hermite state needs n_max >= " + std::to_string(N));
      return hermite_state(unit, N, build_space(d, n_max, eps));
    };
  }
  f.generate = gen;
  return f;
}

}  // namespace

ClassicalHamiltonian make_hamiltonian(const ExperimentConfig& c) {
  if (c.model.kind == "twobody") return TwoBodyModel::random(c.model.d, c.model.q_norm, model_seed(c)).hamiltonian();
  if (c.model.kind == "lll") {
    LLLModel m{c.model.h, c.model.M, {}};
    for (std::size_t i = 0; i < c.model.alphas.size(); ++i) m.alphas[static_cast<int>(i) + 2] = c.model.alphas[i];
    return m.hamiltonian();
  }
  return hvn_bosonize(HvNModel::random(c.model.m, c.model.v_scale, model_seed(c), c.model.dx));
}

namespace {

StateFamily base_family(const ExperimentConfig& c, int d) {
  const double budget = c.run.tail_budget;
  const std::string& kind = c.state.kind;
  if (kind == "hermite") {
    std::mt19937_64 rng(c.run.seed);
    Vec phi = random_unit_vector(rng, d);
    if (!c.state.phi.empty()) {
      require_dim(c, "state.phi", c.state.phi.size(), d);
      phi = to_vec(c.state.phi);
      if (std::abs(phi.norm() - 1.0) > 1e-12) throw ConfigError("phi must be a unit vector", c.line_of("state.phi"), "state.phi");
    }
    return hermite_family(phi);
  }
  if (kind == "coherent") {
    if (c.state.xi.empty()) throw ConfigError("coherent states need xi", c.line_of("state.kind"), "state.xi");
    require_dim(c, "state.xi", c.state.xi.size(), d);
    return coherent_family(to_vec(c.state.xi), budget);
  }
  if (kind == "tensor") {
    if (c.state.lambda.empty() || c.state.lambda.size() > static_cast<std::size_t>(d))
      throw ConfigError("tensor states need 1..d weights", c.line_of("state.lambda"), "state.lambda");
    RVec lambda = RVec::Zero(d);
    lambda.head(static_cast<Eigen::Index>(c.state.lambda.size())) = to_rvec(c.state.lambda);
    if ((lambda.array() < 0.0).any() || std::abs(lambda.sum() - 1.0) > 1e-12)
      throw ConfigError("weights must be non-negative and sum to 1", c.line_of("state.lambda"), "state.lambda");
    return tensor_family(lambda);
  }
  require_dim(c, "state.nu", c.state.nu.size(), d);
  for (double v : c.state.nu)
    if (v < 0.0) throw ConfigError("nu must be non-negative", c.line_of("state.nu"), "state.nu");
  return gibbs_family(to_rvec(c.state.nu), budget);
}

}  // namespace

StateFamily make_family(const ExperimentConfig& c, int d) {
  StateFamily f = base_family(c, d);
  const int nfix = fixed_n_max(c);
  if (nfix >= 0) {
    ExperimentConfig cc = c;
    if (c.state.kind == "tensor") {
      cc.state.lambda.assign(static_cast<std::size_t>(d), 0.0);
      for (std::size_t i = 0; i < c.state.lambda.size(); ++i) cc.state.lambda[i] = c.state.lambda[i];
    }
    f = with_fixed_n_max(f, cc, d, nfix);
  }
  if (c.state.localize_R > 0.0) f = localized_family(f, c.state.localize_R);
  return f;
}

std::vector<Observable> make_observables(const ExperimentConfig& c, int d) {
  std::mt19937_64 rng(c.run.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Observable> out;
  const int line = c.line_of("run.observables");
  auto bad = [&](const std::string& item, const std::string& why) { return ConfigError("'" + item + "': " + why, line, "run.observables"); };
  auto to_int = [&](const std::string& item, const std::string& s) {
    try {
      std::size_t pos = 0;
      const int v = std::stoi(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw bad(item, "expected an integer");
    }
  };
  for (const auto& item : c.run.observables) {
    std::vector<std::string> parts;
    std::stringstream ss(item);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    const std::string& name = parts.empty() ? item : parts[0];
    if (name == "rand11" && parts.size() == 2) {
      const int k = to_int(item, parts[1]);
      if (k < 1) throw bad(item, "count must be positive");
      for (int i = 0; i < k; ++i) out.push_back({"rand11_" + std::to_string(i), CompoundSymbol(PolynomialSymbol(1, 1, d, random_hermitian(rng, d)))});
    } else if (name == "number" && parts.size() == 1) {
      out.push_back({"number", CompoundSymbol(PolynomialSymbol::norm_power(1, d))});
    } else if (name == "norm" && parts.size() == 2) {
      const int k = to_int(item, parts[1]);
      if (k < 0) throw bad(item, "power must be non-negative");
      out.push_back({"norm_" + parts[1], CompoundSymbol(PolynomialSymbol::norm_power(k, d))});
    } else if (name == "unit" && parts.size() == 3) {
      const int i = to_int(item, parts[1]), j = to_int(item, parts[2]);
      if (i < 0 || j < 0 || i >= d || j >= d) throw bad(item, "mode index out of range");
      PolynomialSymbol u = PolynomialSymbol::zero(1, 1, d);
      u.kernel(i, j) = 1.0;
      out.push_back({"unit_" + parts[1] + "_" + parts[2], CompoundSymbol(u)});
    } else if (name == "field" && parts.size() == 2) {
      const int j = to_int(item, parts[1]);
      if (j < 0 || j >= d) throw bad(item, "mode index out of range");
      CompoundSymbol f(d);
      f.add(PolynomialSymbol::linear(Vec::Unit(d, j)));
      f.add(PolynomialSymbol::antilinear(Vec::Unit(d, j)));
      out.push_back({"field_" + parts[1], f});
    } else {
      throw bad(item, "unknown observable (rand11:k, number, norm:k, unit:i:j, field:j)");
    }
  }
  return out;
}

int cmd_propagate(const ExperimentConfig& c, std::ostream& csv) {
  if (c.run.eps.empty()) throw ConfigError("propagate needs an eps schedule", c.line_of("run.eps"), "run.eps");
  const ClassicalHamiltonian h = make_hamiltonian(c);
  const StateFamily f = make_family(c, h.d());
  const auto obs = make_observables(c, h.d());
  StudyOptions opt;
  opt.workers = c.run.workers;
  const auto rows = convergence_study(f, h, obs, c.run.times, c.run.eps, opt);
  csv << "eps,t,observable_id,quantum_re,quantum_im,classical_re,classical_im,abs_error,n_max_used,trunc_deficit\n";
  for (const auto& r : rows)
    csv << format_csv(r.eps) << ',' << format_csv(r.t) << ',' << r.observable << ',' << format_csv(r.quantum.real()) << ','
        << format_csv(r.quantum.imag()) << ',' << format_csv(r.classical.real()) << ',' << format_csv(r.classical.imag()) << ','
        << format_csv(r.abs_error) << ',' << r.n_max_used << ',' << format_csv(r.deficit) << '\n';
  return kOk;
}

int cmd_bbgky(const ExperimentConfig& c, std::ostream& csv) {
  if (c.run.eps.empty()) throw ConfigError("bbgky needs an eps schedule", c.line_of("run.eps"), "run.eps");
  const ClassicalHamiltonian h = make_hamiltonian(c);
  const StateFamily f = make_family(c, h.d());
  StudyOptions opt;
  opt.workers = c.run.workers;
  const auto rows = bbgky_study(f, h, c.run.orders, c.run.times, c.run.eps, opt);
  csv << "eps,t,p,trace_distance,n_max_used,trunc_deficit\n";
  for (const auto& r : rows)
    csv << format_csv(r.eps) << ',' << format_csv(r.t) << ',' << r.p << ',' << format_csv(r.distance) << ',' << r.n_max_used << ','
        << format_csv(r.deficit) << '\n';
  return kOk;
}

int cmd_gibbs_moments(const ExperimentConfig& c, std::ostream& csv) {
  if (c.state.kind != "gibbs") throw ConfigError("gibbs-moments needs state.kind = gibbs", c.line_of("state.kind"), "state.kind");
  if (c.run.eps.empty()) throw ConfigError("gibbs-moments needs an eps schedule", c.line_of("run.eps"), "run.eps");
  if (c.state.nu.empty()) throw ConfigError("gibbs states need nu", c.line_of("state.kind"), "state.nu");
  const RVec nu = to_rvec(c.state.nu);
  const int d = static_cast<int>(nu.size());
  for (double x : c.gibbs.x)
    if (x * nu.maxCoeff() >= 1.0) throw ConfigError("generating function diverges at x = " + format_real(x), c.line_of("gibbs.x"), "gibbs.x");
  // k! h_k(nu): moments of the limiting Gaussian
  std::vector<double> hk(static_cast<std::size_t>(c.gibbs.k_max) + 1, 0.0);
  hk[0] = 1.0;
  for (int i = 0; i < d; ++i)
    for (int k = 1; k <= c.gibbs.k_max; ++k) hk[static_cast<std::size_t>(k)] += nu(i) * hk[static_cast<std::size_t>(k) - 1];

  ExperimentConfig cc = c;
  cc.state.localize_R = 0.0;
  const StateFamily f = make_family(cc, d);
  csv << "eps,quantity,x,quantum,limit,abs_error,rel_error,n_max_used,trunc_deficit\n";
  for (double eps : c.run.eps) {
    const DensityMatrix rho = f.generate(eps);
    const int n = rho.space()->n_max();
    auto row = [&](const std::string& q, double x, double qv, double lim) {
      csv << format_csv(eps) << ',' << q << ',' << format_csv(x) << ',' << format_csv(qv) << ',' << format_csv(lim) << ','
          << format_csv(std::abs(qv - lim)) << ',' << format_csv(std::abs(qv - lim) / std::abs(lim)) << ',' << n << ','
          << format_csv(rho.deficit()) << '\n';
    };
    for (double x : c.gibbs.x) {
      // (1 + eps x)^{N/eps} = (1 + eps x)^n on level n
      const double qv = number_function_expectation(rho, [eps, x](double en) { return std::pow(1.0 + eps * x, std::round(en / eps)); });
      double lim = 1.0;
      for (int i = 0; i < d; ++i) lim /= 1.0 - nu(i) * x;
      row("genfun", x, qv, lim);
    }
    for (int k = 1; k <= c.gibbs.k_max; ++k) row("moment_" + std::to_string(k), 0.0, number_moment(rho, k), factorial(k) * hk[static_cast<std::size_t>(k)]);
  }
  return kOk;
}

int cmd_approx_bound(const ExperimentConfig& c, std::ostream& csv) {
  const ClassicalHamiltonian h = make_hamiltonian(c);
  const auto obs = make_observables(c, h.d());
  const double R = c.approx.R;
  const double t = h.Q_terms().empty() ? c.approx.t_fraction : c.approx.t_fraction * small_time(h, R, 0.5);
  std::mt19937_64 rng(c.run.seed);
  std::vector<Vec> samples;
  for (int i = 0; i < c.approx.samples; ++i) samples.push_back(R * random_unit_vector(rng, h.d()));
  ApproxConfig acfg;
  acfg.quadrature_order = c.approx.quadrature_order;
  const FlowConfig fcfg{8, 1e-12, 1e-12, 0.05, 1e-3};
  std::vector<Vec> flowed;
  for (const auto& z : samples) flowed.push_back(flow(h, z, t, fcfg).z);
  int status = kOk;
  csv << "observable_id,K,t,empirical_error,bound,within_bound\n";
  for (const auto& o : obs)
    for (int K : c.approx.K) {
      const CompoundSymbol bK = approx_polynomial(o.b, h, t, K, acfg);
      double emp = 0.0;
      for (std::size_t i = 0; i < samples.size(); ++i) emp = std::max(emp, std::abs(evaluate(o.b, flowed[i]) - evaluate(bK, samples[i])));
      const double bound = remainder_bound(o.b, h, R, t, K);
      const bool ok = emp <= bound;
      if (!ok) status = kViolation;
      csv << o.id << ',' << K << ',' << format_csv(t) << ',' << format_csv(emp) << ',' << format_csv(bound) << ',' << (ok ? 1 : 0) << '\n';
    }
  return status;
}

int cmd_check(const std::vector<std::string>& suites, double eps, double assumed_eps, std::uint64_t seed, std::ostream& out) {
  int status = kOk;
  for (const auto& suite : suites.empty() ? check_suites() : suites) {
    for (const auto& r : run_suite(suite, eps, assumed_eps, seed)) {
      out << r.name << " max_residual=" << format_csv(r.residual) << " tol=" << format_csv(r.tol) << ' ' << (r.pass() ? "PASS" : "FAIL") << '\n';
      if (!r.pass()) status = kViolation;
    }
  }
  return status;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mean-field Fock-space experiments"};
  app.require_subcommand(1);
  std::string config_path, out_path;
  int workers = 0;
  std::uint64_t seed = 0;
  double tail_budget = 0.0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config file")->required();
    sub->add_option("--out", out_path, "CSV output path (default: config output.path, else stdout)");
    sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "run seed");
    sub->add_option("--tail-budget", tail_budget, "truncation tail budget")->check(CLI::PositiveNumber);
  };
  auto* propagate = app.add_subcommand("propagate", "quantum vs classical observables over (eps, t)");
  auto* bbgky = app.add_subcommand("bbgky", "reduced density matrix trace distances");
  auto* gibbs = app.add_subcommand("gibbs-moments", "Gibbs generating function and number moments");
  auto* approx = app.add_subcommand("approx-bound", "polynomial approximants against their remainder bound");
  for (auto* sub : {propagate, bbgky, gibbs, approx}) add_common(sub);

  auto* check = app.add_subcommand("check", "run invariant suites");
  std::vector<std::string> suites;
  double eps = 0.1, assumed = -1.0;
  std::uint64_t check_seed = 1;
  check->add_option("suite", suites, "ccr | wick | weyl | flow | states (default: all)")->check(CLI::IsMember(check_suites()));
  check->add_option("--eps", eps, "eps of the test spaces")->check(CLI::PositiveNumber);
  check->add_option("--assumed-eps", assumed, "eps assumed by the identities (default: --eps)");
  check->add_option("--seed", check_seed, "seed");
  check->add_option("--workers", workers, "unused by check")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (check->parsed()) return cmd_check(suites, eps, assumed > 0.0 ? assumed : eps, check_seed, out);

    ExperimentConfig cfg = load_config(config_path);
    if (workers > 0) cfg.run.workers = workers;
    if (seed != 0) cfg.run.seed = seed;
    if (tail_budget > 0.0) cfg.run.tail_budget = tail_budget;
    if (!out_path.empty()) cfg.output.path = out_path;
    validate(cfg);

    std::ostringstream csv;
    int code = kOk;
    if (propagate->parsed()) code = cmd_propagate(cfg, csv);
    if (bbgky->parsed()) code = cmd_bbgky(cfg, csv);
    if (gibbs->parsed()) code = cmd_gibbs_moments(cfg, csv);
    if (approx->parsed()) code = cmd_approx_bound(cfg, csv);
    if (cfg.output.path.empty() || cfg.output.path == "-") {
      out << csv.str();
    } else {
      std::ofstream f(cfg.output.path, std::ios::binary);
      if (!f) throw ConfigError("cannot write output file '" + cfg.output.path + "'");
      f << csv.str();
    }
    err << "seed=" << cfg.run.seed << " model_seed=" << model_seed(cfg) << '\n';
    return code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << '\n';
    return kCapacityError;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kViolation;
  }
}

}  // namespace mfq::cli
