#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mfq/classical_flow.hpp"
#include "mfq/cli/config.hpp"
#include "mfq/convergence.hpp"
#include "mfq/states.hpp"

namespace mfq::cli {

enum ExitCode : int { kOk = 0, kViolation = 1, kConfigError = 2, kCapacityError = 3 };

ClassicalHamiltonian make_hamiltonian(const ExperimentConfig& c);
// Uses the run seed for any random state parameters.
StateFamily make_family(const ExperimentConfig& c, int d);
// rand11:k | number | norm:k | unit:i:j | field:j
std::vector<Observable> make_observables(const ExperimentConfig& c, int d);

int cmd_propagate(const ExperimentConfig& c, std::ostream& csv);
int cmd_bbgky(const ExperimentConfig& c, std::ostream& csv);
int cmd_gibbs_moments(const ExperimentConfig& c, std::ostream& csv);
int cmd_approx_bound(const ExperimentConfig& c, std::ostream& csv);
int cmd_check(const std::vector<std::string>& suites, double eps, double assumed_eps, std::uint64_t seed, std::ostream& out);

// Full command line; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mfq::cli
