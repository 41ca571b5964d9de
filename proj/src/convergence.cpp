#include "mfq/convergence.hpp"

#include <atomic>
#include <exception>
#include <functional>
#include <thread>

#include "mfq/errors.hpp"
#include "mfq/quantum_dynamics.hpp"
#include "mfq/reduced_density.hpp"

namespace mfq {

namespace {

// Runs task(i) for i in [0, n) on up to `workers` threads; rethrows the failure with the smallest index.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& task) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto nt = static_cast<std::size_t>(std::max(1, workers));
  if (nt == 1 || n <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < std::min(nt, n); ++k) pool.emplace_back(run);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void check_times(const std::vector<double>& times) {
  for (double t : times)
    if (!std::isfinite(t)) throw DomainError("times must be finite");
}

}  // namespace

void check_eps_schedule(const std::vector<double>& eps) {
  if (eps.empty()) throw DomainError("eps schedule must not be empty");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw DomainError("eps values must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw DomainError("eps schedule must be strictly decreasing");
  }
}

std::vector<PropagationRow> convergence_study(const StateFamily& family, const ClassicalHamiltonian& h,
                                              const std::vector<Observable>& observables, const std::vector<double>& times,
                                              const std::vector<double>& eps_schedule, const StudyOptions& opt) {
  check_eps_schedule(eps_schedule);
  check_times(times);
  for (const auto& o : observables)
    if (o.b.d() != h.d()) throw DomainError("observable " + o.id + " has the wrong dimension");
  if (times.empty() || observables.empty()) return {};

  // classical side depends on t only
  std::vector<std::vector<cplx>> classical(times.size());
  parallel_for(times.size(), opt.workers, [&](std::size_t it) {
    const WignerMeasure mut = pushforward(family.predicted_measure, h, times[it], opt.flow);
    for (const auto& o : observables) classical[it].push_back(integrate_symbol(mut, o.b, opt.measure));
  });

  const std::size_t nt = times.size();
  std::vector<std::vector<PropagationRow>> cells(eps_schedule.size() * nt);
  // one state and Hamiltonian per eps, shared by its time cells
  std::vector<std::unique_ptr<DensityMatrix>> states(eps_schedule.size());
  std::vector<std::unique_ptr<QuantumHamiltonian>> hams(eps_schedule.size());
  parallel_for(eps_schedule.size(), opt.workers, [&](std::size_t ie) {
    states[ie] = std::make_unique<DensityMatrix>(family.generate(eps_schedule[ie]));
    hams[ie] = std::make_unique<QuantumHamiltonian>(h, states[ie]->space());
  });
  parallel_for(cells.size(), opt.workers, [&](std::size_t c) {
    const std::size_t ie = c / nt, it = c % nt;
    const DensityMatrix& rho0 = *states[ie];
    const DensityMatrix rt = times[it] == 0.0 ? rho0 : evolve(rho0, *hams[ie], times[it]);
    for (std::size_t k = 0; k < observables.size(); ++k) {
      const cplx q = wick_expectation(rt, observables[k].b);
      const cplx cl = classical[it][k];
      cells[c].push_back({eps_schedule[ie], times[it], observables[k].id, q, cl, std::abs(q - cl), rho0.space()->n_max(), rho0.deficit()});
    }
  });
  std::vector<PropagationRow> rows;
  for (auto& cell : cells) rows.insert(rows.end(), cell.begin(), cell.end());
  return rows;
}

std::vector<BbgkyRow> bbgky_study(const StateFamily& family, const ClassicalHamiltonian& h, const std::vector<int>& orders,
                                  const std::vector<double>& times, const std::vector<double>& eps_schedule,
                                  const StudyOptions& opt) {
  check_eps_schedule(eps_schedule);
  check_times(times);
  for (int p : orders)
    if (p < 0) throw DomainError("orders must be non-negative");
  if (times.empty() || orders.empty()) return {};

  std::vector<std::vector<ReducedMatrix>> limit(times.size());
  parallel_for(times.size(), opt.workers, [&](std::size_t it) {
    const WignerMeasure mut = pushforward(family.predicted_measure, h, times[it], opt.flow);
    for (int p : orders) limit[it].push_back(asymptotic_reduced(mut, p, opt.measure));
  });

  const std::size_t nt = times.size();
  std::vector<std::vector<BbgkyRow>> cells(eps_schedule.size() * nt);
  std::vector<std::unique_ptr<DensityMatrix>> states(eps_schedule.size());
  std::vector<std::unique_ptr<QuantumHamiltonian>> hams(eps_schedule.size());
  parallel_for(eps_schedule.size(), opt.workers, [&](std::size_t ie) {
    states[ie] = std::make_unique<DensityMatrix>(family.generate(eps_schedule[ie]));
    hams[ie] = std::make_unique<QuantumHamiltonian>(h, states[ie]->space());
  });
  parallel_for(cells.size(), opt.workers, [&](std::size_t c) {
    const std::size_t ie = c / nt, it = c % nt;
    const DensityMatrix& rho0 = *states[ie];
    const DensityMatrix rt = times[it] == 0.0 ? rho0 : evolve(rho0, *hams[ie], times[it]);
    for (std::size_t k = 0; k < orders.size(); ++k) {
      const int p = orders[k];
      double dist = 0.0;
      if (p > rho0.space()->n_max()) throw DomainError("order exceeds n_max of the generated state");
      if (p > 0) dist = trace_distance(reduced_matrix(rt, p), limit[it][k]);
      cells[c].push_back({eps_schedule[ie], times[it], p, dist, rho0.space()->n_max(), rho0.deficit()});
    }
  });
  std::vector<BbgkyRow> rows;
  for (auto& cell : cells) rows.insert(rows.end(), cell.begin(), cell.end());
  return rows;
}

}  // namespace mfq
