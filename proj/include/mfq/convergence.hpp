#pragma once

#include <string>
#include <vector>

#include "mfq/classical_flow.hpp"
#include "mfq/states.hpp"
#include "mfq/wigner_measures.hpp"

namespace mfq {

struct Observable {
  std::string id;
  CompoundSymbol b;
};

struct StudyOptions {
  int workers = 1;
  FlowConfig flow{};
  MeasureOptions measure{};
};

struct PropagationRow {
  double eps;
  double t;
  std::string observable;
  cplx quantum;
  cplx classical;
  double abs_error;
  int n_max_used;
  double deficit;
};

struct BbgkyRow {
  double eps;
  double t;
  int p;
  double distance;
  int n_max_used;
  double deficit;
};

// Throws DomainError unless the schedule is non-empty and strictly decreasing.
void check_eps_schedule(const std::vector<double>& eps);

// Tr[rho_eps(t) b^Wick] against int b o F_t dmu_0 on every (eps, t, b); rows ordered by schedule, time, observable.
std::vector<PropagationRow> convergence_study(const StateFamily& family, const ClassicalHamiltonian& h,
                                              const std::vector<Observable>& observables, const std::vector<double>& times,
                                              const std::vector<double>& eps_schedule, const StudyOptions& opt = {});

// trace_distance(gamma^(p)_eps(t), gamma^(p)_0(t)) on every (eps, t, p).
std::vector<BbgkyRow> bbgky_study(const StateFamily& family, const ClassicalHamiltonian& h, const std::vector<int>& orders,
                                  const std::vector<double>& times, const std::vector<double>& eps_schedule,
                                  const StudyOptions& opt = {});

}  // namespace mfq
