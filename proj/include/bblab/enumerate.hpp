#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bblab/deciders.hpp"
#include "bblab/machine.hpp"
#include "bblab/sim.hpp"

namespace bblab {

struct SearchReport {
  ClassId cls;
  std::uint64_t cutoff = 0;
  long enumerated = 0;
  long halted = 0;
  std::map<NonHaltReason, long> decided;
  std::vector<std::string> holdouts;
  Int best_s = -1;
  Int best_sigma = -1;
  std::string best_s_machine;
  std::string best_sigma_machine;

  long decided_total() const;
  void merge(const SearchReport& other);
};

// Visits every tree-normal-form leaf of the class: simulation from blank with
// lazily-filled slots, branching on all admissible fills plus the halting
// fill whenever an Undefined slot is reached; runners are cut off after
// `cutoff` steps. Returns the number of machines visited.
long enumerate_tnf(ClassId c, std::uint64_t cutoff,
                   const std::function<void(const Machine&, const RunOutcome&)>& visitor);

// Full champion search: enumerate, classify halting machines, pass runners
// through deciders, collect holdouts. Deterministic for any worker count.
SearchReport search_class(ClassId c, std::uint64_t cutoff, int workers = 1);

}  // namespace bblab
