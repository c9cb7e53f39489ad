#pragma once

#include "bblab/machine.hpp"
#include "bblab/sim.hpp"

namespace bblab {

enum class NonHaltReason { NoHaltTransition, Cycle, TranslatedCycle };

struct Verdict {
  bool nonhalting = false;
  NonHaltReason reason = NonHaltReason::NoHaltTransition;
  // Witness for the dynamic deciders: configurations at steps start_step and
  // start_step+period recur (shift 0 → exact cycle; otherwise translated).
  std::uint64_t start_step = 0;
  std::uint64_t period = 0;
  long shift = 0;

  static Verdict unknown() { return {}; }
};

const char* reason_name(NonHaltReason r);

// NonHalting when no halt transition or Undefined slot is reachable in the
// state graph from A (conservative static reachability over all symbols).
Verdict decide_no_halt_reachable(const Machine& m);

// Exact configuration recurrence at the same absolute position.
Verdict decide_cycle(const Machine& m, std::uint64_t max_steps);

// Recurrence of state and tape content shifted by a nonzero offset, with the
// comparison window covering everything visited between the two snapshots.
Verdict decide_translated_cycle(const Machine& m, std::uint64_t max_steps);

// Replays a dynamic verdict's witness in sim-direct and confirms the
// recurrence; NoHaltTransition witnesses re-run the static check.
bool recheck_witness(const Machine& m, const Verdict& v);

}  // namespace bblab
