#pragma once

#include "bblab/machine.hpp"
#include "bblab/sim.hpp"

namespace bblab {

struct Run {
  Symbol symbol = 0;
  Int count = 1;
};

// Run-length-compressed tape. The head cell is the front of `right`; stacks
// grow toward the head, with implicit infinite blank runs at both ends.
struct CompressedTape {
  std::vector<Run> left;   // back() is adjacent to the head
  std::vector<Run> right;  // back() holds the head cell
  State state = 0;
  Int steps = 0;

  Symbol head_symbol() const { return right.empty() ? 0 : right.back().symbol; }
  Int nonblanks() const;
};

struct AccelOutcome {
  RunKind kind = RunKind::StillRunning;
  Int steps = 0;
  Int nonblanks = 0;
  CompressedTape final;
  Int macro_ops = 0;  // operations actually performed (diagnostic)
};

// Exact base-step-counting simulation over the compressed tape, consuming
// whole same-symbol runs in one operation when the transition keeps the state
// and points into the run. Rejects stay-move machines.
AccelOutcome accel_run(const Machine& m, const Int& max_base_steps);
AccelOutcome accel_run_from(const Machine& m, CompressedTape start,
                            const Int& max_base_steps);

CompressedTape compress(const Configuration& c);
Configuration decompress(const CompressedTape& t);  // throws past 2^31 cells

}  // namespace bblab
