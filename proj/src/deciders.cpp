#include "bblab/deciders.hpp"

#include <algorithm>
#include <vector>

namespace bblab {

const char* reason_name(NonHaltReason r) {
  switch (r) {
    case NonHaltReason::NoHaltTransition: return "NoHaltTransition";
    case NonHaltReason::Cycle: return "Cycle";
    case NonHaltReason::TranslatedCycle: return "TranslatedCycle";
  }
  return "?";
}

Verdict decide_no_halt_reachable(const Machine& m) {
  // States reachable from A through any defined transition.
  std::vector<bool> reach(m.states, false);
  std::vector<State> worklist{0};
  reach[0] = true;
  while (!worklist.empty()) {
    State q = worklist.back();
    worklist.pop_back();
    for (Symbol a = 0; a < m.symbols; ++a) {
      const auto& tr = m.at(q, a);
      if (!tr) return Verdict::unknown();  // Undefined slot can halt the run
      if (tr->next == kHalt) return Verdict::unknown();
      if (!reach[tr->next]) {
        reach[tr->next] = true;
        worklist.push_back(tr->next);
      }
    }
  }
  Verdict v;
  v.nonhalting = true;
  v.reason = NonHaltReason::NoHaltTransition;
  return v;
}

namespace {

long nonblank_hi(const Configuration& c) {
  for (long p = c.origin + static_cast<long>(c.tape.size()) - 1; p >= c.origin; --p)
    if (c.read(p) != 0) return p;
  return c.origin - 1;
}

long nonblank_lo(const Configuration& c) {
  for (long p = c.origin; p < c.origin + static_cast<long>(c.tape.size()); ++p)
    if (c.read(p) != 0) return p;
  return c.origin + static_cast<long>(c.tape.size());
}

// Compares the two half-tapes from the given anchors outward in `dir`,
// until both run out of nonblank cells.
bool half_tapes_equal(const Configuration& a, long pos_a,
                      const Configuration& b, long pos_b, int dir) {
  long a_end = dir > 0 ? nonblank_hi(a) : nonblank_lo(a);
  long b_end = dir > 0 ? nonblank_hi(b) : nonblank_lo(b);
  while ((dir > 0 ? pos_a <= a_end : pos_a >= a_end) ||
         (dir > 0 ? pos_b <= b_end : pos_b >= b_end)) {
    if (a.read(pos_a) != b.read(pos_b)) return false;
    pos_a += dir;
    pos_b += dir;
  }
  return true;
}

bool sections_equal(const Configuration& a, const Configuration& b,
                    long lo, long hi) {
  for (long p = lo; p <= hi; ++p)
    if (a.read(p) != b.read(p)) return false;
  return true;
}

// Checks whether the configuration `cur`, together with the extremes the
// head visited since snapshot `base`, witnesses a recurrence shifted by
// (cur.head − base.head).
bool recurrence_at(const Configuration& base, const Configuration& cur,
                   long most_left, long most_right) {
  if (cur.state != base.state) return false;
  long offset = cur.head - base.head;
  if (offset > 0)
    return half_tapes_equal(base, most_left, cur, most_left + offset, +1);
  if (offset < 0)
    return half_tapes_equal(base, most_right, cur, most_right + offset, -1);
  return sections_equal(base, cur, most_left, most_right);
}

// Power-of-two snapshot search for recurrences (exact and translated); the
// snapshot taken at step t is compared against every step up to 2t.
Verdict dynamic_decide(const Machine& m, std::uint64_t max_steps,
                       bool want_translated) {
  Configuration c;
  if (!step(m, c)) return Verdict::unknown();  // halts immediately

  while (c.steps < max_steps) {
    const Configuration base = c;
    const std::uint64_t reset = 2 * base.steps;
    long most_left = c.head;
    long most_right = c.head;
    while (c.steps < reset && c.steps < max_steps) {
      if (!step(m, c)) return Verdict::unknown();  // halting machine
      most_left = std::min(most_left, c.head);
      most_right = std::max(most_right, c.head);
      if (c.state != base.state) continue;
      long offset = c.head - base.head;
      if ((offset == 0) == want_translated) continue;
      if (recurrence_at(base, c, most_left, most_right)) {
        Verdict v;
        v.nonhalting = true;
        v.reason = want_translated ? NonHaltReason::TranslatedCycle
                                   : NonHaltReason::Cycle;
        v.start_step = base.steps;
        v.period = c.steps - base.steps;
        v.shift = offset;
        return v;
      }
    }
  }
  return Verdict::unknown();
}

}  // namespace

Verdict decide_cycle(const Machine& m, std::uint64_t max_steps) {
  return dynamic_decide(m, max_steps, false);
}

Verdict decide_translated_cycle(const Machine& m, std::uint64_t max_steps) {
  return dynamic_decide(m, max_steps, true);
}

bool recheck_witness(const Machine& m, const Verdict& v) {
  if (!v.nonhalting) return false;
  if (v.reason == NonHaltReason::NoHaltTransition)
    return decide_no_halt_reachable(m).nonhalting;
  if (v.period == 0) return false;

  RunOutcome to_base = run_from_blank(m, v.start_step);
  if (to_base.kind != RunKind::StillRunning) return false;
  Configuration base = to_base.final;
  Configuration c = base;
  long most_left = c.head;
  long most_right = c.head;
  for (std::uint64_t i = 0; i < v.period; ++i) {
    if (!step(m, c)) return false;
    most_left = std::min(most_left, c.head);
    most_right = std::max(most_right, c.head);
  }
  if (c.head - base.head != v.shift) return false;
  return recurrence_at(base, c, most_left, most_right);
}

}  // namespace bblab
