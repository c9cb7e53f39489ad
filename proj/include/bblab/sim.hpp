#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bblab/machine.hpp"

namespace bblab {

// A finite tape window; cells outside [origin, origin+tape.size()) are blank.
struct Configuration {
  std::vector<Symbol> tape;
  long origin = 0;  // absolute position of tape[0]
  long head = 0;    // absolute head position
  State state = 0;
  std::uint64_t steps = 0;

  Symbol read(long pos) const {
    long i = pos - origin;
    return (i >= 0 && i < static_cast<long>(tape.size())) ? tape[i] : 0;
  }
  void write(long pos, Symbol a);
  Symbol head_symbol() const { return read(head); }
  Int nonblanks() const;
};

enum class RunKind { Halted, StillRunning, ReachedUndefined };

struct RunOutcome {
  RunKind kind = RunKind::StillRunning;
  Int steps = 0;
  Int nonblanks = 0;
  Configuration final;
};

const char* run_kind_name(RunKind k);

RunOutcome run_from_blank(const Machine& m, std::uint64_t max_steps);

// As run_from_blank but seeded; outcome steps counts only new steps.
RunOutcome run_from(const Machine& m, Configuration start, std::uint64_t max_steps);

// Advances c by exactly one transition. Returns false (leaving c untouched
// except for halting bookkeeping) when the slot is Undefined or state is H.
bool step(const Machine& m, Configuration& c);

// Equality up to translation: same state and identical tape content over the
// nonblank-extent-plus-head window, aligned on the head.
bool config_equals(const Configuration& a, const Configuration& b);

// Renders like the paper's notation: "0 1^3 (A0) 2 0" without the infinite
// blanks. parse_config accepts the same shape (exponents with ^, one (Xa)
// head marker, multi-digit runs).
std::string format_config(const Configuration& c);
Configuration parse_config(const std::string& text);

}  // namespace bblab
