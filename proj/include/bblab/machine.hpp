#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bblab/bigint.hpp"

namespace bblab {

// States are 0-based indices; kHalt is the halt state H.
using State = int;
using Symbol = int;

inline constexpr State kHalt = -1;

enum class Move { L, R, S };

struct Transition {
  Symbol write = 0;
  Move move = Move::R;
  State next = kHalt;

  bool operator==(const Transition&) const = default;
};

struct ClassId {
  int n = 1;  // states
  int k = 2;  // symbols

  bool operator==(const ClassId&) const = default;
};

class MachineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An (n,k) machine table. Slots may be Undefined (nullopt), which simulators
// treat as "halt upon reach, writing nothing, no move".
struct Machine {
  int states = 0;
  int symbols = 0;
  bool allow_stay = false;
  std::vector<std::optional<Transition>> table;  // states*symbols, row-major

  ClassId cls() const { return {states, symbols}; }

  const std::optional<Transition>& at(State q, Symbol a) const {
    return table[static_cast<std::size_t>(q) * symbols + a];
  }
  std::optional<Transition>& at(State q, Symbol a) {
    return table[static_cast<std::size_t>(q) * symbols + a];
  }

  bool operator==(const Machine&) const = default;
};

// Parses "1RB 1LB 1LA 1RH" or "1RB1LB_1LA1RH" style tables; "---" marks an
// Undefined slot. Throws MachineError on malformed input.
Machine parse_machine(const std::string& text,
                      std::optional<ClassId> hint = std::nullopt,
                      bool allow_stay = false);

// Canonical single-line form, rows joined by '_'.
std::string print_machine(const Machine& m);

// Rado convention: every halt transition is exactly (1, R, H) and no stay
// moves. Returns an error message, or nullopt if the machine conforms.
std::optional<std::string> rado_violation(const Machine& m);

struct NormalizeReport {
  std::vector<State> state_map;    // old state -> new state
  std::vector<Symbol> symbol_map;  // old symbol -> new symbol
  bool mirrored = false;
  bool complete = true;  // all states/symbols witnessed within the bound
  bool identity = false;
};

// Renames states by first-entry order, symbols by first-write order, and
// mirrors directions if the first move is L, following the machine from a
// blank tape for at most step_bound steps. Throws if δ(A,0) is Undefined.
std::pair<Machine, NormalizeReport> normalize(const Machine& m,
                                              long step_bound = 1000000);

// (2kn+1)^(kn), the number of (n,k) machines.
Int class_size(ClassId c);

std::string state_name(State q);

}  // namespace bblab
