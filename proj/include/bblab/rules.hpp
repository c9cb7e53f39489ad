#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bblab/bigint.hpp"
#include "bblab/machine.hpp"
#include "bblab/sim.hpp"

namespace bblab {

class RuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Env = std::map<std::string, Int>;

// Sum of terms; each term is coef × ∏ var^power × ∏ base^(linear form).
// Evaluation asserts the result is a nonnegative... (see eval) integer.
struct IntExpr {
  struct Exp {
    Int base;                     // ≥ 2
    std::map<std::string, Int> linear;  // exponent = Σ coeff·var + constant
    Int lin_const = 0;
  };
  struct Term {
    Rat coef = 1;
    std::map<std::string, unsigned> powers;
    std::vector<Exp> exps;
  };
  std::vector<Term> terms;

  // Exact evaluation; throws RuleError on a non-integer result or a negative
  // exponent.
  Int eval(const Env& env) const;

  static IntExpr constant(const Int& v);
  bool is_constant() const;
};

// One tape segment of a configuration template.
struct SegLiteral { std::string symbols; };                 // digit chars
struct SegRepeat  { std::string block; IntExpr exponent; };
struct SegBinary  { std::string param; bool reversed = true; };
struct SegHead    { State state = 0; Symbol symbol = 0; };
using Segment = std::variant<SegLiteral, SegRepeat, SegBinary, SegHead>;

struct Template {
  std::vector<Segment> segments;

  Configuration instantiate(const Env& env) const;
  // σ per the halting-template rules: Literal counts its nonzero characters,
  // Repeat counts (nonzero chars per block)×exponent, Binary counts 1-bits,
  // Head counts 1 if its symbol is nonzero.
  Int sigma(const Env& env) const;
  std::string describe(const Env& env) const;
};

struct Family {
  std::string name;
  std::vector<std::string> params;  // 1 or 2
  Template tmpl;
};

struct Matcher {
  std::string param;
  bool exact = false;
  Int eq = 0;       // when exact
  Int a = 1, b = 0; // matches a·q+b with quotient q ≥ 0, bound to the
                    // parameter's name in step/target expressions
};

struct Instance {
  std::string family;
  std::vector<Int> params;

  std::string describe() const;
};

struct Rule {
  std::string family;
  std::vector<Matcher> match;
  IntExpr steps;
  // Exactly one of the two:
  std::optional<std::pair<std::string, std::vector<IntExpr>>> target;
  std::optional<Template> halt;
};

struct InitialRule {
  Int steps = 0;
  Instance start;
};

struct RuleSystem {
  std::optional<Machine> machine;
  std::vector<Family> families;
  std::optional<InitialRule> initial;
  std::vector<Rule> rules;
  std::string name;

  const Family* family(const std::string& n) const;
};

enum class ChainStatus { Halted, LimitReached, NoRuleMatched };

struct ChainResult {
  ChainStatus status = ChainStatus::NoRuleMatched;
  long transitions = 0;
  Int total_steps = 0;
  Int sigma = 0;               // meaningful when Halted
  Instance current;            // last family instance (non-halt outcomes)
  std::string final_config;    // halting template rendered, when Halted
};

struct ApplyResult {
  bool matched = false;
  bool halted = false;
  int rule_index = -1;
  Int steps = 0;
  Instance next;      // when matched && !halted
  Int sigma = 0;      // when halted
  std::string final_config;  // when halted
};

// First matching rule in file order fires.
ApplyResult apply_rule(const RuleSystem& sys, const Instance& at);

ChainResult run_chain(const RuleSystem& sys, long max_transitions);

struct RuleCheck {
  int rule_index = -1;  // -1 is the initial rule
  std::string label;
  long points_checked = 0;
  long skipped = 0;  // instantiation over the size cap
  bool passed = true;
  std::string failure;  // first failing point, if any
};

struct ValidationReport {
  std::vector<RuleCheck> checks;
  std::vector<std::string> overlap_warnings;
  bool all_passed = true;
};

// Instantiates every rule at all quotient assignments in 0..max_q (pairs in
// 0..max_q_pair when two quotients are involved) and replays it with
// sim-direct as the oracle.
ValidationReport validate_rules(const RuleSystem& sys, long max_q = 6,
                                long max_q_pair = 4,
                                std::uint64_t step_cap = 20000000,
                                long cell_cap = 1000000);

struct Trajectory {
  std::vector<Instance> visited;
  bool cycle_found = false;
  long cycle_start = 0;  // index into visited where the repeat first occurred
  long cycle_length = 0;
};

// For pure numeric systems (no machine): iterates apply_rule from `start`,
// optionally stopping at the first revisited instance.
Trajectory iterate_map(const RuleSystem& sys, const Instance& start,
                       long max_transitions, bool detect_cycles = false);

// Loads the JSON rule-file format (see docs/rule-files.md).
RuleSystem load_rule_system(const std::string& path);
RuleSystem parse_rule_system(const std::string& json_text);

}  // namespace bblab
