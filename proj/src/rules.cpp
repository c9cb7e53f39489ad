#include "bblab/rules.hpp"

#include <algorithm>
#include <sstream>

namespace bblab {

Int IntExpr::eval(const Env& env) const {
  Rat total = 0;
  for (const Term& t : terms) {
    Rat val = t.coef;
    for (const auto& [var, power] : t.powers) {
      auto it = env.find(var);
      if (it == env.end()) throw RuleError("unbound variable " + var);
      Int p;
      mpz_pow_ui(p.get_mpz_t(), it->second.get_mpz_t(), power);
      val *= p;
    }
    for (const Exp& e : t.exps) {
      Int exponent = e.lin_const;
      for (const auto& [var, coeff] : e.linear) {
        auto it = env.find(var);
        if (it == env.end()) throw RuleError("unbound variable " + var);
        exponent += coeff * it->second;
      }
      if (exponent < 0) throw RuleError("negative exponent in expression");
      if (!exponent.fits_ulong_p())
        throw RuleError("exponent too large to evaluate");
      Int p;
      mpz_pow_ui(p.get_mpz_t(), e.base.get_mpz_t(), exponent.get_ui());
      val *= p;
    }
    total += val;
  }
  total.canonicalize();
  if (total.get_den() != 1)
    throw RuleError("expression does not evaluate to an integer");
  return total.get_num();
}

IntExpr IntExpr::constant(const Int& v) {
  IntExpr e;
  if (v != 0) {
    Term t;
    t.coef = v;
    e.terms.push_back(std::move(t));
  }
  return e;
}

bool IntExpr::is_constant() const {
  for (const Term& t : terms)
    if (!t.powers.empty() || !t.exps.empty()) return false;
  return true;
}

namespace {

std::string reversed_binary(const Int& p, bool reversed) {
  if (p == 0) return "";
  std::string bits = p.get_str(2);
  if (reversed) std::reverse(bits.begin(), bits.end());
  return bits;
}

long checked_long(const Int& v, const char* what) {
  if (v < 0 || !v.fits_slong_p())
    throw RuleError(std::string(what) + " out of range: " + v.get_str());
  return v.get_si();
}

}  // namespace

Configuration Template::instantiate(const Env& env) const {
  Configuration c;
  long pos = 0;
  bool head_seen = false;
  auto emit = [&](char digit) {
    c.write(pos++, digit - '0');
  };
  for (const Segment& seg : segments) {
    if (auto* lit = std::get_if<SegLiteral>(&seg)) {
      for (char d : lit->symbols) emit(d);
    } else if (auto* rep = std::get_if<SegRepeat>(&seg)) {
      long count = checked_long(rep->exponent.eval(env), "repeat exponent");
      for (long i = 0; i < count; ++i)
        for (char d : rep->block) emit(d);
    } else if (auto* bin = std::get_if<SegBinary>(&seg)) {
      auto it = env.find(bin->param);
      if (it == env.end()) throw RuleError("unbound binary param " + bin->param);
      for (char d : reversed_binary(it->second, bin->reversed)) emit(d);
    } else {
      const auto& head = std::get<SegHead>(seg);
      if (head_seen) throw RuleError("template has two head segments");
      c.head = pos;
      c.write(pos++, head.symbol);
      c.state = head.state;
      head_seen = true;
    }
  }
  if (!head_seen) throw RuleError("template lacks a head segment");
  return c;
}

Int Template::sigma(const Env& env) const {
  Int total = 0;
  auto nonzero = [](const std::string& s) {
    return static_cast<long>(std::count_if(
        s.begin(), s.end(), [](char c) { return c != '0'; }));
  };
  for (const Segment& seg : segments) {
    if (auto* lit = std::get_if<SegLiteral>(&seg)) {
      total += nonzero(lit->symbols);
    } else if (auto* rep = std::get_if<SegRepeat>(&seg)) {
      total += Int(nonzero(rep->block)) * rep->exponent.eval(env);
    } else if (auto* bin = std::get_if<SegBinary>(&seg)) {
      auto it = env.find(bin->param);
      if (it == env.end()) throw RuleError("unbound binary param " + bin->param);
      total += static_cast<long>(mpz_popcount(it->second.get_mpz_t()));
    } else {
      if (std::get<SegHead>(seg).symbol != 0) total += 1;
    }
  }
  return total;
}

std::string Template::describe(const Env& env) const {
  std::ostringstream out;
  for (const Segment& seg : segments) {
    if (auto* lit = std::get_if<SegLiteral>(&seg)) {
      out << lit->symbols << ' ';
    } else if (auto* rep = std::get_if<SegRepeat>(&seg)) {
      out << rep->block << '^' << rep->exponent.eval(env).get_str() << ' ';
    } else if (auto* bin = std::get_if<SegBinary>(&seg)) {
      auto it = env.find(bin->param);
      out << (bin->reversed ? "Rbin(" : "bin(")
          << (it == env.end() ? bin->param : it->second.get_str()) << ") ";
    } else {
      const auto& head = std::get<SegHead>(seg);
      out << '(' << state_name(head.state) << head.symbol << ") ";
    }
  }
  std::string s = out.str();
  if (!s.empty()) s.pop_back();
  return s;
}

std::string Instance::describe() const {
  std::string out = family + "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    out += params[i].get_str();
  }
  return out + ")";
}

const Family* RuleSystem::family(const std::string& n) const {
  for (const Family& f : families)
    if (f.name == n) return &f;
  return nullptr;
}

namespace {

// Binds quotient variables (named after their parameters) if the rule
// matches; the environment maps each matched parameter name to its quotient.
bool match_rule(const Rule& r, const Family& fam, const Instance& at, Env& env) {
  env.clear();
  for (std::size_t i = 0; i < fam.params.size(); ++i) {
    const std::string& pname = fam.params[i];
    const Int& value = at.params[i];
    const Matcher* m = nullptr;
    for (const Matcher& cand : r.match)
      if (cand.param == pname) m = &cand;
    if (!m) {  // no matcher: bind the raw value (a=1, b=0)
      env[pname] = value;
      continue;
    }
    if (m->exact) {
      if (value != m->eq) return false;
      continue;
    }
    if (value < m->b || (value - m->b) % m->a != 0) return false;
    env[pname] = (value - m->b) / m->a;
  }
  return true;
}

}  // namespace

ApplyResult apply_rule(const RuleSystem& sys, const Instance& at) {
  ApplyResult res;
  const Family* fam = sys.family(at.family);
  if (!fam) throw RuleError("unknown family " + at.family);
  if (fam->params.size() != at.params.size())
    throw RuleError("arity mismatch on " + at.family);
  Env env;
  for (std::size_t i = 0; i < sys.rules.size(); ++i) {
    const Rule& r = sys.rules[i];
    if (r.family != at.family) continue;
    if (!match_rule(r, *fam, at, env)) continue;
    res.matched = true;
    res.rule_index = static_cast<int>(i);
    res.steps = r.steps.eval(env);
    if (res.steps < 0) throw RuleError("negative step count from rule");
    if (r.halt) {
      res.halted = true;
      res.sigma = r.halt->sigma(env);
      res.final_config = r.halt->describe(env);
    } else {
      res.next.family = r.target->first;
      for (const IntExpr& e : r.target->second) {
        Int v = e.eval(env);
        if (v < 0) throw RuleError("negative target parameter");
        res.next.params.push_back(v);
      }
    }
    return res;
  }
  return res;  // matched == false
}

ChainResult run_chain(const RuleSystem& sys, long max_transitions) {
  ChainResult out;
  if (!sys.initial) throw RuleError("rule system has no initial rule");
  out.total_steps = sys.initial->steps;
  // A zero-step initial rule means the blank tape *is* the start instance; a
  // positive-step one is a genuine transition from blank and is counted.
  if (sys.initial->steps > 0) ++out.transitions;
  Instance cur = sys.initial->start;
  while (out.transitions < max_transitions) {
    ApplyResult ap = apply_rule(sys, cur);
    if (!ap.matched) {
      out.status = ChainStatus::NoRuleMatched;
      out.current = cur;
      return out;
    }
    ++out.transitions;
    out.total_steps += ap.steps;
    if (ap.halted) {
      out.status = ChainStatus::Halted;
      out.sigma = ap.sigma;
      out.final_config = ap.final_config;
      out.current = cur;
      return out;
    }
    cur = std::move(ap.next);
  }
  out.status = ChainStatus::LimitReached;
  out.current = cur;
  return out;
}

namespace {

struct MatchShape {
  // Per family parameter: exact value, or (a, b) with a free quotient.
  struct Slot {
    bool exact = false;
    Int eq = 0, a = 1, b = 0;
    std::string name;
  };
  std::vector<Slot> slots;
  int free_count = 0;
};

MatchShape shape_of(const Rule& r, const Family& fam) {
  MatchShape sh;
  for (const std::string& pname : fam.params) {
    MatchShape::Slot slot;
    slot.name = pname;
    for (const Matcher& m : r.match) {
      if (m.param != pname) continue;
      slot.exact = m.exact;
      slot.eq = m.eq;
      slot.a = m.a;
      slot.b = m.b;
    }
    if (!slot.exact) ++sh.free_count;
    sh.slots.push_back(std::move(slot));
  }
  return sh;
}

}  // namespace

ValidationReport validate_rules(const RuleSystem& sys, long max_q,
                                long max_q_pair, std::uint64_t step_cap,
                                long cell_cap) {
  ValidationReport rep;
  if (!sys.machine) throw RuleError("validate_rules needs a machine");
  const Machine& m = *sys.machine;

  auto run_and_compare = [&](RuleCheck& check, const Configuration& from,
                             const Int& steps, const Configuration& to,
                             const std::string& label) {
    if (!steps.fits_ulong_p() || steps.get_ui() > step_cap ||
        static_cast<long>(from.tape.size()) > cell_cap ||
        static_cast<long>(to.tape.size()) > cell_cap) {
      ++check.skipped;
      return;
    }
    RunOutcome got = run_from(m, from, steps.get_ui());
    ++check.points_checked;
    if (got.steps != steps || !config_equals(got.final, to)) {
      if (check.passed) {
        check.passed = false;
        check.failure = label + ": after " + steps.get_str() + " steps got " +
                        format_config(got.final) + ", want " + format_config(to);
      }
    }
  };

  // Initial rule: blank tape must reach the start instance.
  if (sys.initial) {
    RuleCheck check;
    check.rule_index = -1;
    check.label = "initial ⊢(" + sys.initial->steps.get_str() + ") " +
                  sys.initial->start.describe();
    const Family* fam = sys.family(sys.initial->start.family);
    if (!fam) throw RuleError("initial rule references unknown family");
    Env env;
    for (std::size_t i = 0; i < fam->params.size(); ++i)
      env[fam->params[i]] = sys.initial->start.params[i];
    run_and_compare(check, Configuration{}, sys.initial->steps,
                    fam->tmpl.instantiate(env), "from blank");
    rep.all_passed = rep.all_passed && check.passed;
    rep.checks.push_back(std::move(check));
  }

  for (std::size_t ri = 0; ri < sys.rules.size(); ++ri) {
    const Rule& r = sys.rules[ri];
    const Family* fam = sys.family(r.family);
    if (!fam) throw RuleError("rule references unknown family " + r.family);
    MatchShape sh = shape_of(r, *fam);
    const long range = sh.free_count >= 2 ? max_q_pair : max_q;

    RuleCheck check;
    check.rule_index = static_cast<int>(ri);
    check.label = r.family + " rule #" + std::to_string(ri);

    // Enumerate quotient assignments as a mixed-radix counter.
    std::vector<long> qs(sh.slots.size(), 0);
    bool done = false;
    while (!done) {
      Env qenv;   // quotient variables, for steps/target/halt expressions
      Env penv;   // parameter values, for the source template
      Instance inst;
      inst.family = r.family;
      for (std::size_t i = 0; i < sh.slots.size(); ++i) {
        const auto& slot = sh.slots[i];
        Int value = slot.exact ? slot.eq : slot.a * qs[i] + slot.b;
        if (!slot.exact) qenv[slot.name] = qs[i];
        penv[slot.name] = value;
        inst.params.push_back(value);
      }
      std::string label = inst.describe();

      // Overlap check: does an earlier rule shadow this instance?
      Env scratch;
      for (std::size_t rj = 0; rj < ri; ++rj) {
        if (sys.rules[rj].family != r.family) continue;
        if (match_rule(sys.rules[rj], *fam, inst, scratch)) {
          rep.overlap_warnings.push_back(
              "rule #" + std::to_string(ri) + " shadowed by #" +
              std::to_string(rj) + " at " + label);
          break;
        }
      }

      Configuration from = fam->tmpl.instantiate(penv);
      Int steps = r.steps.eval(qenv);
      if (r.halt) {
        run_and_compare(check, from, steps, r.halt->instantiate(qenv), label);
      } else {
        const Family* tfam = sys.family(r.target->first);
        if (!tfam) throw RuleError("rule targets unknown family");
        Env tenv;
        for (std::size_t i = 0; i < tfam->params.size(); ++i)
          tenv[tfam->params[i]] = r.target->second[i].eval(qenv);
        run_and_compare(check, from, steps, tfam->tmpl.instantiate(tenv), label);
      }

      // Advance the counter over free slots only.
      done = true;
      for (std::size_t i = 0; i < sh.slots.size(); ++i) {
        if (sh.slots[i].exact) continue;
        if (++qs[i] <= range) {
          done = false;
          break;
        }
        qs[i] = 0;
      }
    }
    rep.all_passed = rep.all_passed && check.passed;
    rep.checks.push_back(std::move(check));
  }
  return rep;
}

Trajectory iterate_map(const RuleSystem& sys, const Instance& start,
                       long max_transitions, bool detect_cycles) {
  Trajectory out;
  out.visited.push_back(start);
  Instance cur = start;
  for (long t = 0; t < max_transitions; ++t) {
    ApplyResult ap = apply_rule(sys, cur);
    if (!ap.matched || ap.halted) break;
    cur = std::move(ap.next);
    if (detect_cycles) {
      for (std::size_t i = 0; i < out.visited.size(); ++i) {
        if (out.visited[i].family == cur.family &&
            out.visited[i].params == cur.params) {
          out.cycle_found = true;
          out.cycle_start = static_cast<long>(i);
          out.cycle_length = static_cast<long>(out.visited.size()) -
                             static_cast<long>(i);
          out.visited.push_back(cur);
          return out;
        }
      }
    }
    out.visited.push_back(cur);
  }
  return out;
}

}  // namespace bblab
