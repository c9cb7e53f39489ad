#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bblab/accel.hpp"
#include "bblab/bigint.hpp"
#include "bblab/deciders.hpp"
#include "bblab/enumerate.hpp"
#include "bblab/machine.hpp"
#include "bblab/records.hpp"
#include "bblab/rules.hpp"
#include "bblab/sim.hpp"

namespace {

using bblab::Int;
using nlohmann::json;

constexpr int kOk = 0, kFail = 1, kUsage = 2;

// Accepts a machine code directly, a file containing one, or a JSON document
// with a "machine" key.
bblab::Machine load_machine(const std::string& arg) {
  try {
    return bblab::parse_machine(arg);
  } catch (const bblab::MachineError&) {
  }
  std::ifstream in(arg);
  if (!in) throw bblab::MachineError("not a machine code or readable file: " + arg);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  try {
    json j = json::parse(text);
    if (j.contains("machine"))
      return bblab::parse_machine(j.at("machine").get<std::string>());
  } catch (const json::parse_error&) {
  }
  return bblab::parse_machine(text);
}

std::string render(const Int& v, bool sci) {
  return sci ? v.get_str() + " (~" + bblab::to_sci(v) + ")" : v.get_str();
}

struct ClassOpt {
  int n = 0, k = 0;
  bblab::ClassId cls() const { return {n, k}; }
};

void add_class_option(CLI::App* cmd, ClassOpt& out, bool required = true) {
  auto* opt = cmd->add_option_function<std::string>(
      "--class",
      [&out](const std::string& v) {
        auto comma = v.find(',');
        if (comma == std::string::npos)
          throw CLI::ValidationError("--class expects n,k");
        out.n = std::stoi(v.substr(0, comma));
        out.k = std::stoi(v.substr(comma + 1));
        if (out.n < 1 || out.k < 2)
          throw CLI::ValidationError("--class needs n ≥ 1, k ≥ 2");
      },
      "Machine class as n,k (e.g. 5,2)");
  if (required) opt->required();
}

int cmd_simulate(const std::string& machine_arg, const std::string& mode,
                 const std::string& max_steps_text, const std::string& from,
                 bool as_json, bool sci) {
  bblab::Machine m = load_machine(machine_arg);
  auto max_steps = bblab::parse_big(max_steps_text);
  if (!max_steps || *max_steps < 0) {
    std::cerr << "bad --max-steps value\n";
    return kUsage;
  }
  bblab::RunKind kind;
  Int steps, sigma, macro_ops = -1;
  if (mode == "direct") {
    if (!max_steps->fits_ulong_p()) {
      std::cerr << "--max-steps too large for direct mode\n";
      return kUsage;
    }
    bblab::RunOutcome out =
        from.empty()
            ? bblab::run_from_blank(m, max_steps->get_ui())
            : bblab::run_from(m, bblab::parse_config(from), max_steps->get_ui());
    kind = out.kind;
    steps = out.steps;
    sigma = out.nonblanks;
  } else if (mode == "accel") {
    bblab::AccelOutcome out =
        from.empty()
            ? bblab::accel_run(m, *max_steps)
            : bblab::accel_run_from(m, bblab::compress(bblab::parse_config(from)),
                                    *max_steps);
    kind = out.kind;
    steps = out.steps;
    sigma = out.nonblanks;
    macro_ops = out.macro_ops;
  } else {
    std::cerr << "--mode must be direct or accel\n";
    return kUsage;
  }
  if (as_json) {
    json j{{"kind", bblab::run_kind_name(kind)},
           {"steps", steps.get_str()},
           {"base_steps", steps.get_str()},
           {"sigma", sigma.get_str()}};
    if (macro_ops >= 0) j["macro_ops"] = macro_ops.get_str();
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "kind: " << bblab::run_kind_name(kind) << "\n"
              << "steps: " << render(steps, sci) << "\n"
              << "sigma: " << render(sigma, sci) << "\n";
  }
  return kOk;
}

int cmd_rules_validate(const std::string& path, long range, long pair_range,
                       bool as_json) {
  bblab::RuleSystem sys = bblab::load_rule_system(path);
  bblab::ValidationReport rep = bblab::validate_rules(sys, range, pair_range);
  json jchecks = json::array();
  for (const auto& c : rep.checks) {
    if (as_json) {
      jchecks.push_back({{"rule", c.label},
                         {"points", c.points_checked},
                         {"skipped", c.skipped},
                         {"passed", c.passed},
                         {"failure", c.failure}});
    } else {
      std::cout << (c.passed ? "pass" : "FAIL") << "  " << c.label << "  ("
                << c.points_checked << " points";
      if (c.skipped) std::cout << ", " << c.skipped << " skipped";
      std::cout << ")";
      if (!c.passed) std::cout << "  " << c.failure;
      std::cout << "\n";
    }
  }
  if (as_json) {
    std::cout << json{{"checks", jchecks},
                      {"overlap_warnings", rep.overlap_warnings},
                      {"all_passed", rep.all_passed}}
                     .dump()
              << "\n";
  } else {
    for (const auto& w : rep.overlap_warnings) std::cout << "warning: " << w << "\n";
    std::cout << (rep.all_passed ? "all rules pass" : "validation FAILED") << "\n";
  }
  return rep.all_passed ? kOk : kFail;
}

int cmd_rules_run(const std::string& path, long max_transitions, bool as_json,
                  bool sci) {
  bblab::RuleSystem sys = bblab::load_rule_system(path);
  bblab::ChainResult res = bblab::run_chain(sys, max_transitions);
  const char* status = res.status == bblab::ChainStatus::Halted ? "Halted"
                       : res.status == bblab::ChainStatus::LimitReached
                           ? "LimitReached"
                           : "NoRuleMatched";
  if (as_json) {
    json j{{"status", status},
           {"transitions", res.transitions},
           {"total_steps", res.total_steps.get_str()}};
    if (res.status == bblab::ChainStatus::Halted) {
      j["sigma"] = res.sigma.get_str();
      j["final"] = res.final_config;
    } else {
      j["current"] = res.current.describe();
    }
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "status: " << status << "\n"
              << "transitions: " << res.transitions << "\n"
              << "total_steps: " << render(res.total_steps, sci) << "\n";
    if (res.status == bblab::ChainStatus::Halted) {
      std::cout << "sigma: " << render(res.sigma, sci) << "\n"
                << "final: " << res.final_config << "\n";
    } else {
      std::cout << "current: " << res.current.describe() << "\n";
    }
  }
  return res.status == bblab::ChainStatus::Halted ? kOk : kFail;
}

int cmd_verify_records(const ClassOpt& cls, bool have_class, bool include_slow,
                       int workers, bool as_json) {
  bblab::RecordsDb db = bblab::load_records(bblab::default_data_dir());
  std::optional<bblab::ClassId> filter;
  if (have_class) filter = cls.cls();
  bblab::VerifySummary sum = bblab::verify_all(db, filter, include_slow, workers);
  if (as_json) {
    json jr = json::array();
    for (const auto& r : sum.results)
      jr.push_back({{"id", r.id},
                    {"passed", r.passed},
                    {"skipped", r.skipped},
                    {"detail", r.detail}});
    std::cout << json{{"passed", sum.passed},
                      {"failed", sum.failed},
                      {"skipped", sum.skipped},
                      {"results", jr}}
                     .dump()
              << "\n";
  } else {
    for (const auto& r : sum.results) {
      if (r.skipped)
        std::cout << "skip  " << r.id << "  (" << r.detail << ")\n";
      else if (!r.passed)
        std::cout << "FAIL  " << r.id << "  " << r.detail << "\n";
      else
        std::cout << "pass  " << r.id << "\n";
    }
    std::cout << sum.passed << " passed, " << sum.failed << " failed, "
              << sum.skipped << " skipped\n";
  }
  return sum.failed == 0 ? kOk : kFail;
}

int cmd_enumerate(const ClassOpt& cls, const std::string& cutoff_text,
                  int workers, const std::string& holdouts_out, bool as_json) {
  auto cutoff = bblab::parse_big(cutoff_text);
  if (!cutoff || *cutoff < 1 || !cutoff->fits_ulong_p()) {
    std::cerr << "bad --cutoff value\n";
    return kUsage;
  }
  bblab::SearchReport rep =
      bblab::search_class(cls.cls(), cutoff->get_ui(), workers);
  if (!holdouts_out.empty()) {
    std::ofstream out(holdouts_out);
    for (const auto& h : rep.holdouts) out << h << "\n";
  }
  json jd = json::object();
  for (const auto& [r, n] : rep.decided) jd[bblab::reason_name(r)] = n;
  if (as_json) {
    std::cout << json{{"class", {rep.cls.n, rep.cls.k}},
                      {"cutoff", rep.cutoff},
                      {"enumerated", rep.enumerated},
                      {"halted", rep.halted},
                      {"decided", jd},
                      {"holdouts", rep.holdouts.size()},
                      {"best_s", rep.best_s.get_str()},
                      {"best_s_machine", rep.best_s_machine},
                      {"best_sigma", rep.best_sigma.get_str()},
                      {"best_sigma_machine", rep.best_sigma_machine}}
                     .dump()
              << "\n";
  } else {
    std::cout << "class (" << rep.cls.n << "," << rep.cls.k << ") cutoff "
              << rep.cutoff << "\n"
              << "enumerated: " << rep.enumerated << "\n"
              << "halted: " << rep.halted << "\n"
              << "decided: " << jd.dump() << "\n"
              << "holdouts: " << rep.holdouts.size() << "\n"
              << "best_s: " << rep.best_s.get_str() << "  ("
              << rep.best_s_machine << ")\n"
              << "best_sigma: " << rep.best_sigma.get_str() << "  ("
              << rep.best_sigma_machine << ")\n";
  }
  return kOk;
}

int cmd_decide(const std::string& machine_arg, const std::string& max_steps_text,
               bool as_json) {
  bblab::Machine m = load_machine(machine_arg);
  auto max_steps = bblab::parse_big(max_steps_text);
  if (!max_steps || !max_steps->fits_ulong_p()) {
    std::cerr << "bad --max-steps value\n";
    return kUsage;
  }
  bblab::Verdict v = bblab::decide_no_halt_reachable(m);
  if (!v.nonhalting) v = bblab::decide_cycle(m, max_steps->get_ui());
  if (!v.nonhalting) v = bblab::decide_translated_cycle(m, max_steps->get_ui());
  if (as_json) {
    json j{{"machine", bblab::print_machine(m)},
           {"nonhalting", v.nonhalting}};
    if (v.nonhalting) {
      j["reason"] = bblab::reason_name(v.reason);
      j["witness"] = {{"start_step", v.start_step},
                      {"period", v.period},
                      {"shift", v.shift}};
    }
    std::cout << j.dump() << "\n";
  } else if (v.nonhalting) {
    std::cout << "NonHalting(" << bblab::reason_name(v.reason) << ")";
    if (v.reason != bblab::NonHaltReason::NoHaltTransition)
      std::cout << " witness: steps " << v.start_step << " and "
                << v.start_step + v.period << ", shift " << v.shift;
    std::cout << "\n";
  } else {
    std::cout << "Unknown\n";
  }
  return kOk;
}

int cmd_normalize(const std::string& machine_arg, bool as_json) {
  bblab::Machine m = load_machine(machine_arg);
  auto [norm, rep] = bblab::normalize(m);
  if (as_json) {
    std::cout << json{{"machine", bblab::print_machine(norm)},
                      {"mirrored", rep.mirrored},
                      {"identity", rep.identity},
                      {"complete", rep.complete},
                      {"state_map", rep.state_map},
                      {"symbol_map", rep.symbol_map}}
                     .dump()
              << "\n";
  } else {
    std::cout << bblab::print_machine(norm) << "\n";
    if (!rep.identity) {
      std::cout << "(relabeled" << (rep.mirrored ? ", mirrored" : "")
                << (rep.complete ? "" : ", partial visit") << ")\n";
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"busy-beaver laboratory"};
  app.require_subcommand(1);
  bool as_json = false;
  bool sci = false;
  app.add_flag("--json", as_json, "Emit JSON instead of text");
  app.add_flag("--sci", sci, "Append rounded scientific forms to big numbers");

  std::string machine_arg, mode = "accel", max_steps = "100000000000";
  std::string from, rules_path, cutoff = "1000", holdouts_out;
  long range = 6, pair_range = 4, max_transitions = 1000000;
  int workers = 1;
  bool include_slow = false;
  ClassOpt cls;

  auto* simulate = app.add_subcommand("simulate", "Run a machine");
  simulate->add_option("--machine", machine_arg, "Machine code or file")->required();
  simulate->add_option("--mode", mode, "direct|accel (default accel)");
  simulate->add_option("--max-steps", max_steps, "Step budget (decimal)");
  simulate->add_option("--from", from, "Start configuration, e.g. \"1^3 (B0) 2\"");

  auto* rules = app.add_subcommand("rules", "Rule-system operations");
  rules->require_subcommand(1);
  auto* validate = rules->add_subcommand("validate", "Replay rules in sim-direct");
  validate->add_option("--rules", rules_path, "Rule file (JSON)")->required();
  validate->add_option("--range", range, "Max quotient, single-parameter rules");
  validate->add_option("--pair-range", pair_range, "Max quotient, parameter pairs");
  auto* run = rules->add_subcommand("run", "Chain rules from the initial config");
  run->add_option("--rules", rules_path, "Rule file (JSON)")->required();
  run->add_option("--max-transitions", max_transitions, "Transition budget");

  auto* verify = app.add_subcommand("verify-records", "Verify the records dataset");
  add_class_option(verify, cls, false);
  verify->add_flag("--include-slow", include_slow, "Run slow entries too");
  verify->add_option("--workers", workers, "Concurrent verifications");

  auto* enumerate = app.add_subcommand("enumerate", "TNF champion search");
  add_class_option(enumerate, cls);
  enumerate->add_option("--cutoff", cutoff, "Step cutoff per machine");
  enumerate->add_option("--workers", workers, "Worker threads");
  enumerate->add_option("--holdouts-out", holdouts_out, "Write holdout codes here");

  std::string decide_max_steps = "10000000";
  auto* decide = app.add_subcommand("decide", "Run the non-halting deciders");
  decide->add_option("--machine", machine_arg, "Machine code or file")->required();
  decide->add_option("--max-steps", decide_max_steps, "Dynamic decider budget");

  auto* normalize = app.add_subcommand("normalize", "Normalize a machine");
  normalize->add_option("--machine", machine_arg, "Machine code or file")->required();

  auto* class_size = app.add_subcommand("class-size", "Number of (n,k) machines");
  add_class_option(class_size, cls);

  // Let --json/--sci appear after the subcommand name.
  for (auto* sub : {simulate, rules, validate, run, verify, enumerate, decide,
                    normalize, class_size})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (simulate->parsed())
      return cmd_simulate(machine_arg, mode, max_steps, from, as_json, sci);
    if (validate->parsed())
      return cmd_rules_validate(rules_path, range, pair_range, as_json);
    if (run->parsed())
      return cmd_rules_run(rules_path, max_transitions, as_json, sci);
    if (verify->parsed())
      return cmd_verify_records(cls, cls.n != 0, include_slow, workers, as_json);
    if (enumerate->parsed())
      return cmd_enumerate(cls, cutoff, workers, holdouts_out, as_json);
    if (decide->parsed()) return cmd_decide(machine_arg, decide_max_steps, as_json);
    if (normalize->parsed()) return cmd_normalize(machine_arg, as_json);
    if (class_size->parsed()) {
      Int size = bblab::class_size(cls.cls());
      if (as_json)
        std::cout << json{{"class", {cls.n, cls.k}}, {"size", size.get_str()}}.dump()
                  << "\n";
      else
        std::cout << render(size, sci) << "\n";
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
