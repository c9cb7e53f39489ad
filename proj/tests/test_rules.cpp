#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bblab/records.hpp"
#include "bblab/rules.hpp"

using namespace bblab;

namespace {

std::string shipped(const std::string& name) {
  return default_data_dir() + "/rules/" + name + ".json";
}

}  // namespace

TEST_CASE("IntExpr evaluates polynomials, exponentials and rationals") {
  // 5n^2 + 19n + 15
  IntExpr poly;
  poly.terms.push_back({Rat(5), {{"n", 2}}, {}});
  poly.terms.push_back({Rat(19), {{"n", 1}}, {}});
  poly.terms.push_back({Rat(15), {}, {}});
  CHECK(poly.eval({{"n", 0}}) == 15);
  CHECK(poly.eval({{"n", 7}}) == 5 * 49 + 19 * 7 + 15);

  // (4^(n+1) - 4) / 3: each term is fractional but the sum is an integer.
  IntExpr geo;
  IntExpr::Exp four{4, {{"n", 1}}, 1};
  geo.terms.push_back({Rat(1, 3), {}, {four}});
  geo.terms.push_back({Rat(-4, 3), {}, {}});
  CHECK(geo.eval({{"n", 0}}) == 0);
  CHECK(geo.eval({{"n", 1}}) == 4);
  CHECK(geo.eval({{"n", 3}}) == 84);
}

TEST_CASE("IntExpr rejects non-integer results and negative exponents") {
  IntExpr half;
  half.terms.push_back({Rat(1, 2), {{"n", 1}}, {}});
  CHECK(half.eval({{"n", 4}}) == 2);
  CHECK_THROWS_AS(half.eval({{"n", 3}}), RuleError);

  IntExpr shrink;  // 2^(n-1)
  IntExpr::Exp two{2, {{"n", 1}}, -1};
  shrink.terms.push_back({Rat(1), {}, {two}});
  CHECK(shrink.eval({{"n", 1}}) == 1);
  CHECK_THROWS_AS(shrink.eval({{"n", 0}}), RuleError);

  CHECK_THROWS_AS(half.eval({}), RuleError);  // unbound variable
}

TEST_CASE("templates instantiate and count nonblanks") {
  Template t;
  t.segments.push_back(SegLiteral{"011"});
  t.segments.push_back(SegRepeat{"10", IntExpr::constant(3)});
  t.segments.push_back(SegHead{1, 2});  // (B2)
  t.segments.push_back(SegLiteral{"2"});

  Configuration c = t.instantiate({});
  CHECK(format_config(c) == "1^3 0 1 0 1 0 (B2) 2");
  CHECK(t.sigma({}) == 2 + 3 + 1 + 1);
  CHECK(c.nonblanks() == t.sigma({}));

  // Binary segments render the parameter's bits, least significant first.
  Template b;
  b.segments.push_back(SegHead{0, 0});
  b.segments.push_back(SegBinary{"p", true});
  CHECK(format_config(b.instantiate({{"p", 6}})) == "(A0) 0 1^2");
  CHECK(b.sigma({{"p", 6}}) == 2);
  CHECK(format_config(b.instantiate({{"p", 0}})) == "(A0)");  // bin(0) is empty

  Template fwd;
  fwd.segments.push_back(SegHead{0, 0});
  fwd.segments.push_back(SegBinary{"p", false});
  CHECK(format_config(fwd.instantiate({{"p", 6}})) == "(A0) 1^2");
}

TEST_CASE("apply_rule fires the first match and binds quotients") {
  // f(3q) -> f(q) in 0 steps; f(n) -> g(n, n+1) in n steps otherwise;
  // g(a, 2b) halts with a ones.
  RuleSystem sys = parse_rule_system(R"({
    "name": "toy",
    "families": [
      {"name": "f", "params": ["n"],
       "segments": [{"head": {"state": "A", "symbol": 0}},
                    {"rep": {"block": "1", "exp": [{"powers": {"n": 1}}]}}]},
      {"name": "g", "params": ["a", "b"],
       "segments": [{"head": {"state": "B", "symbol": 0}},
                    {"rep": {"block": "1", "exp": [{"powers": {"a": 1}}]}}]}
    ],
    "rules": [
      {"family": "f", "match": [{"param": "n", "a": "3", "b": "0"}],
       "steps": 0,
       "target": {"family": "f", "params": [[{"powers": {"n": 1}}]]}},
      {"family": "f", "match": [],
       "steps": [{"powers": {"n": 1}}],
       "target": {"family": "g",
                  "params": [[{"powers": {"n": 1}}],
                             [{"powers": {"n": 1}}, 1]]}},
      {"family": "g", "match": [{"param": "b", "a": "2", "b": "0"}],
       "steps": 0,
       "halt": {"segments": [
         {"rep": {"block": "1", "exp": [{"powers": {"a": 1}}]}},
         {"head": {"state": "H", "symbol": 0}}]}}
    ]
  })");

  // 9 = 3·3, so the first rule fires and the quotient rebinds n.
  ApplyResult r = apply_rule(sys, {"f", {9}});
  CHECK(r.matched);
  CHECK(r.rule_index == 0);
  CHECK(r.next.family == "f");
  CHECK(r.next.params == std::vector<Int>{3});

  // 7 is not a multiple of 3; the catch-all fires with the raw value.
  r = apply_rule(sys, {"f", {7}});
  CHECK(r.rule_index == 1);
  CHECK(r.steps == 7);
  CHECK(r.next.family == "g");
  CHECK(r.next.params == std::vector<Int>{7, 8});

  r = apply_rule(sys, {"g", {7, 8}});
  CHECK(r.halted);
  CHECK(r.sigma == 7);
  CHECK(r.final_config == "1^7 (H0)");

  // g(7, 9) has an odd second parameter: no rule matches.
  r = apply_rule(sys, {"g", {7, 9}});
  CHECK(!r.matched);
}

TEST_CASE("exact matchers bind nothing") {
  RuleSystem sys = parse_rule_system(R"({
    "name": "exact",
    "families": [
      {"name": "f", "params": ["n"],
       "segments": [{"head": {"state": "A", "symbol": 0}},
                    {"rep": {"block": "1", "exp": [{"powers": {"n": 1}}]}}]}
    ],
    "rules": [
      {"family": "f", "match": [{"param": "n", "eq": "5"}],
       "steps": 0, "halt": {"segments": [{"head": {"state": "H", "symbol": 1}}]}},
      {"family": "f", "match": [],
       "steps": 0, "target": {"family": "f", "params": [[{"powers": {"n": 1}}, 1]]}}
    ]
  })");
  CHECK(apply_rule(sys, {"f", {5}}).halted);
  ApplyResult r = apply_rule(sys, {"f", {4}});
  CHECK(!r.halted);
  CHECK(r.next.params == std::vector<Int>{5});
}

TEST_CASE("run_chain reproduces the (5,2) champion") {
  RuleSystem sys = load_rule_system(shipped("bb52_champion"));
  REQUIRE(sys.machine.has_value());
  ChainResult res = run_chain(sys, 1000);
  CHECK(res.status == ChainStatus::Halted);
  CHECK(res.total_steps == 47176870);
  CHECK(res.sigma == 4098);
  CHECK(res.transitions == 15);
}

TEST_CASE("run_chain respects the transition limit") {
  RuleSystem sys = load_rule_system(shipped("bb52_champion"));
  ChainResult res = run_chain(sys, 3);
  CHECK(res.status == ChainStatus::LimitReached);
  CHECK(res.transitions == 3);
}

TEST_CASE("validate_rules accepts a shipped analysis and rejects a broken one") {
  RuleSystem sys = load_rule_system(shipped("bb52_champion"));
  ValidationReport ok = validate_rules(sys, 3, 2);
  CHECK(ok.all_passed);

  // Corrupt one step expression by a single step and the oracle notices.
  RuleSystem bad = sys;
  bad.rules[0].steps.terms.push_back({Rat(1), {}, {}});
  ValidationReport rep = validate_rules(bad, 3, 2);
  CHECK(!rep.all_passed);
  bool found = false;
  for (const RuleCheck& c : rep.checks)
    if (!c.passed && !c.failure.empty()) found = true;
  CHECK(found);
}

TEST_CASE("validate_rules needs a machine to check against") {
  RuleSystem sys = load_rule_system(shipped("collatz_t"));
  CHECK(!sys.machine.has_value());
  CHECK_THROWS_AS(validate_rules(sys), RuleError);
}

TEST_CASE("iterate_map walks a numeric system") {
  RuleSystem sys = load_rule_system(shipped("collatz_t"));

  Trajectory t = iterate_map(sys, {"T", {7}}, 1);
  REQUIRE(t.visited.size() == 2);
  CHECK(t.visited[1].params == std::vector<Int>{11});

  // 2 -> 1 -> 2 is the map's cycle.
  t = iterate_map(sys, {"T", {2}}, 100, true);
  CHECK(t.cycle_found);
  CHECK(t.cycle_length == 2);

  t = iterate_map(sys, {"T", {1}}, 0);
  CHECK(t.visited.size() == 1);  // zero transitions: just the start
}

TEST_CASE("loader rejects malformed systems") {
  CHECK_THROWS_AS(load_rule_system(shipped("no_such_file")), RuleError);
  CHECK_THROWS_AS(parse_rule_system(R"({
    "name": "x", "families": [],
    "rules": [{"family": "f", "match": [], "steps": 0,
               "halt": {"segments": [{"head": {"state": "H", "symbol": 0}}]}}]
  })"), RuleError);  // unknown family
  CHECK_THROWS_AS(parse_rule_system(R"({
    "name": "x",
    "families": [{"name": "f", "params": ["n"],
                  "segments": [{"head": {"state": "A", "symbol": 0}}]}],
    "rules": [{"family": "f", "match": [], "steps": 0}]
  })"), RuleError);  // neither target nor halt
  CHECK_THROWS_AS(parse_rule_system(R"({
    "name": "x",
    "families": [{"name": "f", "params": ["n"],
                  "segments": [{"head": {"state": "A", "symbol": 0}}]}],
    "rules": [{"family": "f", "match": [{"param": "n", "a": "0", "b": "1"}],
               "steps": 0,
               "halt": {"segments": [{"head": {"state": "H", "symbol": 0}}]}}]
  })"), RuleError);  // matcher with a = 0
}

TEST_CASE("every shipped rule file loads and its chain matches its record") {
  RecordsDb db = load_records(default_data_dir());
  int chains = 0;
  for (const RecordEntry& e : db.entries) {
    if (e.route != Route::RuleChain) continue;
    ++chains;
    RuleSystem sys = load_rule_system(db.data_dir + "/" + e.rule_file);
    REQUIRE(sys.machine.has_value());
    CHECK(print_machine(*sys.machine) == e.machine);
    ChainResult res = run_chain(sys, 100000);
    CHECK(res.status == ChainStatus::Halted);
  }
  CHECK(chains == 25);
}
