#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bblab/machine.hpp"
#include "bblab/sim.hpp"

using namespace bblab;

TEST_CASE("parse accepts paper-table and single-line forms") {
  Machine a = parse_machine("1RB 1LB 1LA 1RH");
  CHECK(a.states == 2);
  CHECK(a.symbols == 2);
  CHECK(a.at(0, 0) == Transition{1, Move::R, 1});
  CHECK(a.at(1, 1) == Transition{1, Move::R, kHalt});
  CHECK(print_machine(a) == "1RB1LB_1LA1RH");

  Machine b = parse_machine("1RB1LC_1RC1RB_1RD0LE_1LA1LD_1RH0LA");
  CHECK(b.states == 5);
  CHECK(b.symbols == 2);
  CHECK(b.at(4, 0) == Transition{1, Move::R, kHalt});
  CHECK(parse_machine(print_machine(b)) == b);
}

TEST_CASE("undefined slots parse and round-trip") {
  Machine m = parse_machine("1RB ---_--- ---");
  CHECK(m.states == 2);
  CHECK(!m.at(0, 1));
  CHECK(!m.at(1, 0));
  CHECK(print_machine(m) == "1RB---_------");
  CHECK(parse_machine(print_machine(m)) == m);
}

TEST_CASE("parse rejects malformed input") {
  CHECK_THROWS_AS(parse_machine(""), MachineError);
  CHECK_THROWS_AS(parse_machine("1RB 1L"), MachineError);          // truncated
  CHECK_THROWS_AS(parse_machine("1XB 1LB 1LA 1RH"), MachineError); // direction
  CHECK_THROWS_AS(parse_machine("1RZ 1LB 1LA 1RH"), MachineError); // state range
  CHECK_THROWS_AS(parse_machine("3RB 1LB 1LA 1RH", ClassId{2, 2}),
                  MachineError);                                   // symbol ≥ k
  CHECK_THROWS_AS(parse_machine("1SB 1LB 1LA 1RH"), MachineError); // stay
}

TEST_CASE("stay moves need allow_stay") {
  Machine m = parse_machine("1SB1LA_1RA1RH", std::nullopt, true);
  CHECK(m.at(0, 0)->move == Move::S);
  CHECK(print_machine(m) == "1SB1LA_1RA1RH");
  CHECK(rado_violation(m).has_value());
}

TEST_CASE("rado strictness") {
  CHECK(!rado_violation(parse_machine("1RB1LB_1LA1RH")));
  CHECK(rado_violation(parse_machine("1RB1LB_1LA0RH")).has_value());
  CHECK(rado_violation(parse_machine("1RB1LB_1LA1LH")).has_value());
}

TEST_CASE("class_size matches the closed form") {
  CHECK(class_size({2, 2}) == 6561);
  CHECK(class_size({1, 2}) == 25);
  CHECK(class_size({3, 3}) == Int("322687697779"));
}

TEST_CASE("normalize: already-normal machines are identity") {
  Machine champ = parse_machine("1RB1LC_1RC1RB_1RD0LE_1LA1LD_1RH0LA");
  auto [norm, rep] = normalize(champ);
  CHECK(rep.identity);
  CHECK(norm == champ);
}

TEST_CASE("normalize inverts start-preserving state permutations") {
  // (3,2) champion with B,C swapped and the table relabeled.
  Machine swapped = parse_machine("1RC1RH_1LB1LA_1LC0RB");
  auto [norm, rep] = normalize(swapped);
  CHECK(print_machine(norm) == "1RB1RH_1LB0RC_1LC1LA");
  CHECK(!rep.identity);
}

TEST_CASE("normalize mirrors first-move-left machines") {
  Machine left = parse_machine("1LB1RB_1RA1LH");
  auto [norm, rep] = normalize(left);
  CHECK(rep.mirrored);
  CHECK(norm.at(0, 0)->move == Move::R);
  // Mirrored machines trace mirror-image tapes step by step.
  Configuration cl, cr;
  for (int i = 0; i < 100; ++i) {
    CHECK(cl.state == cr.state);
    CHECK(cl.head_symbol() == cr.head_symbol());
    bool a = step(left, cl);
    bool b = step(norm, cr);
    CHECK(a == b);
    if (!a) break;
    CHECK(cl.head == -cr.head);
  }
}

TEST_CASE("normalize renames first-written symbols in order") {
  // A (2,3) machine writing symbol 2 before 1.
  Machine m = parse_machine("2RB1LA2RH_1LB2RA1RA");
  auto [norm, rep] = normalize(m);
  CHECK(norm.at(0, 0)->write == 1);
  RunOutcome orig = run_from_blank(m, 10000);
  RunOutcome renamed = run_from_blank(norm, 10000);
  CHECK(orig.kind == renamed.kind);
  CHECK(orig.steps == renamed.steps);
  CHECK(orig.nonblanks == renamed.nonblanks);
}

TEST_CASE("normalize is idempotent and preserves scores on samples") {
  const char* samples[] = {
      "1RB0LB_1LA1RH", "1LB1LA_0RA1RH", "0RB1LA_1LA1RH",
      "1RB1RH_1LB0RC_1LC1LA", "1RC1RH_1LA0RB_1LB1LC",
  };
  for (const char* code : samples) {
    Machine m = parse_machine(code);
    auto [n1, r1] = normalize(m);
    auto [n2, r2] = normalize(n1);
    CHECK(n2 == n1);
    CHECK(r2.identity);
    RunOutcome a = run_from_blank(m, 10000);
    RunOutcome b = run_from_blank(n1, 10000);
    CHECK(a.kind == b.kind);
    CHECK(a.steps == b.steps);
    CHECK(a.nonblanks == b.nonblanks);
  }
}

TEST_CASE("normalize rejects an Undefined first transition") {
  CHECK_THROWS_AS(normalize(parse_machine("---1RH_1LA1RA")), MachineError);
}

TEST_CASE("big-number parsing and rendering") {
  CHECK(*parse_big("47176870") == 47176870);
  CHECK(*parse_big("47,176,870") == 47176870);
  CHECK(*parse_big("3.8e4") == 38000);
  CHECK(*parse_big("2.5e3") == 2500);
  CHECK(!parse_big("3.85e1"));  // not an integer
  CHECK(!parse_big("abc"));
  CHECK(to_sci(*parse_big("3.8e21132")) == "3.8e21132");
  CHECK(to_sci(Int(123)) == "123");
}
