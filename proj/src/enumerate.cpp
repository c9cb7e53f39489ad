#include "bblab/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

namespace bblab {

long SearchReport::decided_total() const {
  long total = 0;
  for (const auto& [_, n] : decided) total += n;
  return total;
}

void SearchReport::merge(const SearchReport& other) {
  enumerated += other.enumerated;
  halted += other.halted;
  for (const auto& [r, n] : other.decided) decided[r] += n;
  holdouts.insert(holdouts.end(), other.holdouts.begin(), other.holdouts.end());
  if (other.best_s > best_s ||
      (other.best_s == best_s && other.best_s_machine < best_s_machine)) {
    best_s = other.best_s;
    best_s_machine = other.best_s_machine;
  }
  if (other.best_sigma > best_sigma ||
      (other.best_sigma == best_sigma &&
       other.best_sigma_machine < best_sigma_machine)) {
    best_sigma = other.best_sigma;
    best_sigma_machine = other.best_sigma_machine;
  }
}

namespace {

using Visitor = std::function<void(const Machine&, const RunOutcome&)>;

struct Node {
  Machine m;
  Configuration c;
  int used_states = 1;   // highest state index referenced + 1
  int used_symbols = 1;  // highest symbol written + 1
};

RunOutcome outcome_of(Configuration c, RunKind kind) {
  RunOutcome out;
  out.kind = kind;
  out.steps = Int(static_cast<unsigned long>(c.steps));
  out.nonblanks = c.nonblanks();
  out.final = std::move(c);
  return out;
}

// Runs the node's simulation to the next decision point. Returns true and
// fills (q,a) when an Undefined slot was reached (not yet counted as a step);
// returns false after invoking the visitor on a leaf (halt or cutoff).
bool run_to_branch(Node& node, std::uint64_t cutoff, const Visitor& visitor,
                   State& q, Symbol& a) {
  while (node.c.steps < cutoff) {
    if (node.c.state == kHalt) {
      visitor(node.m, outcome_of(node.c, RunKind::Halted));
      return false;
    }
    if (!node.m.at(node.c.state, node.c.head_symbol())) {
      q = node.c.state;
      a = node.c.head_symbol();
      return true;
    }
    step(node.m, node.c);
  }
  visitor(node.m, outcome_of(node.c, node.c.state == kHalt
                                         ? RunKind::Halted
                                         : RunKind::StillRunning));
  return false;
}

// Branches the node at Undefined slot (q,a): the halting fill is a leaf, the
// admissible non-halting fills recurse.
void expand(const Node& node, State q, Symbol a, std::uint64_t cutoff,
            const Visitor& visitor, long& count,
            const std::function<void(Node&&)>& recurse) {
  // Halting fill: (1,R,H), the reaching step counts.
  {
    Node leaf = node;
    leaf.m.at(q, a) = Transition{1, Move::R, kHalt};
    step(leaf.m, leaf.c);
    ++count;
    visitor(leaf.m, outcome_of(leaf.c, RunKind::Halted));
  }
  const int max_state = std::min(node.used_states, node.m.states - 1);
  const int max_symbol = std::min(node.used_symbols, node.m.symbols - 1);
  for (State p = 0; p <= max_state; ++p) {
    for (Symbol b = 0; b <= max_symbol; ++b) {
      for (Move d : {Move::L, Move::R}) {
        Node child = node;
        child.m.at(q, a) = Transition{b, d, p};
        child.used_states = std::max(child.used_states, p + 1);
        child.used_symbols = std::max(child.used_symbols, b + 1);
        step(child.m, child.c);
        recurse(std::move(child));
      }
    }
  }
}

void dfs(Node node, std::uint64_t cutoff, const Visitor& visitor, long& count) {
  State q;
  Symbol a;
  if (!run_to_branch(node, cutoff, visitor, q, a)) {
    ++count;
    return;
  }
  expand(node, q, a, cutoff, visitor, count,
         [&](Node&& child) { dfs(std::move(child), cutoff, visitor, count); });
}

Node root_node(ClassId c) {
  Node root;
  root.m.states = c.n;
  root.m.symbols = c.k;
  root.m.table.resize(static_cast<std::size_t>(c.n) * c.k);
  return root;
}

}  // namespace

long enumerate_tnf(ClassId c, std::uint64_t cutoff, const Visitor& visitor) {
  long count = 0;
  if (c.n == 1) {
    // δ(A,0)=(1,R,B) needs a second state; only the halting fill remains.
    Node leaf = root_node(c);
    leaf.m.at(0, 0) = Transition{1, Move::R, kHalt};
    step(leaf.m, leaf.c);
    ++count;
    visitor(leaf.m, outcome_of(leaf.c, RunKind::Halted));
    return count;
  }
  Node root = root_node(c);
  root.m.at(0, 0) = Transition{1, Move::R, 1};  // fixed first transition
  root.used_states = 2;
  root.used_symbols = 2;
  step(root.m, root.c);
  dfs(std::move(root), cutoff, visitor, count);
  return count;
}

namespace {

void classify(const Machine& m, const RunOutcome& out, std::uint64_t cutoff,
              SearchReport& rep) {
  ++rep.enumerated;
  if (out.kind != RunKind::StillRunning) {
    // Halting leaf (explicit H or counted Undefined reach).
    ++rep.halted;
    const std::string code = print_machine(m);
    if (out.steps > rep.best_s ||
        (out.steps == rep.best_s && code < rep.best_s_machine)) {
      rep.best_s = out.steps;
      rep.best_s_machine = code;
    }
    if (out.nonblanks > rep.best_sigma ||
        (out.nonblanks == rep.best_sigma && code < rep.best_sigma_machine)) {
      rep.best_sigma = out.nonblanks;
      rep.best_sigma_machine = code;
    }
    return;
  }
  for (const Verdict& v : {decide_no_halt_reachable(m),
                           decide_cycle(m, cutoff),
                           decide_translated_cycle(m, cutoff)}) {
    if (v.nonhalting) {
      ++rep.decided[v.reason];
      return;
    }
  }
  rep.holdouts.push_back(print_machine(m));
}

}  // namespace

SearchReport search_class(ClassId c, std::uint64_t cutoff, int workers) {
  SearchReport rep;
  rep.cls = c;
  rep.cutoff = cutoff;

  if (workers <= 1 || c.n == 1) {
    enumerate_tnf(c, cutoff, [&](const Machine& m, const RunOutcome& out) {
      classify(m, out, cutoff, rep);
    });
    std::sort(rep.holdouts.begin(), rep.holdouts.end());
    return rep;
  }

  // Collect the first branching level as independent subtree seeds.
  std::vector<Node> seeds;
  std::vector<std::pair<Machine, RunOutcome>> early_leaves;
  {
    Node root = root_node(c);
    root.m.at(0, 0) = Transition{1, Move::R, 1};
    root.used_states = 2;
    root.used_symbols = 2;
    step(root.m, root.c);
    State q;
    Symbol a;
    long count = 0;
    auto leaf_visitor = [&](const Machine& m, const RunOutcome& out) {
      early_leaves.emplace_back(m, out);
    };
    if (run_to_branch(root, cutoff, leaf_visitor, q, a)) {
      expand(root, q, a, cutoff, leaf_visitor, count,
             [&](Node&& child) { seeds.push_back(std::move(child)); });
    }
  }
  for (const auto& [m, out] : early_leaves) classify(m, out, cutoff, rep);

  std::atomic<std::size_t> next{0};
  std::mutex merge_mutex;
  auto worker = [&] {
    SearchReport local;
    local.cls = c;
    local.cutoff = cutoff;
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= seeds.size()) break;
      long count = 0;
      dfs(seeds[i], cutoff,
          [&](const Machine& m, const RunOutcome& out) {
            classify(m, out, cutoff, local);
          },
          count);
    }
    std::lock_guard<std::mutex> lock(merge_mutex);
    rep.merge(local);
  };
  std::vector<std::thread> pool;
  for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  std::sort(rep.holdouts.begin(), rep.holdouts.end());
  return rep;
}

}  // namespace bblab
