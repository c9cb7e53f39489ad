#include "bblab/sim.hpp"

#include <algorithm>
#include <cctype>

namespace bblab {

void Configuration::write(long pos, Symbol a) {
  long i = pos - origin;
  if (tape.empty()) {
    origin = pos;
    tape.push_back(a);
    return;
  }
  if (i < 0) {
    // Grow left with headroom (amortized O(1) per step).
    std::size_t pad = std::max<std::size_t>(-i, tape.size());
    tape.insert(tape.begin(), pad, 0);
    origin -= static_cast<long>(pad);
    i = pos - origin;
  } else if (i >= static_cast<long>(tape.size())) {
    std::size_t need = i - tape.size() + 1;
    tape.resize(tape.size() + std::max<std::size_t>(need, tape.size()), 0);
  }
  tape[i] = a;
}

Int Configuration::nonblanks() const {
  long count = std::count_if(tape.begin(), tape.end(),
                             [](Symbol s) { return s != 0; });
  return Int(count);
}

const char* run_kind_name(RunKind k) {
  switch (k) {
    case RunKind::Halted: return "Halted";
    case RunKind::StillRunning: return "StillRunning";
    case RunKind::ReachedUndefined: return "ReachedUndefined";
  }
  return "?";
}

bool step(const Machine& m, Configuration& c) {
  if (c.state == kHalt) return false;
  const auto& tr = m.at(c.state, c.head_symbol());
  if (!tr) return false;
  c.write(c.head, tr->write);
  if (tr->move == Move::L) --c.head;
  if (tr->move == Move::R) ++c.head;
  c.state = tr->next;
  ++c.steps;
  return true;
}

namespace {

RunOutcome finish(Configuration c, RunKind kind, std::uint64_t new_steps) {
  RunOutcome out;
  out.kind = kind;
  out.steps = Int(static_cast<unsigned long>(new_steps));
  out.nonblanks = c.nonblanks();
  out.final = std::move(c);
  return out;
}

RunOutcome run_impl(const Machine& m, Configuration c, std::uint64_t max_steps) {
  const std::uint64_t start = c.steps;
  if (c.state == kHalt) return finish(std::move(c), RunKind::Halted, 0);
  while (c.steps - start < max_steps) {
    const auto& tr = m.at(c.state, c.head_symbol());
    if (!tr) {
      // The step that reaches the Undefined slot is counted.
      ++c.steps;
      return finish(std::move(c), RunKind::ReachedUndefined, c.steps - start);
    }
    c.write(c.head, tr->write);
    if (tr->move == Move::L) --c.head;
    if (tr->move == Move::R) ++c.head;
    c.state = tr->next;
    ++c.steps;
    if (c.state == kHalt)
      return finish(std::move(c), RunKind::Halted, c.steps - start);
  }
  return finish(std::move(c), RunKind::StillRunning, c.steps - start);
}

}  // namespace

RunOutcome run_from_blank(const Machine& m, std::uint64_t max_steps) {
  return run_impl(m, Configuration{}, max_steps);
}

RunOutcome run_from(const Machine& m, Configuration start, std::uint64_t max_steps) {
  return run_impl(m, std::move(start), max_steps);
}

bool config_equals(const Configuration& a, const Configuration& b) {
  if (a.state != b.state) return false;
  // Window: nonblank extent united with the head cell, aligned on the head.
  auto window = [](const Configuration& c, long& lo, long& hi) {
    lo = c.head;
    hi = c.head;
    for (long p = c.origin; p < c.origin + static_cast<long>(c.tape.size()); ++p) {
      if (c.read(p) != 0) {
        lo = std::min(lo, p);
        hi = std::max(hi, p);
      }
    }
  };
  long alo, ahi, blo, bhi;
  window(a, alo, ahi);
  window(b, blo, bhi);
  if (alo - a.head != blo - b.head || ahi - a.head != bhi - b.head) return false;
  for (long d = alo - a.head; d <= ahi - a.head; ++d)
    if (a.read(a.head + d) != b.read(b.head + d)) return false;
  return true;
}

std::string format_config(const Configuration& c) {
  long lo = c.head, hi = c.head;
  for (long p = c.origin; p < c.origin + static_cast<long>(c.tape.size()); ++p)
    if (c.read(p) != 0) {
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
  std::string out;
  auto flush_run = [&](Symbol s, long count) {
    if (count <= 0) return;
    if (!out.empty()) out += ' ';
    out += std::to_string(s);
    if (count > 1) out += "^" + std::to_string(count);
  };
  Symbol cur = -1;
  long count = 0;
  for (long p = lo; p <= hi; ++p) {
    if (p == c.head) {
      flush_run(cur, count);
      cur = -1;
      count = 0;
      if (!out.empty()) out += ' ';
      out += "(" + state_name(c.state) + std::to_string(c.read(p)) + ")";
      continue;
    }
    Symbol s = c.read(p);
    if (s == cur) {
      ++count;
    } else {
      flush_run(cur, count);
      cur = s;
      count = 1;
    }
  }
  flush_run(cur, count);
  return out.empty() ? "(" + state_name(c.state) + "0)" : out;
}

Configuration parse_config(const std::string& text) {
  Configuration c;
  c.origin = 0;
  long pos = 0;
  bool head_seen = false;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto parse_long = [&]() -> long {
    std::size_t used = 0;
    long v = std::stol(text.substr(i), &used);
    i += used;
    return v;
  };
  skip_ws();
  while (i < text.size()) {
    if (text[i] == '(') {
      ++i;
      if (head_seen) throw MachineError("config has two head markers");
      if (i >= text.size()) throw MachineError("unterminated head marker");
      char st = text[i++];
      State q = st == 'H' ? kHalt : st - 'A';
      if (st != 'H' && (st < 'A' || st > 'Z'))
        throw MachineError("bad state in head marker");
      if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
        throw MachineError("head marker needs a symbol digit");
      Symbol a = text[i++] - '0';
      if (i >= text.size() || text[i] != ')')
        throw MachineError("unterminated head marker");
      ++i;
      c.write(pos, a);
      c.head = pos++;
      c.state = q;
      head_seen = true;
    } else if (std::isdigit(static_cast<unsigned char>(text[i]))) {
      Symbol a = text[i++] - '0';
      long count = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        count = parse_long();
      }
      for (long r = 0; r < count; ++r) c.write(pos++, a);
    } else {
      throw MachineError(std::string("bad character in config: ") + text[i]);
    }
    skip_ws();
  }
  if (!head_seen) throw MachineError("config lacks a (Xa) head marker");
  return c;
}

}  // namespace bblab
