#include "bblab/machine.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace bblab {

std::string state_name(State q) {
  if (q == kHalt) return "H";
  return std::string(1, static_cast<char>('A' + q));
}

namespace {

std::vector<std::string> tokenize_triples(const std::string& text) {
  // Accept whitespace- and '_'-separated streams of 3-char triples.
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    while (!cur.empty()) {
      if (cur.size() < 3) throw MachineError("truncated triple: " + cur);
      out.push_back(cur.substr(0, 3));
      cur.erase(0, 3);
    }
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '_') {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  return out;
}

}  // namespace

Machine parse_machine(const std::string& text, std::optional<ClassId> hint,
                      bool allow_stay) {
  const std::vector<std::string> triples = tokenize_triples(text);
  if (triples.empty()) throw MachineError("empty machine text");

  // Determine (n,k): from the hint, or from the largest state/symbol used
  // combined with the slot count.
  int max_state = 0;
  int max_symbol = 0;
  for (const auto& t : triples) {
    if (t == "---") continue;
    if (!std::isdigit(static_cast<unsigned char>(t[0])))
      throw MachineError("bad write symbol in triple: " + t);
    char st = t[2];
    if (st != 'H' && (st < 'A' || st > 'Z'))
      throw MachineError("bad state letter in triple: " + t);
    max_symbol = std::max(max_symbol, t[0] - '0');
    if (st != 'H') max_state = std::max(max_state, st - 'A');
  }
  ClassId cls;
  if (hint) {
    cls = *hint;
  } else {
    // Rows are delimited by '_' when present; otherwise take n from the
    // highest state letter used and split the slots evenly.
    const std::size_t slots = triples.size();
    std::size_t rows = 1 + std::count(text.begin(), text.end(), '_');
    int n = rows > 1 ? static_cast<int>(rows) : max_state + 1;
    if (n < 1 || slots % n != 0)
      throw MachineError("cannot infer machine class from " +
                         std::to_string(slots) + " transitions");
    int k = static_cast<int>(slots / n);
    if (k < std::max(2, max_symbol + 1))
      throw MachineError("cannot infer machine class: too few symbols per row");
    cls = {n, k};
  }
  if (cls.n < 1 || cls.k < 2) throw MachineError("class must have n ≥ 1, k ≥ 2");
  if (triples.size() != static_cast<std::size_t>(cls.n) * cls.k)
    throw MachineError("expected " + std::to_string(cls.n * cls.k) +
                       " transitions, got " + std::to_string(triples.size()));

  Machine m;
  m.states = cls.n;
  m.symbols = cls.k;
  m.allow_stay = allow_stay;
  m.table.resize(triples.size());
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const std::string& t = triples[i];
    if (t == "---") continue;
    Transition tr;
    tr.write = t[0] - '0';
    if (tr.write >= cls.k)
      throw MachineError("write symbol " + std::to_string(tr.write) +
                         " out of range in triple " + t);
    switch (t[1]) {
      case 'L': tr.move = Move::L; break;
      case 'R': tr.move = Move::R; break;
      case 'S':
        if (!allow_stay) throw MachineError("stay move without allow_stay: " + t);
        tr.move = Move::S;
        break;
      default: throw MachineError("bad direction in triple: " + t);
    }
    if (t[2] == 'H') {
      tr.next = kHalt;
    } else {
      tr.next = t[2] - 'A';
      if (tr.next >= cls.n)
        throw MachineError("state " + std::string(1, t[2]) + " out of range");
    }
    m.table[i] = tr;
  }
  return m;
}

std::string print_machine(const Machine& m) {
  std::string out;
  for (State q = 0; q < m.states; ++q) {
    if (q) out += '_';
    for (Symbol a = 0; a < m.symbols; ++a) {
      const auto& tr = m.at(q, a);
      if (!tr) {
        out += "---";
        continue;
      }
      out += static_cast<char>('0' + tr->write);
      out += tr->move == Move::L ? 'L' : tr->move == Move::R ? 'R' : 'S';
      out += tr->next == kHalt ? 'H' : static_cast<char>('A' + tr->next);
    }
  }
  return out;
}

std::optional<std::string> rado_violation(const Machine& m) {
  for (State q = 0; q < m.states; ++q) {
    for (Symbol a = 0; a < m.symbols; ++a) {
      const auto& tr = m.at(q, a);
      if (!tr) continue;
      if (tr->move == Move::S)
        return "stay move at " + state_name(q) + std::to_string(a);
      if (tr->next == kHalt && (tr->write != 1 || tr->move != Move::R))
        return "non-Rado halt transition at " + state_name(q) + std::to_string(a);
    }
  }
  return std::nullopt;
}

std::pair<Machine, NormalizeReport> normalize(const Machine& m, long step_bound) {
  if (!m.at(0, 0))
    throw MachineError("normalize: first transition δ(A,0) is Undefined");

  // Follow the machine from a blank tape, recording first-entry order of
  // states, first-write order of symbols, and the first move direction.
  std::vector<State> state_order{0};
  std::vector<Symbol> symbol_order{0};
  auto seen_state = [&](State q) {
    return std::find(state_order.begin(), state_order.end(), q) != state_order.end();
  };
  auto seen_symbol = [&](Symbol a) {
    return std::find(symbol_order.begin(), symbol_order.end(), a) != symbol_order.end();
  };

  std::optional<Move> first_move;
  {
    std::vector<Symbol> right, left;  // tape halves around the head
    long head = 0;
    State q = 0;
    auto read = [&](long pos) -> Symbol {
      if (pos >= 0)
        return pos < static_cast<long>(right.size()) ? right[pos] : 0;
      long i = -pos - 1;
      return i < static_cast<long>(left.size()) ? left[i] : 0;
    };
    auto write = [&](long pos, Symbol a) {
      if (pos >= 0) {
        if (pos >= static_cast<long>(right.size())) right.resize(pos + 1, 0);
        right[pos] = a;
      } else {
        long i = -pos - 1;
        if (i >= static_cast<long>(left.size())) left.resize(i + 1, 0);
        left[i] = a;
      }
    };
    for (long step = 0; step < step_bound; ++step) {
      if (static_cast<int>(state_order.size()) == m.states &&
          static_cast<int>(symbol_order.size()) == m.symbols && first_move)
        break;
      const auto& tr = m.at(q, read(head));
      if (!tr) break;
      if (!seen_symbol(tr->write)) symbol_order.push_back(tr->write);
      if (!first_move && tr->move != Move::S) first_move = tr->move;
      write(head, tr->write);
      if (tr->move == Move::L) --head;
      if (tr->move == Move::R) ++head;
      if (tr->next == kHalt) break;
      if (!seen_state(tr->next)) state_order.push_back(tr->next);
      q = tr->next;
    }
  }

  NormalizeReport rep;
  rep.complete = static_cast<int>(state_order.size()) == m.states &&
                 static_cast<int>(symbol_order.size()) == m.symbols;
  rep.mirrored = first_move == Move::L;

  // Unvisited states/symbols keep their relative order after the visited ones.
  for (State q = 0; q < m.states; ++q)
    if (!seen_state(q)) state_order.push_back(q);
  for (Symbol a = 0; a < m.symbols; ++a)
    if (!seen_symbol(a)) symbol_order.push_back(a);

  rep.state_map.resize(m.states);
  rep.symbol_map.resize(m.symbols);
  for (int i = 0; i < m.states; ++i) rep.state_map[state_order[i]] = i;
  for (int i = 0; i < m.symbols; ++i) rep.symbol_map[symbol_order[i]] = i;

  Machine out;
  out.states = m.states;
  out.symbols = m.symbols;
  out.allow_stay = m.allow_stay;
  out.table.resize(m.table.size());
  for (State q = 0; q < m.states; ++q) {
    for (Symbol a = 0; a < m.symbols; ++a) {
      const auto& tr = m.at(q, a);
      if (!tr) continue;
      Transition nt;
      nt.write = rep.symbol_map[tr->write];
      nt.move = tr->move;
      if (rep.mirrored && nt.move != Move::S)
        nt.move = nt.move == Move::L ? Move::R : Move::L;
      nt.next = tr->next == kHalt ? kHalt : rep.state_map[tr->next];
      out.at(rep.state_map[q], rep.symbol_map[a]) = nt;
    }
  }
  rep.identity = out == m;
  return {out, rep};
}

Int class_size(ClassId c) {
  const unsigned long kn = static_cast<unsigned long>(c.k) * c.n;
  Int base = 2 * kn + 1;
  Int out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), kn);
  return out;
}

}  // namespace bblab
