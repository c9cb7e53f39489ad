#include "bblab/accel.hpp"

#include <algorithm>

namespace bblab {

namespace {

void push_run(std::vector<Run>& stack, Symbol sym, const Int& count) {
  if (count == 0) return;
  if (stack.empty()) {
    if (sym == 0) return;  // absorbed by the infinite blank run
    stack.push_back({sym, count});
    return;
  }
  if (stack.back().symbol == sym) {
    stack.back().count += count;
  } else {
    stack.push_back({sym, count});
  }
}

void push_cell(std::vector<Run>& stack, Symbol sym) {
  if (stack.empty()) {
    if (sym == 0) return;
    stack.push_back({sym, 1});
    return;
  }
  if (stack.back().symbol == sym) {
    mpz_add_ui(stack.back().count.get_mpz_t(),
               stack.back().count.get_mpz_t(), 1);
  } else {
    stack.push_back({sym, 1});
  }
}

void pop_cell(std::vector<Run>& stack) {
  if (stack.empty()) return;  // popping from the infinite blank run
  Run& top = stack.back();
  if (top.count == 1) {
    stack.pop_back();
  } else {
    mpz_sub_ui(top.count.get_mpz_t(), top.count.get_mpz_t(), 1);
  }
}

// Native-width mirror of the compressed tape, used when every run count and
// the whole step budget fit in 64 bits (counts can only grow by executed
// steps, so no merge can overflow once the entry total plus the budget is
// bounded). Plain push_back/pop_back on this POD type never touches the heap
// after warm-up, which is what makes poorly compressing machines tractable.
struct FastRun {
  Symbol symbol;
  unsigned long long count;
};

struct FastTr {
  Symbol write = 0;
  State next = 0;
  bool right = false;
  bool defined = false;
};

void fast_push_cell(std::vector<FastRun>& v, Symbol sym) {
  if (v.empty()) {
    if (sym == 0) return;
  } else if (v.back().symbol == sym) {
    ++v.back().count;
    return;
  }
  v.push_back({sym, 1});
}

void fast_pop_cell(std::vector<FastRun>& v) {
  if (v.empty()) return;
  if (v.back().count == 1)
    v.pop_back();
  else
    --v.back().count;
}

void fast_push_run(std::vector<FastRun>& v, Symbol sym,
                   unsigned long long count) {
  if (v.empty()) {
    if (sym == 0) return;
  } else if (v.back().symbol == sym) {
    v.back().count += count;
    return;
  }
  v.push_back({sym, count});
}

}  // namespace

Int CompressedTape::nonblanks() const {
  Int total = 0;
  for (const auto& r : left)
    if (r.symbol != 0) total += r.count;
  for (const auto& r : right)
    if (r.symbol != 0) total += r.count;
  return total;
}

CompressedTape compress(const Configuration& c) {
  CompressedTape t;
  t.state = c.state;
  t.steps = Int(static_cast<unsigned long>(c.steps));
  long lo = c.origin;
  long hi = c.origin + static_cast<long>(c.tape.size()) - 1;
  while (lo <= hi && c.read(lo) == 0 && lo < c.head) ++lo;
  while (hi >= lo && c.read(hi) == 0 && hi > c.head) --hi;
  lo = std::min(lo, c.head);
  hi = std::max(hi, c.head);
  for (long p = lo; p < c.head; ++p) push_cell(t.left, c.read(p));
  for (long p = hi; p >= c.head; --p) push_cell(t.right, c.read(p));
  return t;
}

Configuration decompress(const CompressedTape& t) {
  Int extent = 0;
  for (const auto& r : t.left) extent += r.count;
  for (const auto& r : t.right) extent += r.count;
  if (extent >= Int(1) << 31)
    throw MachineError("decompress: tape extent exceeds 2^31 cells");
  if (!t.steps.fits_ulong_p())
    throw MachineError("decompress: step counter exceeds 64 bits");
  Configuration c;
  c.state = t.state;
  c.steps = t.steps.get_ui();
  long pos = 0;
  for (const auto& r : t.left) {
    long n = static_cast<long>(r.count.get_ui());
    for (long i = 0; i < n; ++i) c.write(pos++, r.symbol);
  }
  c.head = pos;
  c.write(c.head, 0);
  for (auto it = t.right.rbegin(); it != t.right.rend(); ++it) {
    long n = static_cast<long>(it->count.get_ui());
    for (long i = 0; i < n; ++i) c.write(pos++, it->symbol);
  }
  return c;
}

AccelOutcome accel_run_from(const Machine& m, CompressedTape t,
                            const Int& max_base_steps) {
  if (m.allow_stay)
    throw MachineError("accel_run: stay-move machines are not supported");

  AccelOutcome out;
  const Int limit = t.steps + max_base_steps;
  unsigned long long ops = 0;
  Int scratch;  // reused budget temporary

  // Fast path: everything fits in 64 bits with room to spare.
  {
    Int total_cells = 0;
    bool fits = limit.fits_ulong_p() && t.steps.fits_ulong_p();
    for (const auto& r : t.left) total_cells += r.count;
    for (const auto& r : t.right) total_cells += r.count;
    if (fits && total_cells + limit < Int("9223372036854775807")) {
      const unsigned long long limitu = limit.get_ui();
      unsigned long long steps = t.steps.get_ui();
      std::vector<FastRun> L, R;
      L.reserve(t.left.size());
      R.reserve(t.right.size());
      for (const auto& r : t.left) L.push_back({r.symbol, r.count.get_ui()});
      for (const auto& r : t.right) R.push_back({r.symbol, r.count.get_ui()});

      std::vector<FastTr> tab(m.states * m.symbols);
      for (State q = 0; q < m.states; ++q)
        for (Symbol s = 0; s < m.symbols; ++s)
          if (const auto& tr = m.at(q, s)) {
            auto& f = tab[q * m.symbols + s];
            f.write = tr->write;
            f.next = tr->next;
            f.right = tr->move == Move::R;
            f.defined = true;
          }

      State state = t.state;
      // Run-length chaining pays off only when runs are long. The compressed
      // loop is probed in windows of ops; if a window advances fewer than 8
      // base steps per op, the tape barely compresses and a flat byte-array
      // loop is much faster, so we decompress and continue there.
      constexpr unsigned long long kProbeOps = 1ull << 22;
      constexpr unsigned long long kMinStepsPerOp = 8;
      bool go_flat = false;

      // Inductive cycle batching: when the op stream returns to the same
      // shape (state, run symbols, stack depths) with every run count shifted
      // by a fixed delta and a fixed base-step cost, one more cycle is
      // simulated to confirm the deltas, and then the cycle is applied in
      // bulk. A verified cycle only ever touches run tops, so it replays
      // verbatim as long as every shrinking run keeps more cells than one
      // cycle can consume — hence the slack of cycle-steps + 2 below. This is
      // what collapses head oscillation at run seams, which plain per-run
      // chaining cannot see.
      enum class Phase { Idle, Scan, Verify };
      Phase phase = Phase::Idle;
      unsigned long long backoff = 64;
      unsigned long long next_attempt = ops + backoff;
      std::vector<FastRun> snapL, snapR;
      std::vector<long long> dL, dR, d2;
      State snap_state = 0;
      unsigned long long snap_steps = 0, snap_ops = 0;
      unsigned long long cyc_ops = 0, cyc_steps = 0, verify_end = 0;
      constexpr std::size_t kMaxRuns = 64;
      constexpr unsigned long long kScanWindow = 512;

      const auto shape_deltas = [](const std::vector<FastRun>& now,
                                   const std::vector<FastRun>& snap,
                                   std::vector<long long>& d) {
        if (now.size() != snap.size()) return false;
        d.resize(now.size());
        for (std::size_t i = 0; i < now.size(); ++i) {
          if (now[i].symbol != snap[i].symbol) return false;
          d[i] = static_cast<long long>(now[i].count) -
                 static_cast<long long>(snap[i].count);
        }
        return true;
      };

      const auto run_compressed = [&](bool probe) {
        const auto detect_fail = [&] {
          phase = Phase::Idle;
          backoff = std::min<unsigned long long>(backoff * 2, 65536);
          next_attempt = ops + backoff;
        };
        const auto clamp_cycles = [&](const std::vector<FastRun>& v,
                                      const std::vector<long long>& d,
                                      unsigned long long& k) {
          const unsigned long long slack = cyc_steps + 2;
          for (std::size_t i = 0; i < v.size(); ++i)
            if (d[i] < 0) {
              const unsigned long long dec =
                  static_cast<unsigned long long>(-d[i]);
              k = std::min(
                  k, v[i].count > slack ? (v[i].count - slack) / dec : 0);
            }
        };
        const auto apply_cycles = [](std::vector<FastRun>& v,
                                     const std::vector<long long>& d,
                                     unsigned long long k) {
          for (std::size_t i = 0; i < v.size(); ++i)
            v[i].count = static_cast<unsigned long long>(
                static_cast<long long>(v[i].count) +
                static_cast<long long>(k) * d[i]);
        };

        unsigned long long window_end = ops + kProbeOps;
        unsigned long long window_start_steps = steps;
        while (state != kHalt && steps < limitu) {
          if (probe && ops >= window_end) {
            if (steps - window_start_steps < kMinStepsPerOp * kProbeOps) {
              go_flat = true;
              return;
            }
            window_start_steps = steps;
            window_end = ops + kProbeOps;
          }
          ++ops;
          const Symbol a = R.empty() ? 0 : R.back().symbol;
          const FastTr& tr = tab[state * m.symbols + a];
          if (!tr.defined) {
            ++steps;
            out.kind = RunKind::ReachedUndefined;
            return;
          }
          const bool chain = tr.next == state;
          if (tr.right) {
            if (chain && !R.empty()) {
              const unsigned long long rem = limitu - steps;
              unsigned long long take = R.back().count;
              if (take <= rem)
                R.pop_back();
              else
                R.back().count -= (take = rem);
              fast_push_run(L, tr.write, take);
              steps += take;
            } else {
              fast_pop_cell(R);
              fast_push_cell(L, tr.write);
              ++steps;
            }
          } else {
            fast_pop_cell(R);
            fast_push_cell(R, tr.write);
            ++steps;
            if (chain && !L.empty() && L.back().symbol == a &&
                steps < limitu) {
              const unsigned long long rem = limitu - steps;
              unsigned long long take = L.back().count;
              if (take <= rem)
                L.pop_back();
              else
                L.back().count -= (take = rem);
              fast_push_run(R, tr.write, take);
              steps += take;
            }
            const Symbol next_sym = L.empty() ? 0 : L.back().symbol;
            fast_pop_cell(L);
            fast_push_cell(R, next_sym);
          }
          state = tr.next;

          if (phase == Phase::Idle) {
            if (ops >= next_attempt && L.size() + R.size() <= kMaxRuns) {
              snapL = L;
              snapR = R;
              snap_state = state;
              snap_steps = steps;
              snap_ops = ops;
              phase = Phase::Scan;
            }
          } else if (phase == Phase::Scan) {
            if (ops - snap_ops > kScanWindow) {
              detect_fail();
            } else if (state == snap_state && shape_deltas(L, snapL, dL) &&
                       shape_deltas(R, snapR, dR)) {
              cyc_ops = ops - snap_ops;
              cyc_steps = steps - snap_steps;
              if (cyc_steps == 0) {
                detect_fail();
              } else {
                snapL = L;
                snapR = R;
                snap_steps = steps;
                verify_end = ops + cyc_ops;
                phase = Phase::Verify;
              }
            }
          } else if (ops == verify_end) {
            if (state == snap_state && shape_deltas(L, snapL, d2) &&
                d2 == dL && shape_deltas(R, snapR, d2) && d2 == dR &&
                steps - snap_steps == cyc_steps) {
              unsigned long long k = (limitu - steps) / cyc_steps;
              clamp_cycles(L, dL, k);
              clamp_cycles(R, dR, k);
              if (k > 0) {
                apply_cycles(L, dL, k);
                apply_cycles(R, dR, k);
                steps += k * cyc_steps;
                ++ops;
                backoff = 64;
                phase = Phase::Idle;
                next_attempt = ops + backoff;
              } else {
                detect_fail();
              }
            } else {
              detect_fail();
            }
          }
        }
      };

      run_compressed(true);

      if (go_flat) {
        unsigned long long cells = 0;
        for (const auto& r : L) cells += r.count;
        for (const auto& r : R) cells += r.count;
        if (cells >= (1ull << 31)) {
          run_compressed(false);  // too wide to lay out flat; stay compressed
        } else {
          const long margin = 1 << 16;
          std::vector<signed char> tape(cells + 2 * margin, 0);
          long pos = margin;
          for (const auto& r : L)
            for (unsigned long long i = 0; i < r.count; ++i)
              tape[pos++] = static_cast<signed char>(r.symbol);
          const long head0 = pos;
          for (std::size_t i = R.size(); i-- > 0;)
            for (unsigned long long j = 0; j < R[i].count; ++j)
              tape[pos++] = static_cast<signed char>(R[i].symbol);
          long head = head0;

          while (state != kHalt && steps < limitu) {
            ++ops;
            const Symbol a = tape[head];
            const FastTr& tr = tab[state * m.symbols + a];
            if (!tr.defined) {
              ++steps;
              out.kind = RunKind::ReachedUndefined;
              break;
            }
            tape[head] = static_cast<signed char>(tr.write);
            head += tr.right ? 1 : -1;
            ++steps;
            state = tr.next;
            if (head == 0 || head == static_cast<long>(tape.size()) - 1) {
              // Double the tape, keeping the used span centered.
              std::vector<signed char> wider(tape.size() * 2, 0);
              const long shift = static_cast<long>(tape.size()) / 2;
              std::copy(tape.begin(), tape.end(), wider.begin() + shift);
              tape.swap(wider);
              head += shift;
            }
          }

          long lo = 0, hi = static_cast<long>(tape.size()) - 1;
          while (lo < head && tape[lo] == 0) ++lo;
          while (hi > head && tape[hi] == 0) --hi;
          L.clear();
          R.clear();
          for (long p = lo; p < head; ++p) fast_push_cell(L, tape[p]);
          for (long p = hi; p >= head; --p) fast_push_cell(R, tape[p]);
        }
      }

      t.state = state;
      t.steps = Int(static_cast<unsigned long>(steps));
      t.left.clear();
      t.right.clear();
      for (const auto& r : L)
        t.left.push_back({r.symbol, Int(static_cast<unsigned long>(r.count))});
      for (const auto& r : R)
        t.right.push_back({r.symbol, Int(static_cast<unsigned long>(r.count))});
      if (out.kind != RunKind::ReachedUndefined)
        out.kind = state == kHalt ? RunKind::Halted : RunKind::StillRunning;
      out.steps = t.steps;
      out.nonblanks = t.nonblanks();
      out.macro_ops = static_cast<unsigned long>(ops);
      out.final = std::move(t);
      return out;
    }
  }

  // The hot loop keeps logical stack sizes separate from vector sizes so a
  // pop followed by a push reuses the slot's mpz limbs instead of freeing
  // and reallocating them; the vectors are trimmed once at the end.
  std::vector<Run>& L = t.left;
  std::vector<Run>& R = t.right;
  std::size_t ln = L.size();
  std::size_t rn = R.size();

  const auto push_cell_fast = [](std::vector<Run>& v, std::size_t& n,
                                 Symbol sym) {
    if (n == 0) {
      if (sym == 0) return;
    } else if (v[n - 1].symbol == sym) {
      mpz_add_ui(v[n - 1].count.get_mpz_t(), v[n - 1].count.get_mpz_t(), 1);
      return;
    }
    if (n < v.size()) {
      v[n].symbol = sym;
      mpz_set_ui(v[n].count.get_mpz_t(), 1);
    } else {
      v.push_back({sym, 1});
    }
    ++n;
  };
  const auto pop_cell_fast = [](std::vector<Run>& v, std::size_t& n) {
    if (n == 0) return;  // popping from the infinite blank run
    Run& top = v[n - 1];
    if (mpz_cmp_ui(top.count.get_mpz_t(), 1) == 0) {
      --n;
    } else {
      mpz_sub_ui(top.count.get_mpz_t(), top.count.get_mpz_t(), 1);
    }
  };
  const auto push_run_fast = [](std::vector<Run>& v, std::size_t& n,
                                Symbol sym, const Int& count) {
    if (n == 0) {
      if (sym == 0) return;
    } else if (v[n - 1].symbol == sym) {
      v[n - 1].count += count;
      return;
    }
    if (n < v.size()) {
      v[n].symbol = sym;
      v[n].count = count;
    } else {
      v.push_back({sym, count});
    }
    ++n;
  };

  while (t.state != kHalt && t.steps < limit) {
    ++ops;
    const Symbol a = rn ? R[rn - 1].symbol : 0;
    const auto& tr = m.at(t.state, a);
    if (!tr) {
      ++t.steps;  // the step that reaches the Undefined slot is counted
      out.kind = RunKind::ReachedUndefined;
      break;
    }
    const bool chain = tr->next == t.state;

    if (tr->move == Move::R) {
      if (chain && rn) {
        // Consume the whole head run (clamped to the step budget).
        scratch = limit - t.steps;  // remaining ≥ 1 here
        if (R[rn - 1].count <= scratch) {
          --rn;  // the popped slot keeps its count alive for the push
          push_run_fast(L, ln, tr->write, R[rn].count);
          t.steps += R[rn].count;
        } else {
          R[rn - 1].count -= scratch;
          push_run_fast(L, ln, tr->write, scratch);
          t.steps += scratch;
        }
      } else {
        pop_cell_fast(R, rn);
        push_cell_fast(L, ln, tr->write);
        mpz_add_ui(t.steps.get_mpz_t(), t.steps.get_mpz_t(), 1);
      }
    } else {
      // One step rewrites the head cell; a chain then sweeps the adjacent
      // left run of the same symbol.
      pop_cell_fast(R, rn);
      push_cell_fast(R, rn, tr->write);
      mpz_add_ui(t.steps.get_mpz_t(), t.steps.get_mpz_t(), 1);
      if (chain && ln && L[ln - 1].symbol == a && t.steps < limit) {
        scratch = limit - t.steps;
        if (L[ln - 1].count <= scratch) {
          --ln;
          push_run_fast(R, rn, tr->write, L[ln].count);
          t.steps += L[ln].count;
        } else {
          L[ln - 1].count -= scratch;
          push_run_fast(R, rn, tr->write, scratch);
          t.steps += scratch;
        }
      }
      // Land on the next left cell (already paid for by the last step).
      const Symbol next_sym = ln ? L[ln - 1].symbol : 0;
      pop_cell_fast(L, ln);
      push_cell_fast(R, rn, next_sym);
    }
    t.state = tr->next;
  }

  L.resize(ln);
  R.resize(rn);

  if (out.kind != RunKind::ReachedUndefined)
    out.kind = t.state == kHalt ? RunKind::Halted : RunKind::StillRunning;
  out.steps = t.steps;
  out.nonblanks = t.nonblanks();
  out.macro_ops = static_cast<unsigned long>(ops);
  out.final = std::move(t);
  return out;
}

AccelOutcome accel_run(const Machine& m, const Int& max_base_steps) {
  return accel_run_from(m, CompressedTape{}, max_base_steps);
}

}  // namespace bblab
