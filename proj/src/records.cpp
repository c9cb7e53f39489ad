#include "bblab/records.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <thread>

#include "json.hpp"

#include "bblab/accel.hpp"
#include "bblab/rules.hpp"
#include "bblab/sim.hpp"

namespace bblab {

namespace {

using nlohmann::json;

Score parse_score(const json& j) {
  Score sc;
  std::string text;
  if (j.contains("exact")) {
    sc.exact = true;
    text = j.at("exact").is_string() ? j.at("exact").get<std::string>()
                                     : std::to_string(j.at("exact").get<long>());
  } else if (j.contains("min")) {
    sc.exact = false;
    text = j.at("min").is_string() ? j.at("min").get<std::string>()
                                   : std::to_string(j.at("min").get<long>());
  } else {
    throw MachineError("score needs 'exact' or 'min': " + j.dump());
  }
  auto v = parse_big(text);
  if (!v) throw MachineError("bad score value " + text);
  sc.value = *v;
  return sc;
}

}  // namespace

std::string default_data_dir() {
  if (const char* env = std::getenv("BB_LAB_DATA")) return env;
#ifdef BB_LAB_DATA_DEFAULT
  return BB_LAB_DATA_DEFAULT;
#else
  return "data";
#endif
}

RecordsDb load_records(const std::string& data_dir) {
  const std::string path = data_dir + "/records.json";
  std::ifstream in(path);
  if (!in) throw MachineError("cannot open records dataset " + path);
  json j = json::parse(in);

  RecordsDb db;
  db.data_dir = data_dir;
  for (const json& je : j.at("entries")) {
    RecordEntry e;
    e.id = je.at("id").get<std::string>();
    e.cls = {je.at("class")[0].get<int>(), je.at("class")[1].get<int>()};
    e.machine = je.value("machine", "");
    e.discoverer = je.value("discoverer", "");
    e.date = je.value("date", "");
    if (je.contains("s")) e.s = parse_score(je.at("s"));
    if (je.contains("sigma")) e.sigma = parse_score(je.at("sigma"));
    const json& v = je.at("verify");
    if (v.is_string()) {
      std::string route = v.get<std::string>();
      if (route == "direct") e.route = Route::Direct;
      else if (route == "accel") e.route = Route::Accelerated;
      else throw MachineError("unknown verify route " + route);
    } else if (v.contains("chain")) {
      e.route = Route::RuleChain;
      e.rule_file = v.at("chain").get<std::string>();
    } else if (v.contains("unverifiable")) {
      e.route = Route::Unverifiable;
      e.reason = v.at("unverifiable").get<std::string>();
    } else {
      throw MachineError("bad verify route: " + v.dump());
    }
    e.variant = je.value("variant", false);
    e.slow = je.value("slow", false);
    e.notes = je.value("notes", "");
    db.entries.push_back(std::move(e));
  }
  return db;
}

namespace {

bool check_score(const std::optional<Score>& want, const Int& got,
                 const char* what, std::string& detail) {
  if (!want) return true;
  if (want->exact) {
    if (got == want->value) return true;
    detail += std::string(what) + ": got " + got.get_str() + ", want " +
              want->value.get_str() + "; ";
    return false;
  }
  if (got > want->value) return true;
  detail += std::string(what) + ": got " + got.get_str() +
            ", not above bound " + want->value.get_str() + "; ";
  return false;
}

// Paper value + 1% margin (with floor headroom for tiny entries).
Int budget_for(const RecordEntry& e) {
  Int base = e.s ? e.s->value : Int(1000000);
  return base + base / 100 + 1000;
}

}  // namespace

VerifyResult verify_entry(const RecordsDb& db, const RecordEntry& e) {
  VerifyResult res;
  res.id = e.id;
  try {
    switch (e.route) {
      case Route::Unverifiable:
        res.skipped = true;
        res.detail = "unverifiable: " + e.reason;
        return res;
      case Route::Direct: {
        Int budget = budget_for(e);
        if (!budget.fits_ulong_p()) throw MachineError("direct budget overflow");
        RunOutcome out =
            run_from_blank(parse_machine(e.machine), budget.get_ui());
        if (out.kind != RunKind::Halted) {
          res.detail = "did not halt within budget";
          return res;
        }
        res.passed = check_score(e.s, out.steps, "s", res.detail) &
                     check_score(e.sigma, out.nonblanks, "sigma", res.detail);
        return res;
      }
      case Route::Accelerated: {
        AccelOutcome out = accel_run(parse_machine(e.machine), budget_for(e));
        if (out.kind != RunKind::Halted) {
          res.detail = "did not halt within budget";
          return res;
        }
        res.passed = check_score(e.s, out.steps, "s", res.detail) &
                     check_score(e.sigma, out.nonblanks, "sigma", res.detail);
        return res;
      }
      case Route::RuleChain: {
        RuleSystem sys = load_rule_system(db.data_dir + "/" + e.rule_file);
        if (sys.machine && !e.machine.empty() &&
            print_machine(*sys.machine) != print_machine(parse_machine(e.machine))) {
          res.detail = "rule file machine differs from entry machine";
          return res;
        }
        ChainResult chain = run_chain(sys, 1000000);
        if (chain.status != ChainStatus::Halted) {
          res.detail = "chain did not halt (status " +
                       std::to_string(static_cast<int>(chain.status)) + " at " +
                       chain.current.describe() + ")";
          return res;
        }
        res.passed = check_score(e.s, chain.total_steps, "s", res.detail) &
                     check_score(e.sigma, chain.sigma, "sigma", res.detail);
        // Exact scores this small are cheap to replay step by step, so also
        // require the chain and the raw simulation to agree.
        if (res.passed && e.s && e.s->exact && e.s->value <= 100000000 &&
            !e.machine.empty()) {
          RunOutcome out =
              run_from_blank(parse_machine(e.machine), budget_for(e).get_ui());
          if (out.kind != RunKind::Halted || out.steps != chain.total_steps ||
              out.nonblanks != chain.sigma) {
            res.passed = false;
            res.detail += "direct cross-check disagrees with chain; ";
          }
        }
        return res;
      }
    }
  } catch (const std::exception& ex) {
    res.detail = std::string("error: ") + ex.what();
    return res;
  }
  res.detail = "unhandled route";
  return res;
}

VerifySummary verify_all(const RecordsDb& db, std::optional<ClassId> cls,
                         bool include_slow, int workers) {
  VerifySummary sum;
  std::vector<const RecordEntry*> todo;
  for (const RecordEntry& e : db.entries) {
    if (cls && !(e.cls == *cls)) continue;
    if (e.slow && !include_slow) {
      VerifyResult r;
      r.id = e.id;
      r.skipped = true;
      r.detail = "slow entry skipped (pass include_slow to run)";
      sum.results.push_back(std::move(r));
      continue;
    }
    todo.push_back(&e);
  }

  std::vector<VerifyResult> results(todo.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < todo.size(); ++i)
      results[i] = verify_entry(db, *todo[i]);
  } else {
    std::atomic<std::size_t> next{0};
    auto run = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= todo.size()) break;
        results[i] = verify_entry(db, *todo[i]);
      }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  for (auto& r : results) sum.results.push_back(std::move(r));

  for (const VerifyResult& r : sum.results) {
    if (r.skipped) ++sum.skipped;
    else if (r.passed) ++sum.passed;
    else ++sum.failed;
  }
  return sum;
}

}  // namespace bblab
