#include <fstream>

#include "json.hpp"

#include "bblab/rules.hpp"

namespace bblab {

namespace {

using nlohmann::json;

Int json_int(const json& j, const char* what) {
  std::optional<Int> v;
  if (j.is_number_integer()) {
    v = Int(j.get<long>());
  } else if (j.is_string()) {
    v = parse_big(j.get<std::string>());
  }
  if (!v) throw RuleError(std::string("bad integer for ") + what);
  return *v;
}

IntExpr parse_expr(const json& j) {
  // Shorthand: a bare number/string is a constant.
  if (j.is_number_integer() || j.is_string())
    return IntExpr::constant(json_int(j, "constant expression"));
  if (!j.is_array()) throw RuleError("IntExpr must be a term list");
  IntExpr e;
  for (const json& jt : j) {
    IntExpr::Term t;
    if (jt.contains("coef")) {
      const json& c = jt.at("coef");
      if (!c.is_array() || c.size() != 2)
        throw RuleError("coef must be [num, den]");
      t.coef = Rat(json_int(c[0], "coef num"), json_int(c[1], "coef den"));
      t.coef.canonicalize();
    }
    if (jt.contains("powers")) {
      for (auto it = jt.at("powers").begin(); it != jt.at("powers").end(); ++it)
        t.powers[it.key()] = it.value().get<unsigned>();
    }
    if (jt.contains("exps")) {
      for (const json& je : jt.at("exps")) {
        IntExpr::Exp ex;
        ex.base = json_int(je.at("base"), "exp base");
        if (ex.base < 2) throw RuleError("exponential base must be ≥ 2");
        for (auto it = je.at("linear").begin(); it != je.at("linear").end(); ++it) {
          if (it.key() == "const") {
            ex.lin_const = json_int(it.value(), "linear const");
          } else {
            ex.linear[it.key()] = json_int(it.value(), "linear coeff");
          }
        }
        t.exps.push_back(std::move(ex));
      }
    }
    e.terms.push_back(std::move(t));
  }
  return e;
}

Segment parse_segment(const json& j) {
  if (j.contains("lit")) return SegLiteral{j.at("lit").get<std::string>()};
  if (j.contains("rep")) {
    const json& r = j.at("rep");
    return SegRepeat{r.at("block").get<std::string>(),
                     parse_expr(r.at("exp"))};
  }
  if (j.contains("bin")) {
    const json& b = j.at("bin");
    return SegBinary{b.at("param").get<std::string>(),
                     b.value("reversed", true)};
  }
  if (j.contains("head")) {
    const json& h = j.at("head");
    std::string st = h.at("state").get<std::string>();
    if (st.size() != 1 || (st[0] != 'H' && (st[0] < 'A' || st[0] > 'Z')))
      throw RuleError("bad head state " + st);
    return SegHead{st[0] == 'H' ? kHalt : st[0] - 'A', h.at("symbol").get<int>()};
  }
  throw RuleError("unknown segment kind: " + j.dump());
}

Template parse_template(const json& j) {
  Template t;
  for (const json& js : j) t.segments.push_back(parse_segment(js));
  return t;
}

}  // namespace

RuleSystem parse_rule_system(const std::string& json_text) {
  json j = json::parse(json_text);
  RuleSystem sys;
  sys.name = j.value("name", "");
  if (j.contains("machine"))
    sys.machine = parse_machine(j.at("machine").get<std::string>());
  for (const json& jf : j.at("families")) {
    Family f;
    f.name = jf.at("name").get<std::string>();
    f.params = jf.at("params").get<std::vector<std::string>>();
    if (f.params.empty() || f.params.size() > 2)
      throw RuleError("family " + f.name + " must have 1 or 2 parameters");
    f.tmpl = parse_template(jf.at("segments"));
    sys.families.push_back(std::move(f));
  }
  if (j.contains("initial")) {
    InitialRule init;
    init.steps = json_int(j.at("initial").at("steps"), "initial steps");
    init.start.family = j.at("initial").at("family").get<std::string>();
    for (const json& jp : j.at("initial").at("params"))
      init.start.params.push_back(json_int(jp, "initial param"));
    sys.initial = std::move(init);
  }
  for (const json& jr : j.at("rules")) {
    Rule r;
    r.family = jr.at("family").get<std::string>();
    for (const json& jm : jr.at("match")) {
      Matcher m;
      m.param = jm.at("param").get<std::string>();
      if (jm.contains("eq")) {
        m.exact = true;
        m.eq = json_int(jm.at("eq"), "matcher eq");
      } else {
        m.a = json_int(jm.value("a", json(1)), "matcher a");
        m.b = json_int(jm.value("b", json(0)), "matcher b");
        if (m.a < 1) throw RuleError("matcher needs a ≥ 1");
      }
      r.match.push_back(std::move(m));
    }
    r.steps = parse_expr(jr.at("steps"));
    const bool has_target = jr.contains("target");
    const bool has_halt = jr.contains("halt");
    if (has_target == has_halt)
      throw RuleError("rule needs exactly one of target/halt");
    if (has_target) {
      const json& jt = jr.at("target");
      std::vector<IntExpr> params;
      for (const json& jp : jt.at("params")) params.push_back(parse_expr(jp));
      r.target = {jt.at("family").get<std::string>(), std::move(params)};
    } else {
      r.halt = parse_template(jr.at("halt").at("segments"));
    }
    sys.rules.push_back(std::move(r));
  }

  // Cross-checks: names resolve, arities agree.
  for (const Rule& r : sys.rules) {
    const Family* f = sys.family(r.family);
    if (!f) throw RuleError("rule references unknown family " + r.family);
    if (r.target) {
      const Family* t = sys.family(r.target->first);
      if (!t) throw RuleError("rule targets unknown family " + r.target->first);
      if (t->params.size() != r.target->second.size())
        throw RuleError("target arity mismatch on " + r.target->first);
    }
    for (const Matcher& m : r.match)
      if (std::find(f->params.begin(), f->params.end(), m.param) ==
          f->params.end())
        throw RuleError("matcher names unknown parameter " + m.param);
  }
  if (sys.initial) {
    const Family* f = sys.family(sys.initial->start.family);
    if (!f) throw RuleError("initial rule references unknown family");
    if (f->params.size() != sys.initial->start.params.size())
      throw RuleError("initial rule arity mismatch");
  }
  return sys;
}

RuleSystem load_rule_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RuleError("cannot open rule file " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  RuleSystem sys = parse_rule_system(text);
  if (sys.name.empty()) sys.name = path;
  return sys;
}

}  // namespace bblab
