#include "commands.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace tcx::app {

namespace {

// Thrown for objects a command cannot act on; maps to kInputError.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

Json cohomology_json(const CoverNerve& nerve, const std::map<Face, std::map<int, std::size_t>>& h) {
  Json out = Json::object();
  for (Face f : nerve.faces()) {
    Json dims = Json::object();
    auto it = h.find(f);
    if (it != h.end())
      for (const auto& [n, d] : it->second)
        if (d) dims[std::to_string(n)] = d;
    out[face_key(nerve, f)] = dims;
  }
  return out;
}

Json space_json(const CoverNerve& nerve, const GlobalComplex& c) {
  Json out = Json::object();
  for (Face f : nerve.faces()) out[face_key(nerve, f)] = dims_json(c.value(f));
  return out;
}

Json locals_json(const TwistedComplex& t) {
  Json out = Json::object();
  const auto& nerve = *t.nerve();
  for (int i = 0; i < t.size(); ++i) out[nerve.labels()[i]] = dims_json((*t.locals)[i].value(singleton(i)));
  return out;
}

struct Item {
  Json json = Json::object();
  bool ok = true;

  explicit Item(const std::string& object) { json["object"] = object; }
  void check(const std::string& key, bool value) {
    json[key] = value;
    ok = ok && value;
  }
  void failure(const std::string& text) {
    ok = false;
    if (!json.contains("failure")) json["failure"] = text;
  }
};

// Twisted-complex checks shared by several commands.
void structure_checks(Item& item, const TwistedComplex& t) {
  const auto& nerve = *t.nerve();
  auto mc = check_mc(t);
  item.check("maurer_cartan", mc.valid);
  if (!mc.valid) item.failure(mc.describe(nerve));
  if (t.generalized) {
    item.json["generalized"] = true;
    return;
  }
  auto nd = check_nondegenerate(t);
  item.check("nondegenerate", nd.valid);
  if (!nd.consistent) item.failure("nondegeneracy verdicts disagree");
  if (auto e = nd.first_failure())
    item.failure("a^{1,0} at " + nerve.labels()[e->index] + " is not homotopic to the identity on " +
                 nerve.face_name(e->face));
}

std::optional<std::string> closedness_failure(const Morphism& phi, const TwistedComplex& e,
                                              const TwistedComplex& f) {
  Morphism d = morphism_diff(phi, e.a, f.a);
  for (const auto& [t, comp] : d.components())
    for (const auto& [x, g] : comp)
      if (!g.is_zero())
        return "d(phi) is nonzero at multi-index " + e.nerve()->tuple_name(t) + ", face " + e.nerve()->face_name(x);
  return std::nullopt;
}

struct Context {
  const Workspace& ws;
  const CommandOptions& opts;
  std::vector<Json> items;
  bool ok = true;

  void push(Item item) {
    item.json["status"] = item.ok ? "pass" : "fail";
    ok = ok && item.ok;
    items.push_back(std::move(item.json));
  }

  bool wanted(const std::string& name) const { return !opts.name || *opts.name == name; }

  template <class F>
  void each_presheaf(F&& fn) {
    for (const auto& p : ws.presheaves)
      if (wanted(p.name)) fn(p);
  }
  template <class F>
  void each_twisted(F&& fn) {
    for (const auto& t : ws.twisted)
      if (wanted(t.name)) fn(t);
  }
  template <class F>
  void each_morphism(F&& fn) {
    for (const auto& m : ws.morphisms)
      if (wanted(m.name)) fn(m);
  }

  const TwistedComplex& twisted(const std::string& name) const { return ws.find_twisted(name)->twisted; }
};

void cmd_validate(Context& cx) {
  cx.each_presheaf([&](const NamedComplex& p) {
    Item item(p.name);
    item.json["kind"] = "presheaf";
    auto rep = validate_global(p.complex);
    item.check("valid", rep.valid);
    if (!rep.valid) item.failure(rep.message);
    cx.push(std::move(item));
  });
  cx.each_twisted([&](const NamedTwisted& t) {
    Item item(t.name);
    item.json["kind"] = "twisted";
    structure_checks(item, t.twisted);
    if (t.twisted.generalized)
      for (int i = 0; i < t.twisted.size(); ++i) {
        auto rep = check_idempotent(t.twisted, i);
        if (!rep.routes_agree) item.failure("idempotence routes disagree at " + t.twisted.nerve()->labels()[i]);
      }
    cx.push(std::move(item));
  });
  cx.each_morphism([&](const NamedMorphism& m) {
    Item item(m.name);
    item.json["kind"] = "morphism";
    item.json["degree"] = m.morphism.degree();
    item.json["natural"] = true;
    item.json["closed"] = !closedness_failure(m.morphism, cx.twisted(m.source), cx.twisted(m.target));
    cx.push(std::move(item));
  });
}

void cmd_cohomology(Context& cx) {
  cx.each_presheaf([&](const NamedComplex& p) {
    Item item(p.name);
    item.json["cohomology"] = cohomology_json(*p.complex.nerve(), facewise_cohomology(p.complex));
    cx.push(std::move(item));
  });
  cx.each_twisted([&](const NamedTwisted& t) {
    Item item(t.name);
    Sheafified s = sheafify(t.twisted);
    item.json["sheafified_cohomology"] = cohomology_json(*t.twisted.nerve(), facewise_cohomology(s.complex));
    cx.push(std::move(item));
  });
}

void cmd_sheafify(Context& cx) {
  cx.each_twisted([&](const NamedTwisted& t) {
    Item item(t.name);
    Sheafified s = sheafify(t.twisted);
    const auto& nerve = *t.twisted.nerve();
    item.json["top_degree"] = s.top;
    item.json["dimensions"] = space_json(nerve, s.complex);
    auto rep = validate_global(s.complex);
    item.check("complex", rep.valid);
    if (!rep.valid) item.failure(rep.message);
    item.json["acyclic"] = facewise_acyclic(s.complex);
    cx.push(std::move(item));
  });
}

void cmd_twist(Context& cx) {
  cx.each_presheaf([&](const NamedComplex& p) {
    Item item(p.name);
    TwistedComplex t = twist(p.complex);
    item.json["locals"] = locals_json(t);
    structure_checks(item, t);
    Sheafified s = sheafify(t);
    auto bad = facewise_cone_failure(tau(p.complex, s), p.complex, s.complex);
    item.check("tau_quasi_isomorphism", !bad);
    if (bad) item.failure("cone of tau has cohomology on " + p.complex.nerve()->face_name(*bad));
    cx.push(std::move(item));
  });
}

void cmd_resolve(Context& cx) {
  cx.each_presheaf([&](const NamedComplex& p) {
    Item item(p.name);
    try {
      ResolutionResult r = twisted_resolution(p.complex);
      item.json["locals"] = locals_json(r.resolved);
      item.json["steps"] = r.steps.size();
      bool cocycles = true;
      for (const auto& s : r.steps) cocycles = cocycles && s.cocycle;
      item.check("obstructions_are_cocycles", cocycles);
      item.json["nonzero_higher_terms"] = r.has_nonzero_higher();
      structure_checks(item, r.resolved);
      auto w = is_weak_equivalence(r.comparison, r.resolved, r.target);
      item.check("comparison_weak_equivalence", w.ok);
      if (!w.ok) item.failure(w.reason);
    } catch (const NotPerfect& e) {
      item.check("perfect", false);
      item.failure(e.what());
    } catch (const LiftFailed& e) {
      item.failure(e.what());
    }
    cx.push(std::move(item));
  });
}

void cmd_cone(Context& cx) {
  cx.each_morphism([&](const NamedMorphism& m) {
    Item item(m.name);
    const auto& e = cx.twisted(m.source);
    const auto& f = cx.twisted(m.target);
    if (m.morphism.degree() != 0) {
      item.failure("cone needs a degree-0 morphism, got degree " + std::to_string(m.morphism.degree()));
    } else if (auto bad = closedness_failure(m.morphism, e, f)) {
      item.check("closed", false);
      item.failure(*bad);
    } else {
      item.check("closed", true);
      TwistedComplex c = cone(m.morphism, e, f);
      item.json["locals"] = locals_json(c);
      structure_checks(item, c);
    }
    cx.push(std::move(item));
  });
}

void cmd_shift(Context& cx) {
  cx.each_twisted([&](const NamedTwisted& t) {
    Item item(t.name);
    TwistedComplex s = shift(t.twisted);
    item.json["locals"] = locals_json(s);
    structure_checks(item, s);
    cx.push(std::move(item));
  });
}

void cmd_check_weq(Context& cx) {
  cx.each_morphism([&](const NamedMorphism& m) {
    Item item(m.name);
    const auto& e = cx.twisted(m.source);
    const auto& f = cx.twisted(m.target);
    auto rep = weq_criterion(m.morphism, e, f);
    item.json["twisted_route"] = rep.twisted_route;
    item.json["sheafified_route"] = rep.sheafified_route;
    bool generalized = e.generalized || f.generalized;
    if (!rep.twisted_route) item.failure("not a weak equivalence: " + rep.reason);
    if (!generalized && !rep.agree()) item.failure("the two weak-equivalence routes disagree");
    Json notes = Json::array();
    if (generalized) notes.push_back("generalized input: the sheafified route is not a criterion");
    if (m.morphism.degree() == 0 && !e.locals->is_zero() && facewise_acyclic(sheafify(e).complex))
      notes.push_back("S(" + m.source + ") is acyclic");
    if (!notes.empty()) item.json["notes"] = notes;
    cx.push(std::move(item));
  });
}

void cmd_local_equiv(Context& cx) {
  cx.each_twisted([&](const NamedTwisted& t) {
    Item item(t.name);
    Sheafified s = sheafify(t.twisted);
    Json per = Json::object();
    for (int j = 0; j < t.twisted.size(); ++j) {
      auto rep = local_equivalence(s, j);
      const std::string& label = t.twisted.nerve()->labels()[j];
      per[label] = Json::object({{"f_chain_map", rep.f_chain},
                                 {"g_chain_map", rep.g_chain},
                                 {"fg_is_transition", rep.fg_is_transition},
                                 {"gf_homotopic_to_identity", rep.homotopy}});
      if (!rep.ok()) item.failure("at " + label + ": " + rep.failure);
    }
    item.json["indices"] = per;
    cx.push(std::move(item));
  });
}

void cmd_adjunction(Context& cx) {
  cx.each_twisted([&](const NamedTwisted& t) {
    Item item(t.name);
    Sheafified s = sheafify(t.twisted);
    auto basis = verify_adjunction(s, false);
    auto mat = verify_adjunction(s, true);
    item.check("on_basis", basis.ok);
    item.check("materialized", mat.ok);
    if (!basis.ok) item.failure(basis.failure);
    if (!mat.ok) item.failure(mat.failure);
    cx.push(std::move(item));
  });
}

void cmd_fiber_product(Context& cx) {
  if (cx.ws.nerve->size() != 2)
    throw InputError("fiber-product needs a cover with exactly two opens, got " +
                     std::to_string(cx.ws.nerve->size()));
  std::map<std::string, FiberObject> objects;
  cx.each_twisted([&](const NamedTwisted& t) {
    Item item(t.name);
    try {
      FiberObject x = restrict_to_fiber(t.twisted);
      item.json["certificate"] = x.certificate.method;
      FiberMorphism id = fiber_identity(x);
      FiberMorphism d = fiber_differential(id, x, x);
      item.check("identity_closed", d.mu.is_zero() && d.nu.is_zero() && d.tau.is_zero());
      item.check("unit_law", fiber_equal(fiber_compose(id, id, x, x, x), id, x, x));
      objects.emplace(t.name, std::move(x));
    } catch (const NotInvertible& e) {
      item.check("invertible", false);
      item.failure(e.what());
    }
    cx.push(std::move(item));
  });
  int sign = descent_sign();
  cx.each_morphism([&](const NamedMorphism& m) {
    Item item(m.name);
    auto find = [&](const std::string& name) -> const FiberObject* {
      auto it = objects.find(name);
      if (it != objects.end()) return &it->second;
      auto [pos, inserted] = objects.emplace(name, restrict_to_fiber(cx.twisted(name)));
      return &pos->second;
    };
    try {
      const FiberObject* x1 = find(m.source);
      const FiberObject* x2 = find(m.target);
      const auto& e = cx.twisted(m.source);
      const auto& f = cx.twisted(m.target);
      FiberMorphism r = restrict_morphism(m.morphism, *x1, *x2, sign);
      FiberMorphism rd = restrict_morphism(morphism_diff(m.morphism, e.a, f.a), *x1, *x2, sign);
      item.json["sign"] = sign;
      item.check("commutes_with_differential", fiber_equal(fiber_differential(r, *x1, *x2), rd, *x1, *x2));
      if (!item.ok) item.failure("restriction does not commute with the differential");
    } catch (const NotInvertible& e) {
      item.failure(e.what());
    }
    cx.push(std::move(item));
  });
}

void cmd_transfer(Context& cx) {
  cx.each_morphism([&](const NamedMorphism& m) {
    Item item(m.name);
    const auto& a = cx.twisted(m.source);
    const auto& b = cx.twisted(m.target);
    if (m.morphism.degree() != 0) {
      item.failure("transfer needs a degree-0 morphism");
    } else if (a.generalized || b.generalized) {
      item.failure("transfer needs non-generalized twisted complexes");
    } else if (auto bad = closedness_failure(m.morphism, a, b)) {
      item.check("closed", false);
      item.failure(*bad);
    } else {
      int top = default_top({&a, &b});
      Sheafified sa = sheafify(a, top), sb = sheafify(b, top);
      GlobalMorphism f = sheafify_morphism(m.morphism, sa, sb);
      try {
        Transfer tr = hom_transfer(f, sa, sb);
        item.check("lift_closed", !closedness_failure(tr.theta, a, b));
        GlobalMorphism lhs = global_difference(sheafify_morphism(tr.theta, sa, sb), f, sa.complex, sb.complex);
        item.check("homotopy_verified",
                   global_equal(global_diff(tr.homotopy, sa.complex, sb.complex), lhs, sa.complex, sb.complex));
        if (!item.ok) item.failure("transferred morphism is not certified");
      } catch (const LiftFailed& e) {
        item.failure(e.what());
      } catch (const NotWeakEquivalence& e) {
        item.failure(e.what());
      }
    }
    cx.push(std::move(item));
  });
}

using Handler = std::function<void(Context&)>;

const std::vector<std::pair<std::string, Handler>>& handlers() {
  static const std::vector<std::pair<std::string, Handler>> h = {
      {"validate", cmd_validate},       {"cohomology", cmd_cohomology},
      {"sheafify", cmd_sheafify},       {"twist", cmd_twist},
      {"resolve", cmd_resolve},         {"cone", cmd_cone},
      {"shift", cmd_shift},             {"check-weq", cmd_check_weq},
      {"local-equiv", cmd_local_equiv}, {"adjunction", cmd_adjunction},
      {"fiber-product", cmd_fiber_product}, {"transfer", cmd_transfer},
  };
  return h;
}

Json error_report(const std::string& command, const Json& error) {
  return Json::object({{"command", command}, {"status", "error"}, {"error", error}});
}

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

bool is_word(const Json& j) {
  return is_scalar(j) && (!j.is_string() || j.get<std::string>().find(' ') == std::string::npos);
}

std::string scalar_text(const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

void render(std::ostringstream& os, const Json& j, int indent) {
  std::string pad(indent, ' ');
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (is_scalar(v)) {
        os << pad << k << ": " << scalar_text(v) << "\n";
      } else if (v.empty()) {
        os << pad << k << ": " << (v.is_array() ? "[]" : "{}") << "\n";
      } else if (v.is_array() && std::all_of(v.begin(), v.end(), is_word)) {
        os << pad << k << ":";
        for (const auto& x : v) os << " " << scalar_text(x);
        os << "\n";
      } else {
        os << pad << k << ":\n";
        render(os, v, indent + 2);
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (is_scalar(v)) {
        os << pad << "- " << scalar_text(v) << "\n";
      } else {
        os << pad << "-\n";
        render(os, v, indent + 2);
      }
    }
  } else {
    os << pad << scalar_text(j) << "\n";
  }
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [n, h] : handlers()) out.push_back(n);
    return out;
  }();
  return names;
}

CommandResult run_command(const Workspace& ws, const std::string& command, const CommandOptions& opts) {
  const Handler* handler = nullptr;
  for (const auto& [n, h] : handlers())
    if (n == command) handler = &h;
  if (!handler)
    return {error_report(command, Json::object({{"kind", "usage"}, {"reason", "unknown command"}})), kInputError};
  if (opts.name && !ws.find_presheaf(*opts.name) && !ws.find_twisted(*opts.name) && !ws.find_morphism(*opts.name))
    return {error_report(command, Json::object({{"kind", "usage"}, {"reason", "no object named " + *opts.name}})),
            kInputError};
  Context cx{ws, opts, {}, true};
  try {
    (*handler)(cx);
  } catch (const InputError& e) {
    return {error_report(command, Json::object({{"kind", "input"}, {"reason", e.what()}})), kInputError};
  }
  Json report = Json::object();
  report["command"] = command;
  report["field"] = ws.field.name();
  report["status"] = cx.ok ? "pass" : "fail";
  if (!ws.warnings.empty()) report["warnings"] = ws.warnings;
  report["items"] = cx.items;
  return {report, cx.ok ? kPass : kCheckFailed};
}

std::string render_text(const Json& report) {
  std::ostringstream os;
  render(os, report, 0);
  return os.str();
}

CommandResult invoke(const Invocation& inv, std::string& rendered) {
  CommandResult res;
  try {
    std::optional<Field> field;
    if (inv.field) {
      try {
        field = Field::parse(*inv.field);
      } catch (const std::exception& e) {
        throw ValidationError("--field", e.what());
      }
    }
    Workspace ws = parse_workspace(inv.input_text, field);
    res = run_command(ws, inv.command, inv.options);
  } catch (const ParseError& e) {
    res = {error_report(inv.command,
                        Json::object({{"kind", "parse"}, {"line", e.line}, {"column", e.col}, {"reason", e.reason}})),
           kInputError};
  } catch (const ValidationError& e) {
    res = {error_report(inv.command,
                        Json::object({{"kind", "validation"}, {"object", e.object}, {"reason", e.reason}})),
           kInputError};
  }
  rendered = inv.machine ? res.report.dump(2) + "\n" : render_text(res.report);
  return res;
}

}  // namespace tcx::app
