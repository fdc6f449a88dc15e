#include "workspace.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace tcx::app {

namespace {

[[noreturn]] void fail(const std::string& object, const std::string& reason) { throw ValidationError(object, reason); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

int parse_degree(const std::string& key, const std::string& object) {
  try {
    std::size_t used = 0;
    int n = std::stoi(key, &used);
    if (used == key.size()) return n;
  } catch (const std::exception&) {
  }
  fail(object, "degree key '" + key + "' is not an integer");
}

const Json& require(const Json& j, const char* key, const std::string& object) {
  if (!j.is_object() || !j.contains(key)) fail(object, std::string("missing key '") + key + "'");
  return j.at(key);
}

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& object) {
  if (!j.is_object()) fail(object, "expected an object");
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
      fail(object, "unknown key '" + k + "'");
  }
}

Scalar parse_scalar(const Json& j, Field f, const std::string& object) {
  try {
    if (j.is_string()) return Scalar::parse(j.get<std::string>(), f);
    if (j.is_number_integer()) return Scalar::parse(j.dump(), f);
  } catch (const std::exception& e) {
    fail(object, e.what());
  }
  fail(object, "matrix entries must be strings or integers, got " + j.dump());
}

Matrix parse_matrix(const Json& j, std::size_t rows, std::size_t cols, Field f, const std::string& object) {
  if (!j.is_array()) fail(object, "matrix must be an array of rows");
  if (j.size() != rows)
    fail(object, "matrix has " + std::to_string(j.size()) + " rows, expected " + std::to_string(rows));
  Matrix m(rows, cols, f);
  for (std::size_t r = 0; r < rows; ++r) {
    const Json& row = j[r];
    if (!row.is_array() || row.size() != cols)
      fail(object, "matrix row " + std::to_string(r) + " must have " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) {
      Scalar s = parse_scalar(row[c], f, object);
      if (!s.is_zero()) m.set(r, c, s);
    }
  }
  return m;
}

GradedSpace parse_dims(const Json& j, const std::string& object) {
  if (!j.is_object()) fail(object, "dimensions must be an object degree -> dimension");
  GradedSpace s;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number_unsigned()) fail(object, "dimension at degree " + k + " must be a nonnegative integer");
    s.set_dim(parse_degree(k, object), v.get<std::size_t>());
  }
  return s;
}

// {deg: matrix}, keyed by source degree.
GradedMap parse_graded_map(const Json& j, const GradedSpace& src, const GradedSpace& dst, int shift, Field f,
                           const std::string& object) {
  if (!j.is_object()) fail(object, "graded map must be an object degree -> matrix");
  GradedMap m(src, dst, shift, f);
  for (const auto& [k, v] : j.items()) {
    int n = parse_degree(k, object);
    m.set(n, parse_matrix(v, dst.dim(n + shift), src.dim(n), f, object + " degree " + k));
  }
  return m;
}

Face parse_face(const CoverNerve& nerve, const std::string& key, const std::string& object) {
  Face f = 0;
  for (const auto& label : split(key, ',')) {
    auto i = nerve.index_of(label);
    if (!i) fail(object, "unknown open '" + label + "'");
    f |= singleton(*i);
  }
  if (!nerve.is_face(f)) fail(object, "'" + key + "' is not a face of the nerve");
  return f;
}

Tuple parse_tuple(const CoverNerve& nerve, const Json& j, const std::string& object) {
  if (!j.is_array() || j.empty()) fail(object, "tuple must be a nonempty array of open labels");
  Tuple t;
  for (const auto& x : j) {
    if (!x.is_string()) fail(object, "tuple entries must be open labels");
    auto i = nerve.index_of(x.get<std::string>());
    if (!i) fail(object, "unknown open '" + x.get<std::string>() + "'");
    t.push_back(*i);
  }
  if (!nerve.is_face(tuple_set(t))) fail(object, nerve.tuple_name(t) + " does not span a face");
  return t;
}

struct ParsedPresheaf {
  Presheaf space;
  std::map<Face, GradedMap> d;
};

// Constant form {"constant", "differential"} or explicit form {"values",
// "restrictions", "differential"} on the given up-closed domain.
ParsedPresheaf parse_presheaf(const NervePtr& nerve, const std::vector<Face>& domain, Field f, const Json& j,
                              const std::string& object) {
  ParsedPresheaf out;
  if (j.is_object() && j.contains("constant")) {
    check_keys(j, {"constant", "differential"}, object);
    GradedSpace v = parse_dims(j.at("constant"), object);
    out.space = Presheaf::constant(nerve, domain, v, f);
    if (j.contains("differential")) {
      GradedMap d = parse_graded_map(j.at("differential"), v, v, 1, f, object + " differential");
      for (Face x : domain) out.d[x] = d;
    }
    return out;
  }
  check_keys(j, {"values", "restrictions", "differential"}, object);
  out.space = Presheaf(nerve, domain, f);
  if (j.contains("values")) {
    const Json& vals = j.at("values");
    if (!vals.is_object()) fail(object, "'values' must be an object face -> dimensions");
    for (const auto& [k, v] : vals.items()) {
      Face x = parse_face(*nerve, k, object);
      if (!out.space.in_domain(x)) fail(object, "face " + k + " is outside the domain");
      out.space.set_value(x, parse_dims(v, object + " at " + k));
    }
  }
  if (j.contains("restrictions")) {
    const Json& res = j.at("restrictions");
    if (!res.is_object()) fail(object, "'restrictions' must be an object 'A->B' -> graded map");
    for (const auto& [k, v] : res.items()) {
      auto arrow = k.find("->");
      if (arrow == std::string::npos) fail(object, "restriction key '" + k + "' must have the form 'A->B'");
      Face from = parse_face(*nerve, k.substr(0, arrow), object);
      Face to = parse_face(*nerve, k.substr(arrow + 2), object);
      if (!out.space.in_domain(from) || !out.space.in_domain(to))
        fail(object, "restriction " + k + " leaves the domain");
      if (!face_contains(to, from) || face_size(to) != face_size(from) + 1)
        fail(object, "restriction " + k + " must add exactly one open");
      out.space.set_restriction(
          from, to,
          parse_graded_map(v, out.space.value(from), out.space.value(to), 0, f, object + " restriction " + k));
    }
  }
  out.space.complete_from_covering_relations();
  auto rep = validate_presheaf(out.space);
  if (!rep.valid) fail(object, rep.message);
  if (j.contains("differential")) {
    const Json& dj = j.at("differential");
    if (!dj.is_object()) fail(object, "'differential' must be an object face -> graded map");
    for (const auto& [k, v] : dj.items()) {
      Face x = parse_face(*nerve, k, object);
      if (!out.space.in_domain(x)) fail(object, "face " + k + " is outside the domain");
      const GradedSpace& s = out.space.value(x);
      out.d[x] = parse_graded_map(v, s, s, 1, f, object + " differential at " + k);
    }
  }
  return out;
}

// Components of a morphism: [{"tuple", "face"?, "maps"}]; without a face the
// maps are used at every face containing the tuple.
void parse_components(Morphism& m, const Json& j, const std::string& object) {
  if (!j.is_array()) fail(object, "components must be an array");
  const auto& nerve = *m.nerve();
  for (std::size_t k = 0; k < j.size(); ++k) {
    const Json& c = j[k];
    std::string where = object + " component " + std::to_string(k);
    check_keys(c, {"tuple", "face", "maps"}, where);
    Tuple t = parse_tuple(nerve, require(c, "tuple", where), where);
    std::vector<Face> faces;
    if (c.contains("face")) {
      if (!c.at("face").is_string()) fail(where, "'face' must be a string");
      Face x = parse_face(nerve, c.at("face").get<std::string>(), where);
      if (!face_contains(x, tuple_set(t))) fail(where, "face does not contain " + nerve.tuple_name(t));
      faces.push_back(x);
    } else {
      faces = nerve.star(tuple_set(t));
    }
    for (Face x : faces) {
      const GradedSpace& s = (*m.src())[t.back()].value(x);
      const GradedSpace& d = (*m.dst())[t.front()].value(x);
      m.add(t, x, parse_graded_map(require(c, "maps", where), s, d, m.sheaf_degree(t), m.field(), where));
    }
  }
}

void require_natural(const Morphism& m, const std::string& object) {
  auto rep = check_naturality(m);
  if (!rep.valid)
    fail(object, "component at tuple " + m.nerve()->tuple_name(rep.tuple) + " is not natural at face " +
                     m.nerve()->face_name(rep.from) + " -> " + m.nerve()->face_name(rep.to));
}

class Parser {
public:
  Parser(const Json& doc, std::optional<Field> override_field) : doc_(doc) {
    check_keys(doc_, {"field", "opens", "faces", "presheaves", "twisted", "morphisms"}, "document");
    if (override_field) {
      ws_.field = *override_field;
    } else if (doc_.contains("field")) {
      if (!doc_.at("field").is_string()) fail("field", "must be a string");
      try {
        ws_.field = Field::parse(doc_.at("field").get<std::string>());
      } catch (const std::exception& e) {
        fail("field", e.what());
      }
    }
  }

  Workspace run() {
    parse_nerve();
    if (doc_.contains("presheaves")) section("presheaves", [&](const std::string& n, const Json& j) { presheaf(n, j); });
    if (doc_.contains("twisted")) section("twisted", [&](const std::string& n, const Json& j) { twisted(n, j); });
    if (doc_.contains("morphisms"))
      section("morphisms", [&](const std::string& n, const Json& j) { morphism(n, j); });
    return std::move(ws_);
  }

private:
  template <class F>
  void section(const char* key, F&& fn) {
    const Json& s = doc_.at(key);
    if (!s.is_object()) fail(key, "must be an object name -> definition");
    for (const auto& [name, j] : s.items()) {
      if (name.empty()) fail(key, "empty name");
      if (!names_.insert(name).second) fail(name, "name already defined");
      fn(name, j);
    }
  }

  void parse_nerve() {
    const Json& opens = require(doc_, "opens", "document");
    if (!opens.is_array() || opens.empty()) fail("opens", "must be a nonempty array of labels");
    std::vector<std::string> labels;
    for (const auto& o : opens) {
      if (!o.is_string()) fail("opens", "labels must be strings");
      std::string l = o.get<std::string>();
      if (l.empty() || l.find(',') != std::string::npos || l.find("->") != std::string::npos)
        fail("opens", "label '" + l + "' must be nonempty and contain neither ',' nor '->'");
      if (std::find(labels.begin(), labels.end(), l) != labels.end()) fail("opens", "duplicate label '" + l + "'");
      labels.push_back(l);
    }
    std::vector<std::vector<int>> declared;
    if (doc_.contains("faces")) {
      const Json& fs = doc_.at("faces");
      if (!fs.is_array()) fail("faces", "must be an array of label lists");
      for (const auto& f : fs) {
        if (!f.is_array() || f.empty()) fail("faces", "each face must be a nonempty array of labels");
        std::vector<int> idx;
        for (const auto& l : f) {
          auto it = l.is_string() ? std::find(labels.begin(), labels.end(), l.get<std::string>()) : labels.end();
          if (it == labels.end()) fail("faces", "unknown open " + l.dump());
          idx.push_back(static_cast<int>(it - labels.begin()));
        }
        declared.push_back(idx);
      }
    }
    bool closed = true;
    try {
      ws_.nerve = std::make_shared<CoverNerve>(CoverNerve::build(labels, declared, closed));
    } catch (const std::exception& e) {
      fail("faces", e.what());
    }
    if (!closed) ws_.warnings.push_back("faces were not closed under subsets; closure applied");
  }

  void presheaf(const std::string& name, const Json& j) {
    try {
      auto p = parse_presheaf(ws_.nerve, ws_.nerve->faces(), ws_.field, j, name);
      GlobalComplex c(std::move(p.space), std::move(p.d));
      auto rep = validate_global(c);
      if (!rep.valid) fail(name, rep.message);
      ws_.presheaves.push_back({name, std::move(c)});
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception& e) {
      fail(name, e.what());
    }
  }

  const GlobalComplex& presheaf_ref(const std::string& owner, const Json& ref) {
    if (!ref.is_string()) fail(owner, "reference must be a name");
    const auto* p = ws_.find_presheaf(ref.get<std::string>());
    if (!p) fail(owner, "no presheaf named '" + ref.get<std::string>() + "' defined before use");
    return p->complex;
  }

  const NamedTwisted& twisted_ref(const std::string& owner, const Json& ref) {
    if (!ref.is_string()) fail(owner, "reference must be a name");
    const auto* t = ws_.find_twisted(ref.get<std::string>());
    if (!t) fail(owner, "no twisted complex named '" + ref.get<std::string>() + "' defined before use");
    return *t;
  }

  void twisted(const std::string& name, const Json& j) {
    NamedTwisted out{name, {}, nullptr, std::nullopt};
    try {
      if (j.is_object() && j.contains("twist")) {
        check_keys(j, {"twist"}, name);
        out.twisted = twist(presheaf_ref(name, j.at("twist")));
        out.spec = j;
      } else if (j.is_object() && j.contains("resolve")) {
        check_keys(j, {"resolve", "minimal"}, name);
        ResolutionOptions opts;
        if (j.contains("minimal")) {
          if (!j.at("minimal").is_boolean()) fail(name, "'minimal' must be a boolean");
          opts.minimal_models = j.at("minimal").get<bool>();
        }
        out.resolution = twisted_resolution(presheaf_ref(name, j.at("resolve")), opts);
        out.twisted = out.resolution->resolved;
        out.spec = Json::object({{"resolve", j.at("resolve")}, {"minimal", opts.minimal_models}});
      } else if (j.is_object() && j.contains("shift")) {
        check_keys(j, {"shift"}, name);
        out.twisted = shift(twisted_ref(name, j.at("shift")).twisted);
        out.spec = j;
      } else if (j.is_object() && j.contains("zero")) {
        check_keys(j, {"zero"}, name);
        out.twisted = zero_twisted(ws_.nerve, ws_.field);
        out.spec = Json::object({{"zero", true}});
      } else {
        out.twisted = explicit_twisted(name, j);
      }
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception& e) {
      fail(name, e.what());
    }
    ws_.twisted.push_back(std::move(out));
  }

  TwistedComplex explicit_twisted(const std::string& name, const Json& j) {
    check_keys(j, {"generalized", "locals", "datum"}, name);
    const auto& nerve = *ws_.nerve;
    const Json& locals = require(j, "locals", name);
    if (!locals.is_object()) fail(name, "'locals' must be an object open -> presheaf");
    std::vector<Presheaf> ps;
    std::vector<std::map<Face, GradedMap>> diffs;
    for (int i = 0; i < nerve.size(); ++i) {
      const std::string& label = nerve.labels()[i];
      std::vector<Face> dom = nerve.star_of(i);
      if (!locals.contains(label)) {
        ps.push_back(Presheaf::zero(ws_.nerve, dom, ws_.field));
        diffs.emplace_back();
        continue;
      }
      auto p = parse_presheaf(ws_.nerve, dom, ws_.field, locals.at(label), name + " local " + label);
      ps.push_back(std::move(p.space));
      diffs.push_back(std::move(p.d));
    }
    for (const auto& [k, v] : locals.items()) {
      (void)v;
      if (!nerve.index_of(k)) fail(name, "local for unknown open '" + k + "'");
    }
    FamilyPtr fam = make_family(ws_.nerve, ws_.field, std::move(ps));
    Morphism a(fam, fam, 1);
    for (int i = 0; i < nerve.size(); ++i)
      for (const auto& [x, d] : diffs[i]) a.add({i}, x, d);
    if (j.contains("datum")) parse_components(a, j.at("datum"), name + " datum");
    require_natural(a, name);
    bool gen = false;
    if (j.contains("generalized")) {
      if (!j.at("generalized").is_boolean()) fail(name, "'generalized' must be a boolean");
      gen = j.at("generalized").get<bool>();
    }
    return TwistedComplex(fam, std::move(a), gen);
  }

  void morphism(const std::string& name, const Json& j) {
    try {
      if (j.is_object() && j.contains("comparison")) {
        check_keys(j, {"comparison", "target"}, name);
        const NamedTwisted& r = twisted_ref(name, j.at("comparison"));
        if (!r.resolution) fail(name, "'" + r.name + "' is not a resolution");
        const NamedTwisted& tgt = twisted_ref(name, require(j, "target", name));
        if (!same_family(tgt.twisted.locals, r.resolution->target.locals) ||
            !(tgt.twisted.a == r.resolution->target.a))
          fail(name, "target '" + tgt.name + "' is not the twist of the resolved presheaf");
        ws_.morphisms.push_back({name, r.name, tgt.name, r.resolution->comparison, j});
        return;
      }
      if (j.is_object() && j.contains("identity")) {
        check_keys(j, {"identity"}, name);
        const NamedTwisted& t = twisted_ref(name, j.at("identity"));
        ws_.morphisms.push_back({name, t.name, t.name, Morphism::identity(t.twisted.locals), j});
        return;
      }
      check_keys(j, {"source", "target", "degree", "zero", "components"}, name);
      const NamedTwisted& s = twisted_ref(name, require(j, "source", name));
      const NamedTwisted& t = twisted_ref(name, require(j, "target", name));
      const Json& deg = require(j, "degree", name);
      if (!deg.is_number_integer()) fail(name, "'degree' must be an integer");
      Morphism m(s.twisted.locals, t.twisted.locals, deg.get<int>());
      Json spec = nullptr;
      if (j.contains("zero")) {
        if (j.contains("components")) fail(name, "'zero' and 'components' are exclusive");
        spec = Json::object({{"zero", true}, {"source", s.name}, {"target", t.name}, {"degree", m.degree()}});
      } else if (j.contains("components")) {
        parse_components(m, j.at("components"), name);
        require_natural(m, name);
      }
      ws_.morphisms.push_back({name, s.name, t.name, std::move(m), spec});
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception& e) {
      fail(name, e.what());
    }
  }

  const Json& doc_;
  Workspace ws_;
  std::set<std::string> names_;
};

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

Json presheaf_json(const Presheaf& p, const std::map<Face, GradedMap>* d) {
  const auto& nerve = *p.nerve();
  Json values = Json::object();
  for (Face x : p.domain())
    if (!p.value(x).is_zero()) values[face_key(nerve, x)] = dims_json(p.value(x));
  Json res = Json::object();
  for (Face x : p.domain())
    for (Face y : p.domain())
      if (face_contains(y, x) && face_size(y) == face_size(x) + 1) {
        GradedMap r = p.restriction(x, y);
        if (!r.is_zero()) res[face_key(nerve, x) + "->" + face_key(nerve, y)] = graded_map_json(r);
      }
  Json out = Json::object({{"values", values}, {"restrictions", res}});
  if (d) {
    Json dj = Json::object();
    for (Face x : p.domain()) {
      auto it = d->find(x);
      if (it != d->end() && !it->second.is_zero()) dj[face_key(nerve, x)] = graded_map_json(it->second);
    }
    out["differential"] = dj;
  }
  return out;
}

Json components_json(const Morphism& m) {
  Json out = Json::array();
  const auto& nerve = *m.nerve();
  for (const auto& [t, comp] : m.components()) {
    Json labels = Json::array();
    for (int i : t) labels.push_back(nerve.labels()[i]);
    std::vector<Face> faces;
    for (const auto& [x, g] : comp) faces.push_back(x);
    std::sort(faces.begin(), faces.end(), face_less);
    for (Face x : faces) {
      const GradedMap& g = comp.at(x);
      if (g.is_zero()) continue;
      out.push_back(Json::object({{"tuple", labels}, {"face", face_key(nerve, x)}, {"maps", graded_map_json(g)}}));
    }
  }
  return out;
}

}  // namespace

const NamedComplex* Workspace::find_presheaf(const std::string& name) const {
  for (const auto& p : presheaves)
    if (p.name == name) return &p;
  return nullptr;
}

const NamedTwisted* Workspace::find_twisted(const std::string& name) const {
  for (const auto& t : twisted)
    if (t.name == name) return &t;
  return nullptr;
}

const NamedMorphism* Workspace::find_morphism(const std::string& name) const {
  for (const auto& m : morphisms)
    if (m.name == name) return &m;
  return nullptr;
}

std::string face_key(const CoverNerve& nerve, Face f) {
  std::string s;
  for (int i : face_members(f)) {
    if (!s.empty()) s += ",";
    s += nerve.labels()[i];
  }
  return s;
}

Json matrix_json(const Matrix& m) {
  Json out = Json::array();
  for (const auto& row : m.to_strings()) out.push_back(row);
  return out;
}

Json graded_map_json(const GradedMap& m) {
  Json out = Json::object();
  for (const auto& [n, mat] : m.components())
    if (!mat.is_zero()) out[std::to_string(n)] = matrix_json(mat);
  return out;
}

Json dims_json(const GradedSpace& s) {
  Json out = Json::object();
  for (const auto& [n, d] : s.dims()) out[std::to_string(n)] = d;
  return out;
}

Workspace parse_workspace(const std::string& text, std::optional<Field> field_override) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte);
    std::string what = e.what();
    auto pos = what.find("syntax error");
    throw ParseError(line, col, pos == std::string::npos ? what : what.substr(pos));
  }
  if (!doc.is_object()) throw ParseError(1, 1, "top level must be an object");
  return Parser(doc, field_override).run();
}

Json serialize_workspace(const Workspace& ws) {
  const auto& nerve = *ws.nerve;
  Json out = Json::object();
  out["field"] = ws.field.name();
  out["opens"] = nerve.labels();
  Json faces = Json::array();
  for (Face f : nerve.faces()) {
    if (face_size(f) < 2) continue;
    Json labels = Json::array();
    for (int i : face_members(f)) labels.push_back(nerve.labels()[i]);
    faces.push_back(labels);
  }
  out["faces"] = faces;
  Json ps = Json::object();
  for (const auto& p : ws.presheaves) ps[p.name] = presheaf_json(p.complex.space, &p.complex.d);
  out["presheaves"] = ps;
  Json ts = Json::object();
  for (const auto& t : ws.twisted) {
    if (!t.spec.is_null()) {
      ts[t.name] = t.spec;
      continue;
    }
    Json locals = Json::object();
    for (int i = 0; i < t.twisted.size(); ++i)
      locals[nerve.labels()[i]] = presheaf_json((*t.twisted.locals)[i], nullptr);
    ts[t.name] = Json::object(
        {{"generalized", t.twisted.generalized}, {"locals", locals}, {"datum", components_json(t.twisted.a)}});
  }
  out["twisted"] = ts;
  Json ms = Json::object();
  for (const auto& m : ws.morphisms) {
    if (!m.spec.is_null()) {
      ms[m.name] = m.spec;
      continue;
    }
    ms[m.name] = Json::object({{"source", m.source},
                               {"target", m.target},
                               {"degree", m.morphism.degree()},
                               {"components", components_json(m.morphism)}});
  }
  out["morphisms"] = ms;
  return out;
}

bool workspace_equal(const Workspace& a, const Workspace& b) {
  if (!(a.field == b.field) || !(*a.nerve == *b.nerve)) return false;
  if (a.presheaves.size() != b.presheaves.size() || a.twisted.size() != b.twisted.size() ||
      a.morphisms.size() != b.morphisms.size())
    return false;
  for (std::size_t k = 0; k < a.presheaves.size(); ++k) {
    const auto& x = a.presheaves[k];
    const auto& y = b.presheaves[k];
    if (x.name != y.name || !(x.complex.space == y.complex.space)) return false;
    for (Face f : a.nerve->faces())
      if (!(x.complex.diff(f) == y.complex.diff(f))) return false;
  }
  for (std::size_t k = 0; k < a.twisted.size(); ++k) {
    const auto& x = a.twisted[k];
    const auto& y = b.twisted[k];
    if (x.name != y.name || x.twisted.generalized != y.twisted.generalized || !(x.twisted.a == y.twisted.a))
      return false;
  }
  for (std::size_t k = 0; k < a.morphisms.size(); ++k) {
    const auto& x = a.morphisms[k];
    const auto& y = b.morphisms[k];
    if (x.name != y.name || x.source != y.source || x.target != y.target || !(x.morphism == y.morphism))
      return false;
  }
  return true;
}

}  // namespace tcx::app
