#include "opmin/opd_file.hpp"

#include <fstream>

namespace opmin {

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw OpdError(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw OpdError(where, std::string("missing field '") + key + "'");
  return *it;
}

int get_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw OpdError(where, "expected an integer");
  return j.get<int>();
}

Rational get_rational(const Json& j, const std::string& where) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw OpdError(where, e.what());
  }
  throw OpdError(where, "expected a rational as an integer or a \"p/q\" string");
}

Json emit_map(const SparseMap& m) {
  Json cols = Json::array();
  for (const auto& c : m.cols) cols.push_back(emit_vector(c));
  return Json{{"rows", m.rows}, {"cols", cols}};
}

SparseMap parse_map(const Json& j, std::size_t rows, std::size_t cols, const std::string& where) {
  if (get_int(field(j, "rows", where), where + ".rows") != static_cast<int>(rows))
    throw OpdError(where, "expected " + std::to_string(rows) + " rows");
  const Json& c = field(j, "cols", where);
  if (!c.is_array() || c.size() != cols) throw OpdError(where + ".cols", "expected " + std::to_string(cols) + " columns");
  SparseMap m{rows, {}};
  for (std::size_t k = 0; k < cols; ++k) m.cols.push_back(parse_vector(c[k], rows, where + ".cols[" + std::to_string(k) + "]"));
  return m;
}

Json emit_treesum(const TreeSum& s) {
  Json a = Json::array();
  for (const auto& [c, t] : s.terms) a.push_back(Json::array({format_rational(c), serialize(t)}));
  return a;
}

TreeSum parse_treesum(const Json& j, int leaves, const std::string& where) {
  if (!j.is_array()) throw OpdError(where, "expected a list of [coefficient, tree] pairs");
  TreeSum s;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string w = where + "[" + std::to_string(k) + "]";
    if (!j[k].is_array() || j[k].size() != 2 || !j[k][1].is_string()) throw OpdError(w, "expected [coefficient, tree]");
    Tree t;
    try {
      t = parse_tree(j[k][1].get<std::string>());
    } catch (const TreeError& e) {
      throw OpdError(w, e.what());
    }
    if (t.leaves != leaves) throw OpdError(w, "tree has " + std::to_string(t.leaves) + " leaves, expected " + std::to_string(leaves));
    s.terms.emplace_back(get_rational(j[k][0], w), t);
  }
  return s;
}

void check(const ValidationReport& r, const std::string& where) {
  if (r.ok()) return;
  std::string msg = "validation failed: " + r.summary();
  for (std::size_t k = 0; k < r.violations.size() && k < 5; ++k) msg += "\n  " + r.violations[k].to_string();
  throw OpdError(where, msg);
}

}  // namespace

Json emit_vector(const SparseVec& v) {
  Json a = Json::array();
  for (const auto& [i, c] : v.entries()) a.push_back(Json::array({i, format_rational(c)}));
  return a;
}

SparseVec parse_vector(const Json& j, std::size_t dim, const std::string& where) {
  if (!j.is_array()) throw OpdError(where, "expected a list of [index, coefficient] pairs");
  std::vector<SparseVec::Entry> e;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string w = where + "[" + std::to_string(k) + "]";
    if (!j[k].is_array() || j[k].size() != 2) throw OpdError(w, "expected [index, coefficient]");
    int i = get_int(j[k][0], w);
    if (i < 0 || static_cast<std::size_t>(i) >= dim)
      throw OpdError(w, "index " + std::to_string(i) + " outside a space of dimension " + std::to_string(dim));
    e.emplace_back(i, get_rational(j[k][1], w));
  }
  return SparseVec::from_entries(std::move(e));
}

Json emit_table(const Operad& p, int max_arity) {
  auto t = to_table(p, max_arity);
  const auto& car = t->carrier();
  Json j;
  j["format"] = "opd";
  j["kind"] = "table";
  j["name"] = t->name();
  j["max_arity"] = t->max_arity();
  j["unitary"] = t->unitary();
  j["lambda"] = t->has_restrictions();
  Json ar = Json::array();
  for (int n = 0; n <= t->max_arity(); ++n) {
    const auto& d = car.data(n);
    Json a;
    a["arity"] = n;
    Json blocks = Json::array();
    for (std::size_t b = 0; b < d.degrees.size();) {
      std::size_t e = b;
      while (e < d.degrees.size() && d.degrees[e] == d.degrees[b]) ++e;
      Json labels = Json::array();
      for (std::size_t k = b; k < e; ++k) labels.push_back(car.label(n, k));
      blocks.push_back(Json{{"degree", d.degrees[b]}, {"dim", e - b}, {"labels", labels}});
      b = e;
    }
    a["blocks"] = blocks;
    Json act = Json::array();
    for (const auto& s : d.adjacent) act.push_back(emit_map(s));
    a["action"] = act;
    a["differential"] = emit_map(d.differential);
    if (t->has_restrictions() && n >= 1) {
      Json r = Json::array();
      for (const auto& m : d.restrictions) r.push_back(emit_map(m));
      a["restrictions"] = r;
    }
    ar.push_back(a);
  }
  j["arities"] = ar;
  j["unit"] = emit_vector(t->unit());
  if (auto m = t->multiplication()) j["multiplication"] = emit_vector(*m);
  Json comps = Json::array();
  for (const auto& [mk, v] : t->compositions()) {
    auto [m, k] = mk;
    const std::size_t dm = t->dim(m), dk = t->dim(k);
    for (int i = 0; i < m; ++i)
      for (std::size_t a = 0; a < dm; ++a)
        for (std::size_t b = 0; b < dk; ++b) {
          const SparseVec& r = v[(static_cast<std::size_t>(i) * dm + a) * dk + b];
          if (r.empty()) continue;
          comps.push_back(Json{{"m", m}, {"k", k}, {"slot", i + 1}, {"left", a}, {"right", b}, {"result", emit_vector(r)}});
        }
  }
  j["compositions"] = comps;
  return j;
}

std::shared_ptr<TableOperad> parse_table(const Json& j, bool validate_axioms) {
  const std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "P";
  const int N = get_int(field(j, "max_arity", ""), "max_arity");
  if (N < 1) throw OpdError("max_arity", "the window must contain arity 1");
  const bool unitary = j.value("unitary", false);
  const bool lambda = j.value("lambda", unitary);
  const Json& ar = field(j, "arities", "");
  if (!ar.is_array() || ar.size() != static_cast<std::size_t>(N + 1))
    throw OpdError("arities", "expected " + std::to_string(N + 1) + " entries (arity 0.." + std::to_string(N) + ")");
  std::vector<ArityData> data(N + 1);
  for (int n = 0; n <= N; ++n) {
    const std::string w = "arities[" + std::to_string(n) + "]";
    const Json& a = ar[n];
    if (get_int(field(a, "arity", w), w + ".arity") != n) throw OpdError(w + ".arity", "arities must be listed in order");
    const Json& blocks = field(a, "blocks", w);
    if (!blocks.is_array()) throw OpdError(w + ".blocks", "expected a list");
    auto& d = data[n];
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const std::string wb = w + ".blocks[" + std::to_string(b) + "]";
      const int deg = get_int(field(blocks[b], "degree", wb), wb + ".degree");
      const int k = get_int(field(blocks[b], "dim", wb), wb + ".dim");
      if (k < 0) throw OpdError(wb + ".dim", "negative dimension");
      const Json* labels = blocks[b].contains("labels") ? &blocks[b]["labels"] : nullptr;
      if (labels && (!labels->is_array() || labels->size() != static_cast<std::size_t>(k)))
        throw OpdError(wb + ".labels", "expected " + std::to_string(k) + " labels");
      for (int x = 0; x < k; ++x) {
        d.degrees.push_back(deg);
        d.labels.push_back(labels ? (*labels)[x].get<std::string>() : std::to_string(d.labels.size()));
      }
    }
    const std::size_t k = d.degrees.size();
    const Json& act = field(a, "action", w);
    if (!act.is_array() || act.size() != static_cast<std::size_t>(n >= 2 ? n - 1 : 0))
      throw OpdError(w + ".action", "expected " + std::to_string(n >= 2 ? n - 1 : 0) + " transposition matrices");
    for (std::size_t s = 0; s < act.size(); ++s)
      d.adjacent.push_back(parse_map(act[s], k, k, w + ".action[" + std::to_string(s) + "]"));
    d.differential = parse_map(field(a, "differential", w), k, k, w + ".differential");
  }
  if (lambda)
    for (int n = 1; n <= N; ++n) {
      const std::string w = "arities[" + std::to_string(n) + "]";
      const Json& r = field(ar[n], "restrictions", w);
      if (!r.is_array() || r.size() != static_cast<std::size_t>(n))
        throw OpdError(w + ".restrictions", "expected " + std::to_string(n) + " restriction matrices");
      const std::size_t below = n == 1 ? 1 : data[n - 1].degrees.size();
      for (int i = 0; i < n; ++i)
        data[n].restrictions.push_back(
            parse_map(r[i], below, data[n].degrees.size(), w + ".restrictions[" + std::to_string(i) + "]"));
    }
  if (lambda && data[0].degrees.empty() && !unitary) {
    data[0].degrees = {0};
    data[0].labels = {"1"};
    data[0].differential = SparseMap{1, {SparseVec{}}};
  }
  DgSigmaModule carrier;
  try {
    carrier = DgSigmaModule(data, lambda);
  } catch (const std::invalid_argument& e) {
    throw OpdError("arities", e.what());
  }
  std::map<std::pair<int, int>, std::vector<SparseVec>> comps;
  for (int m = 1; m <= N; ++m)
    for (int k = 1; m + k - 1 <= N; ++k)
      comps[{m, k}] = std::vector<SparseVec>(static_cast<std::size_t>(m) * carrier.dim(m) * carrier.dim(k));
  if (j.contains("compositions")) {
    const Json& cs = j["compositions"];
    if (!cs.is_array()) throw OpdError("compositions", "expected a list");
    for (std::size_t x = 0; x < cs.size(); ++x) {
      const std::string w = "compositions[" + std::to_string(x) + "]";
      const int m = get_int(field(cs[x], "m", w), w + ".m"), k = get_int(field(cs[x], "k", w), w + ".k");
      const int i = get_int(field(cs[x], "slot", w), w + ".slot") - 1;
      const int a = get_int(field(cs[x], "left", w), w + ".left"), b = get_int(field(cs[x], "right", w), w + ".right");
      if (m < 1 || k < 1 || m + k - 1 > N) throw OpdError(w, "arities outside the window");
      if (i < 0 || i >= m) throw OpdError(w + ".slot", "slot out of range");
      if (a < 0 || static_cast<std::size_t>(a) >= carrier.dim(m)) throw OpdError(w + ".left", "basis index out of range");
      if (b < 0 || static_cast<std::size_t>(b) >= carrier.dim(k)) throw OpdError(w + ".right", "basis index out of range");
      comps[{m, k}][(static_cast<std::size_t>(i) * carrier.dim(m) + a) * carrier.dim(k) + b] =
          parse_vector(field(cs[x], "result", w), carrier.dim(m + k - 1), w + ".result");
    }
  }
  SparseVec unit = parse_vector(field(j, "unit", ""), carrier.dim(1), "unit");
  std::optional<SparseVec> m2;
  if (j.contains("multiplication") && !j["multiplication"].is_null()) {
    if (N < 2) throw OpdError("multiplication", "needs arity 2 in the window");
    m2 = parse_vector(j["multiplication"], carrier.dim(2), "multiplication");
  }
  std::shared_ptr<TableOperad> p;
  try {
    p = std::make_shared<TableOperad>(name, std::move(carrier), std::move(comps), unit, m2, unitary);
  } catch (const OperadError& e) {
    throw OpdError("", e.what());
  }
  check(validate(*p, N), "module structure");
  if (validate_axioms) check(check_operad_axioms(*p, N), "operad axioms");
  if (m2) check(check_unitary_multiplication(*p, *m2, false), "multiplication");
  return p;
}

Json emit_free(const FreeOperad& p) {
  Json j;
  j["format"] = "opd";
  j["kind"] = "free";
  j["name"] = p.name();
  j["max_arity"] = p.max_arity();
  j["flavor"] = p.unitary() ? "+1" : "01";
  j["lambda"] = p.has_restrictions();
  Json gens = Json::array();
  for (const auto& b : p.batches()) {
    Json g;
    g["arity"] = b.arity;
    g["degrees"] = b.degrees;
    g["labels"] = b.labels;
    Json act = Json::array();
    for (const auto& s : b.adjacent) act.push_back(emit_map(s));
    g["action"] = act;
    Json d = Json::array();
    for (const auto& s : b.d) d.push_back(emit_treesum(s));
    g["d"] = d;
    if (!b.delta.empty()) {
      Json dl = Json::array();
      for (const auto& per : b.delta) {
        Json x = Json::array();
        for (const auto& s : per) x.push_back(emit_treesum(s));
        dl.push_back(x);
      }
      g["delta"] = dl;
    }
    gens.push_back(g);
  }
  j["generators"] = gens;
  if (auto m = p.multiplication()) j["multiplication"] = emit_treesum(p.to_trees(2, *m));
  return j;
}

std::shared_ptr<FreeOperad> parse_free(const Json& j) {
  const std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "F";
  const int N = get_int(field(j, "max_arity", ""), "max_arity");
  const std::string fl = j.value("flavor", std::string("01"));
  if (fl != "01" && fl != "+1") throw OpdError("flavor", "expected \"01\" or \"+1\"");
  const FreeFlavor flavor = fl == "+1" ? FreeFlavor::Unitary : FreeFlavor::NonUnitary;
  const Json& gs = field(j, "generators", "");
  if (!gs.is_array()) throw OpdError("generators", "expected a list");
  std::vector<GeneratorBatch> batches;
  for (std::size_t x = 0; x < gs.size(); ++x) {
    const std::string w = "generators[" + std::to_string(x) + "]";
    GeneratorBatch b;
    b.arity = get_int(field(gs[x], "arity", w), w + ".arity");
    if (b.arity < 2) throw OpdError(w + ".arity", "generators need arity >= 2");
    const Json& deg = field(gs[x], "degrees", w);
    if (!deg.is_array()) throw OpdError(w + ".degrees", "expected a list");
    for (std::size_t k = 0; k < deg.size(); ++k) b.degrees.push_back(get_int(deg[k], w + ".degrees"));
    if (gs[x].contains("labels")) b.labels = gs[x]["labels"].get<std::vector<std::string>>();
    const std::size_t k = b.degrees.size();
    const Json& act = field(gs[x], "action", w);
    if (!act.is_array() || act.size() != static_cast<std::size_t>(b.arity - 1))
      throw OpdError(w + ".action", "expected " + std::to_string(b.arity - 1) + " transposition matrices");
    for (std::size_t s = 0; s < act.size(); ++s)
      b.adjacent.push_back(parse_map(act[s], k, k, w + ".action[" + std::to_string(s) + "]"));
    if (gs[x].contains("d")) {
      const Json& d = gs[x]["d"];
      if (!d.is_array() || d.size() != k) throw OpdError(w + ".d", "expected one entry per generator");
      for (std::size_t e = 0; e < k; ++e) b.d.push_back(parse_treesum(d[e], b.arity, w + ".d[" + std::to_string(e) + "]"));
    }
    if (gs[x].contains("delta")) {
      const Json& dl = gs[x]["delta"];
      if (!dl.is_array() || dl.size() != k) throw OpdError(w + ".delta", "expected one entry per generator");
      for (std::size_t e = 0; e < k; ++e) {
        const std::string we = w + ".delta[" + std::to_string(e) + "]";
        if (!dl[e].is_array() || dl[e].size() != static_cast<std::size_t>(b.arity))
          throw OpdError(we, "expected " + std::to_string(b.arity) + " restrictions");
        std::vector<TreeSum> per;
        for (int i = 0; i < b.arity; ++i)
          per.push_back(parse_treesum(dl[e][i], b.arity - 1, we + "[" + std::to_string(i) + "]"));
        b.delta.push_back(std::move(per));
      }
    }
    batches.push_back(std::move(b));
  }
  std::optional<bool> lambda;
  if (j.contains("lambda")) lambda = j["lambda"].get<bool>();
  std::shared_ptr<FreeOperad> p;
  try {
    p = std::make_shared<FreeOperad>(name, std::move(batches), N, flavor, lambda);
  } catch (const OperadError& e) {
    throw OpdError("generators", e.what());
  }
  // decorations must name existing generators of the right arity
  for (std::size_t b = 0; b < p->batches().size(); ++b) {
    const auto& B = p->batches()[b];
    auto check_sum = [&](const TreeSum& s, const std::string& w) {
      for (const auto& [c, t] : s.terms)
        for (const auto& v : t.vertices)
          if (v.decoration < 0 || static_cast<std::size_t>(v.decoration) >= p->generator_count() ||
              p->generator_arity(v.decoration) != static_cast<int>(v.children.size()))
            throw OpdError(w, "tree " + serialize(t) + " uses an unknown generator or the wrong arity");
    };
    for (std::size_t e = 0; e < B.size(); ++e) {
      const std::string w = "generators[" + std::to_string(b) + "]";
      check_sum(B.d[e], w + ".d[" + std::to_string(e) + "]");
      for (const auto& s : (B.delta.empty() ? std::vector<TreeSum>{} : B.delta[e])) check_sum(s, w + ".delta");
    }
  }
  for (std::size_t b = 0; b < p->batches().size(); ++b) {
    try {
      check(validate_batch(*p, static_cast<int>(b)), "generators[" + std::to_string(b) + "]");
    } catch (const OperadError& e) {
      throw OpdError("generators[" + std::to_string(b) + "]", e.what());
    }
  }
  if (j.contains("multiplication") && !j["multiplication"].is_null() && N >= 2) {
    SparseVec m;
    try {
      m = p->to_vector(2, parse_treesum(j["multiplication"], 2, "multiplication"));
    } catch (const OperadError& e) {
      throw OpdError("multiplication", e.what());
    }
    p->set_multiplication(m);
  }
  return p;
}

OperadPtr parse_operad(const Json& j, bool validate_axioms) {
  const std::string kind = j.is_object() ? j.value("kind", std::string("table")) : "";
  if (kind == "table") return parse_table(j, validate_axioms);
  if (kind == "free") return parse_free(j);
  throw OpdError("kind", "expected \"table\" or \"free\"");
}

Json emit_model(const MinimalModelResult& m) {
  Json j = emit_free(*m.model);
  j["target"] = emit_table(*m.target, m.max_arity);
  Json im = Json::array();
  for (const auto& v : m.rho->images()) im.push_back(emit_vector(v));
  j["morphism"] = im;
  return j;
}

ModelFile parse_model(const Json& j) {
  if (!j.is_object() || j.value("kind", std::string()) != "free") throw OpdError("kind", "a model file has kind \"free\"");
  ModelFile f;
  f.model = parse_free(j);
  f.flavor = f.model->unitary() ? FreeFlavor::Unitary : FreeFlavor::NonUnitary;
  if (j.contains("target")) {
    try {
      f.target = parse_table(j["target"]);
    } catch (const OpdError& e) {
      throw OpdError("target" + (e.where.empty() ? "" : "." + e.where), e.what());
    }
  }
  if (j.contains("morphism")) {
    if (!f.target) throw OpdError("morphism", "a morphism needs a target");
    const Json& im = j["morphism"];
    if (!im.is_array() || im.size() != f.model->generator_count())
      throw OpdError("morphism", "expected one image per generator");
    std::vector<SparseVec> images;
    for (std::size_t g = 0; g < im.size(); ++g) {
      const int n = f.model->generator_arity(g);
      images.push_back(parse_vector(im[g], n <= f.target->max_arity() ? f.target->dim(n) : 0,
                                    "morphism[" + std::to_string(g) + "]"));
    }
    f.rho = std::make_shared<FreeMorphism>(f.model, f.target, std::move(images));
    check(validate_free_morphism(*f.rho), "morphism");
  }
  return f;
}

MinimalModelResult ModelFile::as_result() const {
  MinimalModelResult r;
  r.target = target;
  r.flavor = flavor;
  r.max_arity = model->max_arity();
  r.lambda = model->has_restrictions();
  r.model = model;
  r.rho = rho;
  if (target) r.target_cohomology = cohomology_table(*target, r.max_arity);
  return r;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw OpdError(path, "cannot open file");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw OpdError(path, std::string("syntax error: ") + e.what());
  }
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw OpdError(path, "cannot write file");
  out << j.dump(1) << "\n";
}

}  // namespace opmin
