// opmin: minimal models of dg operads over Q from the command line.
#include <chrono>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "opmin/opd_file.hpp"

using namespace opmin;

namespace {

enum Exit { kPass = 0, kFail = 1, kInput = 2, kHypothesis = 3 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

OperadPtr load_operad(const std::string& input, const std::string& builtin_name, int N) {
  if (!input.empty() && !builtin_name.empty()) throw InputError("give either --input or --builtin");
  if (!builtin_name.empty()) {
    try {
      return builtin(builtin_name, N);
    } catch (const std::exception& e) {
      throw InputError(e.what());
    }
  }
  if (input.empty()) throw InputError("an operad is required (--input or --builtin)");
  return parse_operad(read_json(input));
}

Json dims_json(const std::map<int, std::map<int, std::size_t>>& t) {
  Json a = Json::array();
  for (const auto& [n, by] : t)
    for (const auto& [d, k] : by)
      if (k) a.push_back(Json{{"arity", n}, {"degree", d}, {"dim", k}});
  return a;
}

Json quis_json(const QuisReport& q) {
  Json j;
  j["ok"] = q.ok();
  j["arities"] = q.arities;
  j["relative"] = dims_json(q.relative);
  return j;
}

Json report_json(const MinimalModelResult& r, const std::optional<ValidationReport>& units) {
  Json j;
  j["report"] = "minimal-model";
  j["operad"] = r.target->name();
  j["flavor"] = r.flavor == FreeFlavor::Unitary ? "+1" : "01";
  j["max_arity"] = r.max_arity;
  j["lambda"] = r.lambda;
  j["target_cohomology"] = dims_json(r.target_cohomology);
  j["generators"] = dims_json(r.table().dims);
  Json st = Json::array();
  for (const auto& s : r.stages)
    st.push_back(Json{{"arity", s.arity},
                      {"cone_size", s.cone_size},
                      {"model_dim", s.model_dim},
                      {"rectified", s.rectified},
                      {"quis", quis_json(s.quis)}});
  j["stages"] = st;
  if (units) {
    Json v = Json::array();
    for (const auto& x : units->violations) v.push_back(x.to_string());
    j["strict_units"] = Json{{"ok", units->ok()}, {"checks", units->checks}, {"violations", v}};
  }
  return j;
}

int cmd_minimal_model(const std::string& input, const std::string& name, int N, bool unitary,
                      const std::string& out, const std::string& emit, const std::string& strategy) {
  OperadPtr p = load_operad(input, name, N);
  MinimalModelOptions opt;
  if (strategy == "last-pivot") opt.strategy = PivotStrategy::LastPivot;
  opt.on_stage = [](const StageReport& s) {
    std::cerr << "stage " << s.arity << ": cone " << s.cone_size << ", P_n(n) " << s.model_dim << ", "
              << std::fixed << std::setprecision(2) << s.seconds << "s\n";
  };
  auto t0 = std::chrono::steady_clock::now();
  MinimalModelResult r = minimal_model(p, N, unitary ? FreeFlavor::Unitary : FreeFlavor::NonUnitary, opt);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::optional<ValidationReport> units;
  if (unitary) units = check_strict_units(r);
  bool ok = units ? units->ok() : true;

  std::cout << "minimal model of " << p->name() << " (" << (unitary ? "unitary" : "non-unitary")
            << (r.lambda && !unitary ? ", with restrictions" : "") << "), arities <= " << N << "\n";
  std::cout << "generators:\n" << r.table().to_string();
  for (const auto& s : r.stages) {
    std::cout << "arity " << s.arity << ": cone size " << s.cone_size << ", dim P_n(n) " << s.model_dim
              << (s.rectified ? ", rectified" : "") << ", quis " << (s.quis.ok() ? "ok" : "FAILED") << "\n";
    ok = ok && s.quis.ok();
  }
  if (units) std::cout << "strict units: " << (units->ok() ? "ok" : units->summary()) << "\n";
  std::cout << "time " << std::fixed << std::setprecision(2) << secs << "s\n";

  if (!out.empty()) write_json(out, report_json(r, units));
  if (!emit.empty()) write_json(emit, emit_model(r));
  return ok ? kPass : kFail;
}

int cmd_verify(const std::string& model_path, const std::string& target_path, int up_to) {
  Json mj = read_json(model_path);
  ModelFile mf = parse_model(mj);
  std::shared_ptr<FreeMorphism> rho = mf.rho;
  if (!target_path.empty()) {
    OperadPtr t = parse_operad(read_json(target_path));
    if (!mj.contains("morphism")) throw InputError(model_path + ": no morphism to verify");
    std::vector<SparseVec> images;
    for (std::size_t g = 0; g < mf.model->generator_count(); ++g) {
      const int n = mf.model->generator_arity(g);
      const std::size_t dim = n <= t->max_arity() ? t->dim(n) : 0;
      try {
        images.push_back(parse_vector(mj["morphism"][g], dim, "morphism[" + std::to_string(g) + "]"));
      } catch (const OpdError& e) {
        std::cout << "the images do not fit " << t->name() << ": " << e.what() << "\n";
        std::cout << "first failing arity: " << n << "\n";
        return kFail;
      }
    }
    rho = std::make_shared<FreeMorphism>(mf.model, t, std::move(images));
    auto v = validate_free_morphism(*rho);
    if (!v.ok()) {
      std::cout << "not a morphism: " << v.summary() << "\n";
      for (const auto& x : v.violations) std::cout << "  " << x.to_string() << "\n";
      std::cout << "first failing arity: " << v.violations.front().arity << "\n";
      return kFail;
    }
  }
  if (!rho) throw InputError(model_path + ": no morphism to verify");
  QuisReport q;
  try {
    q = verify_quis(*rho, up_to);
  } catch (const OperadError& e) {
    throw InputError(e.what());
  }
  std::cout << "relative cohomology of " << rho->source_operad().name() << " -> " << rho->target_operad().name()
            << ":\n"
            << q.to_string();
  if (q.ok()) {
    std::cout << "quasi-isomorphism through arity " << up_to << "\n";
    return kPass;
  }
  std::cout << "first failing arity: " << *q.first_failure() << "\n";
  return kFail;
}

SparseVec parse_element(const std::string& text, std::size_t dim) {
  VecBuilder b;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto colon = item.find(':');
    if (colon == std::string::npos) throw InputError("element entries look like index:coefficient, got '" + item + "'");
    std::size_t idx;
    Rational c;
    try {
      idx = std::stoul(item.substr(0, colon));
      c = parse_rational(item.substr(colon + 1));
    } catch (const std::exception&) {
      throw InputError("bad element entry '" + item + "'");
    }
    if (idx >= dim) throw InputError("index " + std::to_string(idx) + " outside dimension " + std::to_string(dim));
    b.add(idx, c);
  }
  return b.build();
}

int cmd_kan_fill(const std::string& input, const std::string& name, int n, const std::string& family,
                 const std::string& element) {
  OperadPtr p = load_operad(input, name, std::max(n, 2));
  if (n < 1 || n > p->max_arity()) throw InputError("arity outside the window of " + p->name());
  if (!p->has_restrictions()) throw InputError(p->name() + " has no restrictions");
  if (!p->multiplication()) throw InputError(p->name() + " has no unitary multiplication m2");
  OperadHost h(p);
  KanFamily f;
  f.n = n;
  if (!element.empty() == !family.empty()) throw InputError("give exactly one of --family and --from-element");
  if (!element.empty()) {
    f = faces_of(h, n, parse_element(element, h.dim(n)));
  } else {
    Json j = read_json(family);
    const Json& m = j.is_object() && j.contains("members") ? j["members"] : j;
    if (!m.is_array() || m.size() != static_cast<std::size_t>(n))
      throw OpdError("members", "expected " + std::to_string(n) + " vectors");
    for (int i = 0; i < n; ++i)
      f.members.push_back(parse_vector(m[i], h.dim(n - 1), "members[" + std::to_string(i) + "]"));
  }
  SparseVec w;
  try {
    w = fill(h, f);
  } catch (const KanError& e) {
    std::cout << "not a Kan family: " << e.what() << "\n";
    if (e.i >= 0) std::cout << "first failing pair (i, j) = (" << e.i << ", " << e.j << ")\n";
    return kFail;
  }
  std::cout << "omega in " << p->name() << "(" << n << "): " << (w.empty() ? "0" : "") << "\n";
  for (const auto& [b, c] : w.entries()) std::cout << "  " << format_rational(c) << " * " << p->label(n, b) << "\n";
  bool ok = true;
  for (int i = 0; i < n; ++i) {
    bool eq = h.face(n, w, i) == f.members[i];
    ok = ok && eq;
    std::cout << "delta_" << i + 1 << " omega = omega_" << i + 1 << ": " << (eq ? "ok" : "FAILED") << "\n";
  }
  return ok ? kPass : kFail;
}

int cmd_free(const std::string& gens, int l, const std::string& flavor) {
  if (flavor != "01" && flavor != "+1") throw InputError("--flavor is 01 or +1");
  const bool unitary = flavor == "+1";
  std::vector<GeneratorBatch> batches;
  std::stringstream ss(gens);
  std::string item;
  int count = 0;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream is(item);
    std::string x;
    while (std::getline(is, x, ':')) parts.push_back(x);
    if (parts.size() < 2 || parts.size() > 3) throw InputError("generator spec is arity:degree[:triv|sgn|reg], got '" + item + "'");
    int arity, degree;
    try {
      arity = std::stoi(parts[0]);
      degree = std::stoi(parts[1]);
    } catch (const std::exception&) {
      throw InputError("bad generator spec '" + item + "'");
    }
    if (arity < 2) throw InputError("generators of arity " + std::to_string(arity) + " are not allowed");
    const std::string rep = parts.size() == 3 ? parts[2] : "reg";
    if (rep != "triv" && rep != "sgn" && rep != "reg") throw InputError("unknown representation '" + rep + "'");
    GeneratorBatch b = batch_from_rep(arity, degree, rep, "m" + std::to_string(++count));
    if (unitary) b.delta.assign(b.size(), std::vector<TreeSum>(arity));
    batches.push_back(std::move(b));
  }
  if (l < 0) throw InputError("arity must be non-negative");
  FreeOperad p("Gamma", batches, std::max(l, 1), unitary ? FreeFlavor::Unitary : FreeFlavor::NonUnitary,
               unitary ? std::optional<bool>(true) : std::nullopt);
  std::map<int, std::size_t> by;
  std::vector<Tree> basis = free_basis(p, l);
  std::cout << "basis of arity " << l << " (" << basis.size() << " elements):\n";
  for (std::size_t b = 0; b < basis.size(); ++b) {
    std::string s = basis[b].is_unit() ? "id" : serialize(basis[b]);
    if (l == 0) s = "1";
    int deg = l == 0 ? 0 : p.degree(l, b);
    ++by[deg];
    std::cout << "  " << s << "  (degree " << deg << ")\n";
  }
  std::cout << "dimensions:";
  for (const auto& [d, k] : by) std::cout << " deg " << d << ": " << k << ";";
  std::cout << (by.empty() ? " 0" : "") << "\n";
  return kPass;
}

int cmd_compare(const std::string& a, const std::string& b) {
  MinimalModelResult ra = parse_model(read_json(a)).as_result();
  MinimalModelResult rb = parse_model(read_json(b)).as_result();
  CompareReport r;
  if (ra.flavor != rb.flavor) {
    if (ra.flavor == FreeFlavor::Unitary) std::swap(ra, rb);
    if (!ra.target || !rb.target || !ra.rho || !rb.rho) throw InputError("unitary comparison needs targets and morphisms");
    r = unitary_compatibility_check(ra, rb);
  } else {
    r = compare_models(ra, rb);
  }
  std::cout << r.to_string();
  return r.ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"opmin: Sullivan minimal models of dg operads over Q"};
  app.require_subcommand(1);

  std::string input, name, out, emit, strategy = "first-pivot";
  int N = 4;
  bool unitary = false;
  auto* mm = app.add_subcommand("minimal-model", "compute the minimal model through an arity");
  mm->add_option("--input", input, "operad file (.opd)");
  mm->add_option("--builtin", name, "Ass, Ass+, Com, Com+, I, I+");
  mm->add_option("--max-arity", N)->check(CLI::Range(1, 12));
  mm->add_flag("--unitary", unitary, "strict-unit model");
  mm->add_option("--out", out, "machine-readable report");
  mm->add_option("--emit-model", emit, "write the model in the operad file format");
  mm->add_option("--section-strategy", strategy)->check(CLI::IsMember({"first-pivot", "last-pivot"}));

  std::string model_path, target_path;
  int up_to = 4;
  auto* ver = app.add_subcommand("verify", "check that the model map is a quasi-isomorphism");
  ver->add_option("--model", model_path)->required();
  ver->add_option("--target", target_path);
  ver->add_option("--up-to", up_to)->required();

  std::string kin, kname, family, element;
  int karity = 2;
  auto* kan = app.add_subcommand("kan-fill", "fill a Kan family in an operad with unitary multiplication");
  kan->add_option("--input", kin);
  kan->add_option("--builtin", kname);
  kan->add_option("--arity", karity)->required();
  kan->add_option("--family", family, "JSON list of n vectors in P(n-1)");
  kan->add_option("--from-element", element, "use the faces of idx:coef,...");

  std::string gens, flavor = "01";
  int l = 2;
  auto* fr = app.add_subcommand("free", "print a basis of a free operad");
  fr->add_option("--gens", gens, "arity:degree[:triv|sgn|reg],...")->required();
  fr->add_option("--arity", l)->required();
  fr->add_option("--flavor", flavor);

  std::string ma, mb;
  auto* cmp = app.add_subcommand("compare", "compare two model files");
  cmp->add_option("--model-a", ma)->required();
  cmp->add_option("--model-b", mb)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kPass : kInput;
  }

  try {
    if (*mm) return cmd_minimal_model(input, name, N, unitary, out, emit, strategy);
    if (*ver) return cmd_verify(model_path, target_path, up_to);
    if (*kan) return cmd_kan_fill(kin, kname, karity, family, element);
    if (*fr) return cmd_free(gens, l, flavor);
    if (*cmp) return cmd_compare(ma, mb);
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis violated: " << e.what() << "\n";
    return kHypothesis;
  } catch (const OpdError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const OperadError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kInput;
}
