#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "opmin/opd_file.hpp"

using namespace opmin;

namespace {

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const OpdError& e) {
    return e.what();
  }
  return "";
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "opmin_opd_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("vectors and rationals") {
  SparseVec v = SparseVec::unit(2) * Rational(-3, 4) + SparseVec::unit(0) * Rational(5);
  Json j = emit_vector(v);
  CHECK(parse_vector(j, 3, "v") == v);
  CHECK_THROWS_AS(parse_vector(j, 2, "v"), OpdError);
  CHECK_THROWS_AS(parse_vector(Json::parse(R"([[0, "1/0"]])"), 3, "v"), OpdError);
  CHECK_THROWS_AS(parse_vector(Json::parse(R"([[0, 1.5]])"), 3, "v"), OpdError);
  CHECK(parse_vector(Json::parse(R"([[1, 2], [0, "-1/3"]])"), 3, "v") ==
        SparseVec::unit(1) * Rational(2) + SparseVec::unit(0) * Rational(-1, 3));
}

TEST_CASE("builtin tables round-trip exactly") {
  for (const auto& name : builtin_names()) {
    auto p = builtin(name, 4);
    Json j = emit_table(*p, 4);
    auto q = parse_table(j);
    CHECK(q->unitary() == p->unitary());
    CHECK(emit_table(*q, 4).dump() == j.dump());
    CHECK(compare_structure(*p, *q, 4).ok());
  }
  auto com = parse_operad(emit_table(*builtin("Com", 5), 5));
  CHECK(com->max_arity() == 5);
  CHECK(com->dim(5) == 1);
}

TEST_CASE("models round-trip exactly") {
  for (auto [name, flavor] : std::vector<std::pair<std::string, FreeFlavor>>{{"Ass", FreeFlavor::NonUnitary},
                                                                             {"Ass+", FreeFlavor::Unitary},
                                                                             {"Com", FreeFlavor::NonUnitary}}) {
    auto m = minimal_model(builtin(name, 4), 4, flavor);
    Json j = emit_model(m);
    ModelFile f = parse_model(j);
    REQUIRE(f.rho);
    CHECK(f.flavor == flavor);
    CHECK(emit_model(f.as_result()).dump() == j.dump());
    CHECK(f.as_result().table() == m.table());
    CHECK(compare_structure(*m.model, *f.model, 4).ok());
    CHECK(verify_quis(*f.rho, 4).ok());
    // the free part alone
    auto g = parse_free(emit_free(*m.model));
    CHECK(compare_structure(*m.model, *g, 4).ok());
  }
}

TEST_CASE("planted errors are located") {
  Json j = emit_table(*builtin("Ass", 3), 3);
  // s_1 on Ass(3) negated: still an involution, but the braid relation breaks
  Json bad = j;
  Json& s1 = bad["arities"][3]["action"][0]["cols"];
  for (auto& col : s1)
    for (auto& e : col) e[1] = "-1";
  const std::string msg = message_of([&] { parse_table(bad); });
  CHECK(msg.find("arity 3") != std::string::npos);

  Json bad2 = j;
  bad2["arities"][2]["blocks"][0]["dim"] = 3;
  CHECK(message_of([&] { parse_table(bad2); }).find("arities[2]") != std::string::npos);

  Json bad3 = j;
  bad3["compositions"][0]["slot"] = 7;
  CHECK(message_of([&] { parse_table(bad3); }).find("slot") != std::string::npos);

  Json bad4 = j;
  bad4.erase("arities");
  CHECK(message_of([&] { parse_table(bad4); }).find("arities") != std::string::npos);

  // one structure constant changed
  Json bad5 = j;
  for (auto& c : bad5["compositions"])
    if (c["m"] == 2 && c["k"] == 2) {
      c["result"] = Json::parse(R"([[0, 2]])");
      break;
    }
  CHECK_FALSE(message_of([&] { parse_table(bad5); }).empty());

  // a generator differential of the wrong degree in a free file
  auto m = minimal_model(builtin("Ass", 3), 3, FreeFlavor::NonUnitary);
  Json fj = emit_free(*m.model);
  fj["generators"][1]["degrees"][0] = 0;
  CHECK_FALSE(message_of([&] { parse_free(fj); }).empty());
}

TEST_CASE("files and syntax errors") {
  auto path = scratch("ass.json");
  write_json(path.string(), emit_table(*builtin("Ass+", 3), 3));
  auto p = parse_operad(read_json(path.string()));
  CHECK(p->unitary());
  auto broken = scratch("broken.json");
  std::ofstream(broken) << "{\"kind\": \"table\", ";
  const std::string msg = message_of([&] { read_json(broken.string()); });
  CHECK(msg.find(broken.string()) != std::string::npos);
  CHECK_THROWS_AS(read_json(scratch("missing.json").string()), OpdError);
}
