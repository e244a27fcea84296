#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "opmin/free_operad.hpp"
#include "opmin/sullivan.hpp"

namespace opmin {

// Parse or validation error; where names the offending field ("arities[3].action[1]").
class OpdError : public std::runtime_error {
 public:
  OpdError(const std::string& where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what), where(where) {}
  std::string where;
};

using Json = nlohmann::ordered_json;

Json emit_vector(const SparseVec& v);
SparseVec parse_vector(const Json& j, std::size_t dim, const std::string& where);

// kind "table": explicit structure constants through max_arity
Json emit_table(const Operad& p, int max_arity);
// kind "free": generators with d, restrictions and optionally m2
Json emit_free(const FreeOperad& p);
// free kind plus the target table and the generator images of rho
Json emit_model(const MinimalModelResult& m);

// Builds the operad and runs the module and operad-axiom validators; throws OpdError.
OperadPtr parse_operad(const Json& j, bool validate_axioms = true);
std::shared_ptr<TableOperad> parse_table(const Json& j, bool validate_axioms = true);
std::shared_ptr<FreeOperad> parse_free(const Json& j);

// A model file: the free operad, and when present its target and rho.
struct ModelFile {
  std::shared_ptr<FreeOperad> model;
  OperadPtr target;
  std::shared_ptr<FreeMorphism> rho;
  FreeFlavor flavor = FreeFlavor::NonUnitary;
  MinimalModelResult as_result() const;
};
ModelFile parse_model(const Json& j);

Json read_json(const std::string& path);
void write_json(const std::string& path, const Json& j);

}  // namespace opmin
