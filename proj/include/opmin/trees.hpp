#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace opmin {

// Child codes: a value >= 0 is a vertex index, a negative value c is the leaf with label -c-1.
inline int leaf_code(int label) { return -label - 1; }
inline bool is_leaf(int code) { return code < 0; }
inline int leaf_label(int code) { return -code - 1; }

struct TreeVertex {
  int decoration = -1;  // -1 for bare shapes
  std::vector<int> children;
};

// Rooted tree with labelled leaves 0..leaves-1. Empty vertex list: the unit tree with one leaf.
// Canonical trees list vertices in preorder and order children by their smallest leaf.
struct Tree {
  int leaves = 1;
  std::vector<TreeVertex> vertices;

  bool is_unit() const { return vertices.empty(); }
  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int arity_of(int v) const { return static_cast<int>(vertices[v].children.size()); }
  bool operator==(const Tree& o) const;
  bool operator<(const Tree& o) const;
};

class TreeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct VertexRecord {
  int original = 0;          // index of the vertex in the input tree
  std::vector<int> order;    // new child position k holds old child order[k]
};

struct CanonicalForm {
  Tree tree;
  std::vector<VertexRecord> records;  // one per vertex of tree, in its order
};

// Reorders children by smallest leaf and renumbers vertices in preorder from root.
CanonicalForm canonical_form(const Tree& t, int root = 0);
bool is_canonical(const Tree& t);

// Checks leaf labels form 0..leaves-1, every vertex is reached once and has >= 2 children.
void validate_tree(const Tree& t);

struct GraftResult {
  CanonicalForm form;
  Tree planar;  // outer vertices keep their indices, inner ones follow
  // source of each vertex of the planar graft before canonicalisation:
  // outer vertices first, then inner vertices
  int outer_vertices = 0;
};

// outer o_i inner: the leaves of inner occupy positions i..i+k-1. i is 0-based.
GraftResult graft(const Tree& outer, int slot, const Tree& inner);

// "(1,(2,3))" style, 1-based leaves; decorated vertices print as "#d(...)".
std::string serialize(const Tree& t);
Tree parse_tree(const std::string& text);

std::vector<int> vertex_arities(const Tree& t);

// All canonical reduced shapes with l leaves whose vertex arities lie in arities,
// ordered by vertex count and then by serialization. Throws for l < 2.
std::vector<Tree> enumerate_shapes(int l, const std::set<int>& arities);

// Leaves of t in planar left-to-right order.
std::vector<int> planar_leaves(const Tree& t);

}  // namespace opmin
