#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csptk/algebra.hpp"

namespace csptk {

class Rng;

// Vertices are finite sequences of child symbols; the root is the empty
// sequence. v <= w in the tree order iff w is a prefix of v.
using Vertex = std::vector<int>;

std::string vertex_to_string(const Vertex& v);
Vertex vertex_from_string(const std::string& s);
bool is_prefix(const Vertex& prefix, const Vertex& v);

// Local structure at an internal vertex: the child symbols (sorted) and a
// conservative minority algebra indexed in that order.
struct LocalAlgebra {
    std::vector<int> child_syms;
    FiniteAlgebra alg;

    int index_of(int sym) const;
};

// A conservative minority branch tree.
struct CMTree {
    std::vector<Vertex> verts;             // sorted, prefix-closed, contains {}
    std::map<Vertex, LocalAlgebra> locals; // one entry per internal vertex

    static CMTree single_vertex();
    static CMTree validated(std::vector<Vertex> verts, std::map<Vertex, LocalAlgebra> locals);

    bool contains(const Vertex& v) const;
    bool is_leaf(const Vertex& v) const { return !locals.count(v); }
    std::vector<Vertex> leaves() const;
    std::vector<int> children_of(const Vertex& v) const;

    bool is_reduced() const;   // every internal vertex has >= 2 children
    bool is_simple() const;    // every local algebra is simple
    bool is_projection() const;

    bool operator==(const CMTree& o) const { return verts == o.verts && same_locals(o); }

private:
    bool same_locals(const CMTree& o) const;
};

Vertex join_vertex(const Vertex& a, const Vertex& b);

// the leaf operation m_T(a, b, c)
Vertex eval_leaf_op(const CMTree& t, const Vertex& a, const Vertex& b, const Vertex& c);

// operation table over the sorted leaf list, names from the leaf sequences
FiniteAlgebra leaf_algebra(const CMTree& t);

// a simple reduced tree whose leaf algebra is isomorphic to alg
CMTree represent(const FiniteAlgebra& alg);

// ~v as a partition of the leaves of t
Congruence block_congruence_of_vertex(const CMTree& t, const Vertex& v);

// tree spanned by a set of leaves and the root, locals restricted
CMTree subtree(const CMTree& t, const std::vector<Vertex>& leaf_set);

bool is_sapling(const CMTree& t);
std::vector<Vertex> trunk(const CMTree& t);

// attach s at leaf v of t
CMTree graft(const CMTree& t, const Vertex& v, const CMTree& s);

CMTree restrict_below(const CMTree& t, const Vertex& v);  // rerooted downset of v
CMTree prune_leq(const CMTree& t, const Vertex& v);       // drop v and everything below
CMTree prune_lt(const CMTree& t, const Vertex& v);        // drop everything strictly below v

// leaves of t -> leaves of prune_lt(t, v); collapses the downset of v onto v
std::map<Vertex, Vertex> quotient_map(const CMTree& t, const Vertex& v);

CMTree identify_only_child(const CMTree& t, const Vertex& v);
CMTree refine_by_congruence(const CMTree& t, const Vertex& v, const Congruence& lambda);

// collapse all single-child chains
CMTree reduce_tree(const CMTree& t);

// order- and local-algebra-preserving bijection, or nullopt
std::optional<std::map<Vertex, Vertex>> tree_isomorphic(const CMTree& t1, const CMTree& t2);

// random tree with the given number of leaves; simple_locals restricts local
// algebras to simple ones (and the result is then simple and reduced)
CMTree random_tree(int leaf_count, bool simple_locals, Rng& rng);

} // namespace csptk
