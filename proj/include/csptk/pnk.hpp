#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "csptk/cmtree.hpp"

namespace csptk {

// Relation symbol over the outer elements O_n = {1, .., n-1}.
struct OSym {
    enum class Kind { Set, Perm, Eq3 };
    Kind kind = Kind::Set;
    std::vector<int> elems;  // Set: sorted subset of 1..n-1
    std::vector<int> perm;   // Perm: images of 1..n-1, perm[i-1] = sigma(i)

    static OSym set(std::vector<int> elems);
    static OSym permutation(std::vector<int> images);
    static OSym identity(int n);
    static OSym eq3();

    int arity() const { return kind == Kind::Set ? 1 : kind == Kind::Perm ? 2 : 3; }
    std::string key() const;
    bool operator==(const OSym& o) const {
        return kind == o.kind && elems == o.elems && perm == o.perm;
    }
};

// A recursive signature symbol. Base symbols live at level 0, a Pair wraps a
// symbol of the previous level with an outer O-symbol of matching arity.
// Full appears at every level >= 1, Transfer(r) at level r, Swap01 and Lin
// only at level 1.
class Symbol {
public:
    enum class Kind { REmpty, REps, Eq2, Eq3, Pair, Full, Transfer, Swap01, Lin };

    static Symbol r_empty() { return Symbol(Kind::REmpty); }
    static Symbol r_eps() { return Symbol(Kind::REps); }
    static Symbol eq2() { return Symbol(Kind::Eq2); }
    static Symbol eq3() { return Symbol(Kind::Eq3); }
    static Symbol full() { return Symbol(Kind::Full); }
    static Symbol transfer(int r);
    static Symbol swap01() { return Symbol(Kind::Swap01); }
    static Symbol lin() { return Symbol(Kind::Lin); }
    static Symbol pair(Symbol inner, OSym outer);

    // nested equality symbol of tau_{n,k}
    static Symbol nested_eq2(int n, int k);
    // unary symbol naming P^{n,k}_{k-1}
    static Symbol transfer_target_unary(int n, int k);
    // unary tau_{n,k} symbol naming an arbitrary subset of the domain;
    // level_sets[j] is the set of outer values kept at level j, deep is
    // whether the deepest leaf 0^k is kept
    static Symbol unary_for_subset(int n, int k, const std::vector<std::vector<int>>& level_sets,
                                   bool deep);
    // S^r_l
    static Symbol sub_s(int n, int r, int l);

    static Symbol parse(const std::string& key);

    Kind kind() const { return kind_; }
    const Symbol& inner() const { return *inner_; }
    const OSym& outer() const { return outer_; }
    int transfer_r() const { return transfer_r_; }

    int arity() const;
    // true iff the symbol belongs to tau_{n,k}
    bool in_tau(int n, int k) const;
    const std::string& key() const { return key_; }

    bool operator==(const Symbol& o) const { return key_ == o.key_; }
    bool operator<(const Symbol& o) const { return key_ < o.key_; }

private:
    explicit Symbol(Kind k) : kind_(k) { rebuild_key(); }
    void rebuild_key();

    Kind kind_;
    std::shared_ptr<const Symbol> inner_;
    OSym outer_;
    int transfer_r_ = 0;
    std::string key_;
};

struct Sapling {
    CMTree tree;
    std::vector<Vertex> trunk;
};

// The structure O_n: all unary subsets, all permutation graphs, ternary
// equality. Relations use the values 1..n-1 directly as tuple entries.
struct OStructure {
    int n = 2;
    std::map<std::string, Relation> rels;
    std::vector<OSym> symbols;
};

struct PnkStructure {
    int n = 2, k = 0;
    CMTree tree;
    std::vector<Vertex> domain;  // sorted leaves
    FiniteAlgebra leaf_alg;
    std::vector<Symbol> symbols;             // all of tau_{n,k}
    std::map<std::string, Relation> rels;    // symbol key -> interpretation
    std::map<std::string, Symbol> symtab;

    int index_of(const Vertex& v) const;
    int level_of(int idx) const { return levels_[idx]; }      // (0^j, c) -> j; 0^k -> k
    int outer_value(int idx) const { return outer_val_[idx]; } // level-0 leaves: c, else -1
    int deep_index() const { return deep_idx_; }               // index of 0^k
    int index_of_outer(int c) const;                           // leaf (c)

    const Relation& rel(const Symbol& s) const;
    bool has_symbol(const std::string& key) const { return symtab.count(key) > 0; }

    std::vector<int> levels_;
    std::vector<int> outer_val_;
    int deep_idx_ = 0;
};

CMTree build_pnk_tree(int n, int k);

// heights of the trunk vertices of P_{n,k}: 0..k-1 (0 is the root)
std::vector<int> pnk_trunk_heights(int k);

// Full sapling of P_{n,k} with branching exactly at the heights in X and the
// chain below the minimal branching vertex ending at leaf w. X empty gives
// the chain from the root to w.
Sapling full_sapling(int n, int k, const std::vector<int>& X, const Vertex& w);

// embedding P^{n,|X|} -> P^{n,k} with image the leaves of the full sapling
std::map<Vertex, Vertex> psi_embedding(int n, int k, const std::vector<int>& X, const Vertex& w);

// trunk-minus-one-height shorthands
std::vector<int> trunk_minus(int k, int i);
std::map<Vertex, Vertex> psi_i(int n, int k, int i);

// graph of the isomorphism P^{n,k}_{(X1,w1)} -> P^{n,k}_{(X2,w2)}, as a
// relation over the domain of P^{n,k}
Relation transfer_relation(int n, int k, const std::vector<int>& X1, const Vertex& w1,
                           const std::vector<int>& X2, const Vertex& w2);
Relation canonical_transfer(int n, int k);

OStructure build_O(int n);
PnkStructure build_structure(int n, int k);
const PnkStructure& pnk_structure(int n, int k);  // cached, thread-safe

// (S, Y) decomposition of a uniform relation: S over the domain of
// P^{n,k-1}, Y over O_n values. nullopt iff r is not uniform.
std::optional<std::pair<Relation, Relation>> uniform_split(const PnkStructure& st,
                                                           const Relation& r);
// psi_0(S) united with Y, as a relation over the domain of st
Relation uniform_compose(const PnkStructure& st, const Relation& s, const Relation& y);

Relation materialize_subS(int n, int r, int l);

// index map of psi^{n,k}_0: domain of P^{n,k-1} -> domain of P^{n,k}
std::vector<int> psi0_index_map(int n, int k);

} // namespace csptk
