#include "csptk/cmtree.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "csptk/rng.hpp"

namespace csptk {

std::string vertex_to_string(const Vertex& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += '.';
        out += std::to_string(v[i]);
    }
    return out;
}

Vertex vertex_from_string(const std::string& s) {
    Vertex v;
    if (s.empty()) return v;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, '.')) v.push_back(std::stoi(part));
    return v;
}

bool is_prefix(const Vertex& prefix, const Vertex& v) {
    if (prefix.size() > v.size()) return false;
    return std::equal(prefix.begin(), prefix.end(), v.begin());
}

int LocalAlgebra::index_of(int sym) const {
    auto it = std::lower_bound(child_syms.begin(), child_syms.end(), sym);
    if (it == child_syms.end() || *it != sym)
        throw std::invalid_argument("LocalAlgebra: unknown child symbol");
    return static_cast<int>(it - child_syms.begin());
}

CMTree CMTree::single_vertex() {
    CMTree t;
    t.verts.push_back({});
    return t;
}

bool CMTree::contains(const Vertex& v) const {
    return std::binary_search(verts.begin(), verts.end(), v);
}

std::vector<int> CMTree::children_of(const Vertex& v) const {
    std::vector<int> out;
    Vertex w = v;
    for (const Vertex& u : verts) {
        if (u.size() != v.size() + 1) continue;
        if (is_prefix(v, u)) out.push_back(u.back());
    }
    (void)w;
    return out;
}

CMTree CMTree::validated(std::vector<Vertex> verts, std::map<Vertex, LocalAlgebra> locals) {
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    CMTree t;
    t.verts = std::move(verts);
    t.locals = std::move(locals);
    if (t.verts.empty() || !t.verts.front().empty())
        throw std::invalid_argument("CMTree: root (empty sequence) missing");
    for (const Vertex& v : t.verts) {
        if (v.empty()) continue;
        Vertex parent(v.begin(), v.end() - 1);
        if (!t.contains(parent)) throw std::invalid_argument("CMTree: not prefix-closed");
    }
    for (const Vertex& v : t.verts) {
        auto ch = t.children_of(v);
        auto it = t.locals.find(v);
        if (ch.empty()) {
            if (it != t.locals.end())
                throw std::invalid_argument("CMTree: local algebra on a leaf");
            continue;
        }
        if (it == t.locals.end())
            throw std::invalid_argument("CMTree: internal vertex without local algebra");
        const LocalAlgebra& la = it->second;
        if (la.child_syms != ch)
            throw std::invalid_argument("CMTree: local algebra domain != child symbols");
        if (la.alg.size != static_cast<int>(ch.size()))
            throw std::invalid_argument("CMTree: local algebra size mismatch");
        OpFlags f = check_flags(la.alg);
        if (!f.conservative || !f.minority)
            throw std::invalid_argument("CMTree: local algebra is not conservative minority");
    }
    return t;
}

std::vector<Vertex> CMTree::leaves() const {
    std::vector<Vertex> out;
    for (const Vertex& v : verts)
        if (is_leaf(v)) out.push_back(v);
    return out;
}

bool CMTree::is_reduced() const {
    for (const auto& [v, la] : locals)
        if (la.child_syms.size() < 2) return false;
    return true;
}

bool CMTree::is_simple() const {
    for (const auto& [v, la] : locals)
        if (!csptk::is_simple(la.alg)) return false;
    return true;
}

bool CMTree::is_projection() const {
    for (const auto& [v, la] : locals) {
        if (la.alg == FiniteAlgebra::projection_minority(la.alg.size)) continue;
        auto isos = algebra_isomorphisms(la.alg, FiniteAlgebra::projection_minority(la.alg.size));
        if (isos.empty()) return false;
    }
    return true;
}

bool CMTree::same_locals(const CMTree& o) const {
    if (locals.size() != o.locals.size()) return false;
    for (const auto& [v, la] : locals) {
        auto it = o.locals.find(v);
        if (it == o.locals.end()) return false;
        if (la.child_syms != it->second.child_syms || !(la.alg == it->second.alg)) return false;
    }
    return true;
}

Vertex join_vertex(const Vertex& a, const Vertex& b) {
    Vertex out;
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] != b[i]) break;
        out.push_back(a[i]);
    }
    return out;
}

Vertex eval_leaf_op(const CMTree& t, const Vertex& a, const Vertex& b, const Vertex& c) {
    if (a == b && b == c) return a;
    Vertex d = join_vertex(join_vertex(a, b), c);
    const LocalAlgebra& la = t.locals.at(d);
    const size_t pos = d.size();
    int pa = la.index_of(a[pos]);
    int pb = la.index_of(b[pos]);
    int pc = la.index_of(c[pos]);
    int res = la.alg.op(pa, pb, pc);
    int sym = la.child_syms[res];
    if (a[pos] == sym) return a;
    if (b[pos] == sym) return b;
    if (c[pos] == sym) return c;
    throw InternalInconsistency("eval_leaf_op: local operation is not conservative on children");
}

FiniteAlgebra leaf_algebra(const CMTree& t) {
    auto ls = t.leaves();
    const int n = static_cast<int>(ls.size());
    std::map<Vertex, int> idx;
    for (int i = 0; i < n; ++i) idx[ls[i]] = i;
    FiniteAlgebra a;
    a.size = n;
    a.names.reserve(n);
    for (const Vertex& l : ls) a.names.push_back(vertex_to_string(l));
    a.table.assign(static_cast<size_t>(n) * n * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                a.set_op(i, j, k, idx.at(eval_leaf_op(t, ls[i], ls[j], ls[k])));
    return a;
}

CMTree represent(const FiniteAlgebra& alg) {
    OpFlags f = check_flags(alg);
    if (!f.conservative || !f.minority)
        throw std::invalid_argument("represent: algebra must be conservative minority");
    std::vector<Vertex> verts;
    std::map<Vertex, LocalAlgebra> locals;

    // block = sorted element set; children are the classes of the unique
    // maximal proper congruence of the block subalgebra
    std::function<void(const Vertex&, const std::vector<int>&)> build =
        [&](const Vertex& at, const std::vector<int>& block) {
            verts.push_back(at);
            if (block.size() == 1) return;
            Subalgebra sub = subalgebra(alg, block);
            Congruence lambda = max_proper_congruence(sub.algebra);
            Quotient q = quotient(sub.algebra, lambda);
            LocalAlgebra la;
            la.alg = q.algebra;
            la.alg.names.clear();
            la.child_syms.resize(lambda.classes.size());
            for (size_t i = 0; i < lambda.classes.size(); ++i)
                la.child_syms[i] = static_cast<int>(i);
            for (size_t i = 0; i < lambda.classes.size(); ++i)
                la.alg.names.push_back(std::to_string(i));
            locals[at] = la;
            for (size_t i = 0; i < lambda.classes.size(); ++i) {
                std::vector<int> child_block;
                for (int e : lambda.classes[i]) child_block.push_back(sub.elements[e]);
                Vertex child = at;
                child.push_back(static_cast<int>(i));
                build(child, child_block);
            }
        };

    std::vector<int> all(alg.size);
    for (int i = 0; i < alg.size; ++i) all[i] = i;
    build({}, all);
    return CMTree::validated(std::move(verts), std::move(locals));
}

Congruence block_congruence_of_vertex(const CMTree& t, const Vertex& v) {
    if (!t.contains(v)) throw std::invalid_argument("block_congruence_of_vertex: no such vertex");
    auto ls = t.leaves();
    std::vector<int> cls(ls.size());
    int block_rep = -1;
    for (size_t i = 0; i < ls.size(); ++i) {
        if (is_prefix(v, ls[i])) {
            if (block_rep < 0) block_rep = static_cast<int>(i);
            cls[i] = block_rep;
        } else {
            cls[i] = static_cast<int>(i);
        }
    }
    return Congruence::from_class_map(cls);
}

CMTree subtree(const CMTree& t, const std::vector<Vertex>& leaf_set) {
    if (leaf_set.empty()) throw std::invalid_argument("subtree: empty leaf set");
    std::set<Vertex> keep;
    for (const Vertex& l : leaf_set) {
        if (!t.contains(l)) throw std::invalid_argument("subtree: vertex not in tree");
        Vertex p;
        keep.insert(p);
        for (int sym : l) {
            p.push_back(sym);
            keep.insert(p);
        }
    }
    std::vector<Vertex> verts(keep.begin(), keep.end());
    std::map<Vertex, LocalAlgebra> locals;
    for (const Vertex& v : verts) {
        std::vector<int> ch;
        for (const Vertex& u : verts)
            if (u.size() == v.size() + 1 && is_prefix(v, u)) ch.push_back(u.back());
        if (ch.empty()) continue;
        const LocalAlgebra& old = t.locals.at(v);
        std::vector<int> sub;
        sub.reserve(ch.size());
        for (int sym : ch) sub.push_back(old.index_of(sym));
        LocalAlgebra la;
        la.child_syms = ch;
        la.alg = subalgebra(old.alg, sub).algebra;
        locals[v] = std::move(la);
    }
    return CMTree::validated(std::move(verts), std::move(locals));
}

namespace {

// downset of w (w included) contains a vertex with >= 2 children
bool branchy(const CMTree& t, const Vertex& w) {
    for (const auto& [v, la] : t.locals)
        if (la.child_syms.size() >= 2 && is_prefix(w, v)) return true;
    return false;
}

} // namespace

bool is_sapling(const CMTree& t) {
    for (const Vertex& v : t.verts) {
        if (t.is_leaf(v)) continue;
        int branchy_children = 0;
        for (int sym : t.locals.at(v).child_syms) {
            Vertex w = v;
            w.push_back(sym);
            if (branchy(t, w)) ++branchy_children;
        }
        if (branchy_children > 1) return false;
    }
    return true;
}

std::vector<Vertex> trunk(const CMTree& t) {
    if (!is_sapling(t)) throw std::invalid_argument("trunk: tree is not a sapling");
    std::vector<Vertex> out;
    for (const auto& [v, la] : t.locals)
        if (la.child_syms.size() >= 2) out.push_back(v);
    std::sort(out.begin(), out.end(),
              [](const Vertex& a, const Vertex& b) { return a.size() < b.size(); });
    return out;
}

CMTree graft(const CMTree& t, const Vertex& v, const CMTree& s) {
    if (!t.contains(v) || !t.is_leaf(v))
        throw std::invalid_argument("graft: attachment point must be a leaf");
    std::vector<Vertex> verts;
    for (const Vertex& u : t.verts)
        if (u != v) verts.push_back(u);
    for (const Vertex& w : s.verts) {
        Vertex u = v;
        u.insert(u.end(), w.begin(), w.end());
        verts.push_back(u);
    }
    std::map<Vertex, LocalAlgebra> locals = t.locals;
    for (const auto& [w, la] : s.locals) {
        Vertex u = v;
        u.insert(u.end(), w.begin(), w.end());
        locals[u] = la;
    }
    return CMTree::validated(std::move(verts), std::move(locals));
}

CMTree restrict_below(const CMTree& t, const Vertex& v) {
    if (!t.contains(v)) throw std::invalid_argument("restrict_below: no such vertex");
    std::vector<Vertex> verts;
    std::map<Vertex, LocalAlgebra> locals;
    for (const Vertex& u : t.verts)
        if (is_prefix(v, u)) verts.emplace_back(u.begin() + v.size(), u.end());
    for (const auto& [u, la] : t.locals)
        if (is_prefix(v, u)) locals[Vertex(u.begin() + v.size(), u.end())] = la;
    return CMTree::validated(std::move(verts), std::move(locals));
}

CMTree prune_leq(const CMTree& t, const Vertex& v) {
    if (!t.contains(v)) throw std::invalid_argument("prune_leq: no such vertex");
    if (v.empty()) throw std::invalid_argument("prune_leq: cannot remove the root");
    std::vector<Vertex> verts;
    for (const Vertex& u : t.verts)
        if (!is_prefix(v, u)) verts.push_back(u);
    std::map<Vertex, LocalAlgebra> locals;
    Vertex parent(v.begin(), v.end() - 1);
    for (const auto& [u, la] : t.locals) {
        if (is_prefix(v, u)) continue;
        if (u == parent) {
            std::vector<int> remaining;
            for (int sym : la.child_syms)
                if (sym != v.back()) remaining.push_back(sym);
            if (remaining.empty()) continue;  // parent becomes a leaf
            std::vector<int> idx;
            for (int sym : remaining) idx.push_back(la.index_of(sym));
            LocalAlgebra nl;
            nl.child_syms = remaining;
            nl.alg = subalgebra(la.alg, idx).algebra;
            locals[u] = std::move(nl);
        } else {
            locals[u] = la;
        }
    }
    return CMTree::validated(std::move(verts), std::move(locals));
}

CMTree prune_lt(const CMTree& t, const Vertex& v) {
    if (!t.contains(v)) throw std::invalid_argument("prune_lt: no such vertex");
    std::vector<Vertex> verts;
    std::map<Vertex, LocalAlgebra> locals;
    for (const Vertex& u : t.verts)
        if (!is_prefix(v, u) || u == v) verts.push_back(u);
    for (const auto& [u, la] : t.locals)
        if (!is_prefix(v, u)) locals[u] = la;
    return CMTree::validated(std::move(verts), std::move(locals));
}

std::map<Vertex, Vertex> quotient_map(const CMTree& t, const Vertex& v) {
    std::map<Vertex, Vertex> out;
    for (const Vertex& l : t.leaves()) out[l] = is_prefix(v, l) ? v : l;
    return out;
}

CMTree identify_only_child(const CMTree& t, const Vertex& v) {
    auto it = t.locals.find(v);
    if (it == t.locals.end() || it->second.child_syms.size() != 1)
        throw std::invalid_argument("identify_only_child: vertex must have exactly one child");
    const size_t cut = v.size();  // position of the only child's symbol
    Vertex w = v;
    w.push_back(it->second.child_syms[0]);
    std::vector<Vertex> verts;
    std::map<Vertex, LocalAlgebra> locals;
    auto shorten = [&](const Vertex& u) {
        Vertex out(u.begin(), u.begin() + cut);
        out.insert(out.end(), u.begin() + cut + 1, u.end());
        return out;
    };
    for (const Vertex& u : t.verts) {
        if (u == v) continue;
        verts.push_back(is_prefix(w, u) ? shorten(u) : u);
    }
    for (const auto& [u, la] : t.locals) {
        if (u == v) continue;
        locals[is_prefix(w, u) ? shorten(u) : u] = la;
    }
    return CMTree::validated(std::move(verts), std::move(locals));
}

CMTree refine_by_congruence(const CMTree& t, const Vertex& v, const Congruence& lambda) {
    const LocalAlgebra& la = t.locals.at(v);
    if (lambda.size() != la.alg.size)
        throw std::invalid_argument("refine_by_congruence: congruence size mismatch");
    if (lambda.is_equality() || lambda.is_full())
        throw std::invalid_argument("refine_by_congruence: congruence must be proper nontrivial");
    Quotient q = quotient(la.alg, lambda);

    // class index for a child symbol
    auto class_of_sym = [&](int sym) { return lambda.class_of[la.index_of(sym)]; };

    std::vector<Vertex> verts;
    std::map<Vertex, LocalAlgebra> locals;
    auto relocate = [&](const Vertex& u) {
        // u strictly below v: insert the class symbol of the child after v
        Vertex out(u.begin(), u.begin() + v.size());
        out.push_back(class_of_sym(u[v.size()]));
        out.insert(out.end(), u.begin() + v.size(), u.end());
        return out;
    };
    for (const Vertex& u : t.verts) {
        if (is_prefix(v, u) && u != v) verts.push_back(relocate(u));
        else verts.push_back(u);
    }
    for (size_t ci = 0; ci < lambda.classes.size(); ++ci) {
        Vertex cu = v;
        cu.push_back(static_cast<int>(ci));
        verts.push_back(cu);
        LocalAlgebra cls_local;
        for (int e : lambda.classes[ci]) cls_local.child_syms.push_back(la.child_syms[e]);
        cls_local.alg = subalgebra(la.alg, lambda.classes[ci]).algebra;
        locals[cu] = std::move(cls_local);
    }
    for (const auto& [u, lcl] : t.locals) {
        if (u == v) continue;
        if (is_prefix(v, u)) locals[relocate(u)] = lcl;
        else locals[u] = lcl;
    }
    LocalAlgebra top;
    top.alg = q.algebra;
    top.alg.names.clear();
    for (size_t i = 0; i < lambda.classes.size(); ++i) {
        top.child_syms.push_back(static_cast<int>(i));
        top.alg.names.push_back(std::to_string(i));
    }
    locals[v] = std::move(top);
    return CMTree::validated(std::move(verts), std::move(locals));
}

CMTree reduce_tree(const CMTree& t) {
    CMTree cur = t;
    for (;;) {
        bool changed = false;
        for (const auto& [v, la] : cur.locals) {
            if (la.child_syms.size() == 1) {
                cur = identify_only_child(cur, v);
                changed = true;
                break;
            }
        }
        if (!changed) return cur;
    }
}

namespace {

struct IsoSearch {
    const CMTree& t1;
    const CMTree& t2;
    std::map<std::pair<Vertex, Vertex>, bool> memo;

    bool subtree_iso(const Vertex& v1, const Vertex& v2,
                     std::map<Vertex, Vertex>* out) {
        bool leaf1 = t1.is_leaf(v1), leaf2 = t2.is_leaf(v2);
        if (leaf1 != leaf2) return false;
        if (leaf1) {
            if (out) (*out)[v1] = v2;
            return true;
        }
        if (!out) {
            auto key = std::make_pair(v1, v2);
            auto it = memo.find(key);
            if (it != memo.end()) return it->second;
            bool r = match_children(v1, v2, nullptr);
            memo[key] = r;
            return r;
        }
        (*out)[v1] = v2;
        return match_children(v1, v2, out);
    }

    bool match_children(const Vertex& v1, const Vertex& v2, std::map<Vertex, Vertex>* out) {
        const LocalAlgebra& l1 = t1.locals.at(v1);
        const LocalAlgebra& l2 = t2.locals.at(v2);
        const int m = static_cast<int>(l1.child_syms.size());
        if (m != static_cast<int>(l2.child_syms.size())) return false;
        std::vector<int> map(m, -1);
        std::vector<bool> used(m, false);
        auto child = [](const Vertex& v, int sym) {
            Vertex w = v;
            w.push_back(sym);
            return w;
        };
        auto table_ok = [&](int pos) {
            for (int a = 0; a <= pos; ++a)
                for (int b = 0; b <= pos; ++b)
                    for (int c = 0; c <= pos; ++c) {
                        int v = l1.alg.op(a, b, c);
                        if (v > pos) continue;
                        if (l2.alg.op(map[a], map[b], map[c]) != map[v]) return false;
                    }
            return true;
        };
        std::function<bool(int)> rec = [&](int pos) -> bool {
            if (pos == m) {
                if (!out) return true;
                // fill in the full mapping for the chosen child bijection
                for (int i = 0; i < m; ++i)
                    if (!subtree_iso(child(v1, l1.child_syms[i]),
                                     child(v2, l2.child_syms[map[i]]), out))
                        return false;
                return true;
            }
            for (int j = 0; j < m; ++j) {
                if (used[j]) continue;
                map[pos] = j;
                used[j] = true;
                if (table_ok(pos) &&
                    subtree_iso(child(v1, l1.child_syms[pos]),
                                child(v2, l2.child_syms[j]), nullptr) &&
                    rec(pos + 1))
                    return true;
                used[j] = false;
                map[pos] = -1;
            }
            return false;
        };
        return rec(0);
    }
};

} // namespace

std::optional<std::map<Vertex, Vertex>> tree_isomorphic(const CMTree& t1, const CMTree& t2) {
    if (t1.verts.size() != t2.verts.size() || t1.leaves().size() != t2.leaves().size())
        return std::nullopt;
    IsoSearch search{t1, t2, {}};
    if (!search.subtree_iso({}, {}, nullptr)) return std::nullopt;
    std::map<Vertex, Vertex> out;
    if (!search.subtree_iso({}, {}, &out))
        throw InternalInconsistency("tree_isomorphic: witness reconstruction failed");
    return out;
}

namespace {

FiniteAlgebra random_local(int m, bool simple_only, Rng& rng) {
    for (int tries = 0; tries < 1000; ++tries) {
        FiniteAlgebra a = FiniteAlgebra::random_conservative_minority(m, rng);
        if (!simple_only || is_simple(a)) return a;
    }
    return FiniteAlgebra::projection_minority(m);
}

} // namespace

CMTree random_tree(int leaf_count, bool simple_locals, Rng& rng) {
    if (leaf_count <= 1) return CMTree::single_vertex();
    int max_children = std::min(4, leaf_count);
    int m;
    if (simple_locals) {
        m = 2 + rng.below(max_children - 1);
    } else {
        // occasionally a single-child chain vertex
        m = rng.chance(0.15) ? 1 : 2 + rng.below(std::max(1, max_children - 1));
        m = std::min(m, leaf_count);
        if (m < 1) m = 1;
    }
    std::vector<int> parts(m, 1);
    for (int extra = leaf_count - m; extra > 0; --extra) ++parts[rng.below(m)];

    std::vector<Vertex> verts{{}};
    std::map<Vertex, LocalAlgebra> locals;
    LocalAlgebra root;
    for (int i = 0; i < m; ++i) root.child_syms.push_back(i);
    root.alg = m == 1 ? FiniteAlgebra::projection_minority(1) : random_local(m, simple_locals, rng);
    locals[{}] = root;
    for (int i = 0; i < m; ++i) {
        CMTree child = random_tree(parts[i], simple_locals, rng);
        for (const Vertex& w : child.verts) {
            Vertex u{i};
            u.insert(u.end(), w.begin(), w.end());
            verts.push_back(u);
        }
        for (const auto& [w, la] : child.locals) {
            Vertex u{i};
            u.insert(u.end(), w.begin(), w.end());
            locals[u] = la;
        }
    }
    return CMTree::validated(std::move(verts), std::move(locals));
}

} // namespace csptk
