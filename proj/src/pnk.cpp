#include "csptk/pnk.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>

namespace csptk {

OSym OSym::set(std::vector<int> elems) {
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    OSym o;
    o.kind = Kind::Set;
    o.elems = std::move(elems);
    return o;
}

OSym OSym::permutation(std::vector<int> images) {
    OSym o;
    o.kind = Kind::Perm;
    o.perm = std::move(images);
    return o;
}

OSym OSym::identity(int n) {
    std::vector<int> images(n - 1);
    std::iota(images.begin(), images.end(), 1);
    return permutation(std::move(images));
}

OSym OSym::eq3() {
    OSym o;
    o.kind = Kind::Eq3;
    return o;
}

std::string OSym::key() const {
    std::string out;
    switch (kind) {
        case Kind::Set: {
            out = "(set";
            for (int e : elems) out += " " + std::to_string(e);
            out += ")";
            break;
        }
        case Kind::Perm: {
            out = "(perm";
            for (int e : perm) out += " " + std::to_string(e);
            out += ")";
            break;
        }
        case Kind::Eq3:
            out = "oeq3";
            break;
    }
    return out;
}

Symbol Symbol::transfer(int r) {
    if (r < 1) throw std::invalid_argument("transfer: level must be >= 1");
    Symbol s(Kind::Transfer);
    s.transfer_r_ = r;
    s.rebuild_key();
    return s;
}

Symbol Symbol::pair(Symbol inner, OSym outer) {
    if (inner.arity() != outer.arity())
        throw std::invalid_argument("pair: inner and outer arity mismatch");
    Symbol s(Kind::Pair);
    s.inner_ = std::make_shared<const Symbol>(std::move(inner));
    s.outer_ = std::move(outer);
    s.rebuild_key();
    return s;
}

Symbol Symbol::nested_eq2(int n, int k) {
    Symbol s = eq2();
    for (int i = 0; i < k; ++i) s = pair(s, OSym::identity(n));
    return s;
}

Symbol Symbol::transfer_target_unary(int n, int k) {
    if (k < 1) throw std::invalid_argument("transfer_target_unary: k >= 1 required");
    Symbol s = pair(r_eps(), OSym::set({}));
    std::vector<int> all;
    for (int c = 1; c < n; ++c) all.push_back(c);
    for (int i = 1; i < k; ++i) s = pair(s, OSym::set(all));
    return s;
}

Symbol Symbol::unary_for_subset(int n, int k, const std::vector<std::vector<int>>& level_sets,
                                bool deep) {
    if (static_cast<int>(level_sets.size()) != k)
        throw std::invalid_argument("unary_for_subset: need one outer set per level");
    Symbol s = deep ? r_eps() : r_empty();
    for (int j = k - 1; j >= 0; --j) s = pair(s, OSym::set(level_sets[j]));
    (void)n;
    return s;
}

Symbol Symbol::sub_s(int n, int r, int l) {
    Symbol s = transfer(r);
    for (int i = 0; i < l; ++i) s = pair(s, OSym::identity(n));
    return s;
}

int Symbol::arity() const {
    switch (kind_) {
        case Kind::REmpty:
        case Kind::REps:
            return 1;
        case Kind::Eq2:
        case Kind::Full:
        case Kind::Transfer:
        case Kind::Swap01:
            return 2;
        case Kind::Eq3:
        case Kind::Lin:
            return 3;
        case Kind::Pair:
            return inner_->arity();
    }
    return 0;
}

bool Symbol::in_tau(int n, int k) const {
    switch (kind_) {
        case Kind::REmpty:
        case Kind::REps:
        case Kind::Eq2:
        case Kind::Eq3:
            return k == 0;
        case Kind::Full:
            return k >= 1;
        case Kind::Transfer:
            return k == transfer_r_;
        case Kind::Swap01:
        case Kind::Lin:
            return k == 1;
        case Kind::Pair: {
            if (k < 1 || !inner_->in_tau(n, k - 1)) return false;
            switch (outer_.kind) {
                case OSym::Kind::Set:
                    return outer_.elems.empty() ||
                           (outer_.elems.front() >= 1 && outer_.elems.back() <= n - 1);
                case OSym::Kind::Perm: {
                    if (static_cast<int>(outer_.perm.size()) != n - 1) return false;
                    std::vector<int> sorted = outer_.perm;
                    std::sort(sorted.begin(), sorted.end());
                    for (int i = 0; i < n - 1; ++i)
                        if (sorted[i] != i + 1) return false;
                    return true;
                }
                case OSym::Kind::Eq3:
                    return true;
            }
            return false;
        }
    }
    return false;
}

void Symbol::rebuild_key() {
    switch (kind_) {
        case Kind::REmpty: key_ = "empty"; break;
        case Kind::REps: key_ = "eps"; break;
        case Kind::Eq2: key_ = "eq2"; break;
        case Kind::Eq3: key_ = "eq3"; break;
        case Kind::Full: key_ = "full"; break;
        case Kind::Swap01: key_ = "swap01"; break;
        case Kind::Lin: key_ = "lin"; break;
        case Kind::Transfer: key_ = "(transfer " + std::to_string(transfer_r_) + ")"; break;
        case Kind::Pair:
            // the pair factory rebuilds once inner and outer are in place
            key_ = inner_ ? "(pair " + inner_->key_ + " " + outer_.key() + ")" : std::string();
            break;
    }
}

namespace {

struct SymTokenizer {
    std::vector<std::string> tokens;
    size_t pos = 0;

    explicit SymTokenizer(const std::string& s) {
        std::string cur;
        for (char c : s) {
            if (c == '(' || c == ')') {
                if (!cur.empty()) { tokens.push_back(cur); cur.clear(); }
                tokens.push_back(std::string(1, c));
            } else if (c == ' ') {
                if (!cur.empty()) { tokens.push_back(cur); cur.clear(); }
            } else {
                cur += c;
            }
        }
        if (!cur.empty()) tokens.push_back(cur);
    }
    const std::string& peek() const {
        if (pos >= tokens.size()) throw std::invalid_argument("symbol parse: unexpected end");
        return tokens[pos];
    }
    std::string take() {
        std::string t = peek();
        ++pos;
        return t;
    }
    void expect(const std::string& t) {
        if (take() != t) throw std::invalid_argument("symbol parse: expected " + t);
    }
};

OSym parse_osym(SymTokenizer& tz) {
    if (tz.peek() == "oeq3") {
        tz.take();
        return OSym::eq3();
    }
    tz.expect("(");
    std::string head = tz.take();
    std::vector<int> nums;
    while (tz.peek() != ")") nums.push_back(std::stoi(tz.take()));
    tz.expect(")");
    if (head == "set") return OSym::set(std::move(nums));
    if (head == "perm") return OSym::permutation(std::move(nums));
    throw std::invalid_argument("symbol parse: unknown outer symbol " + head);
}

Symbol parse_symbol(SymTokenizer& tz) {
    const std::string& t = tz.peek();
    if (t == "empty") { tz.take(); return Symbol::r_empty(); }
    if (t == "eps") { tz.take(); return Symbol::r_eps(); }
    if (t == "eq2") { tz.take(); return Symbol::eq2(); }
    if (t == "eq3") { tz.take(); return Symbol::eq3(); }
    if (t == "full") { tz.take(); return Symbol::full(); }
    if (t == "swap01") { tz.take(); return Symbol::swap01(); }
    if (t == "lin") { tz.take(); return Symbol::lin(); }
    tz.expect("(");
    std::string head = tz.take();
    if (head == "transfer") {
        int r = std::stoi(tz.take());
        tz.expect(")");
        return Symbol::transfer(r);
    }
    if (head == "pair") {
        Symbol inner = parse_symbol(tz);
        OSym outer = parse_osym(tz);
        tz.expect(")");
        return Symbol::pair(std::move(inner), std::move(outer));
    }
    throw std::invalid_argument("symbol parse: unknown symbol " + head);
}

} // namespace

Symbol Symbol::parse(const std::string& key) {
    SymTokenizer tz(key);
    Symbol s = parse_symbol(tz);
    if (tz.pos != tz.tokens.size())
        throw std::invalid_argument("symbol parse: trailing tokens in " + key);
    return s;
}

CMTree build_pnk_tree(int n, int k) {
    if (n < 2 || k < 0) throw std::invalid_argument("build_pnk_tree: need n >= 2, k >= 0");
    if (k == 0) return CMTree::single_vertex();
    std::vector<Vertex> verts;
    std::map<Vertex, LocalAlgebra> locals;
    Vertex spine;
    for (int j = 0; j <= k; ++j) {
        verts.push_back(spine);
        if (j < k) {
            LocalAlgebra la;
            la.alg = FiniteAlgebra::projection_minority(n);
            for (int c = 0; c < n; ++c) la.child_syms.push_back(c);
            locals[spine] = la;
            for (int c = 1; c < n; ++c) {
                Vertex leaf = spine;
                leaf.push_back(c);
                verts.push_back(leaf);
            }
        }
        spine.push_back(0);
    }
    return CMTree::validated(std::move(verts), std::move(locals));
}

std::vector<int> pnk_trunk_heights(int k) {
    std::vector<int> out(std::max(0, k));
    std::iota(out.begin(), out.end(), 0);
    return out;
}

std::vector<int> trunk_minus(int k, int i) {
    std::vector<int> out;
    for (int j = 0; j < k; ++j)
        if (j != i) out.push_back(j);
    return out;
}

namespace {

Vertex zeros(int j) { return Vertex(static_cast<size_t>(j), 0); }

bool valid_pnk_leaf(int n, int k, const Vertex& w) {
    if (static_cast<int>(w.size()) == k) {
        for (int s : w)
            if (s != 0) return false;
        return true;
    }
    if (w.empty() || static_cast<int>(w.size()) > k) return false;
    for (size_t i = 0; i + 1 < w.size(); ++i)
        if (w[i] != 0) return false;
    return w.back() >= 1 && w.back() <= n - 1;
}

} // namespace

Sapling full_sapling(int n, int k, const std::vector<int>& X, const Vertex& w) {
    std::vector<int> heights = X;
    std::sort(heights.begin(), heights.end());
    heights.erase(std::unique(heights.begin(), heights.end()), heights.end());
    for (int h : heights)
        if (h < 0 || h >= k) throw std::invalid_argument("full_sapling: height out of range");
    if (!valid_pnk_leaf(n, k, w))
        throw std::invalid_argument("full_sapling: w is not a leaf of the ambient tree");

    std::vector<Vertex> verts;
    std::map<Vertex, LocalAlgebra> locals;
    const FiniteAlgebra pn = FiniteAlgebra::projection_minority(n);

    auto add_chain_to = [&](const Vertex& from, const Vertex& target) {
        // single-child chain from `from` (exclusive) down to the leaf `target`
        Vertex cur = from;
        while (cur != target) {
            int sym = target[cur.size()];
            LocalAlgebra la;
            la.child_syms = {sym};
            la.alg = subalgebra(pn, {sym}).algebra;
            locals[cur] = la;
            cur.push_back(sym);
            verts.push_back(cur);
        }
    };

    verts.push_back({});
    if (heights.empty()) {
        add_chain_to({}, w);
        Sapling s;
        s.tree = CMTree::validated(std::move(verts), std::move(locals));
        s.trunk = {};
        return s;
    }

    const int jm = heights.back();
    if (jm == k - 1 && w != zeros(k))
        throw std::invalid_argument("full_sapling: w must be the deepest leaf here");
    if (jm < k - 1 && !is_prefix(zeros(jm + 1), w))
        throw std::invalid_argument("full_sapling: w must lie below the branch point");

    for (int j = 0; j <= jm; ++j) {
        Vertex v = zeros(j);
        if (std::binary_search(heights.begin(), heights.end(), j)) {
            LocalAlgebra la;
            la.alg = pn;
            for (int c = 0; c < n; ++c) la.child_syms.push_back(c);
            locals[v] = la;
            for (int c = 1; c < n; ++c) {
                Vertex leaf = v;
                leaf.push_back(c);
                verts.push_back(leaf);
            }
            verts.push_back(zeros(j + 1));
        } else {
            LocalAlgebra la;
            la.child_syms = {0};
            la.alg = subalgebra(pn, {0}).algebra;
            locals[v] = la;
            verts.push_back(zeros(j + 1));
        }
    }
    add_chain_to(zeros(jm + 1), w);

    Sapling s;
    s.tree = CMTree::validated(std::move(verts), std::move(locals));
    for (int h : heights) s.trunk.push_back(zeros(h));
    return s;
}

std::map<Vertex, Vertex> psi_embedding(int n, int k, const std::vector<int>& X, const Vertex& w) {
    std::vector<int> heights = X;
    std::sort(heights.begin(), heights.end());
    heights.erase(std::unique(heights.begin(), heights.end()), heights.end());
    const int m = static_cast<int>(heights.size());
    // sanity: the sapling must exist
    full_sapling(n, k, heights, w);

    std::map<Vertex, Vertex> out;
    if (m == 0) {
        out[{}] = w;
        return out;
    }
    for (int t = 0; t < m; ++t)
        for (int c = 1; c < n; ++c) {
            Vertex src = zeros(t);
            src.push_back(c);
            Vertex dst = zeros(heights[t]);
            dst.push_back(c);
            out[src] = dst;
        }
    out[zeros(m)] = w;
    return out;
}

std::map<Vertex, Vertex> psi_i(int n, int k, int i) {
    if (k < 1 || i < 0 || i >= k) throw std::invalid_argument("psi_i: bad index");
    Vertex w = k == 1 ? Vertex{0} : zeros(k);
    return psi_embedding(n, k, trunk_minus(k, i), w);
}

namespace {

std::vector<Vertex> sorted_leaves(int n, int k) {
    return build_pnk_tree(n, k).leaves();
}

int leaf_index(const std::vector<Vertex>& domain, const Vertex& v) {
    auto it = std::lower_bound(domain.begin(), domain.end(), v);
    if (it == domain.end() || *it != v)
        throw std::invalid_argument("leaf_index: vertex is not a leaf of the ambient tree");
    return static_cast<int>(it - domain.begin());
}

} // namespace

Relation transfer_relation(int n, int k, const std::vector<int>& X1, const Vertex& w1,
                           const std::vector<int>& X2, const Vertex& w2) {
    auto p1 = psi_embedding(n, k, X1, w1);
    auto p2 = psi_embedding(n, k, X2, w2);
    if (p1.size() != p2.size())
        throw std::invalid_argument("transfer_relation: trunk sizes differ");
    auto domain = sorted_leaves(n, k);
    std::vector<std::vector<int>> tuples;
    for (const auto& [src, dst1] : p1)
        tuples.push_back({leaf_index(domain, dst1), leaf_index(domain, p2.at(src))});
    return Relation::make(2, std::move(tuples));
}

Relation canonical_transfer(int n, int k) {
    if (k < 1) throw std::invalid_argument("canonical_transfer: k >= 1 required");
    Vertex w = k == 1 ? Vertex{0} : zeros(k);
    return transfer_relation(n, k, trunk_minus(k, 0), w, trunk_minus(k, k - 1), w);
}

OStructure build_O(int n) {
    OStructure o;
    o.n = n;
    const int m = n - 1;
    for (int mask = 0; mask < (1 << m); ++mask) {
        std::vector<int> elems;
        for (int c = 1; c <= m; ++c)
            if (mask & (1 << (c - 1))) elems.push_back(c);
        OSym s = OSym::set(elems);
        std::vector<std::vector<int>> tuples;
        for (int e : elems) tuples.push_back({e});
        o.rels[s.key()] = Relation::make(1, std::move(tuples));
        o.symbols.push_back(s);
    }
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 1);
    do {
        OSym s = OSym::permutation(perm);
        std::vector<std::vector<int>> tuples;
        for (int c = 1; c <= m; ++c) tuples.push_back({c, perm[c - 1]});
        o.rels[s.key()] = Relation::make(2, std::move(tuples));
        o.symbols.push_back(s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    OSym e3 = OSym::eq3();
    std::vector<std::vector<int>> tuples;
    for (int c = 1; c <= m; ++c) tuples.push_back({c, c, c});
    o.rels[e3.key()] = Relation::make(3, std::move(tuples));
    o.symbols.push_back(e3);
    return o;
}

int PnkStructure::index_of(const Vertex& v) const {
    return leaf_index(domain, v);
}

int PnkStructure::index_of_outer(int c) const {
    return index_of(Vertex{c});
}

const Relation& PnkStructure::rel(const Symbol& s) const {
    auto it = rels.find(s.key());
    if (it == rels.end())
        throw std::invalid_argument("structure has no relation named " + s.key());
    return it->second;
}

std::vector<int> psi0_index_map(int n, int k) {
    if (k < 1) throw std::invalid_argument("psi0_index_map: k >= 1 required");
    auto prev = sorted_leaves(n, k - 1);
    auto cur = sorted_leaves(n, k);
    std::vector<int> out(prev.size());
    for (size_t i = 0; i < prev.size(); ++i) {
        Vertex v{0};
        v.insert(v.end(), prev[i].begin(), prev[i].end());
        out[i] = leaf_index(cur, v);
    }
    return out;
}

PnkStructure build_structure(int n, int k) {
    if (n < 2 || k < 0) throw std::invalid_argument("build_structure: need n >= 2, k >= 0");
    // symbol count grows like (2^{n-1})^k for unary and (n-1)!^k for binary
    {
        double fact = 1;
        for (int i = 2; i <= n - 1; ++i) fact *= i;
        double unary = 2, binary = 1, ternary = 1;
        for (int i = 1; i <= k; ++i) {
            unary *= 1 << (n - 1);
            binary = binary * fact + (i == 1 ? 3 : 2);
            ternary = ternary + (i == 1 ? 1 : 0);
            if (unary + binary + ternary > 200000)
                throw CapacityError("build_structure: signature too large");
        }
    }

    PnkStructure st;
    st.n = n;
    st.k = k;
    st.tree = build_pnk_tree(n, k);
    st.domain = st.tree.leaves();
    st.leaf_alg = leaf_algebra(st.tree);
    st.levels_.resize(st.domain.size());
    st.outer_val_.resize(st.domain.size());
    for (size_t i = 0; i < st.domain.size(); ++i) {
        const Vertex& v = st.domain[i];
        if (static_cast<int>(v.size()) == k && (v.empty() || v.back() == 0)) {
            st.levels_[i] = k;
            st.outer_val_[i] = -1;
            st.deep_idx_ = static_cast<int>(i);
        } else {
            st.levels_[i] = static_cast<int>(v.size()) - 1;
            st.outer_val_[i] = st.levels_[i] == 0 ? v.back() : -1;
        }
    }

    auto add = [&](const Symbol& s, Relation r) {
        st.symbols.push_back(s);
        st.symtab.emplace(s.key(), s);
        st.rels.emplace(s.key(), std::move(r));
    };

    if (k == 0) {
        add(Symbol::r_empty(), Relation::make(1, {}));
        add(Symbol::r_eps(), Relation::make(1, {{0}}));
        add(Symbol::eq2(), Relation::make(2, {{0, 0}}));
        add(Symbol::eq3(), Relation::make(3, {{0, 0, 0}}));
        return st;
    }

    const PnkStructure& prev = pnk_structure(n, k - 1);
    const OStructure on = build_O(n);
    std::vector<int> psi0 = psi0_index_map(n, k);
    std::vector<int> outer_idx(n);  // value c -> index of leaf (c)
    for (int c = 1; c < n; ++c) outer_idx[c] = st.index_of_outer(c);

    for (int arity = 1; arity <= 3; ++arity) {
        for (const Symbol& rho1 : prev.symbols) {
            if (rho1.arity() != arity) continue;
            const Relation& inner_rel = prev.rels.at(rho1.key());
            for (const OSym& rho2 : on.symbols) {
                if (rho2.arity() != arity) continue;
                const Relation& outer_rel = on.rels.at(rho2.key());
                std::vector<std::vector<int>> tuples;
                for (const auto& t : inner_rel.tuples) {
                    std::vector<int> mapped(t.size());
                    for (size_t i = 0; i < t.size(); ++i) mapped[i] = psi0[t[i]];
                    tuples.push_back(std::move(mapped));
                }
                for (const auto& t : outer_rel.tuples) {
                    std::vector<int> mapped(t.size());
                    for (size_t i = 0; i < t.size(); ++i) mapped[i] = outer_idx[t[i]];
                    tuples.push_back(std::move(mapped));
                }
                add(Symbol::pair(rho1, rho2), Relation::make(arity, std::move(tuples)));
            }
        }
    }

    {
        std::vector<std::vector<int>> tuples;
        const int d = static_cast<int>(st.domain.size());
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) tuples.push_back({a, b});
        add(Symbol::full(), Relation::make(2, std::move(tuples)));
    }
    add(Symbol::transfer(k), canonical_transfer(n, k));
    if (k == 1) {
        int i0 = st.index_of(Vertex{0});
        int i1 = st.index_of(Vertex{1});
        std::vector<std::vector<int>> swap_tuples{{i0, i1}, {i1, i0}};
        for (int c = 2; c < n; ++c) {
            int ic = st.index_of(Vertex{c});
            swap_tuples.push_back({ic, ic});
        }
        add(Symbol::swap01(), Relation::make(2, std::move(swap_tuples)));
        add(Symbol::lin(),
            Relation::make(3, {{i1, i1, i1}, {i1, i0, i0}, {i0, i1, i0}, {i0, i0, i1}}));
    }
    return st;
}

const PnkStructure& pnk_structure(int n, int k) {
    static std::recursive_mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<PnkStructure>> cache;
    std::lock_guard<std::recursive_mutex> lock(mu);
    auto key = std::make_pair(n, k);
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto built = std::make_unique<PnkStructure>(build_structure(n, k));
        it = cache.emplace(key, std::move(built)).first;
    }
    return *it->second;
}

std::optional<std::pair<Relation, Relation>> uniform_split(const PnkStructure& st,
                                                           const Relation& r) {
    if (st.k < 1) return std::nullopt;
    std::vector<std::vector<int>> inner, outer;
    for (const auto& t : r.tuples) {
        bool any_inner = false, any_outer = false;
        for (int e : t) (st.level_of(e) >= 1 ? any_inner : any_outer) = true;
        if (any_inner && any_outer) return std::nullopt;  // crossing tuple
        (any_outer ? outer : inner).push_back(t);
    }
    // outer part must be strongly functional: each value pins the whole tuple
    for (int coord = 0; coord < r.arity; ++coord) {
        std::map<int, int> seen;
        for (const auto& t : outer)
            if (++seen[t[coord]] > 1) return std::nullopt;
    }
    const auto prev_domain = sorted_leaves(st.n, st.k - 1);
    std::vector<std::vector<int>> s_tuples;
    for (const auto& t : inner) {
        std::vector<int> mapped(t.size());
        for (size_t i = 0; i < t.size(); ++i) {
            const Vertex& v = st.domain[t[i]];
            Vertex stripped(v.begin() + 1, v.end());
            mapped[i] = leaf_index(prev_domain, stripped);
        }
        s_tuples.push_back(std::move(mapped));
    }
    std::vector<std::vector<int>> y_tuples;
    for (const auto& t : outer) {
        std::vector<int> vals(t.size());
        for (size_t i = 0; i < t.size(); ++i) vals[i] = st.outer_value(t[i]);
        y_tuples.push_back(std::move(vals));
    }
    return std::make_pair(Relation::make(r.arity, std::move(s_tuples)),
                          Relation::make(r.arity, std::move(y_tuples)));
}

Relation uniform_compose(const PnkStructure& st, const Relation& s, const Relation& y) {
    if (s.arity != y.arity) throw std::invalid_argument("uniform_compose: arity mismatch");
    std::vector<int> psi0 = psi0_index_map(st.n, st.k);
    std::vector<std::vector<int>> tuples;
    for (const auto& t : s.tuples) {
        std::vector<int> mapped(t.size());
        for (size_t i = 0; i < t.size(); ++i) mapped[i] = psi0[t[i]];
        tuples.push_back(std::move(mapped));
    }
    for (const auto& t : y.tuples) {
        std::vector<int> mapped(t.size());
        for (size_t i = 0; i < t.size(); ++i) mapped[i] = st.index_of_outer(t[i]);
        tuples.push_back(std::move(mapped));
    }
    return Relation::make(s.arity, std::move(tuples));
}

Relation materialize_subS(int n, int r, int l) {
    if (r < 1 || l < 0) throw std::invalid_argument("materialize_subS: need r >= 1, l >= 0");
    const PnkStructure& st = pnk_structure(n, r + l);
    return st.rel(Symbol::sub_s(n, r, l));
}

} // namespace csptk
