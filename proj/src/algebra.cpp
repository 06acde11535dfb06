#include "csptk/algebra.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "csptk/rng.hpp"

namespace csptk {

FiniteAlgebra FiniteAlgebra::projection_minority(int n) {
    FiniteAlgebra a;
    a.size = n;
    a.table.assign(static_cast<size_t>(n) * n * n, 0);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                int v;
                if (x == y) v = z;
                else if (y == z) v = x;
                else if (x == z) v = y;
                else v = y;
                a.set_op(x, y, z, v);
            }
    return a;
}

FiniteAlgebra FiniteAlgebra::random_conservative_minority(int n, Rng& rng) {
    FiniteAlgebra a = projection_minority(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                if (x != y && y != z && x != z) {
                    int pick = rng.below(3);
                    a.set_op(x, y, z, pick == 0 ? x : pick == 1 ? y : z);
                }
            }
    return a;
}

FiniteAlgebra FiniteAlgebra::random_conservative_maltsev(int n, Rng& rng) {
    FiniteAlgebra a;
    a.size = n;
    a.table.assign(static_cast<size_t>(n) * n * n, 0);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                int v;
                if (x == y) v = z;           // m(x,x,z) = z
                else if (y == z) v = x;      // m(x,z,z) = x
                else if (x == z) v = rng.chance(0.5) ? x : y;
                else {
                    int pick = rng.below(3);
                    v = pick == 0 ? x : pick == 1 ? y : z;
                }
                a.set_op(x, y, z, v);
            }
    return a;
}

OpFlags check_flags(const FiniteAlgebra& alg) {
    OpFlags f;
    const int n = alg.size;
    f.conservative = true;
    f.minority = true;
    f.maltsev = true;
    for (int x = 0; x < n && f.conservative; ++x)
        for (int y = 0; y < n && f.conservative; ++y)
            for (int z = 0; z < n; ++z) {
                int v = alg.op(x, y, z);
                if (v != x && v != y && v != z) { f.conservative = false; break; }
            }
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            if (alg.op(x, x, y) != y || alg.op(y, x, x) != y) { f.maltsev = false; }
            if (alg.op(x, x, y) != y || alg.op(x, y, x) != y || alg.op(y, x, x) != y) {
                f.minority = false;
            }
        }
    return f;
}

namespace {

bool is_minority_table(const FiniteAlgebra& a) {
    for (int x = 0; x < a.size; ++x)
        for (int y = 0; y < a.size; ++y)
            if (a.op(x, x, y) != y || a.op(x, y, x) != y || a.op(y, x, x) != y) return false;
    return true;
}

bool is_conservative_table(const FiniteAlgebra& a) {
    for (int x = 0; x < a.size; ++x)
        for (int y = 0; y < a.size; ++y)
            for (int z = 0; z < a.size; ++z) {
                int v = a.op(x, y, z);
                if (v != x && v != y && v != z) return false;
            }
    return true;
}

} // namespace

FiniteAlgebra derive_minority(const FiniteAlgebra& alg) {
    const int n = alg.size;
    if (n > 5) throw CapacityError("derive_minority: domain size capped at 5");
    OpFlags in = check_flags(alg);
    if (!in.conservative || !in.maltsev)
        throw std::invalid_argument("derive_minority: input must be conservative Maltsev");
    if (in.minority) return alg;

    const size_t cells = static_cast<size_t>(n) * n * n;
    auto make_proj = [&](int which) {
        std::vector<uint8_t> t(cells);
        size_t i = 0;
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int z = 0; z < n; ++z, ++i)
                    t[i] = static_cast<uint8_t>(which == 0 ? x : which == 1 ? y : z);
        return t;
    };

    std::set<std::vector<uint8_t>> seen;
    std::vector<std::vector<uint8_t>> all;
    for (int p = 0; p < 3; ++p) {
        auto t = make_proj(p);
        seen.insert(t);
        all.push_back(std::move(t));
    }
    if (seen.insert(alg.table).second) all.push_back(alg.table);

    auto check = [&](const std::vector<uint8_t>& t) -> bool {
        FiniteAlgebra cand;
        cand.size = n;
        cand.table = t;
        return is_minority_table(cand) && is_conservative_table(cand);
    };

    constexpr size_t kOpCap = 200000;
    for (int depth = 2; depth <= 6; ++depth) {
        std::vector<std::vector<uint8_t>> next;
        // every ternary term is the basic operation applied to shorter terms,
        // so composing with f as the outer symbol reaches the whole clone
        for (size_t ia = 0; ia < all.size(); ++ia)
            for (size_t ib = 0; ib < all.size(); ++ib)
                for (size_t ic = 0; ic < all.size(); ++ic) {
                    std::vector<uint8_t> t(cells);
                    for (size_t i = 0; i < cells; ++i)
                        t[i] = static_cast<uint8_t>(alg.table[
                            (static_cast<size_t>(all[ia][i]) * n + all[ib][i]) * n + all[ic][i]]);
                    if (seen.insert(t).second) {
                        if (check(t)) {
                            FiniteAlgebra out;
                            out.size = n;
                            out.names = alg.names;
                            out.table = std::move(t);
                            return out;
                        }
                        next.push_back(t);
                        if (seen.size() > kOpCap)
                            throw CapacityError("derive_minority: clone generation exceeded cap");
                    }
                }
        if (next.empty()) break;
        for (auto& t : next) all.push_back(std::move(t));
    }
    throw InternalInconsistency(
        "derive_minority: no conservative minority term found in bounded clone");
}

bool preserves(const FiniteAlgebra& alg, const Relation& r) {
    const size_t m = r.tuples.size();
    std::vector<int> out(r.arity);
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j)
            for (size_t k = 0; k < m; ++k) {
                for (int c = 0; c < r.arity; ++c)
                    out[c] = alg.op(r.tuples[i][c], r.tuples[j][c], r.tuples[k][c]);
                if (!r.contains(out)) return false;
            }
    return true;
}

Congruence Congruence::from_class_map(const std::vector<int>& cls) {
    const int n = static_cast<int>(cls.size());
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < n; ++i) groups[cls[i]].push_back(i);
    std::vector<std::vector<int>> classes;
    classes.reserve(groups.size());
    for (auto& [k, v] : groups) classes.push_back(std::move(v));
    std::sort(classes.begin(), classes.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    Congruence c;
    c.classes = std::move(classes);
    c.class_of.assign(n, -1);
    for (size_t ci = 0; ci < c.classes.size(); ++ci)
        for (int e : c.classes[ci]) c.class_of[e] = static_cast<int>(ci);
    return c;
}

Congruence Congruence::equality(int n) {
    std::vector<int> cls(n);
    std::iota(cls.begin(), cls.end(), 0);
    return from_class_map(cls);
}

Congruence Congruence::full(int n) {
    return from_class_map(std::vector<int>(n, 0));
}

int Congruence::nontrivial_class_count() const {
    int c = 0;
    for (const auto& cl : classes)
        if (cl.size() >= 2) ++c;
    return c;
}

bool Congruence::finer_or_equal(const Congruence& o) const {
    for (size_t a = 0; a < class_of.size(); ++a)
        for (size_t b = a + 1; b < class_of.size(); ++b)
            if (related(static_cast<int>(a), static_cast<int>(b)) &&
                !o.related(static_cast<int>(a), static_cast<int>(b)))
                return false;
    return true;
}

Relation Relation::make(int arity, std::vector<std::vector<int>> tuples) {
    std::sort(tuples.begin(), tuples.end());
    tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
    Relation r;
    r.arity = arity;
    r.tuples = std::move(tuples);
    return r;
}

bool Relation::contains(const std::vector<int>& t) const {
    return std::binary_search(tuples.begin(), tuples.end(), t);
}

namespace {

// Union-find closure under the basic translations of the operation.
struct CongruenceBuilder {
    const FiniteAlgebra& alg;
    std::vector<int> parent;
    std::vector<std::pair<int, int>> work;

    explicit CongruenceBuilder(const FiniteAlgebra& a) : alg(a), parent(a.size) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void join(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        parent[b] = a;
        work.emplace_back(a, b);
    }
    void close() {
        const int n = alg.size;
        while (!work.empty()) {
            auto [u, v] = work.back();
            work.pop_back();
            for (int c1 = 0; c1 < n; ++c1)
                for (int c2 = 0; c2 < n; ++c2) {
                    join(alg.op(u, c1, c2), alg.op(v, c1, c2));
                    join(alg.op(c1, u, c2), alg.op(c1, v, c2));
                    join(alg.op(c1, c2, u), alg.op(c1, c2, v));
                }
        }
    }
    Congruence result() {
        std::vector<int> cls(alg.size);
        for (int i = 0; i < alg.size; ++i) cls[i] = find(i);
        return Congruence::from_class_map(cls);
    }
};

} // namespace

Congruence principal_congruence(const FiniteAlgebra& alg, int a, int b) {
    CongruenceBuilder builder(alg);
    builder.join(a, b);
    builder.close();
    return builder.result();
}

Congruence congruence_generated_by(const FiniteAlgebra& alg,
                                   const std::vector<std::pair<int, int>>& pairs) {
    CongruenceBuilder builder(alg);
    for (auto [a, b] : pairs) builder.join(a, b);
    builder.close();
    return builder.result();
}

std::vector<Congruence> congruence_lattice(const FiniteAlgebra& alg) {
    const int n = alg.size;
    std::set<Congruence> lattice;
    lattice.insert(Congruence::equality(n));
    std::vector<Congruence> frontier;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            Congruence c = principal_congruence(alg, a, b);
            if (lattice.insert(c).second) frontier.push_back(c);
        }
    // close under joins
    while (!frontier.empty()) {
        std::vector<Congruence> next;
        for (const auto& c1 : frontier)
            for (const auto& c2 : lattice) {
                if (c1 == c2) continue;
                std::vector<std::pair<int, int>> pairs;
                for (const auto* c : {&c1, &c2})
                    for (const auto& cl : c->classes)
                        for (size_t i = 1; i < cl.size(); ++i) pairs.emplace_back(cl[0], cl[i]);
                Congruence j = congruence_generated_by(alg, pairs);
                if (lattice.insert(j).second) next.push_back(j);
            }
        frontier = std::move(next);
    }
    return {lattice.begin(), lattice.end()};
}

std::vector<Congruence> block_congruences(const FiniteAlgebra& alg) {
    std::vector<Congruence> out;
    for (const auto& c : congruence_lattice(alg))
        if (c.is_block()) out.push_back(c);
    return out;
}

std::vector<Congruence> atomic_congruences(const FiniteAlgebra& alg) {
    auto lattice = congruence_lattice(alg);
    std::vector<Congruence> nontrivial;
    for (const auto& c : lattice)
        if (!c.is_equality()) nontrivial.push_back(c);
    std::vector<Congruence> atoms;
    for (const auto& c : nontrivial) {
        bool atomic = true;
        for (const auto& d : nontrivial)
            if (!(d == c) && d.finer_or_equal(c)) { atomic = false; break; }
        if (atomic) atoms.push_back(c);
    }
    return atoms;
}

bool is_subdirectly_irreducible(const FiniteAlgebra& alg) {
    return atomic_congruences(alg).size() == 1;
}

Congruence monolith(const FiniteAlgebra& alg) {
    if (alg.size < 2) throw std::invalid_argument("monolith: need at least 2 elements");
    auto atoms = atomic_congruences(alg);
    if (atoms.size() != 1)
        throw std::invalid_argument("monolith: algebra is not subdirectly irreducible");
    return atoms.front();
}

Congruence max_proper_congruence(const FiniteAlgebra& alg) {
    if (alg.size < 2)
        throw std::invalid_argument("max_proper_congruence: need at least 2 elements");
    auto lattice = congruence_lattice(alg);
    std::vector<Congruence> proper;
    for (const auto& c : lattice)
        if (!c.is_full()) proper.push_back(c);
    std::vector<Congruence> maximal;
    for (const auto& c : proper) {
        bool is_max = true;
        for (const auto& d : proper)
            if (!(d == c) && c.finer_or_equal(d)) { is_max = false; break; }
        if (is_max) maximal.push_back(c);
    }
    if (maximal.size() != 1)
        throw InternalInconsistency("max_proper_congruence: maximal proper congruence not unique");
    return maximal.front();
}

Quotient quotient(const FiniteAlgebra& alg, const Congruence& theta) {
    // compatibility check
    const int n = alg.size;
    for (const auto& cl : theta.classes)
        for (size_t i = 1; i < cl.size(); ++i)
            for (int c1 = 0; c1 < n; ++c1)
                for (int c2 = 0; c2 < n; ++c2) {
                    if (!theta.related(alg.op(cl[0], c1, c2), alg.op(cl[i], c1, c2)) ||
                        !theta.related(alg.op(c1, cl[0], c2), alg.op(c1, cl[i], c2)) ||
                        !theta.related(alg.op(c1, c2, cl[0]), alg.op(c1, c2, cl[i])))
                        throw std::invalid_argument("quotient: not a congruence");
                }
    Quotient q;
    const int m = static_cast<int>(theta.classes.size());
    q.algebra.size = m;
    q.algebra.table.assign(static_cast<size_t>(m) * m * m, 0);
    q.natural_map = theta.class_of;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c) {
                int v = alg.op(theta.classes[a][0], theta.classes[b][0], theta.classes[c][0]);
                q.algebra.set_op(a, b, c, theta.class_of[v]);
            }
    if (!alg.names.empty()) {
        q.algebra.names.reserve(m);
        for (const auto& cl : theta.classes) q.algebra.names.push_back(alg.names[cl[0]]);
    }
    return q;
}

Subalgebra subalgebra(const FiniteAlgebra& alg, const std::vector<int>& subset) {
    std::vector<int> elems = subset;
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    std::vector<int> inv(alg.size, -1);
    for (size_t i = 0; i < elems.size(); ++i) inv[elems[i]] = static_cast<int>(i);
    const int m = static_cast<int>(elems.size());
    Subalgebra s;
    s.elements = elems;
    s.algebra.size = m;
    s.algebra.table.assign(static_cast<size_t>(m) * m * m, 0);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c) {
                int v = alg.op(elems[a], elems[b], elems[c]);
                if (inv[v] < 0)
                    throw std::invalid_argument("subalgebra: subset is not closed under op");
                s.algebra.set_op(a, b, c, inv[v]);
            }
    if (!alg.names.empty()) {
        s.algebra.names.reserve(m);
        for (int e : elems) s.algebra.names.push_back(alg.names[e]);
    }
    return s;
}

Relation congruence_to_relation(const Congruence& c) {
    std::vector<std::vector<int>> tuples;
    for (const auto& cl : c.classes)
        for (int a : cl)
            for (int b : cl) tuples.push_back({a, b});
    return Relation::make(2, std::move(tuples));
}

std::vector<std::vector<int>> algebra_isomorphisms(const FiniteAlgebra& a1,
                                                   const FiniteAlgebra& a2) {
    std::vector<std::vector<int>> result;
    if (a1.size != a2.size) return result;
    const int n = a1.size;
    std::vector<int> map(n, -1);
    std::vector<bool> used(n, false);

    auto consistent = [&](int pos) {
        // check all triples whose entries are mapped, with the new element at pos
        for (int a = 0; a <= pos; ++a)
            for (int b = 0; b <= pos; ++b)
                for (int c = 0; c <= pos; ++c) {
                    int v = a1.op(a, b, c);
                    if (v > pos) continue;
                    if (a2.op(map[a], map[b], map[c]) != map[v]) return false;
                }
        return true;
    };

    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == n) {
            result.push_back(map);
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (used[v]) continue;
            map[pos] = v;
            used[v] = true;
            if (consistent(pos)) self(self, pos + 1);
            used[v] = false;
            map[pos] = -1;
        }
    };
    rec(rec, 0);
    return result;
}

bool is_simple(const FiniteAlgebra& alg) {
    if (alg.size <= 1) return true;
    return congruence_lattice(alg).size() == 2;
}

} // namespace csptk
