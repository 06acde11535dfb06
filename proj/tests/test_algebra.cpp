#include "doctest.h"

#include <set>

#include "csptk/algebra.hpp"
#include "csptk/cmtree.hpp"
#include "csptk/pnk.hpp"
#include "csptk/rng.hpp"

using namespace csptk;

namespace {

FiniteAlgebra z4_maltsev() {
    // x - y + z mod 4
    FiniteAlgebra a;
    a.size = 4;
    a.table.assign(64, 0);
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y)
            for (int z = 0; z < 4; ++z) a.set_op(x, y, z, ((x - y + z) % 4 + 4) % 4);
    return a;
}

FiniteAlgebra first_projection(int n) {
    FiniteAlgebra a;
    a.size = n;
    a.table.assign(static_cast<size_t>(n) * n * n, 0);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) a.set_op(x, y, z, x);
    return a;
}

// root with two 2-leaf blocks: has two incomparable nontrivial block congruences
FiniteAlgebra two_block_algebra() {
    CMTree two = build_pnk_tree(2, 1);
    CMTree t = graft(build_pnk_tree(2, 1), Vertex{0}, two);
    t = graft(t, Vertex{1}, two);
    return leaf_algebra(t);
}

} // namespace

TEST_CASE("check_flags on the projection minority operation") {
    OpFlags f = check_flags(FiniteAlgebra::projection_minority(4));
    CHECK(f.conservative);
    CHECK(f.minority);
    CHECK(f.maltsev);
}

TEST_CASE("check_flags on x-y+z mod 4") {
    OpFlags f = check_flags(z4_maltsev());
    CHECK_FALSE(f.conservative);
    CHECK_FALSE(f.minority);
    CHECK(f.maltsev);
}

TEST_CASE("check_flags on the first projection") {
    OpFlags f = check_flags(first_projection(3));
    CHECK(f.conservative);
    CHECK_FALSE(f.minority);
    CHECK_FALSE(f.maltsev);
}

TEST_CASE("derive_minority returns minority inputs unchanged") {
    FiniteAlgebra p4 = FiniteAlgebra::projection_minority(4);
    CHECK(derive_minority(p4) == p4);
}

TEST_CASE("derive_minority finds a minority term in random conservative Maltsev clones") {
    Rng rng(20240811);
    for (int trial = 0; trial < 25; ++trial) {
        FiniteAlgebra a = FiniteAlgebra::random_conservative_maltsev(3, rng);
        FiniteAlgebra m = derive_minority(a);
        OpFlags f = check_flags(m);
        CHECK(f.conservative);
        CHECK(f.minority);
    }
}

TEST_CASE("preserves: unary relations and bijection graphs of P_4") {
    FiniteAlgebra p4 = FiniteAlgebra::projection_minority(4);
    CHECK(preserves(p4, Relation::make(1, {{0}, {2}})));
    CHECK(preserves(p4, Relation::make(1, {{1}})));
    // graph of the 4-cycle 0->1->2->3->0
    CHECK(preserves(p4, Relation::make(2, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})));
    // subsets and their products are always invariant under a conservative op
    CHECK(preserves(p4, Relation::make(2, {{0, 1}, {0, 2}})));
    // a genuinely non-invariant relation
    CHECK_FALSE(preserves(p4, Relation::make(2, {{0, 1}, {1, 0}, {0, 0}})));
}

TEST_CASE("principal congruences") {
    FiniteAlgebra p3 = FiniteAlgebra::projection_minority(3);
    CHECK(principal_congruence(p3, 1, 1).is_equality());
    CHECK(principal_congruence(p3, 0, 2).is_full());

    // inside P^{3,2}: a pair within the inner block generates exactly that block
    const PnkStructure& st = pnk_structure(3, 2);
    int a = st.index_of(Vertex{0, 0});
    int b = st.index_of(Vertex{0, 2});
    Congruence c = principal_congruence(st.leaf_alg, a, b);
    Congruence block = block_congruence_of_vertex(st.tree, Vertex{0});
    CHECK(c == block);
}

TEST_CASE("congruence lattices of small algebras") {
    FiniteAlgebra one;
    one.size = 1;
    one.table.assign(1, 0);
    CHECK(congruence_lattice(one).size() == 1);

    CHECK(congruence_lattice(FiniteAlgebra::projection_minority(5)).size() == 2);

    // P^{n,k} has a chain of k+1 congruences
    for (int n = 2; n <= 3; ++n)
        for (int k = 1; k <= 3; ++k) {
            auto lattice = congruence_lattice(pnk_structure(n, k).leaf_alg);
            CHECK(lattice.size() == static_cast<size_t>(k) + 1);
            for (const auto& c1 : lattice)
                for (const auto& c2 : lattice)
                    CHECK((c1.finer_or_equal(c2) || c2.finer_or_equal(c1)));
        }
}

TEST_CASE("block congruences of P_n and P^{n,k}") {
    auto blocks = block_congruences(FiniteAlgebra::projection_minority(4));
    CHECK(blocks.size() == 2);

    const PnkStructure& st = pnk_structure(3, 2);
    auto bl = block_congruences(st.leaf_alg);
    CHECK(bl.size() == 3);
    for (const auto& c : bl) CHECK(c.nontrivial_class_count() <= 1);
}

TEST_CASE("subdirect irreducibility and monoliths") {
    FiniteAlgebra p3 = FiniteAlgebra::projection_minority(3);
    CHECK(is_subdirectly_irreducible(p3));
    CHECK(monolith(p3).is_full());

    const PnkStructure& st = pnk_structure(3, 2);
    CHECK(is_subdirectly_irreducible(st.leaf_alg));
    Congruence m = monolith(st.leaf_alg);
    CHECK(m == block_congruence_of_vertex(st.tree, Vertex{0}));

    CHECK_FALSE(is_subdirectly_irreducible(two_block_algebra()));
}

TEST_CASE("unique maximal proper congruence") {
    CHECK(max_proper_congruence(FiniteAlgebra::projection_minority(2)).is_equality());
    CHECK(max_proper_congruence(FiniteAlgebra::projection_minority(4)).is_equality());

    const PnkStructure& st = pnk_structure(3, 2);
    Congruence mx = max_proper_congruence(st.leaf_alg);
    CHECK(mx == block_congruence_of_vertex(st.tree, Vertex{0}));
}

TEST_CASE("quotients") {
    FiniteAlgebra p3 = FiniteAlgebra::projection_minority(3);
    Quotient q_eq = quotient(p3, Congruence::equality(3));
    CHECK(q_eq.algebra.size == 3);
    CHECK(q_eq.algebra.table == p3.table);

    Quotient q_full = quotient(p3, Congruence::full(3));
    CHECK(q_full.algebra.size == 1);

    // P^{3,2} / ~_(0) is isomorphic to P_3: compare tree representations
    const PnkStructure& st = pnk_structure(3, 2);
    Quotient q = quotient(st.leaf_alg, block_congruence_of_vertex(st.tree, Vertex{0}));
    CHECK(q.algebra.size == 3);
    auto iso = tree_isomorphic(represent(q.algebra),
                               represent(FiniteAlgebra::projection_minority(3)));
    CHECK(iso.has_value());

    // natural map respects the operation
    for (int a = 0; a < st.leaf_alg.size; ++a)
        for (int b = 0; b < st.leaf_alg.size; ++b)
            for (int c = 0; c < st.leaf_alg.size; ++c)
                CHECK(q.natural_map[st.leaf_alg.op(a, b, c)] ==
                      q.algebra.op(q.natural_map[a], q.natural_map[b], q.natural_map[c]));
}

TEST_CASE("subalgebras of conservative algebras") {
    FiniteAlgebra p4 = FiniteAlgebra::projection_minority(4);
    CHECK(subalgebra(p4, {0, 1, 2, 3}).algebra == p4);
    CHECK(subalgebra(p4, {2}).algebra.size == 1);
    Subalgebra s = subalgebra(p4, {0, 1});
    OpFlags f = check_flags(s.algebra);
    CHECK(f.conservative);
    CHECK(f.minority);
    CHECK(s.algebra.size == 2);
}

TEST_CASE("blocks containing a fixed element form a chain") {
    Rng rng(77001);
    for (int trial = 0; trial < 30; ++trial) {
        CMTree t = random_tree(2 + rng.below(5), false, rng);
        FiniteAlgebra alg = leaf_algebra(t);
        auto blocks = block_congruences(alg);
        for (int a = 0; a < alg.size; ++a) {
            std::vector<std::vector<int>> holding;
            for (const auto& c : blocks) {
                const auto& cls = c.classes[c.class_of[a]];
                if (cls.size() >= 2) holding.push_back(cls);
            }
            for (const auto& b1 : holding)
                for (const auto& b2 : holding) {
                    bool sub12 = std::includes(b2.begin(), b2.end(), b1.begin(), b1.end());
                    bool sub21 = std::includes(b1.begin(), b1.end(), b2.begin(), b2.end());
                    CHECK((sub12 || sub21));
                }
        }
    }
}

TEST_CASE("single blocks of congruences are block congruences") {
    Rng rng(77002);
    for (int trial = 0; trial < 20; ++trial) {
        CMTree t = random_tree(2 + rng.below(5), false, rng);
        FiniteAlgebra alg = leaf_algebra(t);
        auto lattice = congruence_lattice(alg);
        auto blocks = block_congruences(alg);
        std::set<Congruence> block_set(blocks.begin(), blocks.end());
        for (const auto& theta : lattice)
            for (int a = 0; a < alg.size; ++a) {
                std::vector<int> cls(alg.size);
                const auto& block = theta.classes[theta.class_of[a]];
                for (int i = 0; i < alg.size; ++i) cls[i] = i;
                for (int e : block) cls[e] = block.front();
                CHECK(block_set.count(Congruence::from_class_map(cls)) == 1);
            }
    }
}

TEST_CASE("SI iff chain lattice iff all congruences are block congruences") {
    Rng rng(77003);
    for (int trial = 0; trial < 40; ++trial) {
        CMTree t = random_tree(2 + rng.below(4), false, rng);
        FiniteAlgebra alg = leaf_algebra(t);
        if (alg.size < 2) continue;
        auto lattice = congruence_lattice(alg);
        bool si = is_subdirectly_irreducible(alg);
        bool chain = true;
        for (const auto& c1 : lattice)
            for (const auto& c2 : lattice)
                if (!c1.finer_or_equal(c2) && !c2.finer_or_equal(c1)) chain = false;
        bool all_blocks = true;
        for (const auto& c : lattice)
            if (!c.is_block()) all_blocks = false;
        CHECK(si == chain);
        CHECK(chain == all_blocks);
    }
}
