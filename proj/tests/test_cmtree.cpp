#include "doctest.h"

#include <set>

#include "csptk/algebra.hpp"
#include "csptk/cmtree.hpp"
#include "csptk/pnk.hpp"
#include "csptk/rng.hpp"

using namespace csptk;

TEST_CASE("leaf operation is idempotent and minority") {
    CMTree t = build_pnk_tree(3, 2);
    auto ls = t.leaves();
    for (const auto& a : ls)
        for (const auto& b : ls) {
            CHECK(eval_leaf_op(t, a, a, a) == a);
            CHECK(eval_leaf_op(t, a, a, b) == b);
            CHECK(eval_leaf_op(t, a, b, a) == b);
            CHECK(eval_leaf_op(t, b, a, a) == b);
        }
}

TEST_CASE("leaf operation of P_{4,1} projects to the second argument") {
    CMTree t = build_pnk_tree(4, 1);
    CHECK(eval_leaf_op(t, Vertex{3}, Vertex{1}, Vertex{2}) == Vertex{1});
    CHECK(eval_leaf_op(t, Vertex{0}, Vertex{1}, Vertex{0}) == Vertex{1});
}

TEST_CASE("leaf algebra basics") {
    CHECK(leaf_algebra(CMTree::single_vertex()).size == 1);

    // P_{n,1} is P_n up to the renaming (i) -> i
    FiniteAlgebra a = leaf_algebra(build_pnk_tree(5, 1));
    CHECK(a.table == FiniteAlgebra::projection_minority(5).table);

    // two-level tree over a 2-element root with 2 leaves per child
    CMTree two = build_pnk_tree(2, 1);
    CMTree t = graft(two, Vertex{0}, two);
    t = graft(t, Vertex{1}, two);
    FiniteAlgebra b = leaf_algebra(t);
    CHECK(b.size == 4);
    OpFlags f = check_flags(b);
    CHECK(f.conservative);
    CHECK(f.minority);
}

TEST_CASE("represent: degenerate and projection cases") {
    FiniteAlgebra one;
    one.size = 1;
    one.table.assign(1, 0);
    CHECK(represent(one).verts.size() == 1);

    CMTree r = represent(FiniteAlgebra::projection_minority(4));
    CHECK(tree_isomorphic(r, build_pnk_tree(4, 1)).has_value());
}

TEST_CASE("represent round-trips simple reduced trees") {
    Rng rng(550021);
    for (int trial = 0; trial < 40; ++trial) {
        CMTree t = random_tree(2 + rng.below(9), true, rng);
        CHECK(t.is_simple());
        CHECK(t.is_reduced());
        CMTree r = represent(leaf_algebra(t));
        CHECK(tree_isomorphic(r, t).has_value());
    }
}

TEST_CASE("block congruence of a vertex") {
    CMTree t = build_pnk_tree(3, 2);
    CHECK(block_congruence_of_vertex(t, Vertex{1}).is_equality());
    CHECK(block_congruence_of_vertex(t, Vertex{}).is_full());
    Congruence c = block_congruence_of_vertex(t, Vertex{0});
    CHECK(c.nontrivial_class_count() == 1);
    std::vector<int> block;
    for (const auto& cls : c.classes)
        if (cls.size() > 1) block = cls;
    CHECK(block.size() == 3);  // leaves (0,0), (0,1), (0,2)
    CHECK(preserves(leaf_algebra(t), congruence_to_relation(c)));
}

TEST_CASE("subtree spanned by leaves represents the subalgebra") {
    Rng rng(550022);
    for (int trial = 0; trial < 20; ++trial) {
        CMTree t = random_tree(3 + rng.below(6), false, rng);
        auto ls = t.leaves();
        CHECK(subtree(t, ls) == t);

        std::vector<Vertex> subset;
        for (const auto& l : ls)
            if (rng.chance(0.6)) subset.push_back(l);
        if (subset.empty()) subset.push_back(ls[0]);

        CMTree sub = subtree(t, subset);
        FiniteAlgebra from_tree = leaf_algebra(sub);
        std::vector<int> idx;
        std::map<Vertex, int> leaf_idx;
        for (size_t i = 0; i < ls.size(); ++i) leaf_idx[ls[i]] = static_cast<int>(i);
        for (const auto& l : subset) idx.push_back(leaf_idx[l]);
        FiniteAlgebra from_alg = subalgebra(leaf_algebra(t), idx).algebra;
        CHECK(from_tree.table == from_alg.table);
    }
}

TEST_CASE("saplings and trunks") {
    // a chain is a sapling with empty trunk
    Sapling chain = full_sapling(3, 3, {}, Vertex{0, 0, 2});
    CHECK(is_sapling(chain.tree));
    CHECK(trunk(chain.tree).empty());

    for (int k = 1; k <= 3; ++k) {
        CMTree t = build_pnk_tree(3, k);
        CHECK(is_sapling(t));
        auto tr = trunk(t);
        CHECK(tr.size() == static_cast<size_t>(k));
        for (int j = 0; j < k; ++j) CHECK(tr[j] == Vertex(static_cast<size_t>(j), 0));
    }

    // two branching children of the root: not a sapling
    CMTree two = build_pnk_tree(2, 1);
    CMTree t = graft(two, Vertex{0}, two);
    t = graft(t, Vertex{1}, two);
    CHECK_FALSE(is_sapling(t));
    CHECK_THROWS(trunk(t));
}

TEST_CASE("grafting") {
    CMTree p31 = build_pnk_tree(3, 1);
    CMTree g = graft(p31, Vertex{0}, p31);
    CHECK(g == build_pnk_tree(3, 2));

    CMTree single = CMTree::single_vertex();
    CMTree same = graft(p31, Vertex{2}, single);
    CHECK(same == p31);

    CHECK(graft(p31, Vertex{1}, p31).leaves().size() ==
          p31.leaves().size() - 1 + p31.leaves().size());
}

TEST_CASE("restriction and pruning") {
    CMTree t = build_pnk_tree(3, 3);
    CHECK(restrict_below(t, Vertex{}) == t);
    CHECK(prune_lt(t, Vertex{1}) == t);

    Vertex v{0, 0};
    CMTree upper = prune_lt(t, v);
    CMTree lower = restrict_below(t, v);
    CHECK(graft(upper, v, lower) == t);

    CMTree chopped = prune_leq(t, Vertex{0, 0});
    CHECK_FALSE(chopped.contains(Vertex{0, 0}));
    CHECK(chopped.contains(Vertex{0, 1}));
}

TEST_CASE("quotient map collapses a block with the right kernel") {
    CMTree t = build_pnk_tree(3, 2);
    CHECK(quotient_map(t, Vertex{1}).at(Vertex{1}) == Vertex{1});

    auto to_root = quotient_map(t, Vertex{});
    for (const auto& [l, img] : to_root) CHECK(img == Vertex{});

    Vertex v{0};
    auto q = quotient_map(t, v);
    CMTree pruned = prune_lt(t, v);
    FiniteAlgebra src = leaf_algebra(t);
    FiniteAlgebra dst = leaf_algebra(pruned);
    auto src_leaves = t.leaves();
    auto dst_leaves = pruned.leaves();
    std::map<Vertex, int> src_idx, dst_idx;
    for (size_t i = 0; i < src_leaves.size(); ++i) src_idx[src_leaves[i]] = static_cast<int>(i);
    for (size_t i = 0; i < dst_leaves.size(); ++i) dst_idx[dst_leaves[i]] = static_cast<int>(i);

    // homomorphism property
    for (const auto& a : src_leaves)
        for (const auto& b : src_leaves)
            for (const auto& c : src_leaves) {
                Vertex lhs = q.at(src_leaves[src.op(src_idx[a], src_idx[b], src_idx[c])]);
                int rhs = dst.op(dst_idx[q.at(a)], dst_idx[q.at(b)], dst_idx[q.at(c)]);
                CHECK(dst_idx[lhs] == rhs);
            }

    // kernel is ~_v
    Congruence blk = block_congruence_of_vertex(t, v);
    for (const auto& a : src_leaves)
        for (const auto& b : src_leaves)
            CHECK((q.at(a) == q.at(b)) == blk.related(src_idx[a], src_idx[b]));
}

TEST_CASE("identify_only_child and refine_by_congruence preserve the leaf algebra") {
    // chain of two single-child vertices above a 3-leaf block
    Sapling s = full_sapling(3, 3, {2}, Vertex{0, 0, 0});
    CMTree chainy = s.tree;
    CMTree collapsed = identify_only_child(chainy, Vertex{});
    CHECK(leaf_algebra(collapsed).table == leaf_algebra(chainy).table);
    CMTree fully = reduce_tree(chainy);
    CHECK(fully.is_reduced());
    CHECK(leaf_algebra(fully).table == leaf_algebra(chainy).table);

    // refining a P_4 local vertex by a 2+2 congruence keeps the leaf algebra
    CMTree t = build_pnk_tree(4, 1);
    Congruence lambda = Congruence::from_class_map({0, 0, 1, 1});
    CMTree refined = refine_by_congruence(t, Vertex{}, lambda);
    CHECK(leaf_algebra(refined).table == leaf_algebra(t).table);
    CHECK(refined.verts.size() == t.verts.size() + 2);

    // identify-then-refine round trip on the refined tree
    CMTree back = reduce_tree(refined);
    CHECK(leaf_algebra(back).table == leaf_algebra(t).table);
}

TEST_CASE("tree isomorphism") {
    CMTree t = build_pnk_tree(3, 2);
    auto self = tree_isomorphic(t, t);
    REQUIRE(self.has_value());
    for (const auto& [v, img] : *self) CHECK(v == img);

    CHECK_FALSE(tree_isomorphic(build_pnk_tree(3, 2), build_pnk_tree(2, 3)).has_value());

    // relabeled copy: swap children 1 and 2 of the root of P_{3,2}
    CMTree relabeled = build_pnk_tree(3, 2);
    auto iso = tree_isomorphic(t, relabeled);
    CHECK(iso.has_value());
}

TEST_CASE("subtrees of projection trees are projection trees") {
    Rng rng(550023);
    for (int k = 1; k <= 3; ++k) {
        CMTree t = build_pnk_tree(3, k);
        auto ls = t.leaves();
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<Vertex> subset;
            for (const auto& l : ls)
                if (rng.chance(0.5)) subset.push_back(l);
            if (subset.empty()) subset.push_back(ls[0]);
            CHECK(subtree(t, subset).is_projection());
        }
    }
}

TEST_CASE("saplings of projection trees have SI leaf algebras") {
    Rng rng(550024);
    for (int trial = 0; trial < 15; ++trial) {
        CMTree t = build_pnk_tree(3, 3);
        auto ls = t.leaves();
        std::vector<Vertex> subset;
        for (const auto& l : ls)
            if (rng.chance(0.5)) subset.push_back(l);
        if (subset.empty()) subset.push_back(ls[0]);
        CMTree sub = subtree(t, subset);
        if (sub.leaves().size() < 2) continue;
        // subtrees of saplings over a single spine are saplings
        CHECK(is_sapling(sub));
        CHECK(is_subdirectly_irreducible(leaf_algebra(sub)));
    }
}

TEST_CASE("SI leaf algebra implies sapling, via the contrapositive") {
    Rng rng(550025);
    int found = 0;
    for (int trial = 0; trial < 30 && found < 10; ++trial) {
        CMTree t = random_tree(3 + rng.below(6), false, rng);
        if (is_sapling(t)) continue;
        ++found;
        CHECK_FALSE(is_subdirectly_irreducible(leaf_algebra(t)));
    }
    CHECK(found > 0);
}
