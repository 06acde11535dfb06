#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace csptk {

class Rng;

struct OpFlags {
    bool conservative = false;
    bool minority = false;
    bool maltsev = false;
};

// A finite set with a single ternary operation.
struct FiniteAlgebra {
    int size = 0;
    std::vector<std::string> names;  // size entries, or empty
    std::vector<uint8_t> table;      // size^3 entries, op(a,b,c) = table[(a*size+b)*size+c]

    int op(int a, int b, int c) const {
        return table[(static_cast<size_t>(a) * size + b) * size + c];
    }
    void set_op(int a, int b, int c, int v) {
        table[(static_cast<size_t>(a) * size + b) * size + c] = static_cast<uint8_t>(v);
    }

    std::string name_of(int i) const {
        return names.empty() ? std::to_string(i) : names[i];
    }

    bool operator==(const FiniteAlgebra& o) const {
        return size == o.size && table == o.table;
    }

    // The n-element projection minority algebra: minority identities, and the
    // second argument on triples of pairwise distinct elements.
    static FiniteAlgebra projection_minority(int n);

    // Minority identities pinned, uniform random conservative values on
    // pairwise distinct triples.
    static FiniteAlgebra random_conservative_minority(int n, Rng& rng);

    // Random conservative Maltsev table (not necessarily minority).
    static FiniteAlgebra random_conservative_maltsev(int n, Rng& rng);
};

// A congruence stored as a canonical partition: classes sorted by least
// element, each class sorted. Equality of congruences is structural equality.
struct Congruence {
    std::vector<std::vector<int>> classes;
    std::vector<int> class_of;

    static Congruence from_class_map(const std::vector<int>& cls);
    static Congruence equality(int n);
    static Congruence full(int n);

    int size() const { return static_cast<int>(class_of.size()); }
    bool related(int a, int b) const { return class_of[a] == class_of[b]; }
    bool is_equality() const { return classes.size() == class_of.size(); }
    bool is_full() const { return classes.size() == 1 && !class_of.empty(); }
    int nontrivial_class_count() const;
    // at most one class of size >= 2
    bool is_block() const { return nontrivial_class_count() <= 1; }
    // refinement order: every class of *this contained in a class of o
    bool finer_or_equal(const Congruence& o) const;

    bool operator==(const Congruence& o) const { return classes == o.classes; }
    bool operator<(const Congruence& o) const { return classes < o.classes; }
};

// A named tuple-set over element indices.
struct Relation {
    int arity = 1;
    std::vector<std::vector<int>> tuples;  // sorted, unique

    static Relation make(int arity, std::vector<std::vector<int>> tuples);
    bool contains(const std::vector<int>& t) const;
    bool operator==(const Relation& o) const { return arity == o.arity && tuples == o.tuples; }
    bool operator<(const Relation& o) const {
        return arity != o.arity ? arity < o.arity : tuples < o.tuples;
    }
};

struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InternalInconsistency : std::logic_error {
    using std::logic_error::logic_error;
};

OpFlags check_flags(const FiniteAlgebra& alg);

// A conservative minority operation in the clone of a conservative Maltsev
// algebra, found by generating ternary term operations to closure.
FiniteAlgebra derive_minority(const FiniteAlgebra& alg);

bool preserves(const FiniteAlgebra& alg, const Relation& r);

Congruence principal_congruence(const FiniteAlgebra& alg, int a, int b);
Congruence congruence_generated_by(const FiniteAlgebra& alg,
                                   const std::vector<std::pair<int, int>>& pairs);
std::vector<Congruence> congruence_lattice(const FiniteAlgebra& alg);
std::vector<Congruence> block_congruences(const FiniteAlgebra& alg);
std::vector<Congruence> atomic_congruences(const FiniteAlgebra& alg);
bool is_subdirectly_irreducible(const FiniteAlgebra& alg);
Congruence monolith(const FiniteAlgebra& alg);
Congruence max_proper_congruence(const FiniteAlgebra& alg);

struct Quotient {
    FiniteAlgebra algebra;
    std::vector<int> natural_map;  // element -> class index
};
Quotient quotient(const FiniteAlgebra& alg, const Congruence& theta);

struct Subalgebra {
    FiniteAlgebra algebra;
    std::vector<int> elements;  // sub index -> parent index
};
Subalgebra subalgebra(const FiniteAlgebra& alg, const std::vector<int>& subset);

Relation congruence_to_relation(const Congruence& c);

// all isomorphisms alg1 -> alg2, as maps index -> index
std::vector<std::vector<int>> algebra_isomorphisms(const FiniteAlgebra& a1,
                                                   const FiniteAlgebra& a2);

bool is_simple(const FiniteAlgebra& alg);

} // namespace csptk
