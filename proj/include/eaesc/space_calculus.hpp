#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eaesc/errors.hpp"

namespace eaesc::space {

// gen * Z; gen 0 is {0}, gen 1 is Z.
struct IdealZ {
    unsigned long gen = 0;
    friend bool operator==(const IdealZ& a, const IdealZ& b) { return a.gen == b.gen; }
};

IdealZ ideal_intersect(IdealZ a, IdealZ b);  // lcm
IdealZ ideal_sum(IdealZ a, IdealZ b);        // gcd
bool ideal_contains(IdealZ a, long k);
bool ideal_subset(IdealZ a, IdealZ b);       // a within b
std::string to_string(IdealZ a);

struct AtomFlags {
    // Contains a complemented copy of itself squared; unset means unknown.
    std::optional<bool> has_complemented_square;
    // Finite-dimensional atom of this dimension.
    std::optional<int> finite_dim;
};

struct Atom {
    std::string name;
    std::optional<unsigned long> iphi;  // unset: I_Phi not declared
    AtomFlags flags;
    std::string citation;
};

// Multiset of atom names; nested sums are flattened on parse.
using Desc = std::vector<std::string>;
Desc parse_desc(const std::string& expr);  // "a + b", "a (+) b", "a ⊕ b"
std::string to_string(const Desc& d);

enum class Relation { Unknown, ProjectivelyIncomparable, EssentiallyIncomparable, TotallyIncomparable, Isomorphic };
std::string to_string(Relation r);
std::optional<Relation> parse_relation(const std::string& s);

struct ComplementedFact {
    std::string atom;  // isomorphic to a complemented subspace of `in`
    Desc in;
    std::string citation;
};

// k in I_SC(x, y), declared as an axiom.
struct WitnessFact {
    Desc x, y;
    long k = 0;
    std::string citation;
};

class RelationTable {
public:
    RelationTable() = default;
    explicit RelationTable(std::vector<Atom> atoms);

    void add_atom(Atom a);
    void relate(const std::string& a, const std::string& b, Relation r);
    void add_complemented(ComplementedFact f);
    void add_witness(WitnessFact f);

    const Atom& atom(const std::string& name) const;  // throws UnknownAtom
    bool has_atom(const std::string& name) const { return idx_.count(name) != 0; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<ComplementedFact>& complemented() const { return comp_; }
    const std::vector<WitnessFact>& witnesses() const { return wit_; }
    const std::map<std::pair<std::string, std::string>, Relation>& declared() const { return decl_; }

    // Closed relation: isomorphism classes, strength chain, finite atoms.
    Relation relation(const std::string& a, const std::string& b) const;
    bool isomorphic(const std::string& a, const std::string& b) const;
    bool ess_incomparable(const std::string& a, const std::string& b) const;
    bool ess_incomparable(const Desc& x, const Desc& y) const;  // componentwise
    std::string iso_rep(const std::string& a) const;
    // declared I_Phi generator of any atom isomorphic to a
    std::optional<unsigned long> class_iphi(const std::string& a) const;

private:
    void close();
    std::vector<Atom> atoms_;
    std::map<std::string, int> idx_;
    std::map<std::pair<std::string, std::string>, Relation> decl_;
    std::vector<ComplementedFact> comp_;
    std::vector<WitnessFact> wit_;
    std::vector<int> cls_;                 // iso class per atom
    std::map<std::pair<int, int>, int> strength_;  // class pair -> 0..3
};

struct Bounds {
    IdealZ lower, upper;  // lower within the true ideal within upper
    bool exact() const { return lower == upper; }
};

Bounds iphi_of(const Desc& x, const RelationTable& rel);

struct EaeBounds {
    // eae generates an ideal between these; eae = lower.gen when exact.
    Bounds ideal;
    bool exact() const { return ideal.exact(); }
    unsigned long value() const { return ideal.lower.gen; }
};
EaeBounds eae_index(const Desc& x, const Desc& y, const RelationTable& rel);

struct RuleStep {
    std::string rule;  // citation label
    std::string detail;
};

struct IscBounds {
    IdealZ lower;   // certified subset
    IdealZ upper;   // certified superset
    bool exact = false;
    // Every multiple of any of these lies in I_SC; lower is their gcd when
    // additivity is certified, otherwise the smallest of them.
    std::vector<unsigned long> known;
    bool additive = false;
    std::vector<RuleStep> trail;
    bool contains_certified(long k) const;
};
IscBounds isc_bounds(const Desc& x, const Desc& y, const RelationTable& rel);

struct ScIndex {
    bool exact = false;
    unsigned long value = 0;           // when exact
    unsigned long lo = 0;              // otherwise sc is 0 or in [lo, hi]
    std::optional<unsigned long> hi;   // unset: unbounded
};
ScIndex sc_index(const IscBounds& b);
ScIndex sc_index(const Desc& x, const Desc& y, const RelationTable& rel);

enum class VerdictKind { EqualNonempty, EqualEmpty, StrictlyContained, Unknown };
std::string to_string(VerdictKind v);

struct Verdict {
    long k = 0;
    VerdictKind kind = VerdictKind::Unknown;
    std::vector<RuleStep> trail;
};
Verdict verdict(const Desc& x, const Desc& y, const RelationTable& rel, long k);
Verdict verdict(const EaeBounds& e, const IscBounds& b, long k);

// ---- scenario library ----

struct Expectation {
    std::string claim;   // eae | sc | isc | isc_exact | verdict
    int pair = 0;
    long k = 0;          // verdict claims only
    std::string expected;
    std::string citation;
};

struct SpaceScenario {
    std::string name;
    std::string description;
    RelationTable rel;
    std::vector<std::pair<Desc, Desc>> pairs;
    std::vector<long> ks;
    std::vector<Expectation> expectations;
};

std::vector<SpaceScenario> builtin_scenarios();
std::optional<SpaceScenario> find_builtin(const std::string& name);

struct PairResult {
    Desc x, y;
    Bounds iphi_x, iphi_y;
    EaeBounds eae;
    IscBounds isc;
    ScIndex sc;
    std::vector<Verdict> verdicts;
};
PairResult evaluate(const Desc& x, const Desc& y, const RelationTable& rel, const std::vector<long>& ks);

struct ExpectationResult {
    Expectation e;
    std::string actual;
    bool pass = false;
};
ExpectationResult check(const Expectation& e, const std::vector<PairResult>& results);

// Atoms with a concrete model in the operator class: finite atoms as
// Fin(dim), atoms with exact I_Phi = Z as Seq.
bool shift_realizable(const Atom& a);

}  // namespace eaesc::space
