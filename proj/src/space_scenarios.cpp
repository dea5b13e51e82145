#include <algorithm>

#include "eaesc/space_calculus.hpp"

namespace eaesc::space {

namespace {

Atom atom(std::string name, std::optional<unsigned long> iphi, std::string cite, std::optional<bool> square = std::nullopt) {
    Atom a;
    a.name = std::move(name);
    a.iphi = iphi;
    a.citation = std::move(cite);
    a.flags.has_complemented_square = square;
    return a;
}

// Classical spaces with unconditional bases, isomorphic to their hyperplanes
// and to their squares.
Atom classical(const std::string& name) { return atom(name, 1, "isomorphic to its hyperplanes", true); }
Atom gm(const std::string& name, unsigned long k0) { return atom(name, k0, "Thm 6.1(iv): I_Phi(X_GM(k0)) = k0 Z"); }
Atom gm_subspace(const std::string& name) {
    return atom(name, std::nullopt, "Lemma 6.2(ii): infinite-dimensional, infinite-codimensional subspace of X_GM(k0)");
}
Atom gowers(const std::string& name) { return atom(name, 0, "Thm 6.3: not isomorphic to any proper subspace"); }

const std::vector<long> kDefaultKs{-6, -5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5, 6};

void tot(SpaceScenario& s, const std::string& a, const std::string& b) {
    s.rel.relate(a, b, Relation::TotallyIncomparable);
}

void expect(SpaceScenario& s, std::string claim, std::string value, std::string cite, int pair = 0, long k = 0) {
    s.expectations.push_back({std::move(claim), pair, k, std::move(value), std::move(cite)});
}

std::string u(unsigned long v) { return std::to_string(v); }

std::string ideal(unsigned long g) { return to_string(IdealZ{g}); }

// verdicts for every k in the scenario from a predicate
template <class F>
void expect_verdicts(SpaceScenario& s, F f, const std::string& cite, int pair = 0) {
    for (long k : s.ks) expect(s, "verdict", to_string(f(k)), cite, pair, k);
}

bool divides(unsigned long g, long k) { return ideal_contains({g}, k); }

SpaceScenario lp_lq() {
    SpaceScenario s;
    s.name = "lp-lq";
    s.description = "X = l_p, Y = l_q with p != q: essentially incomparable, both isomorphic to their hyperplanes";
    s.rel = RelationTable({classical("lp"), classical("lq")});
    tot(s, "lp", "lq");
    s.pairs = {{{"lp"}, {"lq"}}};
    s.ks = kDefaultKs;
    expect(s, "eae", "1", "Thm 1.2(ii)");
    expect(s, "sc", "0", "Thm 1.7(i)");
    expect(s, "isc", "{0}", "Thm 1.7(i)");
    expect_verdicts(s, [](long k) { return k == 0 ? VerdictKind::EqualNonempty : VerdictKind::StrictlyContained; },
                    "Thm 1.2(ii)");
    return s;
}

SpaceScenario gm_vs_l2(unsigned long k0) {
    SpaceScenario s;
    s.name = "gm-vs-l2-k" + u(k0);
    s.description = "X = X_GM(" + u(k0) + "), Y = l2: totally incomparable";
    s.rel = RelationTable({gm("GM", k0), classical("l2")});
    tot(s, "GM", "l2");
    s.pairs = {{{"GM"}, {"l2"}}};
    s.ks = kDefaultKs;
    expect(s, "eae", u(k0), "Thm 1.7(ii)");
    expect(s, "sc", "0", "Thm 1.7(i)");
    expect(s, "isc", "{0}", "Thm 1.7(i)");
    expect_verdicts(
        s,
        [k0](long k) {
            if (k == 0) return VerdictKind::EqualNonempty;
            return divides(k0, k) ? VerdictKind::StrictlyContained : VerdictKind::EqualEmpty;
        },
        "Remark after Thm 1.11(i)");
    return s;
}

// Shared pieces of the Thm 1.9 / 1.11 configurations.
void gm_family(SpaceScenario& s, unsigned long k0) {
    s.rel.add_atom(gm("GM", k0));
    s.rel.add_atom(gm_subspace("Y2"));
    s.rel.add_witness({{"GM"}, {"Y2"}, long(k0), "Lemma 6.2(ii)"});
}

SpaceScenario improj_equal(unsigned long k0, bool suffix) {
    SpaceScenario s;
    s.name = suffix ? "improj-equal-k" + u(k0) : "improj-equal";
    s.description = "X = X_GM(" + u(k0) + "), Y = l2 + Y2 with Y2 the subspace of Lemma 6.2(ii)";
    gm_family(s, k0);
    s.rel.add_atom(classical("l2"));
    tot(s, "GM", "l2");
    tot(s, "Y2", "l2");
    s.pairs = {{{"GM"}, {"l2", "Y2"}}};
    s.ks = kDefaultKs;
    expect(s, "eae", u(k0), "Thm 1.9(i)");
    expect(s, "sc", u(k0), "Thm 1.9(i)");
    expect(s, "isc", ideal(k0), "Lemma 5.1(iv)");
    expect_verdicts(s, [k0](long k) { return divides(k0, k) ? VerdictKind::EqualNonempty : VerdictKind::EqualEmpty; },
                    "Remark after Thm 1.11(ii)");
    return s;
}

SpaceScenario improj_k0(unsigned long k0, bool suffix) {
    SpaceScenario s;
    s.name = suffix ? "improj-k0-k" + u(k0) : "improj-k0";
    s.description = "X = l1 + X_GM(" + u(k0) + "), Y = c0 + Y2";
    gm_family(s, k0);
    s.rel.add_atom(classical("l1"));
    s.rel.add_atom(classical("c0"));
    tot(s, "l1", "c0");
    tot(s, "l1", "Y2");
    tot(s, "GM", "c0");
    tot(s, "l1", "GM");
    tot(s, "c0", "Y2");
    s.pairs = {{{"l1", "GM"}, {"c0", "Y2"}}};
    s.ks = kDefaultKs;
    expect(s, "eae", "1", "Thm 1.9(ii)");
    expect(s, "isc", ideal(k0), "Thm 1.9(ii)");
    expect(s, "sc", u(k0), "Thm 1.9(ii)");
    expect_verdicts(
        s, [k0](long k) { return divides(k0, k) ? VerdictKind::EqualNonempty : VerdictKind::StrictlyContained; },
        "Remark after Thm 1.11(iii)");
    return s;
}

SpaceScenario united(unsigned long k0, bool second, bool suffix) {
    SpaceScenario s;
    std::string base = second ? "united-ii" : "united-i";
    s.name = suffix ? base + "-k" + u(k0) : base;
    gm_family(s, k0);
    s.rel.add_atom(gowers("XG"));
    s.rel.add_atom(classical("c0"));
    tot(s, "GM", "XG");
    tot(s, "Y2", "XG");
    tot(s, "c0", "XG");
    tot(s, "GM", "c0");
    tot(s, "Y2", "c0");
    Desc x{"GM", "XG"};
    if (second) {
        s.rel.add_atom(classical("l1"));
        tot(s, "l1", "c0");
        tot(s, "l1", "Y2");
        tot(s, "l1", "XG");
        tot(s, "l1", "GM");
        x.insert(x.begin(), "l1");
    }
    s.description = "X = " + to_string(x) + ", Y = c0 + Y2 + XG with XG Gowers' hyperplane space, k0 = " + u(k0);
    s.pairs = {{x, {"c0", "Y2", "XG"}}};
    s.ks = kDefaultKs;
    if (second) {
        expect(s, "eae", "1", "Thm 1.11(ii)");
        expect(s, "isc", ideal(k0), "Thm 1.11(ii)");
        expect(s, "sc", u(k0), "Thm 1.11(ii)");
        expect_verdicts(
            s, [k0](long k) { return divides(k0, k) ? VerdictKind::EqualNonempty : VerdictKind::StrictlyContained; },
            "Remark after Thm 1.11(iii)");
    } else {
        expect(s, "eae", u(k0), "Thm 1.11(i)");
        expect(s, "sc", u(k0), "Thm 1.11(i)");
        expect(s, "isc", ideal(k0), "Lemma 5.1(iv)");
        expect_verdicts(s, [k0](long k) { return divides(k0, k) ? VerdictKind::EqualNonempty : VerdictKind::EqualEmpty; },
                        "Remark after Thm 1.11(ii)");
    }
    return s;
}

SpaceScenario beyond_proj() {
    SpaceScenario s;
    s.name = "beyond-proj";
    s.description = "X = X1 + X2, Y = Y1 + Y2 with X2 ~ Y2 and X1, X2, Y1 pairwise essentially incomparable";
    s.rel = RelationTable({classical("l1"), classical("c0"), gm("GM", 3), gm("GMc", 3), classical("l2"),
                           classical("l2c")});
    s.rel.relate("GM", "GMc", Relation::Isomorphic);
    s.rel.relate("l2", "l2c", Relation::Isomorphic);
    for (auto [a, b] : std::vector<std::pair<const char*, const char*>>{
             {"l1", "c0"}, {"l1", "GM"}, {"c0", "GM"}, {"l1", "l2"}, {"c0", "l2"}, {"GM", "l2"}})
        tot(s, a, b);
    s.pairs = {{{"l1", "GM"}, {"c0", "GMc"}}, {{"l1", "l2"}, {"c0", "l2c"}}};
    s.ks = kDefaultKs;
    expect(s, "eae", "1", "Prop 1.10", 0);
    expect(s, "sc", "3", "Prop 1.10: sc(X,Y) = eae(X2,Y2) = 3", 0);
    expect(s, "isc", "3Z", "Prop 1.10: I_SC(X,Y) = I_Phi(X2)", 0);
    expect(s, "sc", "1", "Prop 1.10: sc(X,Y) = eae(X2,Y2) = 1", 1);
    expect(s, "isc", "Z", "Prop 1.10: I_SC(X,Y) = I_Phi(X2)", 1);
    return s;
}

SpaceScenario james_triple() {
    SpaceScenario s;
    s.name = "james-triple";
    s.description = "X = Jp + Jp + Jq, Y = Jp + Jq + Jq with James spaces, p != q";
    s.rel = RelationTable({atom("Jp", 1, "Ex. 5.9(i): isomorphic to its hyperplanes", false),
                           atom("Jq", 1, "Ex. 5.9(i): isomorphic to its hyperplanes", false)});
    s.rel.relate("Jp", "Jq", Relation::EssentiallyIncomparable);
    s.pairs = {{{"Jp", "Jp", "Jq"}, {"Jp", "Jq", "Jq"}}};
    s.ks = kDefaultKs;
    expect(s, "eae", "1", "Ex. 5.9");
    expect(s, "isc", "Z", "Ex. 5.9");
    expect(s, "sc", "1", "Ex. 5.9");
    expect_verdicts(s, [](long) { return VerdictKind::EqualNonempty; }, "Ex. 5.9");
    return s;
}

SpaceScenario gm_hyperplane() {
    SpaceScenario s;
    s.name = "gm-hyperplane";
    s.description = "X = XG (Gowers' hyperplane space), Y = l2: I_Phi(X) = {0} forces eae = 0";
    s.rel = RelationTable({gowers("XG"), classical("l2")});
    s.pairs = {{{"XG"}, {"l2"}}};
    s.ks = kDefaultKs;
    expect(s, "eae", "0", "Remark 5.6(ii)");
    expect(s, "sc", "0", "Remark 5.6(ii)");
    expect(s, "isc", "{0}", "Remark 5.6(ii)");
    expect_verdicts(s, [](long k) { return k == 0 ? VerdictKind::EqualNonempty : VerdictKind::EqualEmpty; },
                    "Remark 5.6(ii)");
    return s;
}

SpaceScenario open_gap() {
    SpaceScenario s;
    s.name = "open-gap";
    s.description = "Two atoms with undeclared I_Phi and no relation facts: the engine must not guess";
    s.rel = RelationTable({atom("A", std::nullopt, "undeclared"), atom("B", std::nullopt, "undeclared")});
    s.pairs = {{{"A"}, {"B"}}};
    s.ks = {-2, -1, 0, 1, 2};
    expect(s, "sc", "unknown", "Question 5.10");
    expect(s, "verdict", "EqualNonempty", "Lemma 5.1(i)", 0, 0);
    expect(s, "verdict", "Unknown", "Question 5.10", 0, 1);
    return s;
}

}  // namespace

std::vector<SpaceScenario> builtin_scenarios() {
    std::vector<SpaceScenario> v;
    v.push_back(lp_lq());
    for (unsigned long k0 = 0; k0 <= 5; ++k0) v.push_back(gm_vs_l2(k0));
    v.push_back(improj_equal(3, false));
    for (unsigned long k0 = 1; k0 <= 5; ++k0) v.push_back(improj_equal(k0, true));
    v.push_back(improj_k0(3, false));
    for (unsigned long k0 = 1; k0 <= 5; ++k0) v.push_back(improj_k0(k0, true));
    v.push_back(united(3, false, false));
    v.push_back(united(3, true, false));
    for (unsigned long k0 = 1; k0 <= 5; ++k0) {
        v.push_back(united(k0, false, true));
        v.push_back(united(k0, true, true));
    }
    v.push_back(beyond_proj());
    v.push_back(james_triple());
    v.push_back(gm_hyperplane());
    v.push_back(open_gap());
    return v;
}

std::optional<SpaceScenario> find_builtin(const std::string& name) {
    for (auto& s : builtin_scenarios())
        if (s.name == name) return s;
    return std::nullopt;
}

namespace {

std::string sc_string(const ScIndex& s) {
    if (s.exact) return std::to_string(s.value);
    return "unknown";
}

}  // namespace

ExpectationResult check(const Expectation& e, const std::vector<PairResult>& results) {
    ExpectationResult r{e, "", false};
    if (e.pair < 0 || e.pair >= int(results.size())) {
        r.actual = "no such pair";
        return r;
    }
    const PairResult& p = results[e.pair];
    if (e.claim == "eae") {
        r.actual = p.eae.exact() ? std::to_string(p.eae.value()) : "unknown";
    } else if (e.claim == "sc") {
        r.actual = sc_string(p.sc);
    } else if (e.claim == "isc") {
        r.actual = p.isc.exact ? to_string(p.isc.lower) : "unknown";
    } else if (e.claim == "isc_exact") {
        r.actual = p.isc.exact ? "true" : "false";
    } else if (e.claim == "iphi_x" || e.claim == "iphi_y") {
        const Bounds& b = e.claim == "iphi_x" ? p.iphi_x : p.iphi_y;
        r.actual = b.exact() ? to_string(b.lower) : "unknown";
    } else if (e.claim == "verdict") {
        auto it = std::find_if(p.verdicts.begin(), p.verdicts.end(), [&](const Verdict& v) { return v.k == e.k; });
        r.actual = it == p.verdicts.end() ? "k not evaluated" : to_string(it->kind);
    } else {
        r.actual = "unknown claim";
        return r;
    }
    r.pass = r.actual == e.expected;
    return r;
}

}  // namespace eaesc::space
