#include "eaesc/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "eaesc/coupling.hpp"
#include "eaesc/random_ops.hpp"

namespace eaesc::cli {

using space::Desc;
using space::SpaceScenario;

namespace {

[[noreturn]] void bad(const std::string& ptr, const std::string& msg) {
    throw SchemaError("at " + (ptr.empty() ? std::string("/") : ptr) + ": " + msg);
}

std::string sub(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string sub(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

const Json& need(const Json& obj, const std::string& ptr, const std::string& key) {
    if (!obj.is_object()) bad(ptr, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) bad(ptr, "missing field \"" + key + "\"");
    return *it;
}

const Json* opt(const Json& obj, const std::string& key) {
    auto it = obj.find(key);
    return it == obj.end() || it->is_null() ? nullptr : &*it;
}

std::string str(const Json& j, const std::string& ptr) {
    if (!j.is_string()) bad(ptr, "expected a string");
    return j.get<std::string>();
}

long integer(const Json& j, const std::string& ptr) {
    if (!j.is_number_integer()) bad(ptr, "expected an integer");
    return j.get<long>();
}

const Json& array(const Json& j, const std::string& ptr) {
    if (!j.is_array()) bad(ptr, "expected an array");
    return j;
}

Scalar rational(const Json& j, const std::string& ptr) {
    if (j.is_number_integer()) return Scalar(j.get<long>());
    if (!j.is_string()) bad(ptr, "expected a rational string \"p/q\"");
    try {
        return parse_scalar(j.get<std::string>());
    } catch (const std::exception& e) {
        bad(ptr, e.what());
    }
}

// ---- space scenarios ----

Desc desc(const Json& j, const std::string& ptr, const space::RelationTable& rel) {
    Desc d;
    if (j.is_string()) {
        try {
            d = space::parse_desc(j.get<std::string>());
        } catch (const Error& e) {
            bad(ptr, e.what());
        }
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            Desc part;
            try {
                part = space::parse_desc(str(j[i], sub(ptr, i)));
            } catch (const SchemaError&) {
                throw;
            } catch (const Error& e) {
                bad(sub(ptr, i), e.what());
            }
            d.insert(d.end(), part.begin(), part.end());
        }
    } else {
        bad(ptr, "expected a space expression (string or array of strings)");
    }
    for (const auto& a : d)
        if (!rel.has_atom(a)) bad(ptr, "unknown atom \"" + a + "\"");
    return d;
}

const std::vector<std::string> kSpaceClaims{"eae", "sc", "isc", "isc_exact", "iphi_x", "iphi_y", "verdict"};

std::string expected_string(const Json& j, const std::string& ptr) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long>());
    if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
    bad(ptr, "expected a string, integer or boolean");
}

std::string citation_of(const Json& j) {
    const Json* c = opt(j, "citation");
    return c && c->is_string() ? c->get<std::string>() : "";
}

Json ideal_json(space::IdealZ a) { return space::to_string(a); }

Json tagged(Json v, bool certified = true) {
    Json o;
    o["value"] = std::move(v);
    o["tag"] = certified ? "exact" : "non-certified";
    return o;
}

Json bounds_json(const space::Bounds& b) {
    if (b.exact()) return tagged(ideal_json(b.lower));
    Json v;
    v["lower"] = ideal_json(b.lower);
    v["upper"] = ideal_json(b.upper);
    return tagged(v);
}

std::string sc_text(const space::ScIndex& sc) {
    if (sc.exact) return std::to_string(sc.value);
    std::string hi = sc.hi ? std::to_string(*sc.hi) : "inf";
    return "0 or in [" + std::to_string(sc.lo) + ", " + hi + "]";
}

// FNV-1a, so seeds do not depend on the standard library's hash.
unsigned long long fnv(const std::string& s) {
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string pass_word(bool p) { return p ? "PASS" : "FAIL"; }

}  // namespace

Json parse_text(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1, col = 1;
        std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string msg = e.what();
        auto p = msg.find("parse error");
        if (p != std::string::npos) msg = msg.substr(p);
        throw SchemaError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
    }
}

SpaceScenario parse_space(const Json& j) {
    SpaceScenario s;
    if (!j.is_object()) bad("", "expected an object");
    if (const Json* n = opt(j, "name")) s.name = str(*n, "/name");
    if (const Json* d = opt(j, "description")) s.description = str(*d, "/description");

    const Json& atoms = array(need(j, "", "atoms"), "/atoms");
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        std::string p = sub("/atoms", i);
        const Json& aj = atoms[i];
        space::Atom a;
        a.name = str(need(aj, p, "name"), sub(p, "name"));
        if (a.name.empty() || a.name == "0") bad(sub(p, "name"), "invalid atom name");
        if (s.rel.has_atom(a.name)) bad(sub(p, "name"), "duplicate atom \"" + a.name + "\"");
        if (const Json* ip = opt(aj, "iphi")) {
            long g = integer(*ip, sub(p, "iphi"));
            if (g < 0) bad(sub(p, "iphi"), "ideal generator must be nonnegative");
            a.iphi = static_cast<unsigned long>(g);
        }
        if (const Json* fl = opt(aj, "flags")) {
            if (!fl->is_object()) bad(sub(p, "flags"), "expected an object");
            if (const Json* sq = opt(*fl, "has_complemented_square")) {
                if (!sq->is_boolean()) bad(sub(p, "flags/has_complemented_square"), "expected a boolean");
                a.flags.has_complemented_square = sq->get<bool>();
            }
            if (const Json* fd = opt(*fl, "finite_dim")) {
                long n = integer(*fd, sub(p, "flags/finite_dim"));
                if (n < 0) bad(sub(p, "flags/finite_dim"), "dimension must be nonnegative");
                a.flags.finite_dim = int(n);
            }
        }
        a.citation = citation_of(aj);
        try {
            s.rel.add_atom(a);
        } catch (const Error& e) {
            bad(p, e.what());
        }
    }

    auto atom_name = [&](const Json& x, const std::string& p) {
        std::string n = str(x, p);
        if (!s.rel.has_atom(n)) bad(p, "unknown atom \"" + n + "\"");
        return n;
    };

    if (const Json* rs = opt(j, "relations")) {
        array(*rs, "/relations");
        for (std::size_t i = 0; i < rs->size(); ++i) {
            std::string p = sub("/relations", i);
            const Json& r = array((*rs)[i], p);
            if (r.size() < 3 || r.size() > 4) bad(p, "expected [a, b, relation] or [a, b, relation, citation]");
            std::string a = atom_name(r[0], sub(p, 0)), b = atom_name(r[1], sub(p, 1));
            auto rel = space::parse_relation(str(r[2], sub(p, 2)));
            if (!rel) bad(sub(p, 2), "unknown relation \"" + r[2].get<std::string>() + "\"");
            try {
                s.rel.relate(a, b, *rel);
            } catch (const Error& e) {
                bad(p, std::string(e.kind()) + ": " + e.what());
            }
        }
    }
    if (const Json* cs = opt(j, "complemented")) {
        array(*cs, "/complemented");
        for (std::size_t i = 0; i < cs->size(); ++i) {
            std::string p = sub("/complemented", i);
            const Json& c = array((*cs)[i], p);
            if (c.size() < 2 || c.size() > 3) bad(p, "expected [atom, space] or [atom, space, citation]");
            space::ComplementedFact f{atom_name(c[0], sub(p, 0)), desc(c[1], sub(p, 1), s.rel), ""};
            if (c.size() == 3) f.citation = str(c[2], sub(p, 2));
            s.rel.add_complemented(f);
        }
    }
    if (const Json* ws = opt(j, "sc_witnesses")) {
        array(*ws, "/sc_witnesses");
        for (std::size_t i = 0; i < ws->size(); ++i) {
            std::string p = sub("/sc_witnesses", i);
            const Json& w = array((*ws)[i], p);
            if (w.size() < 3 || w.size() > 4) bad(p, "expected [X, Y, k] or [X, Y, k, citation]");
            space::WitnessFact f{desc(w[0], sub(p, 0), s.rel), desc(w[1], sub(p, 1), s.rel), integer(w[2], sub(p, 2)), ""};
            if (w.size() == 4) f.citation = str(w[3], sub(p, 3));
            try {
                s.rel.add_witness(f);
            } catch (const Error& e) {
                bad(p, std::string(e.kind()) + ": " + e.what());
            }
        }
    }

    const Json& pairs = array(need(j, "", "pairs"), "/pairs");
    if (pairs.empty()) bad("/pairs", "at least one pair is required");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        std::string p = sub("/pairs", i);
        const Json& pr = array(pairs[i], p);
        if (pr.size() != 2) bad(p, "expected [X, Y]");
        s.pairs.emplace_back(desc(pr[0], sub(p, 0), s.rel), desc(pr[1], sub(p, 1), s.rel));
    }

    if (const Json* ks = opt(j, "ks")) {
        array(*ks, "/ks");
        for (std::size_t i = 0; i < ks->size(); ++i) s.ks.push_back(integer((*ks)[i], sub("/ks", i)));
    } else {
        for (long k = -6; k <= 6; ++k) s.ks.push_back(k);
    }

    if (const Json* es = opt(j, "expectations")) {
        array(*es, "/expectations");
        for (std::size_t i = 0; i < es->size(); ++i) {
            std::string p = sub("/expectations", i);
            const Json& ej = (*es)[i];
            space::Expectation e;
            e.claim = str(need(ej, p, "claim"), sub(p, "claim"));
            if (std::find(kSpaceClaims.begin(), kSpaceClaims.end(), e.claim) == kSpaceClaims.end())
                bad(sub(p, "claim"), "unknown claim \"" + e.claim + "\"");
            if (const Json* pj = opt(ej, "pair")) e.pair = int(integer(*pj, sub(p, "pair")));
            if (e.pair < 0 || e.pair >= int(s.pairs.size())) bad(sub(p, "pair"), "no such pair");
            if (const Json* kj = opt(ej, "k")) {
                e.k = integer(*kj, sub(p, "k"));
            } else if (e.claim == "verdict") {
                bad(p, "verdict claims need \"k\"");
            }
            if (e.claim == "verdict" && std::find(s.ks.begin(), s.ks.end(), e.k) == s.ks.end())
                bad(sub(p, "k"), "k is not among the evaluated ks");
            e.expected = expected_string(need(ej, p, "expected"), sub(p, "expected"));
            e.citation = citation_of(ej);
            s.expectations.push_back(e);
        }
    }
    return s;
}

Json space_to_json(const SpaceScenario& s) {
    Json j;
    j["kind"] = "space";
    j["name"] = s.name;
    if (!s.description.empty()) j["description"] = s.description;
    Json atoms = Json::array();
    for (const auto& a : s.rel.atoms()) {
        Json aj;
        aj["name"] = a.name;
        aj["iphi"] = a.iphi ? Json(*a.iphi) : Json(nullptr);
        Json fl = Json::object();
        if (a.flags.has_complemented_square) fl["has_complemented_square"] = *a.flags.has_complemented_square;
        if (a.flags.finite_dim) fl["finite_dim"] = *a.flags.finite_dim;
        aj["flags"] = fl;
        if (!a.citation.empty()) aj["citation"] = a.citation;
        atoms.push_back(aj);
    }
    j["atoms"] = atoms;
    Json rels = Json::array();
    for (const auto& [ab, r] : s.rel.declared()) rels.push_back(Json::array({ab.first, ab.second, space::to_string(r)}));
    j["relations"] = rels;
    Json comp = Json::array();
    for (const auto& c : s.rel.complemented()) {
        Json e = Json::array({c.atom, space::to_string(c.in)});
        if (!c.citation.empty()) e.push_back(c.citation);
        comp.push_back(e);
    }
    j["complemented"] = comp;
    Json wit = Json::array();
    for (const auto& w : s.rel.witnesses()) {
        Json e = Json::array({space::to_string(w.x), space::to_string(w.y), w.k});
        if (!w.citation.empty()) e.push_back(w.citation);
        wit.push_back(e);
    }
    j["sc_witnesses"] = wit;
    Json pairs = Json::array();
    for (const auto& [x, y] : s.pairs) pairs.push_back(Json::array({space::to_string(x), space::to_string(y)}));
    j["pairs"] = pairs;
    j["ks"] = s.ks;
    Json ex = Json::array();
    for (const auto& e : s.expectations) {
        Json o;
        o["claim"] = e.claim;
        o["pair"] = e.pair;
        if (e.claim == "verdict") o["k"] = e.k;
        o["expected"] = e.expected;
        if (!e.citation.empty()) o["citation"] = e.citation;
        ex.push_back(o);
    }
    j["expectations"] = ex;
    return j;
}

// ---- realization in the operator model ----

Realization realize_pair(const Desc& x, const Desc& y, const space::RelationTable& rel, long k, int window,
                         unsigned long long seed) {
    Realization r;
    auto shape_of = [&](const Desc& d, SpaceShape& out) {
        for (const auto& name : d) {
            const auto& a = rel.atom(name);
            if (!space::shift_realizable(a)) return false;
            if (a.flags.finite_dim) {
                if (*a.flags.finite_dim > 0) out.push_back(Factor::Fin(*a.flags.finite_dim));
            } else {
                out.push_back(Factor::Seq());
            }
        }
        return !out.empty();
    };
    SpaceShape xs, ys;
    if (!shape_of(x, xs) || !shape_of(y, ys)) return r;
    if (k != 0 && (seq_count(xs) == 0 || seq_count(ys) == 0)) return r;
    r.realizable = true;
    r.x_shape = to_string(xs);
    r.y_shape = to_string(ys);
    rnd::Rng rng(seed);
    BlockOp u = rnd::fredholm(rng, xs, int(k));
    BlockOp v = rnd::eae_partner(rng, u, ys);
    Witness w = k == 0 ? zero_witness(xs, ys) : witness_shared_seq(xs, ys, int(k));
    SchurCouple sc = sc_construct(w, u, v);
    r.verified = sc_verify(u, v, sc, window);
    return r;
}

// ---- space runs ----

namespace {

struct ComputationFailure {
    std::string op;
    std::string kind;
    std::string message;
};

Json remark_steps(const space::PairResult& p, bool& undecided) {
    Json steps = Json::array();
    undecided = false;
    auto step = [&](const std::string& what, Json result, const std::string& rule) {
        Json o;
        o["step"] = what;
        o["result"] = std::move(result);
        o["rule"] = rule;
        steps.push_back(o);
    };
    if (!p.eae.exact()) {
        step("compute eae", bounds_json(p.eae.ideal), "Cor 3.4");
        step("conclude", "eae is not determined by the declared facts", "Question 5.10");
        undecided = true;
        return steps;
    }
    unsigned long k0 = p.eae.value();
    step("compute eae", tagged(k0), "Cor 3.4");
    if (k0 == 0) {
        step("conclude", "eae = 0: SC_0 = EAE_0 is nonempty and SC_k = EAE_k is empty for k != 0", "Remark 5.6");
        return steps;
    }
    long k = long(k0);
    if (p.isc.contains_certified(k)) {
        step("decide k0 in I_SC", tagged(true), p.isc.trail.empty() ? "Lemma 5.1(iii)" : p.isc.trail.back().rule);
        step("conclude",
             "I_SC = eae Z, so SC_k = EAE_k for every k (nonempty exactly on " + space::to_string(space::IdealZ{k0}) + ")",
             "Lemma 5.1(iii)");
    } else if (!space::ideal_contains(p.isc.upper, k)) {
        step("decide k0 in I_SC", tagged(false), "Lemma 5.1(iv)");
        step("conclude",
             "SC_k is strictly contained in EAE_k for every k in " + space::to_string(space::IdealZ{k0}) +
                 " outside " + space::to_string(p.isc.upper),
             "Thm 1.5(i)");
    } else {
        step("decide k0 in I_SC", "unknown", "Question 5.10");
        step("conclude", "undecided from the declared facts", "Question 5.10");
        undecided = true;
    }
    return steps;
}

std::string k_list(const std::vector<long>& ks) {
    std::string s;
    for (long k : ks) s += (s.empty() ? "" : ",") + std::to_string(k);
    return s;
}

}  // namespace

Report run_space(const SpaceScenario& s, const Flags& f) {
    Report rep;
    Json j;
    j["scenario"] = s.name;
    j["kind"] = "space";
    j["inputs"] = space_to_json(s);
    std::ostringstream out;
    out << "scenario " << s.name << " (space)\n";
    if (!s.description.empty()) out << "  " << s.description << "\n";

    std::vector<space::PairResult> results;
    Json computed, pairs = Json::array(), verdicts = Json::array(), trail = Json::array();
    bool realizations_ok = true;
    std::optional<ComputationFailure> failure;

    for (std::size_t i = 0; i < s.pairs.size() && !failure; ++i) {
        const auto& [x, y] = s.pairs[i];
        space::PairResult p;
        try {
            p = space::evaluate(x, y, s.rel, s.ks);
        } catch (const Error& e) {
            failure = ComputationFailure{"isc_bounds", e.kind(), e.what()};
            break;
        }
        Json pj;
        pj["pair"] = i;
        pj["x"] = space::to_string(x);
        pj["y"] = space::to_string(y);
        pj["iphi_x"] = bounds_json(p.iphi_x);
        pj["iphi_y"] = bounds_json(p.iphi_y);
        pj["eae"] = p.eae.exact() ? tagged(p.eae.value()) : bounds_json(p.eae.ideal);
        Json isc;
        isc["lower"] = ideal_json(p.isc.lower);
        isc["upper"] = ideal_json(p.isc.upper);
        isc["exact"] = p.isc.exact;
        isc["known_generators"] = p.isc.known;
        isc["additive"] = p.isc.additive;
        pj["isc"] = tagged(isc);
        if (p.sc.exact) {
            pj["sc"] = tagged(p.sc.value);
        } else {
            Json b;
            b["zero_or_at_least"] = p.sc.lo;
            b["at_most"] = p.sc.hi ? Json(*p.sc.hi) : Json(nullptr);
            pj["sc"] = tagged(b);
        }
        bool undecided = false;
        pj["remark_5_6"] = remark_steps(p, undecided);
        for (const auto& st : p.isc.trail) {
            Json t;
            t["pair"] = i;
            t["rule"] = st.rule;
            t["detail"] = st.detail;
            trail.push_back(t);
        }

        out << "  pair " << i << ": X = " << space::to_string(x) << ", Y = " << space::to_string(y) << "\n";
        auto btxt = [](const space::Bounds& b) {
            return b.exact() ? space::to_string(b.lower)
                             : "between " + space::to_string(b.lower) + " and " + space::to_string(b.upper);
        };
        out << "    I_Phi(X) = " << btxt(p.iphi_x) << ", I_Phi(Y) = " << btxt(p.iphi_y) << "  [exact]\n";
        out << "    eae = " << (p.eae.exact() ? std::to_string(p.eae.value()) : btxt(p.eae.ideal)) << "  [exact]\n";
        out << "    I_SC = " << (p.isc.exact ? space::to_string(p.isc.lower)
                                            : "between " + space::to_string(p.isc.lower) + " and " +
                                                  space::to_string(p.isc.upper))
            << ", sc = " << sc_text(p.sc) << "  [exact]\n";
        for (const auto& st : pj["remark_5_6"])
            out << "    remark 5.6 | " << st["step"].get<std::string>() << ": "
                << (st["result"].is_object() ? st["result"]["value"].dump() : st["result"].dump()) << "  ("
                << st["rule"].get<std::string>() << ")\n";
        for (const auto& st : p.isc.trail) out << "    rule " << st.rule << ": " << st.detail << "\n";

        Json reals = Json::array();
        for (const auto& v : p.verdicts) {
            Json vj;
            vj["pair"] = i;
            vj["k"] = v.k;
            vj["verdict"] = space::to_string(v.kind);
            Json rules = Json::array();
            for (const auto& st : v.trail) rules.push_back(st.rule);
            vj["trail"] = rules;
            verdicts.push_back(vj);
            std::string rtxt;
            for (const auto& st : v.trail) rtxt += (rtxt.empty() ? "" : "; ") + st.rule;
            out << "    k=" << v.k << "  " << space::to_string(v.kind) << "  (" << rtxt << ")\n";

            if (f.realize && v.kind == space::VerdictKind::EqualNonempty) {
                Realization r;
                try {
                    r = realize_pair(x, y, s.rel, v.k, f.verify_window,
                                     fnv(s.name + "/" + std::to_string(i) + "/" + std::to_string(v.k)));
                } catch (const Error& e) {
                    failure = ComputationFailure{"sc_construct", e.kind(), e.what()};
                    break;
                } catch (const std::exception& e) {
                    failure = ComputationFailure{"sc_construct", "InternalError", e.what()};
                    break;
                }
                if (!r.realizable) continue;
                Json rj;
                rj["k"] = v.k;
                rj["x_shape"] = r.x_shape;
                rj["y_shape"] = r.y_shape;
                rj["window"] = f.verify_window;
                rj["sc_verify"] = tagged(r.verified);
                reals.push_back(rj);
                realizations_ok = realizations_ok && r.verified;
                out << "      realized on " << r.x_shape << " / " << r.y_shape << ": sc_verify "
                    << (r.verified ? "true" : "false") << "\n";
            }
        }
        pj["realizations"] = reals;
        pairs.push_back(pj);
        results.push_back(std::move(p));
    }
    computed["pairs"] = pairs;
    computed["ks"] = k_list(s.ks);
    j["computed"] = computed;
    j["verdicts"] = verdicts;
    j["rule_trail"] = trail;

    Json exps = Json::array();
    bool all = true;
    if (!failure) {
        out << "  expectations:\n";
        for (const auto& e : s.expectations) {
            auto r = space::check(e, results);
            Json ej;
            ej["claim"] = e.claim;
            ej["pair"] = e.pair;
            if (e.claim == "verdict") ej["k"] = e.k;
            ej["expected"] = e.expected;
            ej["actual"] = r.actual;
            ej["citation"] = e.citation;
            ej["pass"] = r.pass;
            exps.push_back(ej);
            all = all && r.pass;
            out << "    " << pass_word(r.pass) << " pair " << e.pair << " " << e.claim
                << (e.claim == "verdict" ? " k=" + std::to_string(e.k) : "") << " = " << r.actual
                << (r.pass ? "" : " (expected " + e.expected + ")") << (e.citation.empty() ? "" : "  [" + e.citation + "]")
                << "\n";
        }
        if (!realizations_ok) out << "    FAIL realization cross-check\n";
    }
    j["expectations"] = exps;
    if (failure) {
        Json err;
        err["op"] = failure->op;
        err["kind"] = failure->kind;
        err["message"] = failure->message;
        j["error"] = err;
        out << "  computation error in " << failure->op << ": " << failure->kind << ": " << failure->message << "\n";
        rep.pass = false;
        rep.exit_code = 3;
    } else {
        rep.pass = all && realizations_ok;
        rep.exit_code = rep.pass ? 0 : 1;
    }
    j["pass"] = rep.pass;
    out << "  result: " << pass_word(rep.pass) << "\n";
    rep.json = std::move(j);
    rep.text = out.str();
    return rep;
}

// ---- operator scenarios ----

namespace {

SpaceShape parse_shape_list(const Json& j, const std::string& ptr) {
    array(j, ptr);
    SpaceShape s;
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string t = str(j[i], sub(ptr, i));
        if (t == "Seq") {
            s.push_back(Factor::Seq());
            continue;
        }
        int n = -1;
        if (t.size() > 5 && t.rfind("Fin(", 0) == 0 && t.back() == ')') {
            try {
                std::size_t used = 0;
                std::string inner = t.substr(4, t.size() - 5);
                n = std::stoi(inner, &used);
                if (used != inner.size()) n = -1;
            } catch (const std::exception&) {
                n = -1;
            }
        }
        if (n <= 0) bad(sub(ptr, i), "expected \"Seq\" or \"Fin(n)\" with n > 0");
        s.push_back(Factor::Fin(n));
    }
    return s;
}

struct OpWorld {
    std::map<std::string, SpaceShape> shapes;
    std::map<std::string, BlockOp> ops;
    std::map<std::string, Witness> witnesses;
    std::map<std::string, SchurCouple> couples;
    std::map<std::string, Extension> extensions;
    FredholmOptions fopt;
    int window = 50;
};

SpaceShape shape_ref(const OpWorld& w, const Json& j, const std::string& ptr) {
    if (j.is_string()) {
        auto it = w.shapes.find(j.get<std::string>());
        if (it == w.shapes.end()) bad(ptr, "unknown shape \"" + j.get<std::string>() + "\"");
        return it->second;
    }
    return parse_shape_list(j, ptr);
}

SeqOp parse_entry(const Json& e, const std::string& ptr) {
    SeqOp op;
    if (e.is_null()) return op;
    if (!e.is_object()) bad(ptr, "expected null or an entry object");
    if (const Json* d = opt(e, "shift")) {
        if (e.size() != 1) bad(ptr, "\"shift\" entries take no other fields");
        return shift(int(integer(*d, sub(ptr, "shift"))));
    }
    if (const Json* m = opt(e, "matrix")) {
        if (e.size() != 1) bad(ptr, "\"matrix\" entries take no other fields");
        array(*m, sub(ptr, "matrix"));
        for (std::size_t r = 0; r < m->size(); ++r) {
            std::string pr = sub(sub(ptr, "matrix"), r);
            array((*m)[r], pr);
            for (std::size_t c = 0; c < (*m)[r].size(); ++c) {
                Scalar v = rational((*m)[r][c], sub(pr, c));
                if (v != 0) op.correction.set(int(r) + 1, int(c) + 1, v);
            }
        }
        return op;
    }
    for (const auto& [key, val] : e.items())
        if (key != "symbol" && key != "correction") bad(sub(ptr, key), "unknown entry field");
    if (const Json* sy = opt(e, "symbol")) {
        std::string ps = sub(ptr, "symbol");
        array(*sy, ps);
        for (std::size_t i = 0; i < sy->size(); ++i) {
            const Json& t = array((*sy)[i], sub(ps, i));
            if (t.size() != 2) bad(sub(ps, i), "expected [offset, \"p/q\"]");
            op.symbol.add(int(integer(t[0], sub(sub(ps, i), 0))), rational(t[1], sub(sub(ps, i), 1)));
        }
    }
    if (const Json* co = opt(e, "correction")) {
        std::string pc = sub(ptr, "correction");
        array(*co, pc);
        for (std::size_t i = 0; i < co->size(); ++i) {
            const Json& t = array((*co)[i], sub(pc, i));
            if (t.size() != 3) bad(sub(pc, i), "expected [row, col, \"p/q\"] with 1-based indices");
            long r = integer(t[0], sub(sub(pc, i), 0)), c = integer(t[1], sub(sub(pc, i), 1));
            if (r < 1 || c < 1) bad(sub(pc, i), "indices are 1-based");
            op.correction.add(int(r), int(c), rational(t[2], sub(sub(pc, i), 2)));
        }
    }
    return op;
}

BlockOp parse_operator(const OpWorld& w, const Json& oj, const std::string& ptr) {
    SpaceShape dom = shape_ref(w, need(oj, ptr, "dom"), sub(ptr, "dom"));
    SpaceShape cod = opt(oj, "cod") ? shape_ref(w, oj["cod"], sub(ptr, "cod")) : dom;
    const Json& blocks = array(need(oj, ptr, "blocks"), sub(ptr, "blocks"));
    if (blocks.size() != cod.size())
        bad(sub(ptr, "blocks"), "expected " + std::to_string(cod.size()) + " block rows (codomain factors)");
    BlockOp t(dom, cod);
    for (std::size_t r = 0; r < blocks.size(); ++r) {
        std::string pr = sub(sub(ptr, "blocks"), r);
        array(blocks[r], pr);
        if (blocks[r].size() != dom.size())
            bad(pr, "expected " + std::to_string(dom.size()) + " block columns (domain factors)");
        for (std::size_t c = 0; c < dom.size(); ++c) t.at(int(r), int(c)) = parse_entry(blocks[r][c], sub(pr, c));
    }
    try {
        t.validate();
    } catch (const Error& e) {
        bad(ptr, std::string(e.kind()) + ": " + e.what());
    }
    return t;
}

// Arguments each program operation reads, with the kind of object referenced.
enum class Arg { Op, Wit, Couple, Ext, Shape, Int, Str, OpList };
const std::map<std::string, std::vector<std::pair<std::string, Arg>>>& program_ops() {
    static const std::map<std::string, std::vector<std::pair<std::string, Arg>>> m{
        {"fredholm_data", {{"of", Arg::Op}}},
        {"index", {{"of", Arg::Op}}},
        {"eae_check", {{"u", Arg::Op}, {"v", Arg::Op}}},
        {"perturb_kernel", {{"t", Arg::Op}, {"m", Arg::Int}}},
        {"perturb_witness", {{"w", Arg::Wit}, {"m", Arg::Int}}},
        {"witness_from_complemented", {{"r", Arg::Op}, {"z", Arg::Shape}}},
        {"witness_shared_seq", {{"x", Arg::Shape}, {"y", Arg::Shape}, {"k", Arg::Int}}},
        {"zero_witness", {{"x", Arg::Shape}, {"y", Arg::Shape}}},
        {"witness_power", {{"w", Arg::Wit}, {"m", Arg::Int}}},
        {"witness_index", {{"w", Arg::Wit}}},
        {"witness_compress", {{"w", Arg::Wit}, {"u", Arg::Op}, {"v", Arg::Op}}},
        {"sc_construct", {{"w", Arg::Wit}, {"u", Arg::Op}, {"v", Arg::Op}}},
        {"sc_verify", {{"u", Arg::Op}, {"v", Arg::Op}, {"couple", Arg::Couple}}},
        {"sc_extend_blockdiag", {{"couple", Arg::Couple}, {"x1", Arg::Shape}, {"y1", Arg::Shape}}},
        {"eae_construct", {{"u", Arg::Op}, {"v", Arg::Op}}},
        {"eae_verify", {{"u", Arg::Op}, {"v", Arg::Op}, {"ext", Arg::Ext}}},
        {"compose", {{"ops", Arg::OpList}}},
        {"add", {{"a", Arg::Op}, {"b", Arg::Op}}},
        {"sub", {{"a", Arg::Op}, {"b", Arg::Op}}},
        {"random_fredholm", {{"shape", Arg::Shape}, {"k", Arg::Int}, {"seed", Arg::Int}}},
        {"eae_partner", {{"u", Arg::Op}, {"y", Arg::Shape}, {"seed", Arg::Int}}},
    };
    return m;
}

// Result kind stored under "as" by each operation.
Arg produces(const std::string& op) {
    static const std::map<std::string, Arg> m{
        {"perturb_kernel", Arg::Op},   {"perturb_witness", Arg::Wit}, {"witness_from_complemented", Arg::Wit},
        {"witness_shared_seq", Arg::Wit}, {"zero_witness", Arg::Wit}, {"witness_power", Arg::Wit},
        {"sc_construct", Arg::Couple}, {"sc_extend_blockdiag", Arg::Couple}, {"eae_construct", Arg::Ext},
        {"compose", Arg::Op},          {"add", Arg::Op},              {"sub", Arg::Op},
        {"random_fredholm", Arg::Op},  {"eae_partner", Arg::Op},
    };
    auto it = m.find(op);
    return it == m.end() ? Arg::Str : it->second;
}

struct Step {
    std::string op, as;
    Json args;
    std::string ptr;
};

struct OpScenario {
    std::string name, description;
    OpWorld world;
    std::vector<Step> program;
    struct Exp {
        std::string target, field;
        Json expected;
        std::string citation;
    };
    std::vector<Exp> expectations;
};

OpScenario parse_operator_scenario(const Json& j) {
    OpScenario s;
    if (!j.is_object()) bad("", "expected an object");
    if (const Json* n = opt(j, "name")) s.name = str(*n, "/name");
    if (const Json* d = opt(j, "description")) s.description = str(*d, "/description");
    if (const Json* sh = opt(j, "shapes")) {
        if (!sh->is_object()) bad("/shapes", "expected an object");
        for (const auto& [k, v] : sh->items()) s.world.shapes[k] = parse_shape_list(v, sub("/shapes", k));
    }
    std::map<std::string, Arg> names;
    if (const Json* os = opt(j, "operators")) {
        if (!os->is_object()) bad("/operators", "expected an object");
        for (const auto& [k, v] : os->items()) {
            s.world.ops[k] = parse_operator(s.world, v, sub("/operators", k));
            names[k] = Arg::Op;
        }
    }
    const Json& prog = array(need(j, "", "program"), "/program");
    std::map<std::string, std::string> step_of;  // result name -> op
    for (std::size_t i = 0; i < prog.size(); ++i) {
        std::string p = sub("/program", i);
        const Json& sj = prog[i];
        Step st;
        st.ptr = p;
        st.op = str(need(sj, p, "op"), sub(p, "op"));
        auto spec = program_ops().find(st.op);
        if (spec == program_ops().end()) bad(sub(p, "op"), "unknown operation \"" + st.op + "\"");
        st.as = opt(sj, "as") ? str(sj["as"], sub(p, "as")) : "step" + std::to_string(i);
        if (step_of.count(st.as) || names.count(st.as)) bad(sub(p, "as"), "name \"" + st.as + "\" already defined");
        for (const auto& [key, val] : sj.items()) {
            if (key == "op" || key == "as" || key == "backend" || key == "n") continue;
            bool known = std::any_of(spec->second.begin(), spec->second.end(), [&](const auto& a) { return a.first == key; });
            if (!known) bad(sub(p, key), "unexpected argument for " + st.op);
        }
        for (const auto& [key, kind] : spec->second) {
            const Json& a = need(sj, p, key);
            std::string pa = sub(p, key);
            auto check_ref = [&](const Json& r, const std::string& pr, Arg want) {
                std::string n = str(r, pr);
                auto it = names.find(n);
                if (it == names.end() || it->second != want) bad(pr, "no " + std::string(want == Arg::Op ? "operator" : want == Arg::Wit ? "witness" : want == Arg::Couple ? "Schur couple" : "extension") + " named \"" + n + "\"");
            };
            switch (kind) {
                case Arg::Op:
                case Arg::Wit:
                case Arg::Couple:
                case Arg::Ext:
                    check_ref(a, pa, kind);
                    break;
                case Arg::OpList:
                    array(a, pa);
                    if (a.empty()) bad(pa, "expected at least one operator");
                    for (std::size_t q = 0; q < a.size(); ++q) check_ref(a[q], sub(pa, q), Arg::Op);
                    break;
                case Arg::Shape:
                    shape_ref(s.world, a, pa);
                    break;
                case Arg::Int:
                    integer(a, pa);
                    break;
                case Arg::Str:
                    str(a, pa);
                    break;
            }
        }
        if (const Json* b = opt(sj, "backend")) {
            std::string v = str(*b, sub(p, "backend"));
            if (st.op != "fredholm_data") bad(sub(p, "backend"), "only fredholm_data takes a backend");
            if (v != "auto" && v != "exact" && v != "numeric") bad(sub(p, "backend"), "expected auto, exact or numeric");
        }
        if (const Json* n = opt(sj, "n")) {
            if (st.op != "sc_verify" && st.op != "eae_verify") bad(sub(p, "n"), "only verify operations take a window");
            if (integer(*n, sub(p, "n")) < 1) bad(sub(p, "n"), "window must be positive");
        }
        st.args = sj;
        step_of[st.as] = st.op;
        Arg out = produces(st.op);
        if (out != Arg::Str) names[st.as] = out;
        else names[st.as] = Arg::Str;
        s.program.push_back(st);
    }
    if (const Json* es = opt(j, "expectations")) {
        array(*es, "/expectations");
        for (std::size_t i = 0; i < es->size(); ++i) {
            std::string p = sub("/expectations", i);
            const Json& ej = (*es)[i];
            OpScenario::Exp e;
            std::string claim = str(need(ej, p, "claim"), sub(p, "claim"));
            auto dot = claim.find('.');
            e.target = claim.substr(0, dot);
            e.field = dot == std::string::npos ? "value" : claim.substr(dot + 1);
            if (!step_of.count(e.target)) bad(sub(p, "claim"), "no program step named \"" + e.target + "\"");
            e.expected = need(ej, p, "expected");
            e.citation = citation_of(ej);
            s.expectations.push_back(e);
        }
    }
    return s;
}

Json shape_json(const SpaceShape& s) { return to_string(s); }

Json run_step(OpWorld& w, const Step& st) {
    const Json& a = st.args;
    auto op = [&](const char* k) -> const BlockOp& { return w.ops.at(a[k].get<std::string>()); };
    auto wit = [&](const char* k) -> const Witness& { return w.witnesses.at(a[k].get<std::string>()); };
    auto cpl = [&](const char* k) -> const SchurCouple& { return w.couples.at(a[k].get<std::string>()); };
    auto shp = [&](const char* k) { return shape_ref(w, a[k], ""); };
    auto num = [&](const char* k) { return a[k].get<long>(); };
    int n = a.contains("n") ? a["n"].get<int>() : w.window;
    Json r;
    const std::string& o = st.op;
    if (o == "fredholm_data") {
        FredholmOptions fo = w.fopt;
        std::string b = a.contains("backend") ? a["backend"].get<std::string>() : "auto";
        fo.backend = b == "exact" ? FredholmOptions::Backend::Exact
                     : b == "numeric" ? FredholmOptions::Backend::Numeric
                                      : FredholmOptions::Backend::Auto;
        FredholmData d = fredholm_data(op("of"), fo);
        r["alpha"] = d.alpha;
        r["beta"] = d.beta;
        r["index"] = d.index;
        r["backend"] = d.backend;
        r["tag"] = d.certified ? "exact" : "non-certified";
    } else if (o == "index") {
        r = tagged(index(op("of")));
    } else if (o == "eae_check") {
        r = tagged(eae_check(op("u"), op("v")));
    } else if (o == "perturb_kernel") {
        const BlockOp& t = op("t");
        BlockOp R = perturb_kernel(t, int(num("m")));
        w.ops[st.as] = R;
        FredholmData d = fredholm_data(block_add(t, R));
        r["alpha_after"] = d.alpha;
        r["index_after"] = d.index;
        r["tag"] = "exact";
    } else if (o == "perturb_witness" || o == "witness_power" || o == "witness_from_complemented" ||
               o == "witness_shared_seq" || o == "zero_witness") {
        Witness nw = o == "perturb_witness"             ? perturb_witness(wit("w"), int(num("m")))
                     : o == "witness_power"             ? witness_power(wit("w"), int(num("m")))
                     : o == "witness_from_complemented" ? witness_from_complemented(op("r"), shp("z"))
                     : o == "witness_shared_seq"        ? witness_shared_seq(shp("x"), shp("y"), int(num("k")))
                                                        : zero_witness(shp("x"), shp("y"));
        FredholmData d = fredholm_data(witness_defect(nw));
        r["x"] = shape_json(nw.s.cod());
        r["y"] = shape_json(nw.s.dom());
        r["index"] = d.index;
        r["alpha"] = d.alpha;
        r["tag"] = "exact";
        w.witnesses[st.as] = std::move(nw);
    } else if (o == "witness_index") {
        r = tagged(witness_index(wit("w")));
    } else if (o == "witness_compress") {
        Compression c = witness_compress(wit("w"), op("u"), op("v"));
        r = tagged(c.index);
    } else if (o == "sc_construct") {
        w.couples[st.as] = sc_construct(wit("w"), op("u"), op("v"));
        r = tagged(true);
    } else if (o == "sc_verify") {
        r = tagged(sc_verify(op("u"), op("v"), cpl("couple"), n));
        r["window"] = n;
    } else if (o == "sc_extend_blockdiag") {
        w.couples[st.as] = sc_extend_blockdiag(cpl("couple"), shp("x1"), shp("y1"));
        r = tagged(true);
    } else if (o == "eae_construct") {
        Extension e = eae_construct(op("u"), op("v"));
        r["x0"] = shape_json(e.x0);
        r["y0"] = shape_json(e.y0);
        r["tag"] = "exact";
        w.extensions[st.as] = std::move(e);
    } else if (o == "eae_verify") {
        r = tagged(eae_verify(op("u"), op("v"), w.extensions.at(a["ext"].get<std::string>()), n));
        r["window"] = n;
    } else if (o == "compose") {
        std::vector<BlockOp> v;
        for (const auto& name : a["ops"]) v.push_back(w.ops.at(name.get<std::string>()));
        w.ops[st.as] = compose_all(v);
        r["dom"] = shape_json(w.ops[st.as].dom());
        r["cod"] = shape_json(w.ops[st.as].cod());
    } else if (o == "add" || o == "sub") {
        w.ops[st.as] = o == "add" ? block_add(op("a"), op("b")) : block_sub(op("a"), op("b"));
        r["dom"] = shape_json(w.ops[st.as].dom());
        r["cod"] = shape_json(w.ops[st.as].cod());
    } else if (o == "random_fredholm") {
        rnd::Rng rng(static_cast<unsigned long long>(num("seed")));
        w.ops[st.as] = rnd::fredholm(rng, shp("shape"), int(num("k")));
        r["index"] = index(w.ops[st.as]);
        r["tag"] = "exact";
    } else if (o == "eae_partner") {
        rnd::Rng rng(static_cast<unsigned long long>(num("seed")));
        w.ops[st.as] = rnd::eae_partner(rng, op("u"), shp("y"));
        r["index"] = index(w.ops[st.as]);
        r["tag"] = "exact";
    }
    return r;
}

Report run_operator(const OpScenario& s, const Json& inputs, const Flags& f) {
    Report rep;
    Json j;
    j["scenario"] = s.name;
    j["kind"] = "operator";
    j["inputs"] = inputs;
    std::ostringstream out;
    out << "scenario " << s.name << " (operator)\n";
    if (!s.description.empty()) out << "  " << s.description << "\n";
    OpWorld w = s.world;
    w.window = f.verify_window;
    w.fopt.tolerance = parse_scalar(f.numeric_tolerance).get_d();

    Json computed = Json::object(), trail = Json::array();
    std::optional<ComputationFailure> failure;
    for (const auto& st : s.program) {
        try {
            computed[st.as] = run_step(w, st);
        } catch (const Error& e) {
            failure = ComputationFailure{st.op, e.kind(), e.what()};
            break;
        } catch (const std::exception& e) {
            failure = ComputationFailure{st.op, "InternalError", e.what()};
            break;
        }
        Json t;
        t["step"] = st.as;
        t["op"] = st.op;
        t["rule"] = describe(st.op).value_or("");
        trail.push_back(t);
        out << "  " << st.as << " = " << st.op << " -> " << computed[st.as].dump() << "  (" << t["rule"].get<std::string>()
            << ")\n";
    }
    j["computed"] = computed;
    j["verdicts"] = Json::array();
    j["rule_trail"] = trail;
    Json exps = Json::array();
    bool all = true;
    if (!failure) {
        out << "  expectations:\n";
        for (const auto& e : s.expectations) {
            Json actual = nullptr;
            auto it = computed.find(e.target);
            if (it != computed.end() && it->contains(e.field)) actual = (*it)[e.field];
            bool pass = actual == e.expected;
            Json ej;
            ej["claim"] = e.target + "." + e.field;
            ej["expected"] = e.expected;
            ej["actual"] = actual;
            ej["citation"] = e.citation;
            ej["pass"] = pass;
            exps.push_back(ej);
            all = all && pass;
            out << "    " << pass_word(pass) << " " << e.target << "." << e.field << " = " << actual.dump()
                << (pass ? "" : " (expected " + e.expected.dump() + ")")
                << (e.citation.empty() ? "" : "  [" + e.citation + "]") << "\n";
        }
    }
    j["expectations"] = exps;
    if (failure) {
        Json err;
        err["op"] = failure->op;
        err["kind"] = failure->kind;
        err["message"] = failure->message;
        j["error"] = err;
        out << "  computation error in " << failure->op << ": " << failure->kind << ": " << failure->message << "\n";
        rep.exit_code = 3;
        rep.pass = false;
    } else {
        rep.pass = all;
        rep.exit_code = all ? 0 : 1;
    }
    j["pass"] = rep.pass;
    out << "  result: " << pass_word(rep.pass) << "\n";
    rep.json = std::move(j);
    rep.text = out.str();
    return rep;
}

// Operator-laboratory scenarios shipped with the tool.
const std::vector<std::pair<std::string, const char*>>& operator_builtins() {
    static const std::vector<std::pair<std::string, const char*>> v{
        {"op-shift-complemented", R"json({
  "kind": "operator",
  "name": "op-shift-complemented",
  "description": "u = v = shift(-1) on one sequence space, witness from the trivially complemented copy",
  "shapes": {"S": ["Seq"]},
  "operators": {"u": {"dom": "S", "blocks": [[{"shift": -1}]]}},
  "program": [
    {"op": "fredholm_data", "of": "u", "as": "fu"},
    {"op": "witness_from_complemented", "r": "u", "z": [], "as": "w"},
    {"op": "sc_construct", "w": "w", "u": "u", "v": "u", "as": "couple"},
    {"op": "sc_verify", "u": "u", "v": "u", "couple": "couple", "as": "ok"}
  ],
  "expectations": [
    {"claim": "fu.index", "expected": 1, "citation": "index of the backward shift"},
    {"claim": "w.index", "expected": 1, "citation": "Prop 5.5"},
    {"claim": "ok", "expected": true, "citation": "Thm 4.1"}
  ]
})json"},
        {"op-block-fin", R"json({
  "kind": "operator",
  "name": "op-block-fin",
  "description": "index-2 pair on Seq+Fin(2) versus Seq, Schur coupling, extension and index multiplication",
  "shapes": {"X": ["Seq", "Fin(2)"], "Y": ["Seq"], "Z": ["Fin(2)"]},
  "operators": {
    "u": {"dom": "X", "blocks": [[{"symbol": [[-2, "1"]]}, null],
                                 [null, {"matrix": [["1", "1/3"], ["0", "2"]]}]]},
    "v": {"dom": "Y", "blocks": [[{"symbol": [[-2, "3/2"]], "correction": [[1, 5, "1"]]}]]},
    "r": {"dom": "Y", "blocks": [[{"shift": -2}]]}
  },
  "program": [
    {"op": "fredholm_data", "of": "u", "as": "fu"},
    {"op": "fredholm_data", "of": "v", "as": "fv"},
    {"op": "fredholm_data", "of": "v", "backend": "numeric", "as": "fv_numeric"},
    {"op": "eae_check", "u": "u", "v": "v", "as": "eae"},
    {"op": "witness_from_complemented", "r": "r", "z": "Z", "as": "w"},
    {"op": "sc_construct", "w": "w", "u": "u", "v": "v", "as": "couple"},
    {"op": "sc_verify", "u": "u", "v": "v", "couple": "couple", "as": "sc_ok"},
    {"op": "eae_construct", "u": "u", "v": "v", "as": "ext"},
    {"op": "eae_verify", "u": "u", "v": "v", "ext": "ext", "as": "eae_ok"},
    {"op": "witness_power", "w": "w", "m": -2, "as": "w_neg"},
    {"op": "perturb_kernel", "t": "r", "m": 4, "as": "R"}
  ],
  "expectations": [
    {"claim": "fu.alpha", "expected": 2},
    {"claim": "fu.beta", "expected": 0},
    {"claim": "fv.index", "expected": 2},
    {"claim": "eae", "expected": true, "citation": "Thm 1.3(ii)"},
    {"claim": "sc_ok", "expected": true, "citation": "Thm 4.1"},
    {"claim": "eae_ok", "expected": true, "citation": "Thm 1.3"},
    {"claim": "w.index", "expected": 2, "citation": "Prop 5.5"},
    {"claim": "w_neg.index", "expected": -4, "citation": "Lemma 5.1(iii)"},
    {"claim": "R.alpha_after", "expected": 4, "citation": "Lemma 3.2"}
  ]
})json"},
    };
    return v;
}

Report schema_report(const std::string& origin, const std::string& message) {
    return error_report(origin, "SchemaError", message, 2);
}

}  // namespace

Report error_report(const std::string& origin, const std::string& kind, const std::string& message, int exit_code) {
    Report r;
    r.exit_code = exit_code;
    r.pass = false;
    Json j;
    j["scenario"] = origin;
    j["inputs"] = nullptr;
    j["computed"] = nullptr;
    j["verdicts"] = Json::array();
    j["rule_trail"] = Json::array();
    j["expectations"] = Json::array();
    Json err;
    err["kind"] = kind;
    err["message"] = message;
    j["error"] = err;
    j["pass"] = false;
    r.json = j;
    r.text = "scenario " + origin + ": " + kind + ": " + message + "\n";
    return r;
}

Report run_json(const Json& j, const Flags& f) {
    if (!j.is_object()) throw SchemaError("at /: expected an object");
    std::string kind = str(need(j, "", "kind"), "/kind");
    if (kind == "space") {
        SpaceScenario s = parse_space(j);
        return run_space(s, f);
    }
    if (kind == "operator") {
        OpScenario s = parse_operator_scenario(j);
        return run_operator(s, j, f);
    }
    bad("/kind", "expected \"space\" or \"operator\"");
}

Report run_file(const std::string& path, const Flags& f) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return schema_report(path, "cannot read file");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        Json j = parse_text(buf.str(), path);
        Report r = run_json(j, f);
        if (r.json.contains("scenario") && r.json["scenario"] == "") r.json["scenario"] = path;
        return r;
    } catch (const SchemaError& e) {
        return schema_report(path, e.what());
    }
}

Report run_builtin(const std::string& name, const Flags& f) {
    if (auto s = space::find_builtin(name)) return run_space(*s, f);
    for (const auto& [n, text] : operator_builtins()) {
        if (n != name) continue;
        try {
            return run_json(parse_text(text, name), f);
        } catch (const SchemaError& e) {
            return schema_report(name, e.what());
        }
    }
    return error_report(name, "UnknownScenario", "no builtin scenario named \"" + name + "\"", 1);
}

std::vector<std::string> list_scenarios() {
    std::vector<std::string> v;
    for (const auto& s : space::builtin_scenarios()) v.push_back(s.name);
    for (const auto& [n, t] : operator_builtins()) v.push_back(n);
    return v;
}

std::optional<Json> builtin_json(const std::string& name) {
    if (auto s = space::find_builtin(name)) return space_to_json(*s);
    for (const auto& [n, text] : operator_builtins())
        if (n == name) return Json::parse(text);
    return std::nullopt;
}

namespace {
const std::vector<std::pair<std::string, std::string>>& describe_table() {
    static const std::vector<std::pair<std::string, std::string>> t{
        {"rank", "exact rank over Q (plumbing for alpha, beta)"},
        {"null_space", "exact kernel basis over Q"},
        {"solve", "exact linear solve; preimages U0^-1 R in the proof of Thm 4.1"},
        {"complement_basis", "proof of Thm 4.1: choose closed complements, finite-dimensional analogue"},
        {"shift", "Lemma 3.3: index -d operator with symbol z^d"},
        {"op_compose", "operator products in Eq (1.2) and Lemma 5.1"},
        {"is_fredholm", "Fredholm definition (Section 1); band Toeplitz criterion"},
        {"index", "i(T) = alpha(T) - beta(T) (Section 1); minus the winding number of the symbol"},
        {"fredholm_data", "alpha, beta (Section 1); cross-checked by Lemma 2.5"},
        {"range_alignment_iso", "Thm 4.1 proof: A[ran(I_X - S2 T2)] = ran U"},
        {"head_tail_iso", "Lemma 4.3 proof: Y isomorphic to Y + W"},
        {"eae_check", "Thm 1.3(ii): alpha(U) = alpha(V) and beta(U) = beta(V)"},
        {"perturb_kernel", "Lemma 3.2: finite-rank R with alpha(T + R) = m"},
        {"perturb_witness", "Lemma 4.3: finite-rank change of the witness with alpha(I_X - S2 T2) = m"},
        {"sc_construct", "Thm 4.1 (i)=>(ii): Schur coupling from a witness, via Lemma 4.3 and Lemma 4.2"},
        {"sc_verify", "Eq (1.2): U = A - B D^-1 C and V = D - C A^-1 B"},
        {"couple_from_MN", "Lemma 4.2: UM = I_X - ST, VN = I_Y - TS; A = M^-1, B = S N^-1, C = T M^-1, D = N^-1"},
        {"witness_power", "Lemma 5.1(iii): km in I_SC(X,Y)"},
        {"witness_index", "Thm 4.1(i): I_X - ST in Phi_k(X)"},
        {"witness_from_complemented", "Prop 5.5: S = [I_Y - R; 0], T = [I_Y 0], I_X - ST = [R 0; 0 I_Z]"},
        {"witness_shared_seq", "Prop 5.5 on a shared sequence factor"},
        {"zero_witness", "Lemma 5.1(i): 0 in I_SC(X,Y)"},
        {"witness_compress", "Section 4 alternative proof: I_{ran V} - B1 B2 in Phi_k(ran V)"},
        {"sc_extend_blockdiag", "Lemma 5.8(i): Schur coupling via diag(I, A), diag(0, B), diag(0, C), diag(I, D)"},
        {"eae_construct", "Eq (1.1): U + I_X0 = E (V + I_Y0) F, after Thm 1.3"},
        {"eae_verify", "Eq (1.1): equivalence after extension"},
        {"ideal_intersect", "Cor 3.4: I_Phi(X) intersect I_Phi(Y) = eae(X,Y) Z"},
        {"iphi_of", "Lemma 3.7: I_Phi(X1) + I_Phi(X2) = I_Phi(X) under essential incomparability"},
        {"eae_index", "Eq (1.3), Cor 3.4, Prop 3.1"},
        {"isc_bounds", "Lemma 5.1, Prop 1.6(iii), Prop 5.5, Lemma 5.8, Thm 1.7(i), Lemma 5.2, Prop 5.4"},
        {"sc_index", "Eq (1.8): sc = min I_SC(X,Y) intersect N; Prop 1.6(i)"},
        {"verdict", "Thm 1.5, Prop 1.6(ii), Remark 5.6"},
        {"builtin_scenarios", "Thm 1.2(ii), Thm 1.7, Thm 1.9, Thm 1.11, Prop 1.10, Ex 5.9"},
        {"run", "Remark 5.6: compute eae; if 0 finish; else decide k0 in I_SC; conclude for all k"},
        {"compose", "block operator product (plumbing)"},
        {"add", "block operator sum (plumbing)"},
        {"sub", "block operator difference (plumbing)"},
        {"random_fredholm", "seeded generator of index-k operators (plumbing)"},
        {"eae_partner", "seeded generator of a partner with equal alpha, beta (plumbing)"},
    };
    return t;
}
}  // namespace

std::optional<std::string> describe(const std::string& op) {
    for (const auto& [k, v] : describe_table())
        if (k == op) return v;
    return std::nullopt;
}

std::vector<std::string> describable_ops() {
    std::vector<std::string> v;
    for (const auto& [k, d] : describe_table()) v.push_back(k);
    return v;
}

}  // namespace eaesc::cli
