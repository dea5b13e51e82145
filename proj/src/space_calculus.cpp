#include "eaesc/space_calculus.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace eaesc::space {

IdealZ ideal_intersect(IdealZ a, IdealZ b) { return {std::lcm(a.gen, b.gen)}; }
IdealZ ideal_sum(IdealZ a, IdealZ b) { return {std::gcd(a.gen, b.gen)}; }

bool ideal_contains(IdealZ a, long k) {
    if (a.gen == 0) return k == 0;
    unsigned long m = k < 0 ? (unsigned long)(-k) : (unsigned long)k;
    return m % a.gen == 0;
}

bool ideal_subset(IdealZ a, IdealZ b) {
    if (a.gen == 0) return true;
    if (b.gen == 0) return false;
    return a.gen % b.gen == 0;
}

std::string to_string(IdealZ a) {
    if (a.gen == 0) return "{0}";
    if (a.gen == 1) return "Z";
    return std::to_string(a.gen) + "Z";
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

Desc parse_desc(const std::string& expr) {
    std::string e = expr;
    for (const std::string sep : {"(+)", "\xE2\x8A\x95"}) {
        for (auto p = e.find(sep); p != std::string::npos; p = e.find(sep)) e.replace(p, sep.size(), "+");
    }
    Desc d;
    std::stringstream ss(e);
    std::string part;
    while (std::getline(ss, part, '+')) {
        part = trim(part);
        if (part.empty()) throw SchemaError("empty summand in space expression '" + expr + "'");
        if (part == "0") continue;  // the zero space
        d.push_back(part);
    }
    return d;
}

std::string to_string(const Desc& d) {
    if (d.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < d.size(); ++i) s += (i ? " + " : "") + d[i];
    return s;
}

std::string to_string(Relation r) {
    switch (r) {
        case Relation::Unknown: return "Unknown";
        case Relation::ProjectivelyIncomparable: return "ProjectivelyIncomparable";
        case Relation::EssentiallyIncomparable: return "EssentiallyIncomparable";
        case Relation::TotallyIncomparable: return "TotallyIncomparable";
        case Relation::Isomorphic: return "Isomorphic";
    }
    return "?";
}

std::optional<Relation> parse_relation(const std::string& s) {
    for (auto r : {Relation::Unknown, Relation::ProjectivelyIncomparable, Relation::EssentiallyIncomparable,
                   Relation::TotallyIncomparable, Relation::Isomorphic})
        if (to_string(r) == s) return r;
    return std::nullopt;
}

// ---- relation table ----

RelationTable::RelationTable(std::vector<Atom> atoms) {
    for (auto& a : atoms) add_atom(std::move(a));
}

void RelationTable::add_atom(Atom a) {
    if (idx_.count(a.name)) throw SchemaError("duplicate atom '" + a.name + "'");
    if (a.name.empty() || a.name.find('+') != std::string::npos || a.name == "0")
        throw SchemaError("bad atom name '" + a.name + "'");
    if (a.flags.finite_dim) {
        if (*a.flags.finite_dim < 0) throw SchemaError("negative dimension for atom '" + a.name + "'");
        if (a.iphi && *a.iphi != 0) throw InconsistentFacts("finite atom '" + a.name + "' must have I_Phi = {0}");
        a.iphi = 0;
    }
    idx_[a.name] = int(atoms_.size());
    atoms_.push_back(std::move(a));
    close();
}

void RelationTable::relate(const std::string& a, const std::string& b, Relation r) {
    atom(a);
    atom(b);
    auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    auto it = decl_.find(key);
    if (it != decl_.end() && it->second != r) {
        bool iso_clash = it->second == Relation::Isomorphic || r == Relation::Isomorphic;
        if (iso_clash && it->second != Relation::Unknown && r != Relation::Unknown)
            throw InconsistentFacts("conflicting relations for " + a + ", " + b);
        if (int(r) < int(it->second)) return;  // keep the stronger fact
    }
    decl_[key] = r;
    close();
}

void RelationTable::add_complemented(ComplementedFact f) {
    atom(f.atom);
    for (auto& n : f.in) atom(n);
    comp_.push_back(std::move(f));
}

void RelationTable::add_witness(WitnessFact f) {
    for (auto& n : f.x) atom(n);
    for (auto& n : f.y) atom(n);
    wit_.push_back(std::move(f));
}

const Atom& RelationTable::atom(const std::string& name) const {
    auto it = idx_.find(name);
    if (it == idx_.end()) throw UnknownAtom("unknown atom '" + name + "'");
    return atoms_[it->second];
}

void RelationTable::close() {
    int n = int(atoms_.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); };
    for (auto& [k, r] : decl_)
        if (r == Relation::Isomorphic) {
            int a = find(idx_.at(k.first)), b = find(idx_.at(k.second));
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    cls_.assign(n, 0);
    for (int i = 0; i < n; ++i) cls_[i] = find(i);

    // isomorphic atoms must agree on everything the engine reads
    std::map<int, int> declared_by;
    for (int i = 0; i < n; ++i) {
        const Atom& a = atoms_[i];
        const Atom& r = atoms_[cls_[i]];
        if (a.iphi) {
            auto [it, fresh] = declared_by.emplace(cls_[i], i);
            if (!fresh && atoms_[it->second].iphi != a.iphi)
                throw InconsistentFacts("isomorphic atoms " + atoms_[it->second].name + " and " + a.name +
                                        " declare different I_Phi");
        }
        if (a.flags.finite_dim != r.flags.finite_dim)
            throw InconsistentFacts("isomorphic atoms " + r.name + " and " + a.name + " differ in dimension");
    }

    strength_.clear();
    for (auto& [k, r] : decl_) {
        if (r == Relation::Isomorphic || r == Relation::Unknown) continue;
        int a = cls_[idx_.at(k.first)], b = cls_[idx_.at(k.second)];
        if (a == b && !atoms_[a].flags.finite_dim)
            throw InconsistentFacts("isomorphic atoms " + k.first + ", " + k.second + " declared incomparable");
        auto key = std::minmax(a, b);
        int s = r == Relation::TotallyIncomparable ? 3 : r == Relation::EssentiallyIncomparable ? 2 : 1;
        int& cur = strength_[{key.first, key.second}];
        cur = std::max(cur, s);
    }
}

std::string RelationTable::iso_rep(const std::string& a) const { return atoms_[cls_[idx_.at(atom(a).name)]].name; }

std::optional<unsigned long> RelationTable::class_iphi(const std::string& a) const {
    int c = cls_[idx_.at(atom(a).name)];
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (cls_[i] == c && atoms_[i].iphi) return atoms_[i].iphi;
    return std::nullopt;
}

bool RelationTable::isomorphic(const std::string& a, const std::string& b) const {
    return cls_[idx_.at(atom(a).name)] == cls_[idx_.at(atom(b).name)];
}

Relation RelationTable::relation(const std::string& a, const std::string& b) const {
    const Atom& x = atom(a);
    const Atom& y = atom(b);
    // every operator touching a finite-dimensional space is finite rank
    if (x.flags.finite_dim || y.flags.finite_dim) {
        if (isomorphic(a, b)) return Relation::Isomorphic;
        return Relation::TotallyIncomparable;
    }
    int ca = cls_[idx_.at(a)], cb = cls_[idx_.at(b)];
    if (ca == cb) return Relation::Isomorphic;
    auto key = std::minmax(ca, cb);
    auto it = strength_.find({key.first, key.second});
    int s = it == strength_.end() ? 0 : it->second;
    switch (s) {
        case 3: return Relation::TotallyIncomparable;
        case 2: return Relation::EssentiallyIncomparable;
        case 1: return Relation::ProjectivelyIncomparable;
        default: return Relation::Unknown;
    }
}

bool RelationTable::ess_incomparable(const std::string& a, const std::string& b) const {
    if (atom(a).flags.finite_dim || atom(b).flags.finite_dim) return true;
    Relation r = relation(a, b);
    return r == Relation::TotallyIncomparable || r == Relation::EssentiallyIncomparable;
}

bool RelationTable::ess_incomparable(const Desc& x, const Desc& y) const {
    for (auto& a : x)
        for (auto& b : y)
            if (!ess_incomparable(a, b)) return false;
    return true;
}

// ---- I_Phi and eae ----

namespace {

Bounds atom_iphi(const RelationTable& rel, const std::string& name) {
    if (auto g = rel.class_iphi(name)) return {{*g}, {*g}};
    return {{0}, {1}};
}

std::map<std::string, int> rep_counts(const Desc& d, const RelationTable& rel) {
    std::map<std::string, int> c;
    for (auto& n : d) ++c[rel.iso_rep(n)];
    return c;
}

bool sub_multiset(const Desc& small, const Desc& big, const RelationTable& rel) {
    auto a = rep_counts(small, rel), b = rep_counts(big, rel);
    for (auto& [k, n] : a)
        if (b[k] < n) return false;
    return true;
}

bool all_flag_square(const Desc& d, const RelationTable& rel) {
    if (d.empty()) return false;
    for (auto& n : d)
        if (rel.atom(n).flags.has_complemented_square != true) return false;
    return true;
}

}  // namespace

Bounds iphi_of(const Desc& x, const RelationTable& rel) {
    if (x.empty()) return {{0}, {0}};
    Bounds b = atom_iphi(rel, x[0]);
    bool incomparable = true;
    for (std::size_t i = 1; i < x.size(); ++i) {
        Bounds c = atom_iphi(rel, x[i]);
        b.lower = ideal_sum(b.lower, c.lower);
        b.upper = ideal_sum(b.upper, c.upper);
        for (std::size_t j = 0; j < i; ++j)
            if (!rel.ess_incomparable(x[i], x[j])) incomparable = false;
    }
    if (!incomparable) b.upper = {1};
    if (b.lower.gen == 1) b.upper = {1};
    return b;
}

EaeBounds eae_index(const Desc& x, const Desc& y, const RelationTable& rel) {
    Bounds a = iphi_of(x, rel), b = iphi_of(y, rel);
    return {{ideal_intersect(a.lower, b.lower), ideal_intersect(a.upper, b.upper)}};
}

// ---- I_SC bounds ----

namespace {

// The smaller space `small` (one atom on side `small_in_y`) is isomorphic
// to a complemented subspace of the summands `big` on the other side.
struct Edge {
    bool small_in_y;
    std::string small;
    Desc big;
    std::string why;
};

std::vector<Edge> edges_for(const Desc& x, const Desc& y, const RelationTable& rel) {
    std::vector<Edge> e;
    std::set<std::string> xs(x.begin(), x.end()), ys(y.begin(), y.end());
    for (auto& a : ys)
        for (auto& b : xs)
            if (rel.isomorphic(a, b)) e.push_back({true, a, {b}, a == b ? "shared summand " + a : a + " ~ " + b});
    for (auto& f : rel.complemented()) {
        if (ys.count(f.atom) && sub_multiset(f.in, x, rel))
            e.push_back({true, f.atom, f.in, f.atom + " complemented in " + to_string(f.in)});
        if (xs.count(f.atom) && sub_multiset(f.in, y, rel))
            e.push_back({false, f.atom, f.in, f.atom + " complemented in " + to_string(f.in)});
    }
    return e;
}

struct MatchResult {
    std::set<unsigned long> gens;  // gcds achieved by block-diagonal assemblies
    bool y_into_x = false;         // some assembly uses every summand of y as a small side
    bool x_into_y = false;
    std::vector<std::string> used;  // edges of the best assembly
};

MatchResult enumerate_matchings(const Desc& x, const Desc& y, const RelationTable& rel) {
    std::vector<Edge> edges = edges_for(x, y, rel);
    std::map<std::string, int> cx, cy;
    for (auto& n : x) ++cx[n];
    for (auto& n : y) ++cy[n];
    int ny = int(y.size()), nx = int(x.size());

    MatchResult res;
    unsigned long best = 0;
    long budget = 200000;
    std::vector<int> count(edges.size(), 0);

    // big summands are matched up to isomorphism
    auto take_big = [&](std::map<std::string, int>& pool, const Desc& big) {
        for (auto& n : big) {
            auto it = std::find_if(pool.begin(), pool.end(),
                                   [&](auto& kv) { return kv.second > 0 && rel.isomorphic(kv.first, n); });
            if (it == pool.end()) return false;
            --it->second;
        }
        return true;
    };

    std::function<void(std::size_t, unsigned long, int, int, bool, bool)> rec =
        [&](std::size_t i, unsigned long g, int used_y_small, int used_x_small, bool only_y_small,
            bool only_x_small) {
            if (--budget < 0) return;
            if (i == edges.size()) {
                bool any = std::any_of(count.begin(), count.end(), [](int c) { return c > 0; });
                if (!any) return;
                if (g > 0) res.gens.insert(g);
                if (only_y_small && used_y_small == ny) res.y_into_x = true;
                if (only_x_small && used_x_small == nx) res.x_into_y = true;
                if (g > 0 && (best == 0 || g < best)) {
                    best = g;
                    res.used.clear();
                    for (std::size_t j = 0; j < edges.size(); ++j)
                        if (count[j]) res.used.push_back(edges[j].why + (count[j] > 1 ? " (x" + std::to_string(count[j]) + ")" : ""));
                }
                return;
            }
            rec(i + 1, g, used_y_small, used_x_small, only_y_small, only_x_small);
            const Edge& e = edges[i];
            auto& small_pool = e.small_in_y ? cy : cx;
            auto& big_pool = e.small_in_y ? cx : cy;
            auto saved_small = small_pool, saved_big = big_pool;
            int c = 0;
            while (small_pool[e.small] > 0) {
                std::map<std::string, int> trial = big_pool;
                if (!take_big(trial, e.big)) break;
                big_pool = trial;
                --small_pool[e.small];
                ++c;
                count[i] = c;
                Bounds ip = atom_iphi(rel, e.small);
                unsigned long g2 = std::gcd(g, ip.lower.gen);
                bool iso_edge = e.big.size() == 1 && rel.isomorphic(e.small, e.big[0]);
                // an isomorphism edge counts as a complemented copy in both directions
                int add_y = e.small_in_y ? c : (iso_edge ? c : 0);
                int add_x = !e.small_in_y ? c : (iso_edge ? c : 0);
                rec(i + 1, g2, used_y_small + add_y, used_x_small + add_x, only_y_small && (e.small_in_y || iso_edge),
                    only_x_small && (!e.small_in_y || iso_edge));
            }
            count[i] = 0;
            small_pool = saved_small;
            big_pool = saved_big;
        };
    rec(0, 0, 0, 0, true, true);
    return res;
}

void add_known(IscBounds& b, unsigned long g) {
    if (g == 0) return;
    for (auto k : b.known)
        if (g % k == 0) return;
    std::erase_if(b.known, [g](unsigned long k) { return k % g == 0; });
    b.known.push_back(g);
    std::sort(b.known.begin(), b.known.end());
}

void step(IscBounds& b, std::string rule, std::string detail) { b.trail.push_back({std::move(rule), std::move(detail)}); }

}  // namespace

bool IscBounds::contains_certified(long k) const {
    if (k == 0) return true;
    if (additive) return ideal_contains(lower, k);
    for (auto g : known)
        if (ideal_contains({g}, k)) return true;
    return false;
}

IscBounds isc_bounds(const Desc& x, const Desc& y, const RelationTable& rel) {
    IscBounds b;
    EaeBounds e = eae_index(x, y, rel);
    b.upper = e.ideal.upper;
    step(b, "Lemma 5.1(i)", "0 in I_SC(X,Y)");
    step(b, "Prop 1.6(iii)", "I_SC(X,Y) within I_Phi(X) n I_Phi(Y) within " + to_string(e.ideal.upper));

    std::set<std::string> renamed;
    for (const Desc* d : {&x, &y})
        for (auto& n : *d)
            if (rel.iso_rep(n) != n) renamed.insert(n + " ~ " + rel.iso_rep(n));
    if (!renamed.empty()) {
        std::string s;
        for (auto& r : renamed) s += (s.empty() ? "" : ", ") + r;
        step(b, "Lemma 5.2", "summands identified up to isomorphism: " + s);
    }

    // Split off summands incomparable with everything on the other side.
    Desc x2, y2;
    for (auto& a : x)
        if (!std::all_of(y.begin(), y.end(), [&](auto& c) { return rel.ess_incomparable(a, c); })) x2.push_back(a);
    for (auto& a : y)
        if (!std::all_of(x.begin(), x.end(), [&](auto& c) { return rel.ess_incomparable(a, c); })) y2.push_back(a);

    if (x2.empty() || y2.empty()) {
        b.upper = {0};
        step(b, "Thm 1.7(i)", "X and Y are essentially incomparable, so I_SC(X,Y) = {0}");
    } else {
        if (x2.size() != x.size() || y2.size() != y.size()) {
            step(b, "Lemma 5.8(ii)", "I_SC(X,Y) = I_SC(" + to_string(x2) + ", " + to_string(y2) + ")");
            EaeBounds e2 = eae_index(x2, y2, rel);
            IdealZ u = ideal_intersect(b.upper, e2.ideal.upper);
            if (!(u == b.upper)) {
                b.upper = u;
                step(b, "Prop 1.6(iii)", "applied to the reduced pair: I_SC within " + to_string(u));
            }
        }
        // Prop 5.5 on the reduced pair, then on the full pair
        std::vector<std::pair<Desc, Desc>> cands{{x2, y2}};
        if (x2.size() != x.size() || y2.size() != y.size()) cands.push_back({x, y});
        for (auto& [px, py] : cands) {
            MatchResult m = enumerate_matchings(px, py, rel);
            for (int dir = 0; dir < 2; ++dir) {
                bool ok = dir == 0 ? m.y_into_x : m.x_into_y;
                if (!ok) continue;
                const Desc& small = dir == 0 ? py : px;
                const Desc& big = dir == 0 ? px : py;
                Bounds ip = iphi_of(small, rel);
                add_known(b, ip.lower.gen);
                IdealZ u = ideal_intersect(b.upper, ip.upper);
                b.upper = u;
                step(b, "Prop 5.5",
                     to_string(small) + " is complemented in " + to_string(big) + ", so I_SC = I_Phi(" +
                         to_string(small) + "), between " + to_string(ip.lower) + " and " + to_string(ip.upper));
                break;
            }
        }
    }

    if (!(b.upper.gen == 0)) {
        MatchResult m = enumerate_matchings(x, y, rel);
        for (auto g : m.gens) add_known(b, g);
        if (!m.used.empty()) {
            std::string s;
            for (auto& u : m.used) s += (s.empty() ? "" : "; ") + u;
            step(b, "Prop 5.5 + Lemma 5.8(i)",
                 "shared complemented summands (" + s + ") put " + to_string(IdealZ{*m.gens.begin()}) + " in I_SC");
        }
        for (auto& w : rel.witnesses()) {
            bool fwd = sub_multiset(w.x, x, rel) && sub_multiset(w.y, y, rel);
            bool bwd = sub_multiset(w.x, y, rel) && sub_multiset(w.y, x, rel);
            if (!fwd && !bwd) continue;
            unsigned long k = (unsigned long)(w.k < 0 ? -w.k : w.k);
            if (k == 0) continue;
            add_known(b, k);
            bool same = fwd && rep_counts(w.x, rel) == rep_counts(x, rel) && rep_counts(w.y, rel) == rep_counts(y, rel);
            std::string src = "SC_" + std::to_string(w.k) + "(" + to_string(w.x) + ", " + to_string(w.y) + ") nonempty" +
                              (w.citation.empty() ? "" : " [" + w.citation + "]");
            step(b, same ? "axiom" : "Lemma 5.8(i)", src + ", so " + std::to_string(k) + " in I_SC");
        }
    }

    for (auto g : b.known)
        if (!ideal_contains(b.upper, long(g)))
            throw InconsistentFacts("certified element " + std::to_string(g) + " of I_SC lies outside the upper bound " +
                                    to_string(b.upper));

    if (all_flag_square(x, rel) || all_flag_square(y, rel)) {
        b.additive = true;
        step(b, "Prop 5.4 / Remark 5.6", "a space contains a complemented copy of its square, so I_SC is closed under addition");
    }
    if (b.known.empty()) {
        b.lower = {0};
    } else if (b.additive) {
        unsigned long g = 0;
        for (auto k : b.known) g = std::gcd(g, k);
        b.lower = {g};
        b.known = {g};
    } else {
        b.lower = {b.known.front()};
    }
    if (!b.known.empty()) step(b, "Lemma 5.1(iii)", "I_SC closed under integer multiples: " + to_string(b.lower) + " within I_SC");
    b.exact = b.lower == b.upper;
    if (b.exact) {
        step(b, "Lemma 5.1(iv)", "I_SC(X,Y) = " + to_string(b.lower));
    } else {
        step(b, "Question 5.10", "I_SC between " + to_string(b.lower) + " and " + to_string(b.upper) + "; gap left open");
    }
    return b;
}

ScIndex sc_index(const IscBounds& b) {
    ScIndex s;
    if (b.upper.gen == 0 || b.exact) {
        s.exact = true;
        s.value = b.lower.gen;
        return s;
    }
    s.lo = b.upper.gen;
    if (!b.known.empty()) {
        s.hi = b.known.front();
        if (*s.hi == s.lo) {
            s.exact = true;
            s.value = s.lo;
        }
    }
    return s;
}

ScIndex sc_index(const Desc& x, const Desc& y, const RelationTable& rel) { return sc_index(isc_bounds(x, y, rel)); }

std::string to_string(VerdictKind v) {
    switch (v) {
        case VerdictKind::EqualNonempty: return "EqualNonempty";
        case VerdictKind::EqualEmpty: return "EqualEmpty";
        case VerdictKind::StrictlyContained: return "StrictlyContained";
        case VerdictKind::Unknown: return "Unknown";
    }
    return "?";
}

Verdict verdict(const EaeBounds& e, const IscBounds& b, long k) {
    Verdict v;
    v.k = k;
    auto ks = std::to_string(k);
    if (k == 0) {
        v.kind = VerdictKind::EqualNonempty;
        v.trail.push_back({"Lemma 5.1(i)", "SC_0(X,Y) = EAE_0(X,Y), nonempty"});
    } else if (!ideal_contains(e.ideal.upper, k)) {
        v.kind = VerdictKind::EqualEmpty;
        v.trail.push_back({"Thm 1.5(iii)", ks + " not in " + to_string(e.ideal.upper) + ", so Phi_k(X) or Phi_k(Y) is empty"});
    } else if (b.contains_certified(k)) {
        v.kind = VerdictKind::EqualNonempty;
        v.trail.push_back({"Thm 1.5(ii)", ks + " in I_SC(X,Y), so SC_k = EAE_k"});
    } else if (!ideal_contains(b.upper, k) && ideal_contains(e.ideal.lower, k)) {
        v.kind = VerdictKind::StrictlyContained;
        v.trail.push_back({"Thm 1.5(i)", ks + " in " + to_string(e.ideal.lower) + ", so EAE_k(X,Y) is nonempty"});
        v.trail.push_back({"Thm 1.5(ii)", ks + " not in " + to_string(b.upper) + ", so SC_k(X,Y) is empty"});
    } else {
        v.kind = VerdictKind::Unknown;
        v.trail.push_back({"Question 5.10", ks + " lies in the gap of the I_SC bounds"});
    }
    return v;
}

Verdict verdict(const Desc& x, const Desc& y, const RelationTable& rel, long k) {
    return verdict(eae_index(x, y, rel), isc_bounds(x, y, rel), k);
}

PairResult evaluate(const Desc& x, const Desc& y, const RelationTable& rel, const std::vector<long>& ks) {
    PairResult r;
    r.x = x;
    r.y = y;
    r.iphi_x = iphi_of(x, rel);
    r.iphi_y = iphi_of(y, rel);
    r.eae = eae_index(x, y, rel);
    r.isc = isc_bounds(x, y, rel);
    r.sc = sc_index(r.isc);
    for (long k : ks) r.verdicts.push_back(verdict(r.eae, r.isc, k));
    return r;
}

bool shift_realizable(const Atom& a) {
    if (a.flags.finite_dim) return true;
    return a.iphi && *a.iphi == 1;
}

}  // namespace eaesc::space
