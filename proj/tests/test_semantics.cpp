#include <algorithm>
#include <numeric>
#include <set>

#include "doctest.h"
#include "dll/calculus.hpp"
#include "dll/semantics.hpp"
#include "dll/translate.hpp"
#include "gen.hpp"

using namespace dll;

namespace {

FormulaPtr F(const char* s) { return parse_formula(s); }

// Brute force: every antisymmetric relation on n points given by choosing,
// for each pair, one direction or none; keep transitive bounded lattices;
// deduplicate by the minimum relabelled order matrix.
int count_lattices_oracle(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
    std::size_t total = 1;
    for (std::size_t k = 0; k < pairs.size(); ++k) total *= 3;
    std::vector<int> perm(n);
    std::set<std::vector<bool>> seen;
    for (std::size_t code = 0; code < total; ++code) {
        std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
        for (int i = 0; i < n; ++i) le[i][i] = true;
        std::size_t c = code;
        for (auto [i, j] : pairs) {
            int d = static_cast<int>(c % 3);
            c /= 3;
            if (d == 1) le[i][j] = true;
            if (d == 2) le[j][i] = true;
        }
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            for (int j = 0; j < n && ok; ++j)
                for (int k = 0; k < n && ok; ++k)
                    if (le[i][j] && le[j][k] && !le[i][k]) ok = false;
        // every pair has a least upper and a greatest lower bound
        for (int a = 0; a < n && ok; ++a)
            for (int b = 0; b < n && ok; ++b) {
                int lub = -1, glb = -1;
                for (int x = 0; x < n; ++x) {
                    if (le[a][x] && le[b][x]) {
                        bool least = true;
                        for (int y = 0; y < n; ++y)
                            if (le[a][y] && le[b][y] && !le[x][y]) least = false;
                        if (least) lub = x;
                    }
                    if (le[x][a] && le[x][b]) {
                        bool greatest = true;
                        for (int y = 0; y < n; ++y)
                            if (le[y][a] && le[y][b] && !le[y][x]) greatest = false;
                        if (greatest) glb = x;
                    }
                }
                if (lub < 0 || glb < 0) ok = false;
            }
        if (!ok) continue;
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<bool> best;
        do {
            std::vector<bool> m;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) m.push_back(le[perm[i]][perm[j]]);
            if (best.empty() || m < best) best = m;
        } while (std::next_permutation(perm.begin(), perm.end()));
        seen.insert(best);
    }
    return static_cast<int>(seen.size());
}

int lattice_meet_join(const FormulaPtr& f, const FiniteLattice& l, const Valuation& v) {
    switch (f->kind) {
        case Formula::Kind::Top: return l.top();
        case Formula::Kind::Bot: return l.bot();
        case Formula::Kind::Atom: return v.at(f->name);
        case Formula::Kind::And: return l.meet(lattice_meet_join(f->lhs, l, v), lattice_meet_join(f->rhs, l, v));
        case Formula::Kind::Or: return l.join(lattice_meet_join(f->lhs, l, v), lattice_meet_join(f->rhs, l, v));
    }
    return -1;
}

bool leq_oracle(const FormulaPtr& a, const FormulaPtr& b, const FiniteLattice& l, const std::vector<std::string>& atoms) {
    Valuation v;
    std::function<bool(std::size_t)> rec = [&](std::size_t i) {
        if (i == atoms.size()) return l.leq(lattice_meet_join(a, l, v), lattice_meet_join(b, l, v));
        for (int x = 0; x < l.size(); ++x) {
            v[atoms[i]] = x;
            if (!rec(i + 1)) return false;
        }
        return true;
    };
    return rec(0);
}

}  // namespace

TEST_CASE("lattice enumeration against a brute-force oracle") {
    int cumulative = 0;
    for (int n = 2; n <= 5; ++n) {
        cumulative += count_lattices_oracle(n);
        CHECK(static_cast<int>(enumerate_lattices(n).size()) == cumulative);
    }
    CHECK(enumerate_lattices(2).size() == 1);
    CHECK(enumerate_lattices(5).size() == 9);
    CHECK(enumerate_lattices(6).size() == 24);  // regression
    std::set<std::string> names;
    for (const auto& l : lattice_pool(5)) names.insert(l.name());
    CHECK(names.count("m3"));
    CHECK(names.count("n5"));
    CHECK(!named_lattice("m3").distributive());
    CHECK(!named_lattice("n5").distributive());
    CHECK(named_lattice("b4").distributive());
}

TEST_CASE("heterogenize examples") {
    auto c2 = heterogenize(named_lattice("chain2"));
    CHECK(c2.e_ell(1) == 0b11u);
    CHECK(c2.e_ell(0) == 0b01u);
    CHECK(c2.gamma(0b10u) == 1);
    CHECK(c2.iota(0u) == 1);
    auto m3 = heterogenize(named_lattice("m3"));
    int a = m3.L.index_of("a"), b = m3.L.index_of("b");
    CHECK(m3.gamma((1u << a) | (1u << b)) == m3.L.top());
    auto c3 = heterogenize(named_lattice("chain3"));
    int m = 1;
    CHECK(c3.e_ell(m) == 0b011u);
    for (Mask s = 0; s < 8; ++s) CHECK(c3.L.leq(c3.gamma(s), m) == ((s & ~c3.e_ell(m)) == 0));
}

TEST_CASE("property: adjunctions and the join/meet equations on every lattice up to size 5") {
    for (const auto& l : enumerate_lattices(5)) {
        auto h = heterogenize(l);
        INFO(l.name());
        int n = l.size();
        for (int a = 0; a < n; ++a) {
            CHECK(h.gamma(h.e_ell(a)) == a);
            CHECK(h.iota(h.e_r(a)) == a);
            for (Mask s = 0; s <= l.full(); ++s) {
                CHECK(l.leq(h.gamma(s), a) == HeterogeneousAlgebra::leq_D(s, h.e_ell(a)));
                CHECK(HeterogeneousAlgebra::leq_E(h.e_r(a), s) == l.leq(a, h.iota(s)));
            }
            for (int b = 0; b < n; ++b) {
                CHECK(l.join(a, b) == h.gamma(h.e_ell(a) | h.e_ell(b)));
                CHECK(l.meet(a, b) == h.gamma(h.e_ell(a) & h.e_ell(b)));
                CHECK(l.meet(a, b) == h.iota(h.e_r(a) | h.e_r(b)));
                CHECK(l.join(a, b) == h.iota(h.e_r(a) & h.e_r(b)));
            }
        }
        CHECK(h.gamma(0) == l.bot());
        CHECK(h.gamma(l.full()) == l.top());
        CHECK(h.iota(0) == l.top());
        CHECK(h.iota(l.full()) == l.bot());
    }
}

TEST_CASE("evaluation examples") {
    for (const auto& l : lattice_pool(5)) {
        auto h = heterogenize(l);
        for (int x = 0; x < l.size(); ++x) {
            Valuation v{{"p", x}};
            CHECK(eval_term(parse_term("fdia wbox p"), h, v) == static_cast<Value>(x));
            CHECK(eval_term(parse_term("fbox wdia p"), h, v) == static_cast<Value>(x));
        }
    }
    auto m3 = heterogenize(named_lattice("m3"));
    Valuation v{{"p", m3.L.index_of("a")}, {"q", m3.L.index_of("b")}};
    CHECK(eval_term(parse_term("fdia (wbox p cap wbox q)"), m3, v) == static_cast<Value>(m3.L.bot()));
    CHECK(eval_structure(s_scirc(Sort::P), Polarity::Succedent, m3, v) == 0u);
    // display postulate D_PL_left read as an adjunction, valuation by valuation
    for (const char* text : {"wbox p |- o q", "wbox p cap wbox q |- o p", "wbox (p) |- o fbox wdia q"}) {
        auto g = parse_sequent(text);
        auto moved = make_sequent(s_bullet(g.left), g.right->a);
        for (const auto& l : lattice_pool(5)) {
            auto h = heterogenize(l);
            for (int x = 0; x < l.size(); ++x)
                for (int y = 0; y < l.size(); ++y) {
                    Valuation w{{"p", x}, {"q", y}};
                    bool lhs = value_leq(Sort::P, eval_structure(g.left, Polarity::Precedent, h, w),
                                         eval_structure(g.right, Polarity::Succedent, h, w), h);
                    bool rhs = value_leq(Sort::L, eval_structure(moved.left, Polarity::Precedent, h, w),
                                         eval_structure(moved.right, Polarity::Succedent, h, w), h);
                    CHECK(lhs == rhs);
                }
        }
    }
}

TEST_CASE("countermodel examples") {
    auto pool = lattice_pool(5);
    auto cd = countermodel(axiom_sequent(AxiomName::cD1, {F("p"), F("q"), F("r")}), pool);
    REQUIRE(cd);
    CHECK(cd->lattice_name == "m3");
    std::set<int> vals;
    for (const auto& [atom, x] : cd->valuation) vals.insert(x);
    CHECK(vals.size() == 3);  // three distinct atoms of M3
    CHECK(!countermodel(axiom_sequent(AxiomName::cC1, {F("p"), F("q")}), pool));
    auto pq = countermodel(parse_sequent("p |- q"), pool);
    REQUIRE(pq);
    CHECK(pq->lattice_name == "chain2");
    CHECK(pq->valuation.at("p") == 1);
    CHECK(pq->valuation.at("q") == 0);
    // distributive members satisfy the distributivity sequent
    for (const auto& l : pool)
        if (l.distributive())
            CHECK(sequent_valid(axiom_sequent(AxiomName::cD1, {F("p"), F("q"), F("r")}), heterogenize(l)));
    auto m3 = named_lattice("m3");
    Valuation v{{"p", m3.index_of("a")}, {"q", m3.index_of("b")}, {"r", m3.index_of("c")}};
    auto seq = axiom_sequent(AxiomName::cD1, {F("p"), F("q"), F("r")});
    auto h = heterogenize(m3);
    CHECK(!value_leq(Sort::L, eval_structure(seq.left, Polarity::Precedent, h, v),
                     eval_structure(seq.right, Polarity::Succedent, h, v), h));
}

TEST_CASE("consequence equivalence examples") {
    auto pool = lattice_pool(5);
    CHECK(consequence_equiv_check(F("p /\\ q"), F("p"), pool));
    CHECK(consequence_equiv_check(F("p /\\ (q \\/ r)"), F("(p /\\ q) \\/ (p /\\ r)"), pool));
    CHECK(consequence_equiv_check(F("p \\/ q"), F("p \\/ q"), pool));
    CHECK(formula_leq_valid(F("p /\\ q"), F("p"), named_lattice("m3")));
    CHECK(!formula_leq_valid(F("p /\\ (q \\/ r)"), F("(p /\\ q) \\/ (p /\\ r)"), named_lattice("m3")));
}

TEST_CASE("property: lattice order and translated validity agree (size <= 3, 2 atoms)") {
    auto pool = lattice_pool(5);
    auto fs = testgen::all_formulas(3, {"p", "q"});
    std::vector<HeterogeneousAlgebra> hs;
    for (const auto& l : pool) hs.push_back(heterogenize(l));
    for (const auto& a : fs)
        for (const auto& b : fs) {
            INFO(print_formula(a) << " |- " << print_formula(b));
            auto s = translate_sequent(a, b);
            for (std::size_t i = 0; i < pool.size(); ++i)
                CHECK(leq_oracle(a, b, pool[i], {"p", "q"}) == sequent_valid(s, hs[i]));
        }
}

TEST_CASE("property: derivable end-sequents are valid on every pool member") {
    auto pool = lattice_pool(5);
    std::vector<HeterogeneousAlgebra> hs;
    for (const auto& l : pool) hs.push_back(heterogenize(l));
    std::vector<Sequent> ends;
    for (const auto& e : embedded_proofs()) ends.push_back(embedded_proof(e.name)->conclusion);
    for (AxiomName n : all_axioms()) {
        if (n == AxiomName::cD1) continue;
        std::vector<FormulaPtr> ps{F("p"), F("q"), F("r")};
        ps.resize(arity(n));
        try {
            ends.push_back(axiom_derivation(n, ps)->conclusion);
        } catch (const Underivable&) {
            ends.push_back(axiom_derivation_extended(n, ps)->conclusion);
        }
    }
    for (const auto& s : ends)
        for (const auto& h : hs) {
            INFO(print_sequent(s) << " on " << h.L.name());
            CHECK(sequent_valid(s, h));
        }
}

TEST_CASE("rule soundness on the 2-chain, and a converse that must fail") {
    auto h = heterogenize(named_lattice("chain2"));
    for (const auto& r : builtin_rules()) {
        INFO(r.name);
        CHECK(rule_sound_exhaustive(r, h, 1, {"p"}).sound);
    }
    RuleSchema w = *lookup_rule("W_left");
    w.invertible = true;  // S ; U |- T does not give S |- T
    auto res = rule_sound_exhaustive(w, h, 2, {"p"});
    CHECK(!res.sound);
    CHECK(!res.witness.empty());
}
