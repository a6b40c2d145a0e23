#include "doctest.h"
#include "dll/syntax.hpp"
#include "gen.hpp"

using namespace dll;

TEST_CASE("formula parsing and precedence") {
    auto f = parse_formula("p /\\ (q \\/ r)");
    REQUIRE(f->kind == Formula::Kind::And);
    CHECK(f->rhs->kind == Formula::Kind::Or);
    CHECK(parse_formula("T")->kind == Formula::Kind::Top);
    auto g = parse_formula("p /\\ q \\/ r");
    CHECK(print_formula(g, true) == "((p /\\ q) \\/ r)");
    CHECK(print_formula(parse_formula("p /\\ q /\\ r"), true) == "((p /\\ q) /\\ r)");
    CHECK(print_formula(parse_formula("p /\\ (q /\\ r)")) == "p /\\ (q /\\ r)");
    CHECK_THROWS_AS(parse_formula("p /\\"), SyntaxError);
    CHECK_THROWS_AS(parse_formula("P"), SyntaxError);
    try {
        parse_formula("p \\/ )");
        FAIL("no error");
    } catch (const SyntaxError& e) {
        CHECK(e.offset == 5);
    }
}

TEST_CASE("sequent parsing examples") {
    auto s = parse_sequent("fdia (wbox p cap wbox q) |- fbox (wdia p capop wdia q)");
    CHECK(s.sort == Sort::L);
    REQUIRE(s.left->op == SOp::Leaf);
    CHECK(s.left->term->op == Op::BDia);
    CHECK(s.left->term->a->op == Op::Cap);
    CHECK(s.left->term->a->sort == Sort::P);
    CHECK(s.right->term->a->op == Op::Cap);
    CHECK(s.right->term->a->sort == Sort::Pop);
    CHECK(parse_sequent("p |- q").sort == Sort::L);
    auto w = parse_sequent("wbox p |- o (fbox (wdia p))");
    CHECK(w.sort == Sort::P);
    CHECK(w.right->op == SOp::Circ);
}

TEST_CASE("sort errors") {
    CHECK_THROWS_AS(parse_sequent("wbox p |- p"), SortError);
    CHECK_THROWS_AS(parse_sequent("wbox (wbox p) |- o p"), SortError);
    CHECK_THROWS_AS(parse_sequent("wbox p ; wdia p |- o p"), SortError);
    CHECK_THROWS_AS(parse_sequent("fdia (wdia p) |- p"), SortError);
    CHECK_THROWS_AS(parse_sequent("p capop q |- p"), SortError);
    CHECK_THROWS_AS(parse_sequent("* p |- q"), SortError);
    CHECK_THROWS_AS(parse_sequent("o (wbox p) |- wbox q"), SortError);
    try {
        parse_sequent("wbox p cap wdia q |- o p");
        FAIL("no error");
    } catch (const SortError& e) {
        std::string m = e.what();
        CHECK(m.find("expected sort P") != std::string::npos);
        CHECK(m.find("found Pop") != std::string::npos);
    }
}

TEST_CASE("sort inference of o and S0") {
    auto a = parse_sequent("o p |- wdia p");
    CHECK(a.left->sort == Sort::Pop);
    auto b = parse_sequent("S0 ; o p |- o q");
    CHECK(b.sort == Sort::Pop);
    auto c = parse_sequent("* (o p ; o q) |- r");
    CHECK(c.left->a->sort == Sort::P);
    auto d = parse_sequent("r |- * (o p ; o q)");
    CHECK(d.right->a->sort == Sort::Pop);
    // improper sorts survive printing through markers
    auto e = make_sequent(s_circ(s_leaf(t_atom("p")), Sort::P), s_circ(s_leaf(t_atom("q")), Sort::P));
    std::string txt = print_sequent(e);
    CHECK(txt == "o[P] p |- o[P] q");
    CHECK(print_sequent(parse_sequent("o p |- wbox p")) == "o p |- wbox p");
    CHECK(parse_sequent(txt) == e);
}

TEST_CASE("polarity") {
    auto s = parse_sequent("p |- * (o q)");
    CHECK(polarity_at(s, parse_path("R.0")) == Polarity::Succedent);
    auto t = parse_sequent("wbox p > wbox q |- wbox r");
    CHECK(polarity_at(t, parse_path("L.0")) == Polarity::Succedent);
    CHECK(polarity_at(t, parse_path("L.1")) == Polarity::Precedent);
    CHECK(polarity_at(parse_sequent("p |- q"), parse_path("L")) == Polarity::Precedent);
    CHECK_THROWS_AS(polarity_at(t, parse_path("L.2")), PathError);
    CHECK_THROWS_AS(polarity_at(t, parse_path("L.0.0")), PathError);
}

TEST_CASE("property: print/parse round trip on random sequents up to depth 8") {
    testgen::Gen g(7);
    for (int i = 0; i < 3000; ++i) {
        Sequent s = g.sequent(1 + i % 8, i % 2 == 0);
        std::string txt = print_sequent(s);
        Sequent back = parse_sequent(txt);
        INFO(txt);
        REQUIRE(back == s);
        CHECK(print_sequent(back) == txt);
    }
    for (int i = 0; i < 1000; ++i) {
        TermPtr t = g.term(static_cast<Sort>(i % 3), 1 + i % 8);
        REQUIRE(equal(parse_term(print_term(t)), t));
    }
}

TEST_CASE("property: ill-sorted inputs are rejected") {
    testgen::Gen g(11);
    for (int i = 0; i < 500; ++i) {
        std::string P = print_term(g.term(Sort::P, 1 + i % 4));
        std::string Q = print_term(g.term(Sort::Pop, 1 + i % 4));
        std::string A = print_term(g.term(Sort::L, 1 + i % 4));
        CHECK_THROWS_AS(parse_sequent("wbox (" + P + ") |- o p"), SortError);
        CHECK_THROWS_AS(parse_sequent("wdia (" + Q + ") |- o p"), SortError);
        CHECK_THROWS_AS(parse_sequent("fdia (" + A + ") |- p"), SortError);
        CHECK_THROWS_AS(parse_sequent("fbox (" + P + ") |- p"), SortError);
        CHECK_THROWS_AS(parse_sequent("(" + P + ") cap (" + Q + ") |- o p"), SortError);
        CHECK_THROWS_AS(parse_sequent("(" + P + ") ; (" + Q + ") |- o p"), SortError);
        CHECK_THROWS_AS(parse_sequent("o (" + P + ") |- " + P), SortError);
        CHECK_THROWS_AS(parse_sequent("* (" + A + ") |- p"), SortError);
        CHECK_THROWS_AS(parse_sequent(A + " |- " + P), SortError);
    }
}

TEST_CASE("property: polarity flips across the turnstile") {
    testgen::Gen g(3);
    for (int i = 0; i < 300; ++i) {
        Sequent s = g.sequent(1 + i % 5, false);
        Sequent m = make_sequent(s.right, s.left);
        for (auto& p : all_paths(s)) {
            Path q = p;
            q.side = p.side == Side::Left ? Side::Right : Side::Left;
            REQUIRE(polarity_at(m, q) == flip(polarity_at(s, p)));
            // one more negative coordinate flips again
            StructPtr z = struct_at(s, p);
            if (z->sort != Sort::L) {
                Sequent w = replace_at(s, p, s_sup(z, z));
                Path r = p;
                r.idx.push_back(0);
                REQUIRE(polarity_at(w, r) == flip(polarity_at(s, p)));
            }
        }
    }
}
