#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dll/cutelim.hpp"
#include "dll/kernel.hpp"
#include "dll/search.hpp"
#include "dll/translate.hpp"

namespace dll::testgen {

struct CutCase {
    std::string name;
    DerivPtr proof;  // contains at least one cut, no hypotheses
};

inline DerivPtr prove_or_throw(const Sequent& s) {
    SearchConfig cfg;
    cfg.contraction_cap = 3;
    auto out = backward_search(s, cfg);
    if (out.status != SearchStatus::Proved) throw std::runtime_error("no proof of " + print_sequent(s));
    return out.proof;
}

inline DerivPtr prove_or_throw(const std::string& s) { return prove_or_throw(parse_sequent(s)); }

inline const char* cut_rule_for(const TermPtr& t) { return t->sort == Sort::L ? "Cut_L" : "Cut_P"; }

// Cut d against a proof of t |- t on the side where t stands alone.
inline DerivPtr cut_with_identity(const DerivPtr& d, bool succedent) {
    const Sequent& c = d->conclusion;
    const StructPtr& side = succedent ? c.right : c.left;
    if (side->op != SOp::Leaf) throw std::invalid_argument("side is not a term");
    const TermPtr& t = side->term;
    DerivPtr id = prove_or_throw(make_sequent(s_leaf(t), s_leaf(t)));
    return succedent ? make_node(c, cut_rule_for(t), {d, id}) : make_node(c, cut_rule_for(t), {id, d});
}

inline DerivPtr principal(const std::string& concl, const DerivPtr& l, const DerivPtr& r) {
    Sequent c = parse_sequent(concl);
    TermPtr a = l->conclusion.right->term;
    return make_node(c, cut_rule_for(a), {l, r});
}

inline DerivPtr up(const std::string& s, const char* rule, std::vector<DerivPtr> prem) {
    return make_node(parse_sequent(s), rule, std::move(prem));
}

// One principal cut per connective and constant.
inline std::vector<CutCase> principal_cases() {
    std::vector<CutCase> out;
    auto id = [](const char* a) { return make_node(parse_sequent(std::string(a) + " |- " + a), "Id"); };
    out.push_back({"principal/atom", principal("p |- p", id("p"), id("p"))});
    out.push_back({"principal/top", principal("I |- T", up("I |- T", "Top_right", {}),
                                              up("T |- T", "Top_left", {up("I |- T", "Top_right", {})}))});
    out.push_back({"principal/bot", principal("F |- I", up("F |- F", "Bot_right", {up("F |- I", "Bot_left", {})}),
                                              up("F |- I", "Bot_left", {}))});
    out.push_back({"principal/cap",
                   principal("wbox p ; wbox q |- o T",
                             up("wbox p ; wbox q |- wbox p cap wbox q", "Cap_right",
                                {prove_or_throw("wbox p |- wbox p"), prove_or_throw("wbox q |- wbox q")}),
                             up("wbox p cap wbox q |- o T", "Cap_left", {prove_or_throw("wbox p ; wbox q |- o T")}))});
    out.push_back({"principal/cup",
                   principal("o p |- wdia p ; wdia q",
                             up("o p |- wdia p cup wdia q", "Cup_right", {prove_or_throw("o p |- wdia p ; wdia q")}),
                             up("wdia p cup wdia q |- wdia p ; wdia q", "Cup_left",
                                {prove_or_throw("wdia p |- wdia p"), prove_or_throw("wdia q |- wdia q")}))});
    out.push_back({"principal/wdia",
                   principal("o fdia wbox p |- wdia p cup wdia q",
                             up("o fdia wbox p |- wdia p", "WDia_right", {prove_or_throw("fdia wbox p |- p")}),
                             up("wdia p |- wdia p cup wdia q", "WDia_left",
                                {prove_or_throw("o p |- wdia p cup wdia q")}))});
    out.push_back({"principal/wbox",
                   principal("wbox p cap wbox q |- o fbox wdia p",
                             up("wbox p cap wbox q |- wbox p", "WBox_left",
                                {prove_or_throw("wbox p cap wbox q |- o p")}),
                             up("wbox p |- o fbox wdia p", "WBox_right", {prove_or_throw("p |- fbox wdia p")}))});
    out.push_back({"principal/bdia",
                   principal("* (wbox p cap wbox q) |- p",
                             up("* (wbox p cap wbox q) |- fdia wbox p", "BDia_right",
                                {prove_or_throw("wbox p cap wbox q |- wbox p")}),
                             up("fdia wbox p |- p", "BDia_left", {prove_or_throw("* wbox p |- p")}))});
    out.push_back({"principal/bbox",
                   principal("p |- * (wdia p cup wdia q)",
                             up("p |- fbox wdia p", "BBox_left", {prove_or_throw("p |- * wdia p")}),
                             up("fbox wdia p |- * (wdia p cup wdia q)", "BBox_right",
                                {prove_or_throw("wdia p |- wdia p cup wdia q")}))});
    return out;
}

// A node below the root, about halfway down the leftmost branch, with a term
// standing alone on one side.
inline bool splice_interior(const DerivPtr& d, DerivPtr& out) {
    std::vector<DerivPtr> spine;
    for (DerivPtr n = d; n; n = n->premises.empty() ? nullptr : n->premises[0]) spine.push_back(n);
    std::size_t mid = spine.size() / 2;
    for (std::size_t k = mid; k + 1 < spine.size(); ++k) {
        const DerivPtr& n = spine[k];
        bool r = n->conclusion.right->op == SOp::Leaf, l = n->conclusion.left->op == SOp::Leaf;
        if (!r && !l) continue;
        if (k == 0) continue;
        DerivPtr cut = cut_with_identity(n, r);
        std::vector<int> path(k, 0);
        out = replace_node(d, path, 0, cut);
        return true;
    }
    return false;
}

// 50 cuts: the principal figures, every printed proof cut at its root, and
// cuts spliced into the interior of printed proofs.
inline std::vector<CutCase> cut_suite() {
    std::vector<CutCase> out = principal_cases();
    std::vector<std::pair<std::string, DerivPtr>> goldens;
    for (const auto& e : embedded_proofs())
        if (e.golden) goldens.push_back({e.name, embedded_proof(e.name)});
    for (const auto& [name, d] : goldens) {
        bool r = d->conclusion.right->op == SOp::Leaf;
        out.push_back({"root/" + name, cut_with_identity(d, r)});
    }
    for (const auto& [name, d] : goldens) {
        if (out.size() >= 50) break;
        DerivPtr spliced;
        if (splice_interior(d, spliced)) out.push_back({"interior/" + name, spliced});
    }
    if (out.size() > 50) out.resize(50);
    return out;
}

}  // namespace dll::testgen
