#include "dll/cutelim.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>

#include "dll/calculus.hpp"

namespace dll {

const char* cut_class_name(CutClass c) {
    switch (c) {
        case CutClass::Principal: return "Principal";
        case CutClass::LeftParametric: return "LeftParametric";
        case CutClass::RightParametric: return "RightParametric";
    }
    return "?";
}

bool is_cut_rule(const std::string& rule) { return rule == "Cut_L" || rule == "Cut_P"; }

DerivPtr node_at(const DerivPtr& d, const DPath& p) {
    DerivPtr cur = d;
    for (int i : p) {
        if (i < 0 || i >= static_cast<int>(cur->premises.size())) throw PathError("no premise " + std::to_string(i));
        cur = cur->premises[i];
    }
    return cur;
}

DerivPtr replace_node(const DerivPtr& d, const DPath& p, std::size_t from, const DerivPtr& repl) {
    if (from == p.size()) return repl;
    auto prem = d->premises;
    prem[p[from]] = replace_node(prem[p[from]], p, from + 1, repl);
    return make_node(d->conclusion, d->rule, std::move(prem), d->backward);
}

std::vector<DPath> cut_sites(const DerivPtr& d) {
    std::vector<DPath> out;
    DPath cur;
    std::function<void(const DerivPtr&)> walk = [&](const DerivPtr& n) {
        if (is_cut_rule(n->rule)) out.push_back(cur);
        for (std::size_t i = 0; i < n->premises.size(); ++i) {
            cur.push_back(static_cast<int>(i));
            walk(n->premises[i]);
            cur.pop_back();
        }
    };
    walk(d);
    return out;
}

namespace {

TermPtr cut_term(const DerivPtr& cut) {
    const StructPtr& s = cut->premises[0]->conclusion.right;
    if (s->op != SOp::Leaf) throw std::logic_error("cut formula is not a term");
    return s->term;
}

// Last rule of a premise introduces the cut term on the given side.
bool introduces(const DerivPtr& n, const TermPtr& a, bool succedent) {
    if (n->backward) return false;
    const std::string& r = n->rule;
    if (r == "Id") return true;
    switch (a->op) {
        case Op::Atom: return false;
        case Op::Top: return r == (succedent ? "Top_right" : "Top_left");
        case Op::Bot: return r == (succedent ? "Bot_right" : "Bot_left");
        case Op::Cap: return r == (succedent ? "Cap_right" : "Cap_left");
        case Op::Cup: return r == (succedent ? "Cup_right" : "Cup_left");
        case Op::WDia: return r == (succedent ? "WDia_right" : "WDia_left");
        case Op::WBox: return r == (succedent ? "WBox_left" : "WBox_right");
        case Op::BDia: return r == (succedent ? "BDia_right" : "BDia_left");
        case Op::BBox: return r == (succedent ? "BBox_left" : "BBox_right");
    }
    return false;
}

const char* cut_for(const TermPtr& t) { return t->sort == Sort::L ? "Cut_L" : "Cut_P"; }

DerivPtr node(const Sequent& s, const char* rule, std::vector<DerivPtr> prem, bool back = false) {
    return make_node(s, rule, std::move(prem), back);
}

std::vector<int> measure_of(const DerivPtr& d) {
    std::vector<int> out;
    std::function<void(const DerivPtr&)> walk = [&](const DerivPtr& n) {
        if (is_cut_rule(n->rule)) out.push_back(term_complexity(cut_term(n)));
        for (const auto& p : n->premises) walk(p);
    };
    walk(d);
    std::sort(out.rbegin(), out.rend());
    return out;
}

// The reduct of a principal cut node.
DerivPtr reduct(const DerivPtr& cut) {
    const DerivPtr& l = cut->premises[0];
    const DerivPtr& r = cut->premises[1];
    TermPtr a = cut_term(cut);
    const Sequent& c = cut->conclusion;
    if (l->rule == "Id") return r;
    if (r->rule == "Id") return l;
    auto leaf = [](const TermPtr& t) { return s_leaf(t); };
    switch (a->op) {
        case Op::Top: return r->premises[0];  // I |- X
        case Op::Bot: return l->premises[0];  // X |- I
        case Op::Cap: {
            // l: S ; T |- s cap t from S |- s, T |- t ; r: s cap t |- U from s ; t |- U
            const DerivPtr& p1 = l->premises[0];
            const DerivPtr& p2 = l->premises[1];
            const DerivPtr& p3 = r->premises[0];
            StructPtr S = p1->conclusion.left, T = p2->conclusion.left, U = r->conclusion.right;
            StructPtr s = leaf(a->a), t = leaf(a->b);
            auto d1 = node(make_sequent(t, s_sup(s, U)), "D_P_left", {p3});
            auto d2 = node(make_sequent(T, s_sup(s, U)), cut_for(a->b), {p2, d1});
            auto d3 = node(make_sequent(s_dot(s, T), U), "D_P_left", {d2}, true);
            auto d4 = node(make_sequent(s_dot(T, s), U), "E_left", {d3});
            auto d5 = node(make_sequent(s, s_sup(T, U)), "D_P_left", {d4});
            auto d6 = node(make_sequent(S, s_sup(T, U)), cut_for(a->a), {p1, d5});
            auto d7 = node(make_sequent(s_dot(T, S), U), "D_P_left", {d6}, true);
            return node(make_sequent(s_dot(S, T), U), "E_left", {d7});
        }
        case Op::Cup: {
            // l: S |- s cup t from S |- s ; t ; r: s cup t |- T ; U from s |- T, t |- U
            const DerivPtr& p3 = l->premises[0];
            const DerivPtr& p1 = r->premises[0];
            const DerivPtr& p2 = r->premises[1];
            StructPtr S = l->conclusion.left, T = p1->conclusion.right, U = p2->conclusion.right;
            StructPtr s = leaf(a->a), t = leaf(a->b);
            auto d1 = node(make_sequent(s_sup(s, S), t), "D_P_right", {p3});
            auto d2 = node(make_sequent(s_sup(s, S), U), cut_for(a->b), {d1, p2});
            auto d3 = node(make_sequent(S, s_dot(s, U)), "D_P_right", {d2}, true);
            auto d4 = node(make_sequent(S, s_dot(U, s)), "E_right", {d3});
            auto d5 = node(make_sequent(s_sup(U, S), s), "D_P_right", {d4});
            auto d6 = node(make_sequent(s_sup(U, S), T), cut_for(a->a), {d5, p1});
            auto d7 = node(make_sequent(S, s_dot(U, T)), "D_P_right", {d6}, true);
            return node(make_sequent(S, s_dot(T, U)), "E_right", {d7});
        }
        case Op::WDia: {
            // l: o X |- wdia A from X |- A ; r: wdia A |- Pi from o A |- Pi
            const DerivPtr& p1 = l->premises[0];
            const DerivPtr& p2 = r->premises[0];
            StructPtr X = p1->conclusion.left, Pi = c.right, A = leaf(a->a);
            auto d1 = node(make_sequent(A, s_bullet(Pi)), "D_PL_right", {p2});
            auto d2 = node(make_sequent(X, s_bullet(Pi)), "Cut_L", {p1, d1});
            return node(c, "D_PL_right", {d2}, true);
        }
        case Op::WBox: {
            // l: G |- wbox A from G |- o A ; r: wbox A |- o X from A |- X
            const DerivPtr& p1 = l->premises[0];
            const DerivPtr& p2 = r->premises[0];
            StructPtr G = c.left, X = p2->conclusion.right, A = leaf(a->a);
            auto d1 = node(make_sequent(s_bullet(G), A), "D_PL_left", {p1});
            auto d2 = node(make_sequent(s_bullet(G), X), "Cut_L", {d1, p2});
            return node(c, "D_PL_left", {d2}, true);
        }
        case Op::BDia: {
            // l: * G |- fdia alpha from G |- alpha ; r: fdia alpha |- X from * alpha |- X
            const DerivPtr& p1 = l->premises[0];
            const DerivPtr& p2 = r->premises[0];
            StructPtr G = p1->conclusion.left, X = c.right, al = leaf(a->a);
            auto d1 = node(make_sequent(al, s_circ(X, Sort::P)), "D_PL_left", {p2}, true);
            auto d2 = node(make_sequent(G, s_circ(X, Sort::P)), "Cut_P", {p1, d1});
            return node(c, "D_PL_left", {d2});
        }
        case Op::BBox: {
            // l: X |- fbox xi from X |- * xi ; r: fbox xi |- * Pi from xi |- Pi
            const DerivPtr& p1 = l->premises[0];
            const DerivPtr& p2 = r->premises[0];
            StructPtr X = c.left, Pi = p2->conclusion.right, xi = leaf(a->a);
            auto d1 = node(make_sequent(s_circ(X, Sort::Pop), xi), "D_PL_right", {p1}, true);
            auto d2 = node(make_sequent(s_circ(X, Sort::Pop), Pi), "Cut_P", {d1, p2});
            return node(c, "D_PL_right", {d2});
        }
        default: break;
    }
    throw NotPrincipal("no reduction for a cut on " + print_term(a));
}

// Positions of metavariable v in a pattern, as structure paths.
void var_paths(const PatPtr& p, int v, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (p->k == Pat::K::Var) {
        if (p->var == v) out.push_back(cur);
        return;
    }
    if (p->k != Pat::K::SNode) return;
    if (p->a) {
        cur.push_back(0);
        var_paths(p->a, v, cur, out);
        cur.pop_back();
    }
    if (p->b) {
        cur.push_back(1);
        var_paths(p->b, v, cur, out);
        cur.pop_back();
    }
}

// d proves Q with the cut term at q. Cut it there against `other` and return
// a proof of Q with `repl` at q.
DerivPtr cut_in_place(const DerivPtr& d, const Path& q, const DerivPtr& other, bool succedent,
                      const std::string& rule, const StructPtr& repl) {
    const Sequent& Q = d->conclusion;
    Sequent Q2 = replace_at(Q, q, repl);
    auto ch = display_chain(Q, q);
    DerivPtr shown = apply_chain(d, ch);
    auto ch2 = display_chain(Q2, q);
    Sequent D2 = ch2.empty() ? Q2 : ch2.back().result;
    DerivPtr cut = succedent ? make_node(D2, rule, {shown, other}) : make_node(D2, rule, {other, shown});
    return unapply_chain(cut, Q2, ch2);
}

}  // namespace

CutSite classify_cut(const DerivPtr& d, const DPath& p) {
    DerivPtr n = node_at(d, p);
    if (!is_cut_rule(n->rule) || n->premises.size() != 2) throw PathError("node is not a cut");
    TermPtr a = cut_term(n);
    bool lp = introduces(n->premises[0], a, true);
    bool rp = introduces(n->premises[1], a, false);
    CutClass c = lp && rp ? CutClass::Principal : !lp ? CutClass::LeftParametric : CutClass::RightParametric;
    return {p, c};
}

std::vector<int> cut_measure(const DerivPtr& d) { return measure_of(d); }

DerivPtr reduce_principal(const DerivPtr& d, const DPath& p) {
    if (classify_cut(d, p).cls != CutClass::Principal) throw NotPrincipal("cut is not principal");
    DerivPtr n = node_at(d, p);
    DerivPtr red = reduct(n);
    if (!(red->conclusion == n->conclusion)) throw std::logic_error("reduct changed the end-sequent");
    DerivPtr out = replace_node(d, p, 0, red);
    if (!(measure_of(out) < measure_of(d))) throw std::logic_error("principal step did not reduce the cut measure");
    return out;
}

namespace {

struct Tracer {
    DerivPtr other;  // the premise not being traced
    bool left;       // tracing the left premise (succedent occurrences)
    std::string rule;
    StructPtr repl;
    std::size_t cuts = 0;

    // Where position p of a conclusion matching `pat` comes from: a
    // structure variable and the rest of the path, or (var < 0) the rule's
    // own term.
    static std::pair<int, std::vector<int>> locate(const RuleSchema& r, const SeqPat& pat, const Path& p) {
        PatPtr cur = p.side == Side::Left ? pat.left : pat.right;
        for (std::size_t k = 0;; ++k) {
            if (cur->k == Pat::K::Var) {
                if (!kind_is_struct(r.vars[cur->var].kind)) return {-1, {}};
                return {cur->var, std::vector<int>(p.idx.begin() + static_cast<long>(k), p.idx.end())};
            }
            if (cur->k == Pat::K::TNode || k == p.idx.size()) return {-1, {}};
            cur = p.idx[k] == 0 ? cur->a : cur->b;
            if (!cur) throw std::logic_error("path leaves the rule pattern");
        }
    }

    DerivPtr cut_here(const DerivPtr& d, const Path& p) {
        ++cuts;
        return cut_in_place(d, p, other, left, rule, repl);
    }

    // A proof of d's conclusion with repl at every position in ps.
    DerivPtr run(const DerivPtr& d, const std::vector<Path>& ps) {
        if (ps.empty()) return d;
        const RuleSchema* r = lookup_rule(d->rule, true);
        if (!r) throw std::logic_error("cannot trace through " + d->label());
        const SeqPat& cpat = d->backward ? r->premises[0] : r->conclusion;
        std::vector<const SeqPat*> ppats;
        if (d->backward) ppats.push_back(&r->conclusion);
        else
            for (const auto& pp : r->premises) ppats.push_back(&pp);

        std::vector<Path> rest;
        std::vector<std::vector<Path>> up(ppats.size());
        std::optional<Path> intro;
        for (const Path& p : ps) {
            auto [v, tail] = locate(*r, cpat, p);
            if (v < 0) {
                if (intro) throw std::logic_error("two introductions in one step");
                intro = p;
                continue;
            }
            rest.push_back(p);
            for (std::size_t i = 0; i < ppats.size(); ++i)
                for (Side sd : {Side::Left, Side::Right}) {
                    std::vector<std::vector<int>> occ;
                    std::vector<int> tmp;
                    var_paths(sd == Side::Left ? ppats[i]->left : ppats[i]->right, v, tmp, occ);
                    for (auto& idx : occ) {
                        idx.insert(idx.end(), tail.begin(), tail.end());
                        up[i].push_back(Path{sd, idx});
                    }
                }
        }
        DerivPtr out = d;
        if (!rest.empty()) {
            std::vector<DerivPtr> prem;
            for (std::size_t i = 0; i < ppats.size(); ++i) prem.push_back(run(d->premises[i], up[i]));
            Sequent c = d->conclusion;
            for (const Path& p : rest) c = replace_at(c, p, repl);
            out = make_node(c, d->rule, std::move(prem), d->backward);
        }
        if (intro) out = cut_here(out, *intro);
        return out;
    }
};

}  // namespace

DerivPtr permute_parametric(const DerivPtr& d, const DPath& p) {
    DerivPtr n = node_at(d, p);
    CutSite site = classify_cut(d, p);
    if (site.cls == CutClass::Principal) throw std::invalid_argument("cut is principal");
    bool left = site.cls == CutClass::LeftParametric;
    const DerivPtr& up = n->premises[left ? 0 : 1];
    Tracer t{n->premises[left ? 1 : 0], left, n->rule, nullptr};
    t.repl = left ? t.other->conclusion.right : t.other->conclusion.left;
    DerivPtr out = t.run(up, {Path{left ? Side::Right : Side::Left, {}}});
    if (!(out->conclusion == n->conclusion)) throw std::logic_error("parametric move changed the end-sequent");
    return replace_node(d, p, 0, out);
}

CutElimResult eliminate_cuts(const DerivPtr& d, std::size_t budget) {
    CutElimResult res;
    DerivPtr cur = d;
    for (;;) {
        auto sites = cut_sites(cur);
        if (sites.empty()) break;
        // topmost: no other cut below it in the tree; leftmost in preorder
        const DPath* pick = nullptr;
        for (std::size_t i = 0; i < sites.size() && !pick; ++i) {
            bool top = true;
            for (std::size_t j = 0; j < sites.size() && top; ++j)
                if (j != i && sites[j].size() > sites[i].size() &&
                    std::equal(sites[i].begin(), sites[i].end(), sites[j].begin()))
                    top = false;
            if (top) pick = &sites[i];
        }
        if (res.steps >= budget) throw BudgetExceeded("cut elimination budget exceeded", cur);
        ++res.steps;
        DerivPtr n = node_at(cur, *pick);
        std::string where = "/";
        for (int i : *pick) where += std::to_string(i) + "/";
        std::string cf = print_term(cut_term(n));
        if (n->premises[0]->rule == "Id" || n->premises[1]->rule == "Id") {
            cur = replace_node(cur, *pick, 0, n->premises[0]->rule == "Id" ? n->premises[1] : n->premises[0]);
            res.log.push_back("identity " + cf + " at " + where);
            continue;
        }
        CutSite site = classify_cut(cur, *pick);
        if (site.cls == CutClass::Principal) {
            cur = reduce_principal(cur, *pick);
            res.log.push_back("principal " + cf + " at " + where);
        } else {
            const DerivPtr& up = n->premises[site.cls == CutClass::LeftParametric ? 0 : 1];
            cur = permute_parametric(cur, *pick);
            res.log.push_back(std::string(site.cls == CutClass::LeftParametric ? "left" : "right") + "-parametric " +
                              cf + " from " + up->label() + " at " + where);
        }
    }
    res.proof = cur;
    return res;
}

namespace {

void subterms(const TermPtr& t, std::set<std::string>& out) {
    if (!t) return;
    out.insert(print_term(t));
    subterms(t->a, out);
    subterms(t->b, out);
}

void struct_terms(const StructPtr& s, std::vector<TermPtr>& out) {
    if (!s) return;
    if (s->op == SOp::Leaf) out.push_back(s->term);
    struct_terms(s->a, out);
    struct_terms(s->b, out);
}

}  // namespace

bool subterm_property(const DerivPtr& d, std::string* witness) {
    std::set<std::string> allowed;
    std::vector<TermPtr> ts;
    struct_terms(d->conclusion.left, ts);
    struct_terms(d->conclusion.right, ts);
    for (const auto& t : ts) subterms(t, allowed);
    bool ok = true;
    std::function<void(const DerivPtr&)> walk = [&](const DerivPtr& n) {
        if (!ok) return;
        std::vector<TermPtr> here;
        struct_terms(n->conclusion.left, here);
        struct_terms(n->conclusion.right, here);
        for (const auto& t : here) {
            if (!allowed.count(print_term(t))) {
                ok = false;
                if (witness) *witness = print_term(t) + " in " + print_sequent(n->conclusion);
                return;
            }
        }
        for (const auto& p : n->premises) walk(p);
    };
    walk(d);
    return ok;
}

}  // namespace dll
