#include "dll/translate.hpp"

#include <functional>
#include <mutex>
#include <unordered_map>

#include "dll/search.hpp"

namespace dll {

// ---------------------------------------------------------------- translations

TermPtr tau_pre(const FormulaPtr& a) {
    switch (a->kind) {
        case Formula::Kind::Atom: return t_bdia(t_wbox(t_atom(a->name)));
        case Formula::Kind::Top: return t_bdia(t_wbox(t_top()));
        case Formula::Kind::Bot: return t_bdia(t_wbox(t_bot()));
        case Formula::Kind::And: return t_bdia(t_cap(t_wbox(tau_pre(a->lhs)), t_wbox(tau_pre(a->rhs))));
        case Formula::Kind::Or: return t_bdia(t_cup(t_wbox(tau_pre(a->lhs)), t_wbox(tau_pre(a->rhs))));
    }
    return nullptr;
}

TermPtr tau_suc(const FormulaPtr& a) {
    switch (a->kind) {
        case Formula::Kind::Atom: return t_bbox(t_wdia(t_atom(a->name)));
        case Formula::Kind::Top: return t_bbox(t_wdia(t_top()));
        case Formula::Kind::Bot: return t_bbox(t_wdia(t_bot()));
        case Formula::Kind::And: return t_bbox(t_cap(t_wdia(tau_suc(a->lhs)), t_wdia(tau_suc(a->rhs))));
        case Formula::Kind::Or: return t_bbox(t_cup(t_wdia(tau_suc(a->lhs)), t_wdia(tau_suc(a->rhs))));
    }
    return nullptr;
}

namespace {

// Expressions over the heterogeneous signature, before the symbol dictionary.
struct AExpr {
    std::string sym;  // gamma e_ell iota e_r cap_D cup_D meet_E join_E atom top bot
    std::string name;
    std::vector<AExpr> args;
};

AExpr ax(std::string sym, std::vector<AExpr> args) { return AExpr{std::move(sym), "", std::move(args)}; }

AExpr lattice_const(const FormulaPtr& a) {
    if (a->kind == Formula::Kind::Atom) return AExpr{"atom", a->name, {}};
    return AExpr{a->kind == Formula::Kind::Top ? "top" : "bot", "", {}};
}

AExpr ell_expr(const FormulaPtr& a) {
    switch (a->kind) {
        case Formula::Kind::And:
            return ax("gamma", {ax("cap_D", {ax("e_ell", {ell_expr(a->lhs)}), ax("e_ell", {ell_expr(a->rhs)})})});
        case Formula::Kind::Or:
            return ax("gamma", {ax("cup_D", {ax("e_ell", {ell_expr(a->lhs)}), ax("e_ell", {ell_expr(a->rhs)})})});
        default: return ax("gamma", {ax("e_ell", {lattice_const(a)})});
    }
}

AExpr r_expr(const FormulaPtr& a) {
    switch (a->kind) {
        case Formula::Kind::And:
            return ax("iota", {ax("meet_E", {ax("e_r", {r_expr(a->lhs)}), ax("e_r", {r_expr(a->rhs)})})});
        case Formula::Kind::Or:
            return ax("iota", {ax("join_E", {ax("e_r", {r_expr(a->lhs)}), ax("e_r", {r_expr(a->rhs)})})});
        default: return ax("iota", {ax("e_r", {lattice_const(a)})});
    }
}

TermPtr to_mt(const AExpr& e) {
    static const std::map<std::string, std::function<TermPtr(const std::vector<TermPtr>&)>> dict = {
        {"gamma", [](const auto& v) { return t_bdia(v[0]); }},
        {"e_ell", [](const auto& v) { return t_wbox(v[0]); }},
        {"iota", [](const auto& v) { return t_bbox(v[0]); }},
        {"e_r", [](const auto& v) { return t_wdia(v[0]); }},
        {"cap_D", [](const auto& v) { return t_cap(v[0], v[1]); }},
        {"cup_D", [](const auto& v) { return t_cup(v[0], v[1]); }},
        {"meet_E", [](const auto& v) { return t_cap(v[0], v[1]); }},
        {"join_E", [](const auto& v) { return t_cup(v[0], v[1]); }},
        {"top", [](const auto&) { return t_top(); }},
        {"bot", [](const auto&) { return t_bot(); }},
    };
    if (e.sym == "atom") return t_atom(e.name);
    std::vector<TermPtr> args;
    for (const auto& a : e.args) args.push_back(to_mt(a));
    return dict.at(e.sym)(args);
}

}  // namespace

TermPtr ell(const FormulaPtr& a) { return to_mt(ell_expr(a)); }
TermPtr rr(const FormulaPtr& a) { return to_mt(r_expr(a)); }

Sequent translate_sequent(const FormulaPtr& a, const FormulaPtr& b) {
    return make_sequent(s_leaf(tau_pre(a)), s_leaf(tau_suc(b)));
}

// ---------------------------------------------------------------- axioms

namespace {

struct AxiomInfo {
    AxiomName n;
    const char* name;
    int arity;
};

const std::vector<AxiomInfo>& axiom_table() {
    static const std::vector<AxiomInfo> t = {
        {AxiomName::cC1, "cC1", 2},       {AxiomName::cC2, "cC2", 2},       {AxiomName::dC1, "dC1", 2},
        {AxiomName::dC2, "dC2", 2},       {AxiomName::cA1, "cA1", 3},       {AxiomName::cA2, "cA2", 3},
        {AxiomName::dA1, "dA1", 3},       {AxiomName::dA2, "dA2", 3},       {AxiomName::cI1, "cI1", 1},
        {AxiomName::cI2, "cI2", 1},       {AxiomName::dI1, "dI1", 1},       {AxiomName::dI2, "dI2", 1},
        {AxiomName::cAb1, "cAb1", 2},     {AxiomName::cAb2, "cAb2", 2},     {AxiomName::dAb1, "dAb1", 2},
        {AxiomName::dAb2, "dAb2", 2},     {AxiomName::H_id, "H_id", 1},     {AxiomName::H_botA, "H_botA", 1},
        {AxiomName::H_Atop, "H_Atop", 1}, {AxiomName::H_orI1, "H_orI1", 2}, {AxiomName::H_orI2, "H_orI2", 2},
        {AxiomName::H_andE1, "H_andE1", 2}, {AxiomName::H_andE2, "H_andE2", 2}, {AxiomName::cD1, "cD1", 3},
    };
    return t;
}

const AxiomInfo& info(AxiomName n) {
    for (const auto& i : axiom_table())
        if (i.n == n) return i;
    throw std::logic_error("unknown axiom");
}

}  // namespace

const std::vector<AxiomName>& all_axioms() {
    static const std::vector<AxiomName> v = [] {
        std::vector<AxiomName> r;
        for (const auto& i : axiom_table()) r.push_back(i.n);
        return r;
    }();
    return v;
}

std::string axiom_name(AxiomName n) { return info(n).name; }

std::optional<AxiomName> parse_axiom_name(std::string_view s) {
    for (const auto& i : axiom_table())
        if (s == i.name) return i.n;
    return std::nullopt;
}

int arity(AxiomName n) { return info(n).arity; }

std::pair<FormulaPtr, FormulaPtr> axiom_formulas(AxiomName n, const std::vector<FormulaPtr>& p) {
    if (static_cast<int>(p.size()) != arity(n))
        throw ArityError(axiom_name(n) + " takes " + std::to_string(arity(n)) + " formula(s), got " +
                         std::to_string(p.size()));
    auto A = p[0];
    auto B = p.size() > 1 ? p[1] : nullptr;
    auto C = p.size() > 2 ? p[2] : nullptr;
    switch (n) {
        case AxiomName::cC1: return {f_and(A, B), f_and(B, A)};
        case AxiomName::cC2: return {f_and(B, A), f_and(A, B)};
        case AxiomName::dC1: return {f_or(A, B), f_or(B, A)};
        case AxiomName::dC2: return {f_or(B, A), f_or(A, B)};
        case AxiomName::cA1: return {f_and(A, f_and(B, C)), f_and(f_and(A, B), C)};
        case AxiomName::cA2: return {f_and(f_and(A, B), C), f_and(A, f_and(B, C))};
        case AxiomName::dA1: return {f_or(A, f_or(B, C)), f_or(f_or(A, B), C)};
        case AxiomName::dA2: return {f_or(f_or(A, B), C), f_or(A, f_or(B, C))};
        case AxiomName::cI1: return {f_and(A, f_top()), A};
        case AxiomName::cI2: return {A, f_and(A, f_top())};
        case AxiomName::dI1: return {f_or(A, f_bot()), A};
        case AxiomName::dI2: return {A, f_or(A, f_bot())};
        case AxiomName::cAb1: return {f_and(A, f_or(A, B)), A};
        case AxiomName::cAb2: return {A, f_and(A, f_or(A, B))};
        case AxiomName::dAb1: return {f_or(A, f_and(A, B)), A};
        case AxiomName::dAb2: return {A, f_or(A, f_and(A, B))};
        case AxiomName::H_id: return {A, A};
        case AxiomName::H_botA: return {f_bot(), A};
        case AxiomName::H_Atop: return {A, f_top()};
        case AxiomName::H_orI1: return {A, f_or(A, B)};
        case AxiomName::H_orI2: return {B, f_or(A, B)};
        case AxiomName::H_andE1: return {f_and(A, B), A};
        case AxiomName::H_andE2: return {f_and(A, B), B};
        case AxiomName::cD1: return {f_and(A, f_or(B, C)), f_or(f_and(A, B), f_and(A, C))};
    }
    throw std::logic_error("unknown axiom");
}

Sequent axiom_sequent(AxiomName n, const std::vector<FormulaPtr>& params) {
    auto [l, r] = axiom_formulas(n, params);
    return translate_sequent(l, r);
}

// ---------------------------------------------------------------- duality

FormulaPtr dual_formula(const FormulaPtr& f) {
    switch (f->kind) {
        case Formula::Kind::Atom: return f;
        case Formula::Kind::Top: return f_bot();
        case Formula::Kind::Bot: return f_top();
        case Formula::Kind::And: return f_or(dual_formula(f->lhs), dual_formula(f->rhs));
        case Formula::Kind::Or: return f_and(dual_formula(f->lhs), dual_formula(f->rhs));
    }
    return nullptr;
}

TermPtr dual_term(const TermPtr& t) {
    switch (t->op) {
        case Op::Atom: return t;
        case Op::Top: return t_bot();
        case Op::Bot: return t_top();
        case Op::BDia: return t_bbox(dual_term(t->a));
        case Op::BBox: return t_bdia(dual_term(t->a));
        case Op::WBox: return t_wdia(dual_term(t->a));
        case Op::WDia: return t_wbox(dual_term(t->a));
        case Op::Cap: return t_cup(dual_term(t->a), dual_term(t->b));
        case Op::Cup: return t_cap(dual_term(t->a), dual_term(t->b));
    }
    return nullptr;
}

StructPtr dual_struct(const StructPtr& s) {
    switch (s->op) {
        case SOp::Leaf: return s_leaf(dual_term(s->term));
        case SOp::I: return s;
        case SOp::Bullet: return s_bullet(dual_struct(s->a));
        case SOp::Circ: return s_circ(dual_struct(s->a), dual_sort(s->sort));
        case SOp::SCirc: return s_scirc(dual_sort(s->sort));
        case SOp::Dot: return s_dot(dual_struct(s->a), dual_struct(s->b));
        case SOp::Sup: return s_sup(dual_struct(s->a), dual_struct(s->b));
    }
    return nullptr;
}

Sequent dual_sequent(const Sequent& s) { return make_sequent(dual_struct(s.right), dual_struct(s.left)); }

std::optional<std::string> dual_rule(const std::string& name) {
    static const std::map<std::string, std::string> m = [] {
        std::map<std::string, std::string> r;
        auto pair = [&r](const std::string& a, const std::string& b) {
            r[a] = b;
            r[b] = a;
        };
        for (const char* f : {"D_PL", "D_P", "SCirc", "E", "A", "W", "C"})
            pair(std::string(f) + "_left", std::string(f) + "_right");
        pair("Cap_left", "Cup_right");
        pair("Cap_right", "Cup_left");
        pair("Top_left", "Bot_right");
        pair("Top_right", "Bot_left");
        pair("WDia_left", "WBox_left");
        pair("WDia_right", "WBox_right");
        pair("BBox_left", "BDia_left");
        pair("BBox_right", "BDia_right");
        pair("IW", "IW_right");
        r["Id"] = "Id";
        r["Cut_L"] = "Cut_L";
        r["Cut_P"] = "Cut_P";
        r[kHyp] = kHyp;
        return r;
    }();
    auto it = m.find(name);
    if (it == m.end()) return std::nullopt;
    return it->second;
}

DerivPtr dual_derivation(const DerivPtr& d, bool allow_extensions) {
    auto r = dual_rule(d->rule);
    if (!r) throw DualityError("no dual for rule " + d->rule);
    if (*r == "IW_right" && !allow_extensions)
        throw DualityError("the dual of IW is IW_right, which is not a builtin rule");
    std::vector<DerivPtr> prem;
    for (const auto& p : d->premises) prem.push_back(dual_derivation(p, allow_extensions));
    if ((d->rule == "Cut_L" || d->rule == "Cut_P") && prem.size() == 2) std::swap(prem[0], prem[1]);
    return make_node(dual_sequent(d->conclusion), *r, std::move(prem), d->backward);
}

// ---------------------------------------------------------------- templates

DerivPtr embedded_proof(const std::string& name) {
    static std::mutex mu;
    static std::map<std::string, DerivPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(name);
    if (it != cache.end()) return it->second;
    for (const auto& e : embedded_proofs()) {
        if (e.name == name) {
            ParseOptions opt;
            opt.schematic = true;
            auto d = parse_proof(e.text, opt);
            cache[name] = d;
            return d;
        }
    }
    throw std::out_of_range("no embedded proof named " + name);
}

namespace {

bool is_letter(const std::string& n) { return n.size() == 1 && n[0] >= 'A' && n[0] <= 'Z'; }

TermPtr inst_term(const TermPtr& t, Polarity pol, const std::map<std::string, FormulaPtr>& letters,
                  const std::map<std::string, std::string>& rename) {
    switch (t->op) {
        case Op::Atom: {
            auto it = letters.find(t->name);
            if (it != letters.end()) return pol == Polarity::Precedent ? tau_pre(it->second) : tau_suc(it->second);
            auto rn = rename.find(t->name);
            if (rn != rename.end()) return t_atom(rn->second);
            return t;
        }
        case Op::Top:
        case Op::Bot: return t;
        case Op::BDia: return t_bdia(inst_term(t->a, pol, letters, rename));
        case Op::BBox: return t_bbox(inst_term(t->a, pol, letters, rename));
        case Op::WBox: return t_wbox(inst_term(t->a, pol, letters, rename));
        case Op::WDia: return t_wdia(inst_term(t->a, pol, letters, rename));
        case Op::Cap: return t_cap(inst_term(t->a, pol, letters, rename), inst_term(t->b, pol, letters, rename));
        case Op::Cup: return t_cup(inst_term(t->a, pol, letters, rename), inst_term(t->b, pol, letters, rename));
    }
    return nullptr;
}

StructPtr inst_struct(const StructPtr& s, Polarity pol, const std::map<std::string, FormulaPtr>& letters,
                      const std::map<std::string, std::string>& rename) {
    switch (s->op) {
        case SOp::Leaf: return s_leaf(inst_term(s->term, pol, letters, rename));
        case SOp::I:
        case SOp::SCirc: return s;
        case SOp::Bullet: return s_bullet(inst_struct(s->a, pol, letters, rename));
        case SOp::Circ: return s_circ(inst_struct(s->a, pol, letters, rename), s->sort);
        case SOp::Dot:
            return s_dot(inst_struct(s->a, pol, letters, rename), inst_struct(s->b, pol, letters, rename));
        case SOp::Sup:
            return s_sup(inst_struct(s->a, flip(pol), letters, rename), inst_struct(s->b, pol, letters, rename));
    }
    return nullptr;
}

}  // namespace

Sequent instantiate_sequent(const Sequent& s, const std::map<std::string, FormulaPtr>& letters,
                            const std::map<std::string, std::string>& rename) {
    return make_sequent(inst_struct(s.left, Polarity::Precedent, letters, rename),
                        inst_struct(s.right, Polarity::Succedent, letters, rename));
}

DerivPtr instantiate_template(const DerivPtr& tmpl, const std::map<std::string, FormulaPtr>& letters,
                              const std::map<std::string, std::string>& rename) {
    if (tmpl->rule == "Id" && tmpl->conclusion.left->op == SOp::Leaf) {
        const auto& t = tmpl->conclusion.left->term;
        if (t->op == Op::Atom && is_letter(t->name)) {
            auto it = letters.find(t->name);
            if (it != letters.end()) return identity_derivation(it->second);
        }
    }
    std::vector<DerivPtr> prem;
    for (const auto& p : tmpl->premises) prem.push_back(instantiate_template(p, letters, rename));
    return make_node(instantiate_sequent(tmpl->conclusion, letters, rename), tmpl->rule, std::move(prem),
                     tmpl->backward);
}

// ---------------------------------------------------------------- derivations

namespace {

const char* case_key(const FormulaPtr& a) {
    switch (a->kind) {
        case Formula::Kind::Top: return "top";
        case Formula::Kind::Bot: return "bot";
        case Formula::Kind::Atom: return "p";
        case Formula::Kind::And: return "and";
        case Formula::Kind::Or: return "or";
    }
    return "";
}

// The dual of the schematic and-case identity tree: the or-case.
DerivPtr id_or_template() {
    static const DerivPtr d = dual_derivation(embedded_proof("id_and"));
    return d;
}

// Derivation of a case-split template (cI1, cI2, cAb1, cAb2) for A, with
// any further letters bound by `extra`.
DerivPtr case_template(const std::string& base, const FormulaPtr& a, std::map<std::string, FormulaPtr> extra) {
    std::string key = case_key(a);
    auto tmpl = embedded_proof(base + "_" + key);
    std::map<std::string, std::string> rename;
    if (a->kind == Formula::Kind::Atom) rename["p"] = a->name;
    if (a->kind == Formula::Kind::And || a->kind == Formula::Kind::Or) {
        extra["C"] = a->lhs;
        extra["D"] = a->rhs;
    }
    return instantiate_template(tmpl, extra, rename);
}

bool valid_for(const DerivPtr& d, const Sequent& goal, bool allow_ext = false) {
    if (!d || !(d->conclusion == goal)) return false;
    CheckOptions opt;
    opt.allow_extensions = allow_ext;
    return check(d, opt).ok && is_cut_free(d);
}

// The c-side axiom whose translation is the dual of n's, with its parameters.
std::optional<std::pair<AxiomName, std::vector<FormulaPtr>>> dual_axiom(AxiomName n, const std::vector<FormulaPtr>& p) {
    std::vector<FormulaPtr> q;
    for (const auto& f : p) q.push_back(dual_formula(f));
    switch (n) {
        case AxiomName::dC1: return std::pair{AxiomName::cC1, std::vector{q[1], q[0]}};
        case AxiomName::dC2: return std::pair{AxiomName::cC2, std::vector{q[1], q[0]}};
        case AxiomName::dA1: return std::pair{AxiomName::cA2, q};
        case AxiomName::dA2: return std::pair{AxiomName::cA1, q};
        case AxiomName::dI1: return std::pair{AxiomName::cI2, q};
        case AxiomName::dI2: return std::pair{AxiomName::cI1, q};
        case AxiomName::dAb1: return std::pair{AxiomName::cAb2, q};
        case AxiomName::dAb2: return std::pair{AxiomName::cAb1, q};
        case AxiomName::H_orI1: return std::pair{AxiomName::H_andE1, q};
        case AxiomName::H_orI2: return std::pair{AxiomName::H_andE2, q};
        case AxiomName::H_botA: return std::pair{AxiomName::H_Atop, q};
        default: return std::nullopt;
    }
}

DerivPtr direct_derivation(AxiomName n, const std::vector<FormulaPtr>& p) {
    auto L = [&](std::initializer_list<std::pair<const char*, FormulaPtr>> l) {
        std::map<std::string, FormulaPtr> m;
        for (const auto& [k, v] : l) m[k] = v;
        return m;
    };
    switch (n) {
        case AxiomName::cC1: return instantiate_template(embedded_proof("cC1"), L({{"A", p[0]}, {"B", p[1]}}));
        case AxiomName::cC2: return instantiate_template(embedded_proof("cC1"), L({{"A", p[1]}, {"B", p[0]}}));
        case AxiomName::cA1:
            return instantiate_template(embedded_proof("cA1"), L({{"A", p[0]}, {"B", p[1]}, {"C", p[2]}}));
        case AxiomName::cA2:
            return instantiate_template(embedded_proof("cA2"), L({{"A", p[0]}, {"B", p[1]}, {"C", p[2]}}));
        case AxiomName::cI1: return case_template("cI1", p[0], {});
        case AxiomName::cI2: return case_template("cI2", p[0], {});
        case AxiomName::cAb1: return case_template("cAb1", p[0], L({{"B", p[1]}}));
        case AxiomName::cAb2: return case_template("cAb2", p[0], L({{"B", p[1]}}));
        case AxiomName::H_id: return identity_derivation(p[0]);
        case AxiomName::H_Atop: return instantiate_template(embedded_proof("H_Atop"), L({{"A", p[0]}}));
        case AxiomName::H_andE1:
            return instantiate_template(embedded_proof("H_andE1"), L({{"A", p[0]}, {"B", p[1]}}));
        case AxiomName::H_andE2:
            return instantiate_template(embedded_proof("H_andE2"), L({{"A", p[0]}, {"B", p[1]}}));
        default: return nullptr;
    }
}

}  // namespace

DerivPtr identity_derivation(const FormulaPtr& a) {
    switch (a->kind) {
        case Formula::Kind::Top: return embedded_proof("id_top");
        case Formula::Kind::Bot: return embedded_proof("id_bot");
        case Formula::Kind::Atom: return instantiate_template(embedded_proof("id_p"), {}, {{"p", a->name}});
        case Formula::Kind::And: return instantiate_template(embedded_proof("id_and"), {{"B", a->lhs}, {"C", a->rhs}});
        case Formula::Kind::Or: return instantiate_template(id_or_template(), {{"B", a->lhs}, {"C", a->rhs}});
    }
    return nullptr;
}

AxiomDerivation axiom_derivation_ex(AxiomName n, const std::vector<FormulaPtr>& params) {
    if (n == AxiomName::cD1) throw UnsupportedAxiom("cD1 is not derivable in D.LL; no derivation is generated");
    Sequent goal = axiom_sequent(n, params);

    if (auto d = direct_derivation(n, params); valid_for(d, goal)) return {d, "template"};

    if (auto da = dual_axiom(n, params)) {
        try {
            auto src = axiom_derivation_ex(da->first, da->second);
            auto d = dual_derivation(src.proof);
            if (valid_for(d, goal)) return {d, "dual"};
        } catch (const DualityError&) {
        } catch (const Underivable&) {
        }
    }

    SearchConfig cfg;
    cfg.max_depth = 40;
    cfg.max_nodes = 200000;
    cfg.contraction_cap = 4;
    auto out = backward_search(goal, cfg);
    if (out.status == SearchStatus::Proved && valid_for(out.proof, goal)) return {out.proof, "search"};
    throw Underivable("no cut-free derivation of " + print_sequent(goal) + " found (" + axiom_name(n) + ")");
}

DerivPtr axiom_derivation(AxiomName n, const std::vector<FormulaPtr>& params) {
    return axiom_derivation_ex(n, params).proof;
}

DerivPtr axiom_derivation_extended(AxiomName n, const std::vector<FormulaPtr>& params) {
    try {
        return axiom_derivation(n, params);
    } catch (const Underivable&) {
    }
    Sequent goal = axiom_sequent(n, params);
    if (auto da = dual_axiom(n, params)) {
        auto src = axiom_derivation_extended(da->first, da->second);
        auto d = dual_derivation(src, true);
        if (valid_for(d, goal, true)) return d;
    }
    throw Underivable("no derivation of " + print_sequent(goal) + " even with IW_right");
}

}  // namespace dll
