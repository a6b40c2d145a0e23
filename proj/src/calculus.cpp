#include "dll/calculus.hpp"

#include <cctype>
#include <functional>

namespace dll {

bool kind_is_struct(MKind k) {
    return k == MKind::StructL || k == MKind::StructP || k == MKind::StructPop || k == MKind::StructUniform;
}

namespace {

// ---------------------------------------------------------------- pattern text

struct PTok {
    std::string text;
    std::optional<SortSpec> mark;
};

std::vector<PTok> plex(const std::string& s) {
    std::vector<PTok> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '(' || c == ')' || c == ';' || c == '>' || c == '*') {
            out.push_back({std::string(1, c), std::nullopt});
            ++i;
        } else if (c == '|' && s[i + 1] == '-') {
            out.push_back({"|-", std::nullopt});
            i += 2;
        } else if (c == '[') {
            std::size_t e = s.find(']', i);
            std::string m = s.substr(i + 1, e - i - 1);
            out.back().mark = m == "P" ? SortSpec::P : m == "Pop" ? SortSpec::Pop : SortSpec::Uniform;
            i = e + 1;
        } else {
            std::size_t st = i;
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
            if (st == i) throw std::logic_error("bad pattern character in " + s);
            out.push_back({s.substr(st, i - st), std::nullopt});
        }
    }
    out.push_back({"", std::nullopt});
    return out;
}

PatPtr pvar(int v) {
    auto p = std::make_shared<Pat>();
    p->k = Pat::K::Var;
    p->var = v;
    return p;
}
PatPtr snode(SOp op, SortSpec spec, PatPtr a = nullptr, PatPtr b = nullptr) {
    auto p = std::make_shared<Pat>();
    p->k = Pat::K::SNode;
    p->sop = op;
    p->spec = spec;
    p->a = std::move(a);
    p->b = std::move(b);
    return p;
}
PatPtr tnode(Op op, SortSpec spec, PatPtr a = nullptr, PatPtr b = nullptr) {
    auto p = std::make_shared<Pat>();
    p->k = Pat::K::TNode;
    p->op = op;
    p->spec = spec;
    p->a = std::move(a);
    p->b = std::move(b);
    return p;
}

class PatParser {
   public:
    PatParser(const std::string& text, const std::vector<MetaVar>& vars) : t_(plex(text)), vars_(vars) {}

    SeqPat sequent() {
        SeqPat sp;
        sp.left = sup();
        expect("|-");
        sp.right = sup();
        expect("");
        return sp;
    }

   private:
    std::vector<PTok> t_;
    std::size_t i_ = 0;
    const std::vector<MetaVar>& vars_;

    const PTok& peek() const { return t_[i_]; }
    PTok next() { return t_[i_++]; }
    void expect(const std::string& s) {
        if (next().text != s) throw std::logic_error("pattern: expected '" + s + "'");
    }
    PatPtr sup() {
        auto l = semi();
        if (peek().text == ">") {
            next();
            return snode(SOp::Sup, SortSpec::Uniform, l, sup());
        }
        return l;
    }
    PatPtr semi() {
        auto l = cap();
        while (peek().text == ";") {
            next();
            l = snode(SOp::Dot, SortSpec::Uniform, l, cap());
        }
        return l;
    }
    PatPtr cap() {
        auto l = unary();
        while (peek().text == "cap" || peek().text == "cup") {
            Op op = next().text == "cap" ? Op::Cap : Op::Cup;
            l = tnode(op, SortSpec::Uniform, l, unary());
        }
        return l;
    }
    PatPtr unary() {
        PTok k = next();
        if (k.text == "(") {
            auto p = sup();
            expect(")");
            return p;
        }
        for (std::size_t v = 0; v < vars_.size(); ++v)
            if (vars_[v].name == k.text) return pvar(static_cast<int>(v));
        if (k.text == "o") return snode(SOp::Circ, k.mark.value(), unary());
        if (k.text == "*") return snode(SOp::Bullet, SortSpec::L, unary());
        if (k.text == "wbox") return tnode(Op::WBox, SortSpec::P, unary());
        if (k.text == "wdia") return tnode(Op::WDia, SortSpec::Pop, unary());
        if (k.text == "fdia") return tnode(Op::BDia, SortSpec::L, unary());
        if (k.text == "fbox") return tnode(Op::BBox, SortSpec::L, unary());
        if (k.text == "T") return tnode(Op::Top, SortSpec::L);
        if (k.text == "F") return tnode(Op::Bot, SortSpec::L);
        if (k.text == "I") return snode(SOp::I, SortSpec::L);
        if (k.text == "S0") return snode(SOp::SCirc, k.mark.value());
        throw std::logic_error("pattern: unknown token '" + k.text + "'");
    }
};

RuleSchema make_rule(const std::string& name, RuleGroup g, bool inv, std::vector<MetaVar> vars,
                     std::vector<std::string> prem, const std::string& concl) {
    RuleSchema r;
    r.name = name;
    r.group = g;
    r.invertible = inv;
    r.vars = std::move(vars);
    for (auto& p : prem) r.premises.push_back(PatParser(p, r.vars).sequent());
    r.conclusion = PatParser(concl, r.vars).sequent();
    // premise-only and conclusion-only variables
    std::vector<bool> in_c(r.vars.size()), in_p(r.vars.size());
    std::function<void(const PatPtr&, std::vector<bool>&)> mark = [&](const PatPtr& p, std::vector<bool>& m) {
        if (!p) return;
        if (p->k == Pat::K::Var) m[p->var] = true;
        mark(p->a, m);
        mark(p->b, m);
    };
    mark(r.conclusion.left, in_c);
    mark(r.conclusion.right, in_c);
    for (auto& p : r.premises) {
        mark(p.left, in_p);
        mark(p.right, in_p);
    }
    for (std::size_t v = 0; v < r.vars.size(); ++v) {
        if (in_p[v] && !in_c[v]) r.premise_only.push_back(static_cast<int>(v));
        if (in_c[v] && !in_p[v] && !r.premises.empty()) r.fresh_in_conclusion.push_back(static_cast<int>(v));
    }
    std::string t;
    for (std::size_t k = 0; k < prem.size(); ++k) t += (k ? "   " : "") + prem[k];
    r.text = t + (inv ? " <=> " : " / ") + concl;
    return r;
}

std::vector<MetaVar> V(std::initializer_list<std::pair<const char*, MKind>> l) {
    std::vector<MetaVar> out;
    for (auto& [n, k] : l) out.push_back({n, k});
    return out;
}

constexpr MKind SU = MKind::StructUniform, SL = MKind::StructL, SP = MKind::StructP, SPop = MKind::StructPop,
                TU = MKind::TermUniform, TL = MKind::TermL, TP = MKind::TermP, TPop = MKind::TermPop,
                AV = MKind::AtomVar;

std::vector<RuleSchema> build_builtins() {
    using G = RuleGroup;
    std::vector<RuleSchema> r;
    auto stu = V({{"S", SU}, {"T", SU}, {"U", SU}, {"V", SU}});
    r.push_back(make_rule("D_PL_left", G::Display, true, V({{"G", SP}, {"X", SL}}), {"G |- o[P] X"}, "* G |- X"));
    r.push_back(make_rule("D_PL_right", G::Display, true, V({{"Pi", SPop}, {"X", SL}}), {"o[Pop] X |- Pi"}, "X |- * Pi"));
    r.push_back(make_rule("D_P_left", G::Display, true, stu, {"S ; T |- U"}, "T |- S > U"));
    r.push_back(make_rule("D_P_right", G::Display, true, stu, {"S |- T ; U"}, "T > S |- U"));
    r.push_back(make_rule("SCirc_left", G::Structural, true, stu, {"S |- T"}, "S ; S0[U] |- T"));
    r.push_back(make_rule("SCirc_right", G::Structural, true, stu, {"S |- T"}, "S |- T ; S0[U]"));
    r.push_back(make_rule("E_left", G::Structural, false, stu, {"S ; T |- U"}, "T ; S |- U"));
    r.push_back(make_rule("E_right", G::Structural, false, stu, {"S |- T ; U"}, "S |- U ; T"));
    r.push_back(make_rule("A_left", G::Structural, true, stu, {"(S ; T) ; U |- V"}, "S ; (T ; U) |- V"));
    r.push_back(make_rule("A_right", G::Structural, true, stu, {"S |- (T ; U) ; V"}, "S |- T ; (U ; V)"));
    r.push_back(make_rule("W_left", G::Structural, false, stu, {"S |- T"}, "S ; U |- T"));
    r.push_back(make_rule("W_right", G::Structural, false, stu, {"S |- T"}, "S |- T ; U"));
    r.push_back(make_rule("C_left", G::Structural, false, stu, {"S ; S |- T"}, "S |- T"));
    r.push_back(make_rule("C_right", G::Structural, false, stu, {"S |- T ; T"}, "S |- T"));
    r.push_back(make_rule("Cut_P", G::Cut, false, V({{"S", SU}, {"T", SU}, {"s", TU}}), {"S |- s", "s |- T"}, "S |- T"));
    auto opv = V({{"S", SU}, {"T", SU}, {"s", TU}, {"t", TU}});
    r.push_back(make_rule("Cap_left", G::OperationalIntro, false, opv, {"s ; t |- S"}, "s cap t |- S"));
    r.push_back(make_rule("Cap_right", G::OperationalIntro, false, opv, {"S |- s", "T |- t"}, "S ; T |- s cap t"));
    r.push_back(make_rule("Cup_left", G::OperationalIntro, false, opv, {"s |- S", "t |- T"}, "s cup t |- S ; T"));
    r.push_back(make_rule("Cup_right", G::OperationalIntro, false, opv, {"S |- s ; t"}, "S |- s cup t"));
    auto xy = V({{"X", SL}, {"Y", SL}, {"A", TL}, {"p", AV}});
    r.push_back(make_rule("Id", G::Identity, false, xy, {}, "p |- p"));
    r.push_back(make_rule("Cut_L", G::Cut, false, xy, {"X |- A", "A |- Y"}, "X |- Y"));
    r.push_back(make_rule("Top_left", G::OperationalIntro, false, xy, {"I |- X"}, "T |- X"));
    r.push_back(make_rule("Top_right", G::Identity, false, xy, {}, "I |- T"));
    r.push_back(make_rule("Bot_left", G::Identity, false, xy, {}, "F |- I"));
    r.push_back(make_rule("Bot_right", G::OperationalIntro, false, xy, {"X |- I"}, "X |- F"));
    r.push_back(make_rule("IW", G::Structural, false, xy, {"I |- X"}, "Y |- X"));
    auto mt = V({{"X", SL}, {"A", TL}, {"G", SP}, {"Pi", SPop}, {"alpha", TP}, {"xi", TPop}});
    r.push_back(make_rule("WDia_left", G::OperationalIntro, false, mt, {"o[Pop] A |- Pi"}, "wdia A |- Pi"));
    r.push_back(make_rule("WDia_right", G::OperationalIntro, false, mt, {"X |- A"}, "o[Pop] X |- wdia A"));
    r.push_back(make_rule("BBox_left", G::OperationalIntro, false, mt, {"X |- * xi"}, "X |- fbox xi"));
    r.push_back(make_rule("BBox_right", G::OperationalIntro, false, mt, {"xi |- Pi"}, "fbox xi |- * Pi"));
    r.push_back(make_rule("BDia_left", G::OperationalIntro, false, mt, {"* alpha |- X"}, "fdia alpha |- X"));
    r.push_back(make_rule("BDia_right", G::OperationalIntro, false, mt, {"G |- alpha"}, "* G |- fdia alpha"));
    r.push_back(make_rule("WBox_left", G::OperationalIntro, false, mt, {"G |- o[P] A"}, "G |- wbox A"));
    r.push_back(make_rule("WBox_right", G::OperationalIntro, false, mt, {"A |- X"}, "wbox A |- o[P] X"));
    return r;
}

std::vector<RuleSchema> build_extensions() {
    std::vector<RuleSchema> r;
    r.push_back(make_rule("IW_right", RuleGroup::Structural, false, V({{"X", SL}, {"Y", SL}}), {"X |- I"}, "X |- Y"));
    return r;
}

// ---------------------------------------------------------------- matching

bool sort_fits(SortSpec spec, Sort s, Substitution& sub) {
    switch (spec) {
        case SortSpec::L: return s == Sort::L;
        case SortSpec::P: return s == Sort::P;
        case SortSpec::Pop: return s == Sort::Pop;
        case SortSpec::Uniform:
            if (s == Sort::L) return false;
            if (sub.uniform) return *sub.uniform == s;
            sub.uniform = s;
            return true;
    }
    return false;
}

SortSpec spec_of_kind(MKind k) {
    switch (k) {
        case MKind::StructL:
        case MKind::TermL:
        case MKind::AtomVar: return SortSpec::L;
        case MKind::StructP:
        case MKind::TermP: return SortSpec::P;
        case MKind::StructPop:
        case MKind::TermPop: return SortSpec::Pop;
        default: return SortSpec::Uniform;
    }
}

bool match_t(const RuleSchema& r, const PatPtr& p, const TermPtr& t, Substitution& sub);

bool bind_term(const RuleSchema& r, int v, const TermPtr& t, Substitution& sub) {
    MKind k = r.vars[v].kind;
    if (kind_is_struct(k)) return false;
    if (k == MKind::AtomVar && t->op != Op::Atom) return false;
    if (!sort_fits(spec_of_kind(k), t->sort, sub)) return false;
    if (sub.bound(v)) {
        auto* b = std::get_if<TermPtr>(&sub.map[v]);
        return b && equal(*b, t);
    }
    sub.map[v] = t;
    return true;
}

bool match_t(const RuleSchema& r, const PatPtr& p, const TermPtr& t, Substitution& sub) {
    if (p->k == Pat::K::Var) return bind_term(r, p->var, t, sub);
    if (p->k != Pat::K::TNode || t->op != p->op) return false;
    if ((p->op == Op::Cap || p->op == Op::Cup) && !sort_fits(p->spec, t->sort, sub)) return false;
    if (p->a && !match_t(r, p->a, t->a, sub)) return false;
    if (p->b && !match_t(r, p->b, t->b, sub)) return false;
    return true;
}

bool match_s(const RuleSchema& r, const PatPtr& p, const StructPtr& s, Substitution& sub) {
    if (p->k == Pat::K::Var) {
        MKind k = r.vars[p->var].kind;
        if (!kind_is_struct(k)) return s->op == SOp::Leaf && bind_term(r, p->var, s->term, sub);
        if (!sort_fits(spec_of_kind(k), s->sort, sub)) return false;
        if (sub.bound(p->var)) {
            auto* b = std::get_if<StructPtr>(&sub.map[p->var]);
            return b && equal(*b, s);
        }
        sub.map[p->var] = s;
        return true;
    }
    if (p->k == Pat::K::TNode) return s->op == SOp::Leaf && match_t(r, p, s->term, sub);
    if (s->op != p->sop) return false;
    if (!sort_fits(p->spec, s->sort, sub)) return false;
    if (p->a && !match_s(r, p->a, s->a, sub)) return false;
    if (p->b && !match_s(r, p->b, s->b, sub)) return false;
    return true;
}

// ---------------------------------------------------------------- instantiation

Sort resolve(SortSpec spec, const Substitution& sub, const RuleSchema& r) {
    switch (spec) {
        case SortSpec::L: return Sort::L;
        case SortSpec::P: return Sort::P;
        case SortSpec::Pop: return Sort::Pop;
        case SortSpec::Uniform:
            if (!sub.uniform) throw KindError(r.name + ": uniform sort unresolved");
            return *sub.uniform;
    }
    return Sort::L;
}

void check_sort(const RuleSchema& r, int v, Sort s, const Substitution& sub) {
    SortSpec spec = spec_of_kind(r.vars[v].kind);
    bool ok = spec == SortSpec::Uniform ? s != Sort::L && (!sub.uniform || *sub.uniform == s)
                                        : resolve(spec, sub, r) == s;
    if (!ok)
        throw SortError(r.name + ": metavariable " + r.vars[v].name + " bound to a term of sort " + sort_name(s));
}

TermPtr inst_t(const RuleSchema& r, const PatPtr& p, const Substitution& sub) {
    if (p->k == Pat::K::Var) {
        if (!sub.bound(p->var)) throw KindError(r.name + ": metavariable " + r.vars[p->var].name + " unbound");
        auto* t = std::get_if<TermPtr>(&sub.map[p->var]);
        if (!t) throw KindError(r.name + ": metavariable " + r.vars[p->var].name + " expects a term");
        if (r.vars[p->var].kind == MKind::AtomVar && (*t)->op != Op::Atom)
            throw KindError(r.name + ": metavariable " + r.vars[p->var].name + " expects an atom");
        check_sort(r, p->var, (*t)->sort, sub);
        return *t;
    }
    if (p->k != Pat::K::TNode) throw KindError(r.name + ": structure where a term is expected");
    switch (p->op) {
        case Op::Top: return t_top();
        case Op::Bot: return t_bot();
        case Op::BDia: return t_bdia(inst_t(r, p->a, sub));
        case Op::BBox: return t_bbox(inst_t(r, p->a, sub));
        case Op::WBox: return t_wbox(inst_t(r, p->a, sub));
        case Op::WDia: return t_wdia(inst_t(r, p->a, sub));
        case Op::Cap:
        case Op::Cup: {
            auto a = inst_t(r, p->a, sub), b = inst_t(r, p->b, sub);
            if (a->sort != resolve(p->spec, sub, r)) throw SortError(r.name + ": operand sort differs from the rule sort");
            return p->op == Op::Cap ? t_cap(a, b) : t_cup(a, b);
        }
        default: break;
    }
    throw KindError(r.name + ": bad term pattern");
}

StructPtr inst_s(const RuleSchema& r, const PatPtr& p, const Substitution& sub) {
    if (p->k == Pat::K::Var) {
        if (!kind_is_struct(r.vars[p->var].kind)) return s_leaf(inst_t(r, p, sub));
        if (!sub.bound(p->var)) throw KindError(r.name + ": metavariable " + r.vars[p->var].name + " unbound");
        auto* s = std::get_if<StructPtr>(&sub.map[p->var]);
        if (!s) throw KindError(r.name + ": metavariable " + r.vars[p->var].name + " expects a structure");
        check_sort(r, p->var, (*s)->sort, sub);
        return *s;
    }
    if (p->k == Pat::K::TNode) return s_leaf(inst_t(r, p, sub));
    switch (p->sop) {
        case SOp::I: return s_i();
        case SOp::SCirc: return s_scirc(resolve(p->spec, sub, r));
        case SOp::Bullet: return s_bullet(inst_s(r, p->a, sub));
        case SOp::Circ: return s_circ(inst_s(r, p->a, sub), resolve(p->spec, sub, r));
        case SOp::Dot:
        case SOp::Sup: {
            auto a = inst_s(r, p->a, sub), b = inst_s(r, p->b, sub);
            if (a->sort != resolve(p->spec, sub, r)) throw SortError(r.name + ": operand sort differs from the rule sort");
            return p->sop == SOp::Dot ? s_dot(a, b) : s_sup(a, b);
        }
        default: break;
    }
    throw KindError(r.name + ": bad structure pattern");
}

void print_p(const RuleSchema& r, const PatPtr& p, std::string& out) {
    auto sub = [&](const PatPtr& c) {
        bool paren = c->k != Pat::K::Var && (c->a && c->b);
        if (paren) out += "(";
        print_p(r, c, out);
        if (paren) out += ")";
    };
    if (p->k == Pat::K::Var) {
        out += r.vars[p->var].name;
        return;
    }
    if (p->k == Pat::K::TNode) {
        switch (p->op) {
            case Op::Top: out += "T"; return;
            case Op::Bot: out += "F"; return;
            case Op::BDia: out += "fdia "; break;
            case Op::BBox: out += "fbox "; break;
            case Op::WBox: out += "wbox "; break;
            case Op::WDia: out += "wdia "; break;
            default:
                sub(p->a);
                out += p->op == Op::Cap ? " cap " : " cup ";
                sub(p->b);
                return;
        }
        sub(p->a);
        return;
    }
    switch (p->sop) {
        case SOp::I: out += "I"; return;
        case SOp::SCirc: out += "S0"; return;
        case SOp::Bullet: out += "* "; sub(p->a); return;
        case SOp::Circ: out += "o "; sub(p->a); return;
        default:
            sub(p->a);
            out += p->sop == SOp::Dot ? " ; " : " > ";
            sub(p->b);
            return;
    }
}

}  // namespace

const std::vector<RuleSchema>& builtin_rules() {
    static const std::vector<RuleSchema> rules = build_builtins();
    return rules;
}

const std::vector<RuleSchema>& extension_rules() {
    static const std::vector<RuleSchema> rules = build_extensions();
    return rules;
}

const RuleSchema* lookup_rule(const std::string& name, bool with_extensions) {
    for (auto& r : builtin_rules())
        if (r.name == name) return &r;
    if (with_extensions)
        for (auto& r : extension_rules())
            if (r.name == name) return &r;
    return nullptr;
}

bool match_into(const RuleSchema& r, const SeqPat& p, const Sequent& s, Substitution& sub) {
    if (sub.map.size() < r.vars.size()) sub.map.resize(r.vars.size());
    Substitution trial = sub;
    if (!match_s(r, p.left, s.left, trial) || !match_s(r, p.right, s.right, trial)) return false;
    sub = std::move(trial);
    return true;
}

std::vector<Substitution> match(const RuleSchema& r, const Sequent& conclusion) {
    Substitution sub;
    sub.map.resize(r.vars.size());
    if (!match_into(r, r.conclusion, conclusion, sub)) return {};
    return {sub};
}

Sequent instantiate_pattern(const RuleSchema& r, const SeqPat& p, const Substitution& sub) {
    return make_sequent(inst_s(r, p.left, sub), inst_s(r, p.right, sub));
}

Instance instantiate(const RuleSchema& r, const Substitution& sub) {
    Instance out{{}, instantiate_pattern(r, r.conclusion, sub)};
    for (auto& p : r.premises) out.premises.push_back(instantiate_pattern(r, p, sub));
    return out;
}

std::string print_pattern(const RuleSchema& r, const SeqPat& p) {
    std::string out;
    print_p(r, p.left, out);
    out += " |- ";
    print_p(r, p.right, out);
    return out;
}

}  // namespace dll
