#include "dll/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace dll {

const char* sort_name(Sort s) {
    switch (s) {
        case Sort::L: return "L";
        case Sort::P: return "P";
        case Sort::Pop: return "Pop";
    }
    return "?";
}

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

bool is_keyword(std::string_view w) {
    static const char* kw[] = {"wbox", "wdia", "fdia", "fbox", "cap", "cup", "capop", "cupop",
                               "o", "I", "S0", "T", "F"};
    for (auto k : kw)
        if (w == k) return true;
    return false;
}

bool valid_atom_name(std::string_view w, bool schematic) {
    if (w.empty()) return false;
    if (is_keyword(w)) return false;
    if (schematic && w.size() == 1 && std::isupper(static_cast<unsigned char>(w[0]))) return true;
    if (!(w[0] >= 'a' && w[0] <= 'z')) return false;
    for (char c : w)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

}  // namespace

// ---------------------------------------------------------------- formulas

FormulaPtr f_atom(std::string name) {
    return std::make_shared<Formula>(Formula{Formula::Kind::Atom, std::move(name), nullptr, nullptr});
}
FormulaPtr f_top() { return std::make_shared<Formula>(Formula{Formula::Kind::Top, "", nullptr, nullptr}); }
FormulaPtr f_bot() { return std::make_shared<Formula>(Formula{Formula::Kind::Bot, "", nullptr, nullptr}); }
FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
    return std::make_shared<Formula>(Formula{Formula::Kind::And, "", std::move(a), std::move(b)});
}
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
    return std::make_shared<Formula>(Formula{Formula::Kind::Or, "", std::move(a), std::move(b)});
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case Formula::Kind::Atom: return a->name == b->name;
        case Formula::Kind::Top:
        case Formula::Kind::Bot: return true;
        default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    }
}

std::size_t size(const FormulaPtr& f) {
    if (f->kind == Formula::Kind::And || f->kind == Formula::Kind::Or) return 1 + size(f->lhs) + size(f->rhs);
    return 1;
}

void collect_atoms(const FormulaPtr& f, std::vector<std::string>& out) {
    if (f->kind == Formula::Kind::Atom) {
        if (std::find(out.begin(), out.end(), f->name) == out.end()) out.push_back(f->name);
    } else if (f->lhs) {
        collect_atoms(f->lhs, out);
        collect_atoms(f->rhs, out);
    }
}

namespace {

void print_f(const FormulaPtr& f, bool full, int ctx, std::string& out) {
    // ctx: 0 top, 1 operand of \/, 2 operand of /\ .
    switch (f->kind) {
        case Formula::Kind::Atom: out += f->name; return;
        case Formula::Kind::Top: out += "T"; return;
        case Formula::Kind::Bot: out += "F"; return;
        default: break;
    }
    bool is_and = f->kind == Formula::Kind::And;
    int mine = is_and ? 2 : 1;
    bool paren = full || ctx > mine;
    if (paren) out += "(";
    print_f(f->lhs, full, full ? 1 : mine, out);
    out += is_and ? " /\\ " : " \\/ ";
    // right operand of a left-associative operator needs one more level
    print_f(f->rhs, full, full ? 1 : mine + 1, out);
    if (paren) out += ")";
}

}  // namespace

std::string print_formula(const FormulaPtr& f, bool full_parens) {
    std::string out;
    print_f(f, full_parens, 0, out);
    return out;
}

namespace {

class FormulaParser {
   public:
    explicit FormulaParser(std::string_view t) : s_(t) {}

    FormulaPtr run() {
        auto f = parse_or();
        skip();
        if (pos_ != s_.size()) throw SyntaxError("unexpected input", pos_);
        return f;
    }

   private:
    std::string_view s_;
    std::size_t pos_ = 0;

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(std::string_view tok) {
        skip();
        if (s_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }
    FormulaPtr parse_or() {
        auto l = parse_and();
        while (eat("\\/")) l = f_or(l, parse_and());
        return l;
    }
    FormulaPtr parse_and() {
        auto l = parse_atom();
        while (eat("/\\")) l = f_and(l, parse_atom());
        return l;
    }
    FormulaPtr parse_atom() {
        skip();
        if (pos_ >= s_.size()) throw SyntaxError("unexpected end of formula", pos_);
        if (eat("(")) {
            auto f = parse_or();
            if (!eat(")")) throw SyntaxError("expected ')'", pos_);
            return f;
        }
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        std::string_view w = s_.substr(start, pos_ - start);
        if (w.empty()) throw SyntaxError("expected formula", start);
        if (w == "T") return f_top();
        if (w == "F") return f_bot();
        if (!valid_atom_name(w, false)) throw SyntaxError("invalid atom name '" + std::string(w) + "'", start);
        return f_atom(std::string(w));
    }
};

}  // namespace

FormulaPtr parse_formula(std::string_view text) { return FormulaParser(text).run(); }

// ---------------------------------------------------------------- terms

namespace {

TermPtr mk_term(Op op, Sort sort, std::string name, TermPtr a, TermPtr b) {
    auto t = std::make_shared<Term>(Term{op, sort, std::move(name), std::move(a), std::move(b), 0});
    std::size_t h = mix(static_cast<std::size_t>(op) * 31 + static_cast<std::size_t>(sort), std::hash<std::string>{}(t->name));
    if (t->a) h = mix(h, t->a->hash);
    if (t->b) h = mix(h, t->b->hash);
    t->hash = h;
    return t;
}

std::string sort_msg(const char* what, Sort expected, Sort found, const TermPtr& t) {
    return std::string(what) + ": expected sort " + sort_name(expected) + ", found " + sort_name(found) +
           " in '" + print_term(t) + "'";
}

}  // namespace

TermPtr t_atom(std::string name) { return mk_term(Op::Atom, Sort::L, std::move(name), nullptr, nullptr); }
TermPtr t_top() { return mk_term(Op::Top, Sort::L, "", nullptr, nullptr); }
TermPtr t_bot() { return mk_term(Op::Bot, Sort::L, "", nullptr, nullptr); }

TermPtr t_bdia(TermPtr alpha) {
    if (alpha->sort != Sort::P) throw SortError(sort_msg("fdia", Sort::P, alpha->sort, alpha));
    return mk_term(Op::BDia, Sort::L, "", std::move(alpha), nullptr);
}
TermPtr t_bbox(TermPtr xi) {
    if (xi->sort != Sort::Pop) throw SortError(sort_msg("fbox", Sort::Pop, xi->sort, xi));
    return mk_term(Op::BBox, Sort::L, "", std::move(xi), nullptr);
}
TermPtr t_wbox(TermPtr a) {
    if (a->sort != Sort::L) throw SortError(sort_msg("wbox", Sort::L, a->sort, a));
    return mk_term(Op::WBox, Sort::P, "", std::move(a), nullptr);
}
TermPtr t_wdia(TermPtr a) {
    if (a->sort != Sort::L) throw SortError(sort_msg("wdia", Sort::L, a->sort, a));
    return mk_term(Op::WDia, Sort::Pop, "", std::move(a), nullptr);
}
TermPtr t_cap(TermPtr x, TermPtr y) {
    if (x->sort == Sort::L) throw SortError("cap: expected sort P or Pop, found L in '" + print_term(x) + "'");
    if (y->sort != x->sort) throw SortError(sort_msg("cap", x->sort, y->sort, y));
    Sort s = x->sort;
    return mk_term(Op::Cap, s, "", std::move(x), std::move(y));
}
TermPtr t_cup(TermPtr x, TermPtr y) {
    if (x->sort == Sort::L) throw SortError("cup: expected sort P or Pop, found L in '" + print_term(x) + "'");
    if (y->sort != x->sort) throw SortError(sort_msg("cup", x->sort, y->sort, y));
    Sort s = x->sort;
    return mk_term(Op::Cup, s, "", std::move(x), std::move(y));
}

bool equal(const TermPtr& a, const TermPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->hash != b->hash || a->op != b->op || a->sort != b->sort || a->name != b->name) return false;
    return equal(a->a, b->a) && equal(a->b, b->b);
}

int term_depth(const TermPtr& t) {
    int d = 0;
    if (t->a) d = std::max(d, term_depth(t->a));
    if (t->b) d = std::max(d, term_depth(t->b));
    return d + 1;
}

int term_complexity(const TermPtr& t) {
    int c = 1;
    if (t->a) c += term_complexity(t->a);
    if (t->b) c += term_complexity(t->b);
    return c;
}

bool is_subterm(const TermPtr& sub, const TermPtr& t) {
    if (equal(sub, t)) return true;
    return (t->a && is_subterm(sub, t->a)) || (t->b && is_subterm(sub, t->b));
}

void collect_atoms(const TermPtr& t, std::vector<std::string>& out) {
    if (t->op == Op::Atom) {
        if (std::find(out.begin(), out.end(), t->name) == out.end()) out.push_back(t->name);
        return;
    }
    if (t->a) collect_atoms(t->a, out);
    if (t->b) collect_atoms(t->b, out);
}

// ---------------------------------------------------------------- structures

namespace {

StructPtr mk_struct(SOp op, Sort sort, TermPtr term, StructPtr a, StructPtr b) {
    auto s = std::make_shared<Structure>(Structure{op, sort, std::move(term), std::move(a), std::move(b), 0});
    std::size_t h = mix(static_cast<std::size_t>(op) * 131 + static_cast<std::size_t>(sort), 7);
    if (s->term) h = mix(h, s->term->hash);
    if (s->a) h = mix(h, s->a->hash);
    if (s->b) h = mix(h, s->b->hash);
    s->hash = h;
    return s;
}

}  // namespace

StructPtr s_leaf(TermPtr t) {
    Sort s = t->sort;
    return mk_struct(SOp::Leaf, s, std::move(t), nullptr, nullptr);
}
StructPtr s_i() { return mk_struct(SOp::I, Sort::L, nullptr, nullptr, nullptr); }
StructPtr s_bullet(StructPtr g) {
    if (g->sort == Sort::L) throw SortError("'*' expects a P or Pop structure, found L in '" + print_struct(g) + "'");
    return mk_struct(SOp::Bullet, Sort::L, nullptr, std::move(g), nullptr);
}
StructPtr s_circ(StructPtr x, Sort sort) {
    if (x->sort != Sort::L)
        throw SortError(std::string("'o' expects an L structure, found ") + sort_name(x->sort) + " in '" +
                        print_struct(x) + "'");
    if (sort == Sort::L) throw SortError("'o' produces a P or Pop structure");
    return mk_struct(SOp::Circ, sort, nullptr, std::move(x), nullptr);
}
StructPtr s_scirc(Sort sort) {
    if (sort == Sort::L) throw SortError("'S0' is a P or Pop structure");
    return mk_struct(SOp::SCirc, sort, nullptr, nullptr, nullptr);
}
StructPtr s_dot(StructPtr x, StructPtr y) {
    if (x->sort == Sort::L || y->sort != x->sort)
        throw SortError(std::string("';' expects two structures of the same sort P or Pop, found ") +
                        sort_name(x->sort) + " and " + sort_name(y->sort));
    Sort s = x->sort;
    return mk_struct(SOp::Dot, s, nullptr, std::move(x), std::move(y));
}
StructPtr s_sup(StructPtr x, StructPtr y) {
    if (x->sort == Sort::L || y->sort != x->sort)
        throw SortError(std::string("'>' expects two structures of the same sort P or Pop, found ") +
                        sort_name(x->sort) + " and " + sort_name(y->sort));
    Sort s = x->sort;
    return mk_struct(SOp::Sup, s, nullptr, std::move(x), std::move(y));
}

bool equal(const StructPtr& a, const StructPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->hash != b->hash || a->op != b->op || a->sort != b->sort) return false;
    if (a->op == SOp::Leaf) return equal(a->term, b->term);
    return equal(a->a, b->a) && equal(a->b, b->b);
}

int struct_depth(const StructPtr& s) {
    if (s->op == SOp::Leaf) return term_depth(s->term);
    int d = 0;
    if (s->a) d = std::max(d, struct_depth(s->a));
    if (s->b) d = std::max(d, struct_depth(s->b));
    return d + 1;
}

void collect_atoms(const StructPtr& s, std::vector<std::string>& out) {
    if (s->op == SOp::Leaf) {
        collect_atoms(s->term, out);
        return;
    }
    if (s->a) collect_atoms(s->a, out);
    if (s->b) collect_atoms(s->b, out);
}

Sequent make_sequent(StructPtr left, StructPtr right) {
    if (left->sort != right->sort)
        throw SortError(std::string("sequent sides have different sorts: ") + sort_name(left->sort) + " |- " +
                        sort_name(right->sort));
    Sort s = left->sort;
    return Sequent{std::move(left), std::move(right), s};
}

bool equal(const Sequent& a, const Sequent& b) { return a.sort == b.sort && equal(a.left, b.left) && equal(a.right, b.right); }

std::size_t hash_of(const Sequent& s) { return mix(s.left->hash, s.right->hash * 3 + 1); }

std::vector<std::string> atoms_of(const Sequent& s) {
    std::vector<std::string> out;
    collect_atoms(s.left, out);
    collect_atoms(s.right, out);
    return out;
}

// ---------------------------------------------------------------- sort inference
//
// Shared by the parser and by the printer (to decide whether sort markers are
// needed). 'o' and 'S0' do not fix their sort; the class of every P/Pop node is
// solved by unification, and classes left open are settled by the first anchor
// met in preorder: a precedent 'o' is Pop, a succedent one P; a bullet over an
// open class in precedent is P, in succedent Pop; anything else P.

namespace {

struct TNode {
    SOp op;
    TermPtr term;
    bool is_l = false;
    int cls = -1;
    int a = -1, b = -1;
    std::size_t offset = 0;
};

struct Infer {
    std::vector<TNode> nodes;
    std::vector<int> parent;
    std::vector<std::optional<Sort>> fixed;

    int new_class(std::optional<Sort> s) {
        parent.push_back(static_cast<int>(parent.size()));
        fixed.push_back(s);
        return static_cast<int>(parent.size()) - 1;
    }
    int find(int c) {
        while (parent[c] != c) c = parent[c] = parent[parent[c]];
        return c;
    }
    bool unite(int x, int y) {
        x = find(x);
        y = find(y);
        if (x == y) return true;
        if (fixed[x] && fixed[y] && *fixed[x] != *fixed[y]) return false;
        if (!fixed[x]) fixed[x] = fixed[y];
        parent[y] = x;
        return true;
    }
    void settle(int n, Polarity pol) {
        const TNode& t = nodes[n];
        if (t.op == SOp::Circ) {
            int c = find(t.cls);
            if (!fixed[c]) fixed[c] = pol == Polarity::Precedent ? Sort::Pop : Sort::P;
        } else if (t.op == SOp::Bullet) {
            int c = find(nodes[t.a].cls);
            if (!fixed[c]) fixed[c] = pol == Polarity::Precedent ? Sort::P : Sort::Pop;
        }
        if (t.op == SOp::Sup) {
            settle(t.a, flip(pol));
            settle(t.b, pol);
        } else {
            if (t.a >= 0) settle(t.a, pol);
            if (t.b >= 0) settle(t.b, pol);
        }
    }
    void finish(int l, int r) {
        settle(l, Polarity::Precedent);
        settle(r, Polarity::Succedent);
        for (std::size_t c = 0; c < parent.size(); ++c) {
            int root = find(static_cast<int>(c));
            if (!fixed[root]) fixed[root] = Sort::P;
        }
    }
    Sort sort_of(int n) {
        const TNode& t = nodes[n];
        if (t.is_l) return Sort::L;
        return *fixed[find(t.cls)];
    }
};

}  // namespace

// ---------------------------------------------------------------- printing

namespace {

bool term_atomic(const TermPtr& t) { return t->op == Op::Atom || t->op == Op::Top || t->op == Op::Bot; }
bool term_binary(const TermPtr& t) { return t->op == Op::Cap || t->op == Op::Cup; }

void print_t(const TermPtr& t, std::string& out) {
    switch (t->op) {
        case Op::Atom: out += t->name; return;
        case Op::Top: out += "T"; return;
        case Op::Bot: out += "F"; return;
        case Op::BDia:
        case Op::BBox:
        case Op::WBox:
        case Op::WDia: {
            out += t->op == Op::BDia ? "fdia " : t->op == Op::BBox ? "fbox " : t->op == Op::WBox ? "wbox " : "wdia ";
            bool p = !term_atomic(t->a);
            if (p) out += "(";
            print_t(t->a, out);
            if (p) out += ")";
            return;
        }
        case Op::Cap:
        case Op::Cup: {
            bool pl = term_binary(t->a) && t->a->op != t->op;
            if (pl) out += "(";
            print_t(t->a, out);
            if (pl) out += ")";
            out += t->op == Op::Cap ? " cap " : " cup ";
            bool pr = term_binary(t->b);
            if (pr) out += "(";
            print_t(t->b, out);
            if (pr) out += ")";
            return;
        }
    }
}

int sprec(const StructPtr& s) {
    switch (s->op) {
        case SOp::Sup: return 1;
        case SOp::Dot: return 2;
        case SOp::Leaf: return term_binary(s->term) ? 3 : 4;
        default: return 4;
    }
}

void print_s(const StructPtr& s, bool marks, std::string& out) {
    auto sub = [&](const StructPtr& c, bool paren) {
        if (paren) out += "(";
        print_s(c, marks, out);
        if (paren) out += ")";
    };
    auto mark = [&]() {
        if (marks) out += s->sort == Sort::P ? "[P]" : "[Pop]";
    };
    switch (s->op) {
        case SOp::Leaf: print_t(s->term, out); return;
        case SOp::I: out += "I"; return;
        case SOp::SCirc:
            out += "S0";
            mark();
            return;
        case SOp::Bullet:
            out += "* ";
            sub(s->a, sprec(s->a) < 4);
            return;
        case SOp::Circ:
            out += "o";
            mark();
            out += " ";
            sub(s->a, sprec(s->a) < 4);
            return;
        case SOp::Dot:
            sub(s->a, sprec(s->a) < 2);
            out += " ; ";
            sub(s->b, sprec(s->b) <= 2);
            return;
        case SOp::Sup:
            sub(s->a, sprec(s->a) <= 1);
            out += " > ";
            sub(s->b, sprec(s->b) < 1);
            return;
    }
}

int build_from_struct(Infer& inf, const StructPtr& s) {
    TNode t;
    t.op = s->op;
    switch (s->op) {
        case SOp::Leaf:
            t.term = s->term;
            if (s->sort == Sort::L)
                t.is_l = true;
            else
                t.cls = inf.new_class(s->sort);
            break;
        case SOp::I: t.is_l = true; break;
        case SOp::SCirc: t.cls = inf.new_class(std::nullopt); break;
        case SOp::Circ:
            t.a = build_from_struct(inf, s->a);
            t.cls = inf.new_class(std::nullopt);
            break;
        case SOp::Bullet:
            t.a = build_from_struct(inf, s->a);
            t.is_l = true;
            break;
        case SOp::Dot:
        case SOp::Sup:
            t.a = build_from_struct(inf, s->a);
            t.b = build_from_struct(inf, s->b);
            t.cls = inf.nodes[t.a].cls;
            inf.unite(t.cls, inf.nodes[t.b].cls);
            break;
    }
    inf.nodes.push_back(t);
    return static_cast<int>(inf.nodes.size()) - 1;
}

bool sorts_agree(Infer& inf, int n, const StructPtr& s) {
    if (inf.sort_of(n) != s->sort) return false;
    const TNode& t = inf.nodes[n];
    if (t.a >= 0 && !sorts_agree(inf, t.a, s->a)) return false;
    if (t.b >= 0 && !sorts_agree(inf, t.b, s->b)) return false;
    return true;
}

bool needs_marks(const Sequent& s) {
    Infer inf;
    int l = build_from_struct(inf, s.left);
    int r = build_from_struct(inf, s.right);
    if (!inf.nodes[l].is_l && !inf.nodes[r].is_l) inf.unite(inf.nodes[l].cls, inf.nodes[r].cls);
    inf.finish(l, r);
    return !(sorts_agree(inf, l, s.left) && sorts_agree(inf, r, s.right));
}

}  // namespace

std::string print_term(const TermPtr& t) {
    std::string out;
    print_t(t, out);
    return out;
}

std::string print_struct(const StructPtr& s) {
    std::string out;
    print_s(s, false, out);
    return out;
}

std::string print_sequent(const Sequent& s) {
    bool marks = needs_marks(s);
    std::string out;
    print_s(s.left, marks, out);
    out += " |- ";
    print_s(s.right, marks, out);
    return out;
}

// ---------------------------------------------------------------- parsing

namespace {

enum class Tk { Name, LParen, RParen, Turnstile, Semi, Gt, Star, Mark, End };

struct Token {
    Tk kind;
    std::string text;
    std::size_t off;
};

std::vector<Token> lex(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t st = i;
        if (c == '(') {
            out.push_back({Tk::LParen, "(", st});
            ++i;
        } else if (c == ')') {
            out.push_back({Tk::RParen, ")", st});
            ++i;
        } else if (c == ';') {
            out.push_back({Tk::Semi, ";", st});
            ++i;
        } else if (c == '>') {
            out.push_back({Tk::Gt, ">", st});
            ++i;
        } else if (c == '*') {
            out.push_back({Tk::Star, "*", st});
            ++i;
        } else if (c == '|' && i + 1 < s.size() && s[i + 1] == '-') {
            out.push_back({Tk::Turnstile, "|-", st});
            i += 2;
        } else if (c == '[') {
            std::size_t e = s.find(']', i);
            if (e == std::string_view::npos) throw SyntaxError("unterminated sort marker", st);
            std::string m(s.substr(i + 1, e - i - 1));
            if (m != "P" && m != "Pop") throw SyntaxError("unknown sort marker '" + m + "'", st);
            out.push_back({Tk::Mark, m, st});
            i = e + 1;
        } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
            out.push_back({Tk::Name, std::string(s.substr(st, i - st)), st});
        } else {
            throw SyntaxError(std::string("unexpected character '") + c + "'", st);
        }
    }
    out.push_back({Tk::End, "", s.size()});
    return out;
}

// Untyped parse tree.
struct PNode {
    std::string op;  // name, "T", "F", "I", "S0", unary keyword, binary keyword/";"/">"
    enum Kind { Leaf, Unary, Binary } kind = Leaf;
    std::unique_ptr<PNode> a, b;
    std::optional<Sort> mark;
    std::size_t off = 0;
};

bool is_unary_kw(const std::string& w) {
    return w == "wbox" || w == "wdia" || w == "fdia" || w == "fbox" || w == "o" || w == "*";
}
bool is_cap_kw(const std::string& w) { return w == "cap" || w == "cup" || w == "capop" || w == "cupop"; }

class Parser {
   public:
    Parser(std::vector<Token> toks, const ParseOptions& opt) : t_(std::move(toks)), opt_(opt) {}

    std::unique_ptr<PNode> parse_sup() {
        auto l = parse_semi();
        if (peek().kind == Tk::Gt) {
            std::size_t off = next().off;
            auto r = parse_sup();
            return bin(">", std::move(l), std::move(r), off);
        }
        return l;
    }
    std::unique_ptr<PNode> parse_semi() {
        auto l = parse_cap();
        while (peek().kind == Tk::Semi) {
            std::size_t off = next().off;
            l = bin(";", std::move(l), parse_cap(), off);
        }
        return l;
    }
    std::unique_ptr<PNode> parse_cap() {
        auto l = parse_unary();
        while (peek().kind == Tk::Name && is_cap_kw(peek().text)) {
            Token op = next();
            l = bin(op.text, std::move(l), parse_unary(), op.off);
        }
        return l;
    }
    std::unique_ptr<PNode> parse_unary() {
        const Token& k = peek();
        if (k.kind == Tk::Star || (k.kind == Tk::Name && is_unary_kw(k.text))) {
            Token op = next();
            auto n = std::make_unique<PNode>();
            n->op = op.kind == Tk::Star ? "*" : op.text;
            n->kind = PNode::Unary;
            n->off = op.off;
            if (n->op == "o" && peek().kind == Tk::Mark) n->mark = next().text == "P" ? Sort::P : Sort::Pop;
            bool loose = opt_.loose_structural_unary && (n->op == "o" || n->op == "*");
            n->a = loose ? parse_cap() : parse_unary();
            return n;
        }
        return parse_atom();
    }
    std::unique_ptr<PNode> parse_atom() {
        Token k = next();
        if (k.kind == Tk::LParen) {
            auto n = parse_sup();
            if (next().kind != Tk::RParen) throw SyntaxError("expected ')'", t_[pos_ - 1].off);
            return n;
        }
        if (k.kind != Tk::Name) throw SyntaxError("expected a term or structure", k.off);
        if (is_cap_kw(k.text) || is_unary_kw(k.text)) throw SyntaxError("misplaced '" + k.text + "'", k.off);
        auto n = std::make_unique<PNode>();
        n->op = k.text;
        n->off = k.off;
        if (k.text == "S0") {
            if (peek().kind == Tk::Mark) n->mark = next().text == "P" ? Sort::P : Sort::Pop;
        } else if (k.text != "T" && k.text != "F" && k.text != "I") {
            if (!valid_atom_name(k.text, opt_.schematic)) throw SyntaxError("invalid atom name '" + k.text + "'", k.off);
        }
        return n;
    }

    const Token& peek() const { return t_[pos_]; }
    Token next() { return t_[pos_ < t_.size() - 1 ? pos_++ : pos_]; }

   private:
    std::vector<Token> t_;
    std::size_t pos_ = 0;
    const ParseOptions& opt_;

    static std::unique_ptr<PNode> bin(std::string op, std::unique_ptr<PNode> l, std::unique_ptr<PNode> r,
                                      std::size_t off) {
        auto n = std::make_unique<PNode>();
        n->op = std::move(op);
        n->kind = PNode::Binary;
        n->a = std::move(l);
        n->b = std::move(r);
        n->off = off;
        return n;
    }
};

std::string describe(const PNode& p) {
    if (p.kind == PNode::Leaf) return p.op;
    if (p.kind == PNode::Unary) return p.op + " " + describe(*p.a);
    return "(" + describe(*p.a) + " " + p.op + " " + describe(*p.b) + ")";
}

bool is_structural(const PNode& p) {
    if (p.kind == PNode::Leaf) return p.op == "I" || p.op == "S0";
    if (p.kind == PNode::Unary) return p.op == "o" || p.op == "*" || is_structural(*p.a);
    if (p.op == ";" || p.op == ">") return true;
    return is_structural(*p.a) || is_structural(*p.b);
}

TermPtr to_term(const PNode& p) {
    if (p.kind == PNode::Leaf) {
        if (p.op == "T") return t_top();
        if (p.op == "F") return t_bot();
        if (p.op == "I" || p.op == "S0") throw SortError("'" + p.op + "' is structural, expected an operational term");
        return t_atom(p.op);
    }
    if (p.kind == PNode::Unary) {
        if (p.op == "o" || p.op == "*")
            throw SortError("'" + describe(p) + "' is structural, expected an operational term");
        if (is_structural(*p.a))
            throw SortError("'" + p.op + "' expects an operational term, found structure '" + describe(*p.a) + "'");
        TermPtr a = to_term(*p.a);
        try {
            if (p.op == "wbox") return t_wbox(a);
            if (p.op == "wdia") return t_wdia(a);
            if (p.op == "fdia") return t_bdia(a);
            return t_bbox(a);
        } catch (const SortError& e) {
            throw SortError(std::string(e.what()) + " (subterm '" + describe(p) + "')");
        }
    }
    if (is_structural(*p.a) || is_structural(*p.b))
        throw SortError("'" + p.op + "' expects operational terms in '" + describe(p) + "'");
    TermPtr a = to_term(*p.a), b = to_term(*p.b);
    try {
        if (p.op == "capop" || p.op == "cupop") {
            if (a->sort != Sort::Pop)
                throw SortError(p.op + ": expected sort Pop, found " + sort_name(a->sort) + " in '" + print_term(a) + "'");
            if (b->sort != Sort::Pop)
                throw SortError(p.op + ": expected sort Pop, found " + sort_name(b->sort) + " in '" + print_term(b) + "'");
        }
        if (p.op == "cap" || p.op == "capop") return t_cap(a, b);
        return t_cup(a, b);
    } catch (const SortError& e) {
        throw SortError(std::string(e.what()) + " (subterm '" + describe(p) + "')");
    }
}

int build_from_parse(Infer& inf, const PNode& p) {
    TNode t;
    t.offset = p.off;
    if (!is_structural(p)) {
        t.op = SOp::Leaf;
        t.term = to_term(p);
        if (t.term->sort == Sort::L)
            t.is_l = true;
        else
            t.cls = inf.new_class(t.term->sort);
    } else if (p.kind == PNode::Leaf) {
        if (p.op == "I") {
            t.op = SOp::I;
            t.is_l = true;
        } else {
            t.op = SOp::SCirc;
            t.cls = inf.new_class(p.mark);
        }
    } else if (p.kind == PNode::Unary) {
        if (p.op != "o" && p.op != "*")
            throw SortError("'" + p.op + "' expects an operational term, found structure '" + describe(*p.a) + "'");
        t.a = build_from_parse(inf, *p.a);
        if (p.op == "o") {
            if (!inf.nodes[t.a].is_l)
                throw SortError("'o' expects an L structure, found a P/Pop structure '" + describe(*p.a) + "'");
            t.op = SOp::Circ;
            t.cls = inf.new_class(p.mark);
        } else {
            if (inf.nodes[t.a].is_l)
                throw SortError("'*' expects a P or Pop structure, found L structure '" + describe(*p.a) + "'");
            t.op = SOp::Bullet;
            t.is_l = true;
        }
    } else {
        if (p.op != ";" && p.op != ">")
            throw SortError("'" + p.op + "' expects operational terms, found structure in '" + describe(p) + "'");
        t.op = p.op == ";" ? SOp::Dot : SOp::Sup;
        t.a = build_from_parse(inf, *p.a);
        t.b = build_from_parse(inf, *p.b);
        if (inf.nodes[t.a].is_l || inf.nodes[t.b].is_l)
            throw SortError("'" + p.op + "' expects P or Pop structures, found L in '" + describe(p) + "'");
        t.cls = inf.nodes[t.a].cls;
        if (!inf.unite(t.cls, inf.nodes[t.b].cls))
            throw SortError("'" + p.op + "' joins a P structure with a Pop structure in '" + describe(p) + "'");
    }
    inf.nodes.push_back(t);
    return static_cast<int>(inf.nodes.size()) - 1;
}

StructPtr realize(Infer& inf, int n) {
    const TNode& t = inf.nodes[n];
    switch (t.op) {
        case SOp::Leaf: return s_leaf(t.term);
        case SOp::I: return s_i();
        case SOp::SCirc: return s_scirc(inf.sort_of(n));
        case SOp::Circ: return s_circ(realize(inf, t.a), inf.sort_of(n));
        case SOp::Bullet: return s_bullet(realize(inf, t.a));
        case SOp::Dot: return s_dot(realize(inf, t.a), realize(inf, t.b));
        case SOp::Sup: return s_sup(realize(inf, t.a), realize(inf, t.b));
    }
    return nullptr;
}

}  // namespace

TermPtr parse_term(std::string_view text, const ParseOptions& opt) {
    Parser ps(lex(text), opt);
    auto p = ps.parse_sup();
    if (ps.peek().kind != Tk::End) throw SyntaxError("unexpected input", ps.peek().off);
    return to_term(*p);
}

Sequent parse_sequent(std::string_view text, const ParseOptions& opt) {
    Parser ps(lex(text), opt);
    auto l = ps.parse_sup();
    if (ps.peek().kind != Tk::Turnstile) throw SyntaxError("expected '|-'", ps.peek().off);
    ps.next();
    auto r = ps.parse_sup();
    if (ps.peek().kind != Tk::End) throw SyntaxError("unexpected input", ps.peek().off);
    Infer inf;
    int li = build_from_parse(inf, *l);
    int ri = build_from_parse(inf, *r);
    bool ll = inf.nodes[li].is_l, rl = inf.nodes[ri].is_l;
    if (ll != rl)
        throw SortError(std::string("sequent sides have different sorts: '") + describe(*l) + "' is " +
                        (ll ? "L" : "P/Pop") + ", '" + describe(*r) + "' is " + (rl ? "L" : "P/Pop"));
    if (!ll && !inf.unite(inf.nodes[li].cls, inf.nodes[ri].cls))
        throw SortError("sequent joins a P side with a Pop side: '" + describe(*l) + "' |- '" + describe(*r) + "'");
    inf.finish(li, ri);
    return make_sequent(realize(inf, li), realize(inf, ri));
}

// ---------------------------------------------------------------- paths

std::string print_path(const Path& p) {
    std::string out = p.side == Side::Left ? "L" : "R";
    for (int i : p.idx) out += "." + std::to_string(i);
    return out;
}

Path parse_path(std::string_view text) {
    Path p;
    if (text.empty() || (text[0] != 'L' && text[0] != 'R')) throw PathError("path must start with L or R");
    p.side = text[0] == 'L' ? Side::Left : Side::Right;
    std::size_t i = 1;
    while (i < text.size()) {
        if (text[i] != '.') throw PathError("malformed path '" + std::string(text) + "'");
        ++i;
        std::size_t st = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (st == i) throw PathError("malformed path '" + std::string(text) + "'");
        p.idx.push_back(std::stoi(std::string(text.substr(st, i - st))));
    }
    return p;
}

namespace {

StructPtr child(const StructPtr& s, int i) {
    bool unary = s->op == SOp::Bullet || s->op == SOp::Circ;
    bool binary = s->op == SOp::Dot || s->op == SOp::Sup;
    if ((unary && i == 0) || (binary && (i == 0 || i == 1))) return i == 0 ? s->a : s->b;
    throw PathError("dangling path: node '" + print_struct(s) + "' has no child " + std::to_string(i));
}

}  // namespace

StructPtr struct_at(const Sequent& s, const Path& p) {
    StructPtr cur = p.side == Side::Left ? s.left : s.right;
    for (int i : p.idx) cur = child(cur, i);
    return cur;
}

Polarity polarity_at(const Sequent& s, const Path& p) {
    Polarity pol = p.side == Side::Left ? Polarity::Precedent : Polarity::Succedent;
    StructPtr cur = p.side == Side::Left ? s.left : s.right;
    for (int i : p.idx) {
        if (cur->op == SOp::Sup && i == 0) pol = flip(pol);
        cur = child(cur, i);
    }
    return pol;
}

StructPtr replace_in(const StructPtr& s, const std::vector<int>& idx, std::size_t from, StructPtr repl) {
    if (from == idx.size()) return repl;
    int i = idx[from];
    StructPtr c = child(s, i);
    StructPtr nc = replace_in(c, idx, from + 1, std::move(repl));
    switch (s->op) {
        case SOp::Bullet: return s_bullet(nc);
        case SOp::Circ: return s_circ(nc, s->sort);
        case SOp::Dot: return i == 0 ? s_dot(nc, s->b) : s_dot(s->a, nc);
        case SOp::Sup: return i == 0 ? s_sup(nc, s->b) : s_sup(s->a, nc);
        default: throw PathError("dangling path");
    }
}

Sequent replace_at(const Sequent& s, const Path& p, StructPtr repl) {
    if (p.side == Side::Left) return make_sequent(replace_in(s.left, p.idx, 0, std::move(repl)), s.right);
    return make_sequent(s.left, replace_in(s.right, p.idx, 0, std::move(repl)));
}

std::vector<Path> all_paths(const Sequent& s) {
    std::vector<Path> out;
    std::function<void(const StructPtr&, Path&)> walk = [&](const StructPtr& n, Path& p) {
        out.push_back(p);
        if (n->a) {
            p.idx.push_back(0);
            walk(n->a, p);
            p.idx.pop_back();
        }
        if (n->b) {
            p.idx.push_back(1);
            walk(n->b, p);
            p.idx.pop_back();
        }
    };
    Path l{Side::Left, {}};
    walk(s.left, l);
    Path r{Side::Right, {}};
    walk(s.right, r);
    return out;
}

namespace {

bool proper(const StructPtr& s, Polarity pol) {
    switch (s->op) {
        case SOp::Circ:
            if ((s->sort == Sort::P) != (pol == Polarity::Succedent)) return false;
            return proper(s->a, pol);
        case SOp::Bullet:
            if ((s->a->sort == Sort::P) != (pol == Polarity::Precedent)) return false;
            return proper(s->a, pol);
        case SOp::Dot: return proper(s->a, pol) && proper(s->b, pol);
        case SOp::Sup: return proper(s->a, flip(pol)) && proper(s->b, pol);
        default: return true;
    }
}

}  // namespace

bool properly_polarized(const Sequent& s) {
    return proper(s.left, Polarity::Precedent) && proper(s.right, Polarity::Succedent);
}

}  // namespace dll
