#include "dll/kernel.hpp"

#include <cctype>
#include <functional>

namespace dll {

DerivPtr make_node(const Sequent& s, const std::string& rule, std::vector<DerivPtr> premises, bool backward) {
    return std::make_shared<Derivation>(Derivation{s, rule, backward, std::move(premises)});
}

DerivPtr make_hyp(const Sequent& s) { return make_node(s, kHyp); }

std::string CheckReport::describe() const {
    if (ok) return "ok";
    std::string out = "at node [";
    for (std::size_t i = 0; i < path.size(); ++i) out += (i ? "," : "") + std::to_string(path[i]);
    out += "] rule " + rule + ": " + message;
    if (!expected.empty()) {
        out += "\n  expected premises:";
        for (auto& e : expected) out += "\n    " + e;
    }
    if (!found.empty() || !expected.empty()) {
        out += "\n  found premises:";
        for (auto& f : found) out += "\n    " + f;
    }
    return out;
}

bool check_step(const std::string& label, const std::vector<Sequent>& premises, const Sequent& conclusion,
                bool allow_extensions, std::string* why) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    bool backward = !label.empty() && label.back() == '~';
    std::string name = backward ? label.substr(0, label.size() - 1) : label;
    const RuleSchema* r = lookup_rule(name, allow_extensions);
    if (!r) return fail("unknown rule '" + name + "'");
    if (backward && !r->invertible) return fail("rule " + name + " is not invertible");
    std::size_t want = r->premises.size();
    if (premises.size() != want)
        return fail("expected " + std::to_string(want) + " premise(s), found " + std::to_string(premises.size()));
    Substitution sub;
    if (!backward) {
        if (!match_into(*r, r->conclusion, conclusion, sub)) return fail("conclusion does not match " + r->name);
        for (std::size_t i = 0; i < want; ++i)
            if (!match_into(*r, r->premises[i], premises[i], sub))
                return fail("premise " + std::to_string(i + 1) + " does not match " + r->name);
    } else {
        if (!match_into(*r, r->premises[0], conclusion, sub)) return fail("conclusion does not match " + label);
        if (!match_into(*r, r->conclusion, premises[0], sub)) return fail("premise does not match " + label);
    }
    return true;
}

namespace {

std::vector<std::string> expected_premises(const std::string& label, const Sequent& conclusion, bool ext) {
    bool backward = !label.empty() && label.back() == '~';
    std::string name = backward ? label.substr(0, label.size() - 1) : label;
    const RuleSchema* r = lookup_rule(name, ext);
    if (!r) return {};
    Substitution sub;
    std::vector<std::string> out;
    try {
        if (!backward) {
            if (!match_into(*r, r->conclusion, conclusion, sub)) return {};
            for (auto& p : r->premises) out.push_back(print_sequent(instantiate_pattern(*r, p, sub)));
        } else if (r->invertible) {
            if (!match_into(*r, r->premises[0], conclusion, sub)) return {};
            out.push_back(print_sequent(instantiate_pattern(*r, r->conclusion, sub)));
        }
    } catch (const std::exception&) {
        return {};
    }
    return out;
}

bool check_rec(const DerivPtr& d, const CheckOptions& opt, std::vector<int>& path, CheckReport& rep) {
    if (d->rule == kHyp) {
        if (!opt.allow_hypotheses || !d->premises.empty()) {
            rep.ok = false;
            rep.path = path;
            rep.rule = kHyp;
            rep.message = "unproved hypothesis " + print_sequent(d->conclusion);
            return false;
        }
        return true;
    }
    std::vector<Sequent> prem;
    for (auto& p : d->premises) prem.push_back(p->conclusion);
    std::string why;
    if (!check_step(d->label(), prem, d->conclusion, opt.allow_extensions, &why)) {
        rep.ok = false;
        rep.path = path;
        rep.rule = d->label();
        rep.message = why + " (conclusion " + print_sequent(d->conclusion) + ")";
        rep.expected = expected_premises(d->label(), d->conclusion, opt.allow_extensions);
        for (auto& p : prem) rep.found.push_back(print_sequent(p));
        return false;
    }
    for (std::size_t i = 0; i < d->premises.size(); ++i) {
        path.push_back(static_cast<int>(i));
        if (!check_rec(d->premises[i], opt, path, rep)) return false;
        path.pop_back();
    }
    return true;
}

}  // namespace

CheckReport check(const DerivPtr& d, const CheckOptions& opt) {
    CheckReport rep;
    std::vector<int> path;
    check_rec(d, opt, path, rep);
    return rep;
}

CheckReport check(const DerivPtr& d, bool allow_hypotheses) {
    CheckOptions o;
    o.allow_hypotheses = allow_hypotheses;
    return check(d, o);
}

bool uses_rule(const DerivPtr& d, const std::string& rule) {
    if (d->rule == rule) return true;
    for (auto& p : d->premises)
        if (uses_rule(p, rule)) return true;
    return false;
}

bool is_cut_free(const DerivPtr& d) { return !uses_rule(d, "Cut_L") && !uses_rule(d, "Cut_P"); }

std::size_t node_count(const DerivPtr& d) {
    std::size_t n = 1;
    for (auto& p : d->premises) n += node_count(p);
    return n;
}

int height(const DerivPtr& d) {
    int h = 0;
    for (auto& p : d->premises) h = std::max(h, height(p));
    return h + 1;
}

std::vector<Sequent> hypotheses(const DerivPtr& d) {
    std::vector<Sequent> out;
    std::function<void(const DerivPtr&)> walk = [&](const DerivPtr& n) {
        if (n->rule == kHyp) out.push_back(n->conclusion);
        for (auto& p : n->premises) walk(p);
    };
    walk(d);
    return out;
}

DerivPtr plug(const DerivPtr& d, const Sequent& h, const DerivPtr& proof) {
    if (d->rule == kHyp) return equal(d->conclusion, h) ? proof : d;
    std::vector<DerivPtr> ps;
    bool changed = false;
    for (auto& p : d->premises) {
        ps.push_back(plug(p, h, proof));
        changed = changed || ps.back() != p;
    }
    if (!changed) return d;
    return make_node(d->conclusion, d->rule, std::move(ps), d->backward);
}

// ---------------------------------------------------------------- display

namespace {

StructPtr side(const Sequent& s, Side sd) { return sd == Side::Left ? s.left : s.right; }

}  // namespace

std::vector<DisplayStep> display_chain(const Sequent& start, const Path& path) {
    std::vector<DisplayStep> chain;
    Sequent s = start;
    Side sd = path.side;
    auto step = [&](const char* rule, bool back, Sequent next) {
        chain.push_back({rule, back, next});
        s = std::move(next);
    };
    for (std::size_t k = 0; k < path.idx.size(); ++k) {
        int i = path.idx[k];
        StructPtr n = side(s, sd);
        if (sd == Side::Left) {
            switch (n->op) {
                case SOp::Dot: {
                    // S ; T |- U
                    if (i == 0) step("E_left", false, make_sequent(s_dot(n->b, n->a), s.right));
                    StructPtr l = side(s, Side::Left);
                    step("D_P_left", false, make_sequent(l->b, s_sup(l->a, s.right)));
                    sd = Side::Left;
                    break;
                }
                case SOp::Sup: {
                    // T > S |- U  ~>  S |- T ; U
                    step("D_P_right", true, make_sequent(n->b, s_dot(n->a, s.right)));
                    if (i == 0) {
                        StructPtr r = s.right;
                        step("E_right", false, make_sequent(s.left, s_dot(r->b, r->a)));
                        r = s.right;
                        step("D_P_right", false, make_sequent(s_sup(r->a, s.left), r->b));
                        sd = Side::Right;
                    } else {
                        sd = Side::Left;
                    }
                    break;
                }
                case SOp::Circ:
                    if (n->sort != Sort::Pop) throw DisplayError("P-sort o in precedent position cannot be displayed");
                    step("D_PL_right", false, make_sequent(n->a, s_bullet(s.right)));
                    break;
                case SOp::Bullet:
                    if (n->a->sort != Sort::P) throw DisplayError("bullet of a Pop structure in precedent position");
                    step("D_PL_left", true, make_sequent(n->a, s_circ(s.right, Sort::P)));
                    break;
                default: throw PathError("dangling path");
            }
        } else {
            switch (n->op) {
                case SOp::Dot: {
                    // S |- T ; U
                    if (i == 0) step("E_right", false, make_sequent(s.left, s_dot(n->b, n->a)));
                    StructPtr r = s.right;
                    step("D_P_right", false, make_sequent(s_sup(r->a, s.left), r->b));
                    sd = Side::Right;
                    break;
                }
                case SOp::Sup: {
                    // S |- A > B  ~>  A ; S |- B
                    step("D_P_left", true, make_sequent(s_dot(n->a, s.left), n->b));
                    if (i == 0) {
                        StructPtr l = s.left;
                        step("E_left", false, make_sequent(s_dot(l->b, l->a), s.right));
                        l = s.left;
                        step("D_P_left", false, make_sequent(l->b, s_sup(l->a, s.right)));
                        sd = Side::Left;
                    } else {
                        sd = Side::Right;
                    }
                    break;
                }
                case SOp::Circ:
                    if (n->sort != Sort::P) throw DisplayError("Pop-sort o in succedent position cannot be displayed");
                    step("D_PL_left", false, make_sequent(s_bullet(s.left), n->a));
                    break;
                case SOp::Bullet:
                    if (n->a->sort != Sort::Pop) throw DisplayError("bullet of a P structure in succedent position");
                    step("D_PL_right", true, make_sequent(s_circ(s.left, Sort::Pop), n->a));
                    break;
                default: throw PathError("dangling path");
            }
        }
    }
    return chain;
}

DerivPtr apply_chain(const DerivPtr& d, const std::vector<DisplayStep>& chain) {
    DerivPtr cur = d;
    for (auto& st : chain) cur = make_node(st.result, st.rule, {cur}, st.backward);
    return cur;
}

std::string inverse_label(const std::string& rule, bool backward, bool* inv_backward) {
    if (rule == "E_left" || rule == "E_right") {
        *inv_backward = false;
        return rule;
    }
    *inv_backward = !backward;
    return rule;
}

DerivPtr unapply_chain(const DerivPtr& d, const Sequent& start, const std::vector<DisplayStep>& chain) {
    DerivPtr cur = d;
    for (std::size_t k = chain.size(); k-- > 0;) {
        const Sequent& target = k == 0 ? start : chain[k - 1].result;
        bool b = false;
        std::string r = inverse_label(chain[k].rule, chain[k].backward, &b);
        cur = make_node(target, r, {cur}, b);
    }
    return cur;
}

DerivPtr display_at(const Sequent& s, const Path& path) { return apply_chain(make_hyp(s), display_chain(s, path)); }

// ---------------------------------------------------------------- proof files

namespace {

void print_rec(const DerivPtr& d, int indent, std::string& out) {
    out += std::string(static_cast<std::size_t>(indent) * 2, ' ');
    out += "(" + d->label() + " \"" + print_sequent(d->conclusion) + "\"";
    if (d->premises.empty()) {
        out += ")";
        return;
    }
    for (auto& p : d->premises) {
        out += "\n";
        print_rec(p, indent + 1, out);
    }
    out += ")";
}

class ProofReader {
   public:
    ProofReader(std::string_view s, const ParseOptions& opt) : s_(s), opt_(opt) {}

    bool at_end() {
        skip();
        return i_ >= s_.size();
    }

    DerivPtr read() {
        skip();
        expect('(');
        skip();
        std::size_t st = i_;
        while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' &&
               s_[i_] != ')' && s_[i_] != '"')
            ++i_;
        std::string label(s_.substr(st, i_ - st));
        if (label.empty()) throw SyntaxError("expected rule name", st);
        skip();
        std::size_t qoff = i_;
        expect('"');
        std::size_t qs = i_;
        while (i_ < s_.size() && s_[i_] != '"') ++i_;
        if (i_ >= s_.size()) throw SyntaxError("unterminated sequent string", qoff);
        std::string_view text = s_.substr(qs, i_ - qs);
        ++i_;
        Sequent seq;
        try {
            seq = parse_sequent(text, opt_);
        } catch (const SyntaxError& e) {
            throw SyntaxError(std::string("in sequent: ") + e.what(), qs + e.offset);
        }
        std::vector<DerivPtr> prem;
        for (;;) {
            skip();
            if (i_ >= s_.size()) throw SyntaxError("unterminated proof node", st);
            if (s_[i_] == ')') {
                ++i_;
                break;
            }
            prem.push_back(read());
        }
        if (label == kHyp) {
            if (!prem.empty()) throw SyntaxError("HYP takes no premises", st);
            return make_hyp(seq);
        }
        bool back = label.back() == '~';
        if (back) label.pop_back();
        return make_node(seq, label, std::move(prem), back);
    }

   private:
    std::string_view s_;
    ParseOptions opt_;
    std::size_t i_ = 0;

    void skip() {
        for (;;) {
            while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
            if (i_ < s_.size() && s_[i_] == '#') {
                while (i_ < s_.size() && s_[i_] != '\n') ++i_;
                continue;
            }
            break;
        }
    }
    void expect(char c) {
        if (i_ >= s_.size() || s_[i_] != c) throw SyntaxError(std::string("expected '") + c + "'", i_);
        ++i_;
    }
};

}  // namespace

std::string print_proof(const DerivPtr& d) {
    std::string out;
    print_rec(d, 0, out);
    out += "\n";
    return out;
}

std::vector<DerivPtr> parse_proofs(std::string_view text, const ParseOptions& opt) {
    ProofReader r(text, opt);
    std::vector<DerivPtr> out;
    while (!r.at_end()) out.push_back(r.read());
    return out;
}

DerivPtr parse_proof(std::string_view text, const ParseOptions& opt) {
    auto all = parse_proofs(text, opt);
    if (all.size() != 1) throw SyntaxError("expected exactly one proof, found " + std::to_string(all.size()), 0);
    return all.front();
}

}  // namespace dll
