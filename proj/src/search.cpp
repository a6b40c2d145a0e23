#include "dll/search.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "dll/calculus.hpp"

namespace dll {

const char* status_name(SearchStatus s) {
    switch (s) {
        case SearchStatus::Proved: return "PROVED";
        case SearchStatus::Exhausted: return "EXHAUSTED";
        case SearchStatus::ResourceOut: return "RESOURCE_OUT";
    }
    return "?";
}

// ---------------------------------------------------------------- class keys

namespace {

struct KNode {
    std::string label;
    bool alive = true;
};
struct KEdge {
    int u, v;
    char pu, pv;
    bool alive = true;
};

struct KeyGraph {
    std::vector<KNode> nodes;
    std::vector<KEdge> edges;

    int add(std::string label) {
        nodes.push_back({std::move(label), true});
        return static_cast<int>(nodes.size()) - 1;
    }
    void link(int u, char pu, int v, char pv) { edges.push_back({u, v, pu, pv, true}); }

    // Returns the node and the port at it facing the parent.
    std::pair<int, char> build(const StructPtr& s, Polarity pol) {
        const bool prec = pol == Polarity::Precedent;
        const std::string srt = sort_name(s->sort);
        switch (s->op) {
            case SOp::Leaf: return {add("t" + srt + ":" + print_term(s->term)), 'x'};
            case SOp::I: return {add("I"), 'x'};
            case SOp::SCirc: return {add("S0" + srt), 'x'};
            case SOp::Dot: {
                int n = add(std::string(prec ? "A" : "O") + srt);
                auto [a, pa] = build(s->a, pol);
                auto [b, pb] = build(s->b, pol);
                link(n, 'i', a, pa);
                link(n, 'i', b, pb);
                return {n, 'o'};
            }
            case SOp::Sup: {
                // in succedent X > Y is a meet node with input X and output Y;
                // in precedent a join node with input X and output Y
                int n = add(std::string(prec ? "O" : "A") + srt);
                auto [a, pa] = build(s->a, flip(pol));
                auto [b, pb] = build(s->b, pol);
                link(n, 'i', a, pa);
                link(n, 'o', b, pb);
                return {n, 'i'};
            }
            case SOp::Circ: {
                bool proper = (s->sort == Sort::P) != prec;
                int n = add("C" + srt + (proper ? "" : prec ? "!p" : "!s"));
                auto [a, pa] = build(s->a, pol);
                link(n, 'l', a, pa);
                return {n, 's'};
            }
            case SOp::Bullet: {
                Sort gs = s->a->sort;
                bool proper = (gs == Sort::P) == prec;
                int n = add(std::string("C") + sort_name(gs) + (proper ? "" : prec ? "!p" : "!s"));
                auto [a, pa] = build(s->a, pol);
                link(n, 's', a, pa);
                return {n, 'l'};
            }
        }
        throw std::logic_error("key: bad structure");
    }

    void merge() {
        bool again = true;
        while (again) {
            again = false;
            for (auto& e : edges) {
                if (!e.alive) continue;
                const std::string& lu = nodes[e.u].label;
                if (lu != nodes[e.v].label || (lu[0] != 'A' && lu[0] != 'O')) continue;
                int child, parent;
                if (e.pu == 'o' && e.pv == 'i') {
                    child = e.u;
                    parent = e.v;
                } else if (e.pu == 'i' && e.pv == 'o') {
                    child = e.v;
                    parent = e.u;
                } else {
                    continue;
                }
                e.alive = false;
                for (auto& f : edges) {
                    if (!f.alive) continue;
                    if (f.u == child) f.u = parent;
                    if (f.v == child) f.v = parent;
                }
                nodes[child].alive = false;
                again = true;
                break;
            }
        }
    }

    std::string encode(int v, int from_edge) const {
        std::vector<std::string> parts;
        std::string up;
        for (std::size_t k = 0; k < edges.size(); ++k) {
            const auto& e = edges[k];
            if (!e.alive || (e.u != v && e.v != v)) continue;
            bool at_u = e.u == v;
            char mine = at_u ? e.pu : e.pv;
            char theirs = at_u ? e.pv : e.pu;
            if (static_cast<int>(k) == from_edge) {
                up = std::string("^") + mine;
                continue;
            }
            parts.push_back(std::string(1, mine) + theirs + encode(at_u ? e.v : e.u, static_cast<int>(k)));
        }
        std::sort(parts.begin(), parts.end());
        std::string out = nodes[v].label + up + "(";
        for (auto& p : parts) out += p + ",";
        return out + ")";
    }

    std::string canonical() const {
        // root at the tree center(s)
        std::vector<int> deg(nodes.size(), 0);
        int alive = 0;
        for (std::size_t i = 0; i < nodes.size(); ++i) alive += nodes[i].alive;
        for (const auto& e : edges)
            if (e.alive) ++deg[e.u], ++deg[e.v];
        std::vector<int> layer;
        std::vector<bool> gone(nodes.size(), false);
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].alive && deg[i] <= 1) layer.push_back(static_cast<int>(i));
        int left = alive;
        while (left > 2) {
            std::vector<int> next;
            for (int v : layer) {
                gone[v] = true;
                --left;
                for (const auto& e : edges) {
                    if (!e.alive || (e.u != v && e.v != v)) continue;
                    int w = e.u == v ? e.v : e.u;
                    if (gone[w]) continue;
                    if (--deg[w] == 1) next.push_back(w);
                }
            }
            layer = std::move(next);
        }
        std::string best;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (!nodes[i].alive || gone[i]) continue;
            std::string c = encode(static_cast<int>(i), -1);
            if (best.empty() || c < best) best = std::move(c);
        }
        return best;
    }
};

}  // namespace

std::string canonical_key(const Sequent& s, LoopKey k) {
    if (k == LoopKey::Exact) return print_sequent(s);
    KeyGraph g;
    auto [l, pl] = g.build(s.left, Polarity::Precedent);
    auto [r, pr] = g.build(s.right, Polarity::Succedent);
    g.link(l, pl, r, pr);
    g.merge();
    return g.canonical();
}

// ---------------------------------------------------------------- search

namespace {

struct ResourceOut {};

// One backward step: the current sequent is the conclusion, `premise` the next.
struct BStep {
    std::string rule;
    bool backward;
    Sequent premise;
};

std::optional<Sequent> back_one(const std::string& rule, const Sequent& s) {
    const RuleSchema* r = lookup_rule(rule);
    auto subs = match(*r, s);
    if (subs.empty()) return std::nullopt;
    auto inst = instantiate(*r, subs.front());
    if (inst.premises.size() != 1) return std::nullopt;
    return inst.premises[0];
}

std::optional<Sequent> rev_one(const std::string& rule, const Sequent& s) {
    const RuleSchema* r = lookup_rule(rule);
    Substitution sub;
    if (!match_into(*r, r->premises[0], s, sub)) return std::nullopt;
    return instantiate_pattern(*r, r->conclusion, sub);
}

// Builds backward step lists on a sequent one rule at a time.
struct Walker {
    Sequent cur;
    std::vector<BStep> steps;

    void back(const std::string& rule) {
        auto p = back_one(rule, cur);
        if (!p) throw std::logic_error("search: " + rule + " does not apply to " + print_sequent(cur));
        steps.push_back({rule, false, *p});
        cur = *p;
    }
    void rev(const std::string& rule) {
        auto p = rev_one(rule, cur);
        if (!p) throw std::logic_error("search: " + rule + "~ does not apply to " + print_sequent(cur));
        steps.push_back({rule, true, *p});
        cur = *p;
    }
};

DerivPtr wrap(const Sequent& start, const std::vector<BStep>& steps, DerivPtr top) {
    for (std::size_t k = steps.size(); k-- > 0;) {
        const Sequent& concl = k == 0 ? start : steps[k - 1].premise;
        top = make_node(concl, steps[k].rule, {top}, steps[k].backward);
    }
    return top;
}

bool chain_has_exchange(const std::vector<DisplayStep>& ch) {
    for (const auto& s : ch)
        if (s.rule == "E_left" || s.rule == "E_right") return true;
    return false;
}

// ;-lists on one side of a sequent (Left: precedent items, Right: succedent items)
struct ListOps {
    Side side;
    const char* E() const { return side == Side::Left ? "E_left" : "E_right"; }
    const char* A() const { return side == Side::Left ? "A_left" : "A_right"; }
    const char* DP() const { return side == Side::Left ? "D_P_left" : "D_P_right"; }
    const char* W() const { return side == Side::Left ? "W_left" : "W_right"; }
    const char* C() const { return side == Side::Left ? "C_left" : "C_right"; }

    StructPtr z(const Sequent& s) const { return side == Side::Left ? s.left : s.right; }

    void flatten_root(Walker& w) const {
        while (z(w.cur)->op == SOp::Dot && z(w.cur)->a->op == SOp::Dot) w.rev(A());
    }

    // Rearrange z into the right-nested list `want` (a permutation of its items).
    void arrange(Walker& w, const std::vector<StructPtr>& want, std::size_t from) const {
        if (from + 1 == want.size()) {
            if (!equal(z(w.cur), want[from])) throw std::logic_error("search: arrange mismatch");
            return;
        }
        flatten_root(w);
        std::size_t n = want.size() - from;
        for (std::size_t k = 0; k <= n && !equal(z(w.cur)->a, want[from]); ++k) {
            w.back(E());
            flatten_root(w);
        }
        if (!equal(z(w.cur)->a, want[from])) throw std::logic_error("search: item not found");
        w.rev(DP());
        arrange(w, want, from + 1);
        w.back(DP());
    }
};

void items_of(const StructPtr& s, std::vector<StructPtr>& out) {
    if (s->op == SOp::Dot) {
        items_of(s->a, out);
        items_of(s->b, out);
    } else {
        out.push_back(s);
    }
}

StructPtr right_chain(const std::vector<StructPtr>& xs, std::size_t from = 0) {
    if (from + 1 == xs.size()) return xs[from];
    return s_dot(xs[from], right_chain(xs, from + 1));
}

StructPtr left_chain(const std::vector<StructPtr>& xs) {
    StructPtr cur = xs[0];
    for (std::size_t k = 1; k < xs.size(); ++k) cur = s_dot(cur, xs[k]);
    return cur;
}

struct Split {
    Side side;                   // side of the items
    std::vector<StructPtr> items;
    std::vector<int> assign;     // 0 first premise, 1 second, 2 both
};

std::vector<StructPtr> split_part(const Split& sp, int which) {
    std::vector<StructPtr> out;
    for (std::size_t k = 0; k < sp.items.size(); ++k)
        if (sp.assign[k] == which || sp.assign[k] == 2) out.push_back(sp.items[k]);
    return out;
}

// Steps from D (items on sp.side, focus opposite) to the sequent whose item
// side is (first part, left-nested) ; (second part, right-nested).
std::vector<BStep> realize_split(const Sequent& d, const Split& sp) {
    ListOps ops{sp.side};
    Walker w{d, {}};
    std::vector<StructPtr> pool = sp.items;
    bool dup = std::count(sp.assign.begin(), sp.assign.end(), 2) > 0;
    if (dup) {
        w.back(ops.C());
        std::vector<StructPtr> keep = split_part(sp, 0), k2 = split_part(sp, 1);
        keep.insert(keep.end(), k2.begin(), k2.end());
        pool.insert(pool.end(), sp.items.begin(), sp.items.end());
        // drop what the two parts do not use
        for (;;) {
            std::vector<StructPtr> rest = pool;
            std::vector<StructPtr> need = keep;
            std::optional<StructPtr> extra;
            for (std::size_t k = 0; k < rest.size(); ++k) {
                auto it = std::find_if(need.begin(), need.end(), [&](const StructPtr& x) { return equal(x, rest[k]); });
                if (it != need.end()) {
                    need.erase(it);
                } else {
                    extra = rest[k];
                    rest.erase(rest.begin() + static_cast<long>(k));
                    break;
                }
            }
            if (!extra) break;
            std::vector<StructPtr> want{*extra};
            want.insert(want.end(), rest.begin(), rest.end());
            ops.arrange(w, want, 0);
            w.back(ops.E());
            w.back(ops.W());
            pool = rest;
        }
    }
    std::vector<StructPtr> first = split_part(sp, 0), second = split_part(sp, 1);
    std::vector<StructPtr> want = first;
    want.insert(want.end(), second.begin(), second.end());
    ops.arrange(w, want, 0);
    for (std::size_t k = 1; k < first.size(); ++k) w.back(ops.A());
    return w.steps;
}

struct Move {
    std::string rule;  // rule applied at dstar
    Side side = Side::Left;
    std::size_t order = 0;
    std::vector<DisplayStep> chain;
    Sequent d;
    std::vector<BStep> steps;
    std::optional<Split> split;
    Sequent dstar;
    std::vector<Sequent> premises;
    int contractions = 0;
    std::string fam_display, fam_struct;
};

struct EagerStep {
    std::vector<DisplayStep> chain;
    Sequent displayed;
    std::string rule;
    Sequent next;
};

struct Plan;
using PlanPtr = std::shared_ptr<const Plan>;
struct Plan {
    Sequent goal;
    std::vector<EagerStep> eager;
    Sequent normal;
    Move move;
    std::vector<PlanPtr> kids;
};

DerivPtr realize(const Plan& p) {
    const Move& m = p.move;
    std::vector<DerivPtr> kids;
    for (const auto& k : p.kids) kids.push_back(realize(*k));
    DerivPtr d = make_node(m.dstar, m.rule, std::move(kids));
    std::vector<BStep> steps = m.split ? realize_split(m.d, *m.split) : m.steps;
    if (m.split && !(steps.empty() ? m.d == m.dstar : steps.back().premise == m.dstar))
        throw std::logic_error("search: split realization ended at the wrong sequent");
    d = wrap(m.d, steps, d);
    d = unapply_chain(d, p.normal, m.chain);
    for (std::size_t i = p.eager.size(); i-- > 0;) {
        const EagerStep& e = p.eager[i];
        const Sequent& start = i == 0 ? p.goal : p.eager[i - 1].next;
        d = make_node(e.displayed, e.rule, {d});
        d = unapply_chain(d, start, e.chain);
    }
    return d;
}

const char* eager_rule(Op op, Polarity pol) {
    bool prec = pol == Polarity::Precedent;
    switch (op) {
        case Op::Cap: return prec ? "Cap_left" : nullptr;
        case Op::Cup: return prec ? nullptr : "Cup_right";
        case Op::WBox: return prec ? nullptr : "WBox_left";
        case Op::WDia: return prec ? "WDia_left" : nullptr;
        case Op::BDia: return prec ? "BDia_left" : nullptr;
        case Op::BBox: return prec ? nullptr : "BBox_left";
        case Op::Top: return prec ? "Top_left" : nullptr;
        case Op::Bot: return prec ? nullptr : "Bot_right";
        default: return nullptr;
    }
}

std::optional<std::pair<std::vector<DisplayStep>, Sequent>> try_display(const Sequent& g, const Path& p) {
    try {
        auto ch = display_chain(g, p);
        Sequent d = ch.empty() ? g : ch.back().result;
        return std::make_pair(std::move(ch), d);
    } catch (const DisplayError&) {
        return std::nullopt;
    }
}

Sequent normalize(const Sequent& goal, std::vector<EagerStep>& eager) {
    Sequent g = goal;
    for (;;) {
        bool moved = false;
        for (const Path& p : all_paths(g)) {
            StructPtr s = struct_at(g, p);
            if (s->op != SOp::Leaf) continue;
            const char* rule = eager_rule(s->term->op, polarity_at(g, p));
            if (!rule) continue;
            auto disp = try_display(g, p);
            if (!disp) continue;
            auto next = back_one(rule, disp->second);
            if (!next) continue;
            eager.push_back({disp->first, disp->second, rule, *next});
            g = *next;
            moved = true;
            break;
        }
        if (!moved) return g;
    }
}

// Reduce the side `zs` of d (opposite the focus) to a single o-structure, by W
// (after display/E as needed). Each target comes with its steps.
void prune_targets(const Sequent& d, Side zs, std::vector<BStep> steps, std::vector<std::pair<std::vector<BStep>, Sequent>>& out) {
    ListOps ops{zs};
    StructPtr z = ops.z(d);
    auto go = [&](std::initializer_list<std::pair<const char*, bool>> rules) {
        Walker w{d, steps};
        for (auto& [r, rev] : rules) rev ? w.rev(r) : w.back(r);
        prune_targets(w.cur, zs, w.steps, out);
    };
    switch (z->op) {
        case SOp::Circ: out.push_back({steps, d}); break;
        case SOp::Dot:
            if (zs == Side::Right) {
                go({{"W_right", false}});
                go({{"E_right", false}, {"W_right", false}});
            } else {
                go({{"W_left", false}});
                go({{"E_left", false}, {"W_left", false}});
            }
            break;
        case SOp::Sup:
            if (zs == Side::Right)  // F |- T > U  keeps U
                go({{"D_P_left", false}, {"E_left", false}, {"W_left", false}});
            else  // T > S |- F  keeps S
                go({{"D_P_right", false}, {"E_right", false}, {"W_right", false}});
            break;
        default: break;
    }
}

bool has_weakening(const std::vector<BStep>& steps) {
    for (const auto& s : steps)
        if (s.rule == "W_left" || s.rule == "W_right") return true;
    return false;
}

const std::vector<std::string>& default_order() {
    static const std::vector<std::string> o{"BDia_right", "BBox_right", "WBox_right", "WDia_right",
                                            "Cap_right",  "Cup_left",   "Cut_L"};
    return o;
}

void collect_L_terms(const TermPtr& t, std::vector<TermPtr>& out) {
    if (!t) return;
    if (t->sort == Sort::L &&
        std::none_of(out.begin(), out.end(), [&](const TermPtr& u) { return equal(u, t); }))
        out.push_back(t);
    collect_L_terms(t->a, out);
    collect_L_terms(t->b, out);
}

void collect_L_terms(const StructPtr& s, std::vector<TermPtr>& out) {
    if (!s) return;
    if (s->op == SOp::Leaf) collect_L_terms(s->term, out);
    collect_L_terms(s->a, out);
    collect_L_terms(s->b, out);
}

class Searcher {
public:
    Searcher(const SearchConfig& cfg, const Sequent& goal) : cfg_(cfg) {
        const auto& ord = cfg.rule_order.empty() ? default_order() : cfg.rule_order;
        for (std::size_t k = 0; k < ord.size(); ++k) prio_[ord[k]] = k;
        if (cfg.allow_cut) {
            collect_L_terms(goal.left, cut_terms_);
            collect_L_terms(goal.right, cut_terms_);
        }
    }

    std::size_t nodes = 0;
    bool cut = false;
    bool depth_limited = false;
    std::vector<DeadEnd> dead;

    PlanPtr prove(const Sequent& g, int depth, int contr, const std::string& fam, const std::string& branch,
                  bool root) {
        if (++nodes > cfg_.max_nodes) throw ResourceOut{};
        auto plan = std::make_shared<Plan>();
        plan->goal = g;
        plan->normal = normalize(g, plan->eager);
        const Sequent& n = plan->normal;
        std::string key = canonical_key(n, cfg_.loop_key);
        if (auto it = fail_.find(key); it != fail_.end() && it->second >= contr) return nullptr;
        if (path_.count(key)) {
            cut = true;
            return nullptr;
        }
        std::vector<Move> moves = gen_moves(n);
        if (!moves.empty() && moves.front().premises.empty()) {
            plan->move = std::move(moves.front());
            return plan;
        }
        if (moves.empty()) {
            record(n, fam, branch, "no rule applies");
            fail_[key] = std::max(fail_[key], contr);
            return nullptr;
        }
        if (depth == 0) {
            cut = true;
            depth_limited = true;
            return nullptr;
        }
        path_.insert(key);
        bool saved = cut, local_cut = false;
        for (auto& m : moves) {
            if (m.contractions > contr) continue;
            std::string br = root ? (m.side == Side::Left ? "X-isolated" : "Y-isolated") : branch;
            cut = false;
            std::vector<PlanPtr> kids;
            for (const auto& prem : m.premises) {
                auto k = prove(prem, depth - 1, contr - m.contractions, m.fam_struct, br, false);
                if (!k) break;
                kids.push_back(std::move(k));
            }
            local_cut = local_cut || cut;
            if (kids.size() == m.premises.size()) {
                path_.erase(key);
                cut = saved || local_cut;
                plan->move = std::move(m);
                plan->kids = std::move(kids);
                return plan;
            }
            record(m.d, m.fam_display, br, "move fails");
            if (!(m.dstar == m.d)) record(m.dstar, m.fam_struct, br, "move fails");
        }
        path_.erase(key);
        if (!local_cut) fail_[key] = std::max(fail_.count(key) ? fail_[key] : -1, contr);
        cut = saved || local_cut;
        return nullptr;
    }

private:
    const SearchConfig& cfg_;
    std::unordered_map<std::string, std::size_t> prio_;
    std::unordered_map<std::string, int> fail_;
    std::unordered_set<std::string> path_;
    std::set<std::string> seen_dead_;
    std::vector<TermPtr> cut_terms_;

    void record(const Sequent& s, const std::string& fam, const std::string& branch, const char* why) {
        std::string k = print_sequent(s) + "|" + fam + "|" + branch;
        if (seen_dead_.insert(k).second) dead.push_back({s, fam, branch, why});
    }

    std::size_t prio(const std::string& rule) const {
        auto it = prio_.find(rule);
        return it == prio_.end() ? prio_.size() : it->second;
    }

    void push(std::vector<Move>& out, Move m) {
        if (prio(m.rule) >= prio_.size() && m.rule != "Id" && m.rule != "Top_right" && m.rule != "Bot_left") return;
        out.push_back(std::move(m));
    }

    std::vector<Move> gen_moves(const Sequent& g) {
        std::vector<Move> out;
        auto paths = all_paths(g);
        for (std::size_t pi = 0; pi < paths.size(); ++pi) {
            const Path& p = paths[pi];
            StructPtr s = struct_at(g, p);
            if (s->op != SOp::Leaf) continue;
            Polarity pol = polarity_at(g, p);
            bool prec = pol == Polarity::Precedent;
            Op op = s->term->op;
            bool interesting = (op == Op::Atom && prec) || (op == Op::Top && !prec) || (op == Op::Bot && prec) ||
                               (op == Op::WBox && prec) || (op == Op::WDia && !prec) || (op == Op::BDia && !prec) ||
                               (op == Op::BBox && prec) || (op == Op::Cap && !prec) || (op == Op::Cup && prec);
            if (!interesting) continue;
            auto disp = try_display(g, p);
            if (!disp) continue;
            const Sequent& d = disp->second;
            StructPtr z = prec ? d.right : d.left;
            Move base;
            base.side = p.side;
            base.order = pi;
            base.chain = disp->first;
            base.d = d;
            base.fam_display = chain_has_exchange(base.chain) ? "Exchange" : "Residuation";
            base.fam_struct = base.fam_display;
            base.dstar = d;

            // closures
            if (op == Op::Atom && z->op == SOp::Leaf && equal(z->term, s->term)) {
                base.rule = "Id";
                return {base};
            }
            if (op == Op::Top && z->op == SOp::I) {
                base.rule = "Top_right";
                return {base};
            }
            if (op == Op::Top && z->sort == Sort::L) {
                base.rule = "Top_right";
                base.dstar = make_sequent(s_i(), d.right);
                base.steps = {{"IW", false, base.dstar}};
                return {base};
            }
            if (op == Op::Bot && z->op == SOp::I) {
                base.rule = "Bot_left";
                return {base};
            }
            if (op == Op::Bot && z->sort == Sort::L && cfg_.allow_extensions) {
                base.rule = "Bot_left";
                base.dstar = make_sequent(d.left, s_i());
                base.steps = {{"IW_right", false, base.dstar}};
                return {base};
            }

            switch (op) {
                case Op::WBox:
                case Op::WDia: {
                    std::vector<std::pair<std::vector<BStep>, Sequent>> targets;
                    prune_targets(d, prec ? Side::Right : Side::Left, {}, targets);
                    for (auto& [steps, ds] : targets) {
                        Move m = base;
                        m.rule = op == Op::WBox ? "WBox_right" : "WDia_right";
                        m.steps = steps;
                        m.dstar = ds;
                        if (has_weakening(steps)) m.fam_struct = "Weakening";
                        else if (chain_has_exchange(base.chain)) m.fam_struct = "Exchange";
                        StructPtr inner = (prec ? ds.right : ds.left)->a;
                        m.premises = {prec ? make_sequent(s_leaf(s->term->a), inner)
                                           : make_sequent(inner, s_leaf(s->term->a))};
                        push(out, std::move(m));
                    }
                    break;
                }
                case Op::BDia:
                case Op::BBox: {
                    if (z->op != SOp::Bullet) break;
                    Move m = base;
                    m.rule = op == Op::BDia ? "BDia_right" : "BBox_right";
                    m.premises = {op == Op::BDia ? make_sequent(z->a, s_leaf(s->term->a))
                                                 : make_sequent(s_leaf(s->term->a), z->a)};
                    push(out, std::move(m));
                    break;
                }
                case Op::Cap:
                case Op::Cup: {
                    Side is = prec ? Side::Right : Side::Left;
                    std::vector<StructPtr> items;
                    items_of(z, items);
                    if (items.size() > 10) break;
                    std::vector<std::vector<int>> assigns;
                    std::vector<int> a(items.size(), 0);
                    std::function<void(std::size_t)> gen = [&](std::size_t k) {
                        if (k == items.size()) {
                            bool f = false, sd = false;
                            for (int x : a) f |= x != 1, sd |= x != 0;
                            if (f && sd) assigns.push_back(a);
                            return;
                        }
                        for (int v = 0; v < 3; ++v) a[k] = v, gen(k + 1);
                    };
                    gen(0);
                    std::stable_sort(assigns.begin(), assigns.end(), [](const auto& x, const auto& y) {
                        return std::count(x.begin(), x.end(), 2) < std::count(y.begin(), y.end(), 2);
                    });
                    for (auto& as : assigns) {
                        Split sp{is, items, as};
                        auto first = split_part(sp, 0), second = split_part(sp, 1);
                        StructPtr S = left_chain(first), T = right_chain(second);
                        StructPtr tl = s_leaf(s->term->a), tr = s_leaf(s->term->b);
                        Move m = base;
                        m.split = sp;
                        m.contractions = std::count(as.begin(), as.end(), 2) > 0 ? 1 : 0;
                        if (m.contractions) m.fam_struct = "Contraction";
                        if (op == Op::Cap) {
                            m.rule = "Cap_right";
                            m.dstar = make_sequent(s_dot(S, T), d.right);
                            m.premises = {make_sequent(S, tl), make_sequent(T, tr)};
                        } else {
                            m.rule = "Cup_left";
                            m.dstar = make_sequent(d.left, s_dot(S, T));
                            m.premises = {make_sequent(tl, S), make_sequent(tr, T)};
                        }
                        push(out, std::move(m));
                    }
                    break;
                }
                default: break;
            }
        }
        if (cfg_.allow_cut && g.sort == Sort::L) {
            for (const auto& t : cut_terms_) {
                Move m;
                m.rule = "Cut_L";
                m.order = paths.size();
                m.d = m.dstar = g;
                m.fam_display = m.fam_struct = "Residuation";
                m.premises = {make_sequent(g.left, s_leaf(t)), make_sequent(s_leaf(t), g.right)};
                push(out, std::move(m));
            }
        }
        std::stable_sort(out.begin(), out.end(), [&](const Move& x, const Move& y) {
            return std::make_pair(prio(x.rule), x.order) < std::make_pair(prio(y.rule), y.order);
        });
        return out;
    }
};

}  // namespace

SearchOutcome backward_search(const Sequent& goal, const SearchConfig& cfg) {
    SearchOutcome out;
    Searcher s(cfg, goal);
    try {
        for (int depth = 0; depth <= cfg.max_depth; ++depth) {
            out.depth = depth;
            s.cut = false;
            s.depth_limited = false;
            auto plan = s.prove(goal, depth, cfg.contraction_cap, "Residuation", "", true);
            out.depth_limited = s.depth_limited;
            if (plan) {
                out.status = SearchStatus::Proved;
                out.proof = realize(*plan);
                break;
            }
            if (!s.cut) break;  // failure independent of the bound
        }
    } catch (const ResourceOut&) {
        out.status = SearchStatus::ResourceOut;
    }
    out.nodes = s.nodes;
    if (out.status != SearchStatus::Proved) out.frontier = s.dead;
    return out;
}

std::string DeadlockReport::text() const {
    std::ostringstream os;
    os << (proved ? "PROVED" : status_name(outcome.status)) << "\n";
    std::map<std::string, std::vector<const DeadEnd*>> by_branch;
    for (const auto& d : outcome.frontier) by_branch[d.branch.empty() ? "root" : d.branch].push_back(&d);
    for (const auto& [b, ds] : by_branch) {
        os << "BRANCH " << b << "\n";
        for (const auto* d : ds) os << "DEADEND " << print_sequent(d->sequent) << " " << d->family << "\n";
    }
    return os.str();
}

DeadlockReport deadlock_report(const Sequent& goal, const SearchConfig& cfg) {
    DeadlockReport r;
    r.outcome = backward_search(goal, cfg);
    r.proved = r.outcome.status == SearchStatus::Proved;
    for (const auto& d : r.outcome.frontier) r.by_family[d.family].push_back(d);
    return r;
}

}  // namespace dll
