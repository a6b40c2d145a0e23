#include "dll/semantics.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "dll/translate.hpp"
#include "json.hpp"

namespace dll {

// ---------------------------------------------------------------- lattices

FiniteLattice::FiniteLattice(std::string name, std::vector<std::string> elements,
                             const std::vector<std::pair<int, int>>& leq_pairs)
    : name_(std::move(name)), names_(std::move(elements)), n_(static_cast<int>(names_.size())) {
    if (n_ < 1 || n_ > 32) throw LatticeError("lattice size must be between 1 and 32");
    std::vector<std::vector<bool>> le(n_, std::vector<bool>(n_, false));
    for (int i = 0; i < n_; ++i) le[i][i] = true;
    for (auto [a, b] : leq_pairs) {
        if (a < 0 || b < 0 || a >= n_ || b >= n_) throw LatticeError("leq pair out of range");
        le[a][b] = true;
    }
    for (int k = 0; k < n_; ++k)
        for (int i = 0; i < n_; ++i)
            if (le[i][k])
                for (int j = 0; j < n_; ++j)
                    if (le[k][j]) le[i][j] = true;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (i != j && le[i][j] && le[j][i]) throw LatticeError("leq is not antisymmetric");
    up_.assign(n_, 0);
    down_.assign(n_, 0);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (le[i][j]) {
                up_[i] |= 1u << j;
                down_[j] |= 1u << i;
            }
    auto extreme = [&](Mask cand, bool greatest) -> int {
        // greatest element of cand (w.r.t. leq) or least; -1 if none
        for (int i = 0; i < n_; ++i) {
            if (!((cand >> i) & 1u)) continue;
            Mask rel = greatest ? down_[i] : up_[i];
            if ((cand & ~rel) == 0) return i;
        }
        return -1;
    };
    top_ = extreme(full(), true);
    bot_ = extreme(full(), false);
    if (top_ < 0 || bot_ < 0) throw LatticeError("poset is not bounded");
    meet_.assign(n_ * n_, 0);
    join_.assign(n_ * n_, 0);
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b) {
            int m = extreme(down_[a] & down_[b], true);
            int j = extreme(up_[a] & up_[b], false);
            if (m < 0 || j < 0) throw LatticeError("meet or join missing for " + names_[a] + ", " + names_[b]);
            meet_[a * n_ + b] = m;
            join_[a * n_ + b] = j;
        }
    // identity and absorption laws
    for (int a = 0; a < n_; ++a) {
        if (meet(a, top_) != a || join(a, bot_) != a) throw LatticeError("identity law fails");
        for (int b = 0; b < n_; ++b)
            if (meet(a, join(a, b)) != a || join(a, meet(a, b)) != a) throw LatticeError("absorption law fails");
    }
}

bool FiniteLattice::distributive() const {
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b)
            for (int c = 0; c < n_; ++c)
                if (meet(a, join(b, c)) != join(meet(a, b), meet(a, c))) return false;
    return true;
}

int FiniteLattice::index_of(const std::string& e) const {
    for (int i = 0; i < n_; ++i)
        if (names_[i] == e) return i;
    return -1;
}

std::string FiniteLattice::canonical() const {
    std::vector<int> perm(n_);
    std::iota(perm.begin(), perm.end(), 0);
    std::string best;
    do {
        // perm[i] = original element placed at position i
        std::string code(static_cast<std::size_t>(n_ * n_), '0');
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (leq(perm[i], perm[j])) code[i * n_ + j] = '1';
        if (best.empty() || code < best) best = code;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::to_string(n_) + ":" + best;
}

namespace {

FiniteLattice chain(const std::string& name, int n) {
    std::vector<std::string> el;
    std::vector<std::pair<int, int>> le;
    for (int i = 0; i < n; ++i) {
        el.push_back(std::to_string(i));
        if (i) le.push_back({i - 1, i});
    }
    return FiniteLattice(name, el, le);
}

}  // namespace

FiniteLattice named_lattice(const std::string& name) {
    if (name == "chain2") return chain("chain2", 2);
    if (name == "chain3") return chain("chain3", 3);
    if (name == "chain4") return chain("chain4", 4);
    if (name == "m3")
        return FiniteLattice("m3", {"0", "a", "b", "c", "1"}, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}});
    if (name == "n5")
        return FiniteLattice("n5", {"0", "a", "b", "c", "1"}, {{0, 1}, {1, 2}, {2, 4}, {0, 3}, {3, 4}});
    if (name == "b4") return FiniteLattice("b4", {"0", "a", "b", "1"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
    throw LatticeError("unknown lattice '" + name + "'");
}

std::vector<std::string> named_lattice_names() { return {"chain2", "chain3", "chain4", "b4", "m3", "n5"}; }

std::vector<FiniteLattice> enumerate_lattices(int max_size) {
    if (max_size > 7) throw LatticeError("enumerate_lattices supports sizes up to 7");
    std::vector<FiniteLattice> out;
    for (int n = 2; n <= max_size; ++n) {
        // element 0 is bottom, n-1 top; inner elements 1..n-2 with a natural
        // labelling (i < j in the order only if i < j as integers).
        int k = n - 2;
        std::vector<std::pair<int, int>> pairs;
        for (int i = 1; i <= k; ++i)
            for (int j = i + 1; j <= k; ++j) pairs.push_back({i, j});
        std::set<std::string> seen;
        std::size_t combos = std::size_t{1} << pairs.size();
        for (std::size_t m = 0; m < combos; ++m) {
            std::vector<std::vector<bool>> lt(n, std::vector<bool>(n, false));
            for (std::size_t b = 0; b < pairs.size(); ++b)
                if ((m >> b) & 1u) lt[pairs[b].first][pairs[b].second] = true;
            bool transitive = true;
            for (int a = 1; a <= k && transitive; ++a)
                for (int b = a + 1; b <= k && transitive; ++b)
                    if (lt[a][b])
                        for (int c = b + 1; c <= k; ++c)
                            if (lt[b][c] && !lt[a][c]) {
                                transitive = false;
                                break;
                            }
            if (!transitive) continue;
            std::vector<std::pair<int, int>> le;
            for (int i = 1; i <= k; ++i) {
                le.push_back({0, i});
                le.push_back({i, n - 1});
            }
            if (k == 0) le.push_back({0, n - 1});
            for (int a = 1; a <= k; ++a)
                for (int b = a + 1; b <= k; ++b)
                    if (lt[a][b]) le.push_back({a, b});
            std::vector<std::string> el;
            for (int i = 0; i < n; ++i) el.push_back(i == 0 ? "0" : i == n - 1 ? "1" : std::string(1, char('a' + i - 1)));
            try {
                FiniteLattice l("L" + std::to_string(n) + "_" + std::to_string(seen.size()), el, le);
                std::string c = l.canonical();
                if (seen.insert(c).second) out.push_back(std::move(l));
            } catch (const LatticeError&) {
            }
        }
    }
    return out;
}

std::vector<FiniteLattice> lattice_pool(int max_size) {
    auto pool = enumerate_lattices(max_size);
    std::vector<FiniteLattice> out;
    std::vector<std::pair<std::string, std::string>> named;
    for (auto& nm : named_lattice_names()) {
        auto l = named_lattice(nm);
        if (l.size() <= max_size) named.push_back({l.canonical(), nm});
    }
    for (auto& l : pool) {
        std::string c = l.canonical();
        std::string name = l.name();
        for (auto& [nc, nm] : named)
            if (nc == c) name = nm;
        std::vector<std::pair<int, int>> le;
        for (int a = 0; a < l.size(); ++a)
            for (int b = 0; b < l.size(); ++b)
                if (a != b && l.leq(a, b)) le.push_back({a, b});
        if (name != l.name()) {
            // use the named lattice's own labels
            out.push_back(named_lattice(name));
        } else {
            out.push_back(FiniteLattice(name, l.elements(), le));
        }
    }
    return out;
}

FiniteLattice parse_lattice_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw LatticeError(std::string("malformed lattice file: ") + e.what());
    }
    if (!j.contains("elements") || !j.contains("leq")) throw LatticeError("lattice file needs 'elements' and 'leq'");
    std::vector<std::string> el;
    for (auto& e : j["elements"]) el.push_back(e.is_string() ? e.get<std::string>() : e.dump());
    auto idx = [&](const nlohmann::json& e) {
        std::string s = e.is_string() ? e.get<std::string>() : e.dump();
        for (std::size_t i = 0; i < el.size(); ++i)
            if (el[i] == s) return static_cast<int>(i);
        throw LatticeError("unknown element '" + s + "' in leq");
    };
    std::vector<std::pair<int, int>> le;
    for (auto& p : j["leq"]) {
        if (!p.is_array() || p.size() != 2) throw LatticeError("leq entries must be pairs");
        le.push_back({idx(p[0]), idx(p[1])});
    }
    return FiniteLattice(j.value("name", std::string("custom")), el, le);
}

std::string lattice_to_json(const FiniteLattice& l) {
    nlohmann::json j;
    j["name"] = l.name();
    j["elements"] = l.elements();
    nlohmann::json le = nlohmann::json::array();
    for (int a = 0; a < l.size(); ++a)
        for (int b = 0; b < l.size(); ++b)
            if (a != b && l.leq(a, b)) le.push_back({l.elements()[a], l.elements()[b]});
    j["leq"] = le;
    return j.dump();
}

// ---------------------------------------------------------------- algebra

int HeterogeneousAlgebra::gamma(Mask s) const {
    int r = L.bot();
    for (int i = 0; i < L.size(); ++i)
        if ((s >> i) & 1u) r = L.join(r, i);
    return r;
}

int HeterogeneousAlgebra::iota(Mask t) const {
    int r = L.top();
    for (int i = 0; i < L.size(); ++i)
        if ((t >> i) & 1u) r = L.meet(r, i);
    return r;
}

HeterogeneousAlgebra heterogenize(const FiniteLattice& l) { return HeterogeneousAlgebra(l); }

Value eval_term(const TermPtr& t, const HeterogeneousAlgebra& h, const Valuation& v) {
    switch (t->op) {
        case Op::Atom: {
            auto it = v.find(t->name);
            if (it == v.end()) throw std::out_of_range("valuation misses atom " + t->name);
            return static_cast<Value>(it->second);
        }
        case Op::Top: return static_cast<Value>(h.L.top());
        case Op::Bot: return static_cast<Value>(h.L.bot());
        case Op::BDia: return static_cast<Value>(h.gamma(eval_term(t->a, h, v)));
        case Op::BBox: return static_cast<Value>(h.iota(eval_term(t->a, h, v)));
        case Op::WBox: return h.e_ell(static_cast<int>(eval_term(t->a, h, v)));
        case Op::WDia: return h.e_r(static_cast<int>(eval_term(t->a, h, v)));
        case Op::Cap: {
            Value a = eval_term(t->a, h, v), b = eval_term(t->b, h, v);
            return t->sort == Sort::P ? (a & b) : (a | b);
        }
        case Op::Cup: {
            Value a = eval_term(t->a, h, v), b = eval_term(t->b, h, v);
            return t->sort == Sort::P ? (a | b) : (a & b);
        }
    }
    return 0;
}

namespace {

// Lattice operations of D (P) and E (Pop) on masks.
Value s_meet(Sort s, Value a, Value b) { return s == Sort::P ? (a & b) : (a | b); }
Value s_join(Sort s, Value a, Value b) { return s == Sort::P ? (a | b) : (a & b); }
Value s_top(Sort s, Mask full) { return s == Sort::P ? full : 0; }
Value s_bot(Sort s, Mask full) { return s == Sort::P ? 0 : full; }
Value s_neg(Value a, Mask full) { return ~a & full; }

}  // namespace

Value eval_structure(const StructPtr& s, Polarity pol, const HeterogeneousAlgebra& h, const Valuation& v) {
    bool pre = pol == Polarity::Precedent;
    Mask full = h.L.full();
    switch (s->op) {
        case SOp::Leaf: return eval_term(s->term, h, v);
        case SOp::I: return static_cast<Value>(pre ? h.L.top() : h.L.bot());
        case SOp::Bullet: {
            Value x = eval_structure(s->a, pol, h, v);
            return static_cast<Value>(s->a->sort == Sort::P ? h.gamma(x) : h.iota(x));
        }
        case SOp::Circ: {
            int x = static_cast<int>(eval_structure(s->a, pol, h, v));
            return s->sort == Sort::P ? h.e_ell(x) : h.e_r(x);
        }
        case SOp::SCirc: return pre ? s_top(s->sort, full) : s_bot(s->sort, full);
        case SOp::Dot: {
            Value a = eval_structure(s->a, pol, h, v), b = eval_structure(s->b, pol, h, v);
            return pre ? s_meet(s->sort, a, b) : s_join(s->sort, a, b);
        }
        case SOp::Sup: {
            Value a = eval_structure(s->a, flip(pol), h, v), b = eval_structure(s->b, pol, h, v);
            // succedent: a -> b; precedent: b minus a (both in the sort's Boolean order)
            if (!pre) return s_join(s->sort, s_neg(a, full), b);
            return s_meet(s->sort, b, s_neg(a, full));
        }
    }
    return 0;
}

bool value_leq(Sort s, Value a, Value b, const HeterogeneousAlgebra& h) {
    switch (s) {
        case Sort::L: return h.L.leq(static_cast<int>(a), static_cast<int>(b));
        case Sort::P: return HeterogeneousAlgebra::leq_D(a, b);
        case Sort::Pop: return HeterogeneousAlgebra::leq_E(a, b);
    }
    return false;
}

namespace {

bool holds(const Sequent& s, const HeterogeneousAlgebra& h, const Valuation& v) {
    return value_leq(s.sort, eval_structure(s.left, Polarity::Precedent, h, v),
                     eval_structure(s.right, Polarity::Succedent, h, v), h);
}

template <class F>
std::optional<Valuation> search_valuations(const std::vector<std::string>& atoms, int n, F&& bad) {
    double space = 1;
    for (std::size_t i = 0; i < atoms.size(); ++i) space *= n;
    Valuation v;
    if (space <= 1e4) {
        std::vector<int> digits(atoms.size(), 0);
        for (;;) {
            for (std::size_t i = 0; i < atoms.size(); ++i) v[atoms[i]] = digits[i];
            if (bad(v)) return v;
            std::size_t k = 0;
            while (k < digits.size() && ++digits[k] == n) digits[k++] = 0;
            if (k == digits.size()) break;
        }
        return std::nullopt;
    }
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> d(0, n - 1);
    for (int t = 0; t < 10000; ++t) {
        for (auto& a : atoms) v[a] = d(rng);
        if (bad(v)) return v;
    }
    return std::nullopt;
}

}  // namespace

std::optional<Valuation> falsify(const Sequent& s, const HeterogeneousAlgebra& h) {
    auto atoms = atoms_of(s);
    std::sort(atoms.begin(), atoms.end());
    return search_valuations(atoms, h.L.size(), [&](const Valuation& v) { return !holds(s, h, v); });
}

bool sequent_valid(const Sequent& s, const HeterogeneousAlgebra& h) { return !falsify(s, h).has_value(); }

std::optional<Countermodel> countermodel(const Sequent& s, const std::vector<FiniteLattice>& pool) {
    for (std::size_t i = 0; i < pool.size(); ++i) {
        HeterogeneousAlgebra h(pool[i]);
        if (auto v = falsify(s, h)) return Countermodel{i, pool[i].name(), *v};
    }
    return std::nullopt;
}

int eval_formula(const FormulaPtr& f, const FiniteLattice& l, const Valuation& v) {
    switch (f->kind) {
        case Formula::Kind::Atom: return v.at(f->name);
        case Formula::Kind::Top: return l.top();
        case Formula::Kind::Bot: return l.bot();
        case Formula::Kind::And: return l.meet(eval_formula(f->lhs, l, v), eval_formula(f->rhs, l, v));
        case Formula::Kind::Or: return l.join(eval_formula(f->lhs, l, v), eval_formula(f->rhs, l, v));
    }
    return 0;
}

bool formula_leq_valid(const FormulaPtr& a, const FormulaPtr& b, const FiniteLattice& l) {
    std::vector<std::string> atoms;
    collect_atoms(a, atoms);
    collect_atoms(b, atoms);
    std::sort(atoms.begin(), atoms.end());
    return !search_valuations(atoms, l.size(), [&](const Valuation& v) {
                return !l.leq(eval_formula(a, l, v), eval_formula(b, l, v));
            }).has_value();
}

bool consequence_equiv_check(const FormulaPtr& a, const FormulaPtr& b, const std::vector<FiniteLattice>& pool) {
    Sequent s = make_sequent(s_leaf(ell(a)), s_leaf(rr(b)));
    for (auto& l : pool) {
        bool lhs = formula_leq_valid(a, b, l);
        bool rhs = sequent_valid(s, HeterogeneousAlgebra(l));
        if (lhs != rhs) return false;
    }
    return true;
}

// ---------------------------------------------------------------- rule soundness

namespace {

struct PoolBuilder {
    std::vector<std::string> atoms;
    std::map<std::pair<int, int>, std::vector<TermPtr>> terms;         // (sort, depth) -> exactly that depth or less
    std::map<std::pair<int, int>, std::vector<StructPtr>> structures;

    const std::vector<TermPtr>& T(Sort s, int d) {
        auto key = std::make_pair(static_cast<int>(s), d);
        auto it = terms.find(key);
        if (it != terms.end()) return it->second;
        std::vector<TermPtr> out;
        if (d >= 1) {
            if (s == Sort::L) {
                for (auto& a : atoms) out.push_back(t_atom(a));
                out.push_back(t_top());
                out.push_back(t_bot());
                for (auto& x : T(Sort::P, d - 1)) out.push_back(t_bdia(x));
                for (auto& x : T(Sort::Pop, d - 1)) out.push_back(t_bbox(x));
            } else {
                for (auto& x : T(Sort::L, d - 1)) out.push_back(s == Sort::P ? t_wbox(x) : t_wdia(x));
                const auto& sub = T(s, d - 1);
                for (auto& x : sub)
                    for (auto& y : sub) {
                        out.push_back(t_cap(x, y));
                        out.push_back(t_cup(x, y));
                    }
            }
        }
        return terms[key] = out;
    }

    const std::vector<StructPtr>& S(Sort s, int d) {
        auto key = std::make_pair(static_cast<int>(s), d);
        auto it = structures.find(key);
        if (it != structures.end()) return it->second;
        std::vector<StructPtr> out;
        for (auto& t : T(s, d)) out.push_back(s_leaf(t));
        if (d >= 1) {
            if (s == Sort::L) {
                out.push_back(s_i());
                for (auto& x : S(Sort::P, d - 1)) out.push_back(s_bullet(x));
                for (auto& x : S(Sort::Pop, d - 1)) out.push_back(s_bullet(x));
            } else {
                out.push_back(s_scirc(s));
                for (auto& x : S(Sort::L, d - 1)) out.push_back(s_circ(x, s));
                const auto& sub = S(s, d - 1);
                for (auto& x : sub)
                    for (auto& y : sub) {
                        out.push_back(s_dot(x, y));
                        out.push_back(s_sup(x, y));
                    }
            }
        }
        return structures[key] = out;
    }
};

std::vector<int> used_vars(const RuleSchema& r, bool* uniform) {
    std::vector<bool> used(r.vars.size(), false);
    *uniform = false;
    std::function<void(const PatPtr&)> walk = [&](const PatPtr& p) {
        if (!p) return;
        if (p->k == Pat::K::Var) used[p->var] = true;
        if (p->k != Pat::K::Var && p->spec == SortSpec::Uniform) *uniform = true;
        walk(p->a);
        walk(p->b);
    };
    walk(r.conclusion.left);
    walk(r.conclusion.right);
    for (auto& p : r.premises) {
        walk(p.left);
        walk(p.right);
    }
    std::vector<int> out;
    for (std::size_t v = 0; v < used.size(); ++v)
        if (used[v]) {
            out.push_back(static_cast<int>(v));
            MKind k = r.vars[v].kind;
            if (k == MKind::StructUniform || k == MKind::TermUniform) *uniform = true;
        }
    return out;
}

Sort kind_sort(MKind k, Sort uniform) {
    switch (k) {
        case MKind::StructL:
        case MKind::TermL:
        case MKind::AtomVar: return Sort::L;
        case MKind::StructP:
        case MKind::TermP: return Sort::P;
        case MKind::StructPop:
        case MKind::TermPop: return Sort::Pop;
        default: return uniform;
    }
}

// Returns false and fills witness if the instance breaks soundness.
bool check_instance(const RuleSchema& r, const Substitution& sub, const HeterogeneousAlgebra& h,
                    std::string& witness) {
    Instance inst;
    try {
        inst = instantiate(r, sub);
    } catch (const std::exception&) {
        return true;  // ill-sorted combination, not an instance
    }
    bool prem_valid = true;
    for (auto& p : inst.premises)
        if (!sequent_valid(p, h)) {
            prem_valid = false;
            break;
        }
    bool concl_valid = sequent_valid(inst.conclusion, h);
    if (prem_valid && !concl_valid) {
        witness = r.name + " on " + h.L.name() + ": premises valid, conclusion " + print_sequent(inst.conclusion) +
                  " invalid";
        return false;
    }
    if (r.invertible && concl_valid && !prem_valid) {
        witness = r.name + "~ on " + h.L.name() + ": conclusion valid, premise " +
                  print_sequent(inst.premises[0]) + " invalid";
        return false;
    }
    return true;
}

}  // namespace

std::vector<Binding> instance_pool(MKind kind, Sort uniform, int depth, const std::vector<std::string>& atoms) {
    PoolBuilder pb;
    pb.atoms = atoms;
    std::vector<Binding> out;
    Sort s = kind_sort(kind, uniform);
    if (kind == MKind::AtomVar) {
        for (auto& a : atoms) out.push_back(t_atom(a));
    } else if (kind_is_struct(kind)) {
        for (auto& x : pb.S(s, depth)) out.push_back(x);
    } else {
        for (auto& x : pb.T(s, depth)) out.push_back(x);
    }
    return out;
}

SoundnessResult rule_sound_exhaustive(const RuleSchema& r, const HeterogeneousAlgebra& h, int depth,
                                      const std::vector<std::string>& atoms) {
    SoundnessResult res;
    bool uniform = false;
    std::vector<int> vars = used_vars(r, &uniform);
    std::vector<Sort> sorts = uniform ? std::vector<Sort>{Sort::P, Sort::Pop} : std::vector<Sort>{Sort::L};
    for (Sort u : sorts) {
        std::vector<std::vector<Binding>> pools;
        for (int v : vars) pools.push_back(instance_pool(r.vars[v].kind, u, depth, atoms));
        std::vector<std::size_t> idx(vars.size(), 0);
        bool empty = false;
        for (auto& p : pools) empty = empty || p.empty();
        if (empty) continue;
        for (;;) {
            Substitution sub;
            sub.map.resize(r.vars.size());
            if (uniform) sub.uniform = u;
            for (std::size_t k = 0; k < vars.size(); ++k) sub.map[vars[k]] = pools[k][idx[k]];
            ++res.instances;
            if (!check_instance(r, sub, h, res.witness)) {
                res.sound = false;
                return res;
            }
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == pools[k].size()) idx[k++] = 0;
            if (k == idx.size()) break;
        }
    }
    return res;
}

namespace {

struct RandomInst {
    std::mt19937& rng;
    std::vector<std::string> atoms{"p", "q"};
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

    TermPtr term(Sort s, int d) {
        if (s == Sort::L) {
            int k = d <= 1 ? pick(3) : pick(5);
            if (k == 0) return t_atom(atoms[pick(2)]);
            if (k == 1) return pick(2) ? t_top() : t_bot();
            if (k == 2) return t_atom(atoms[pick(2)]);
            if (k == 3) return t_bdia(term(Sort::P, d - 1));
            return t_bbox(term(Sort::Pop, d - 1));
        }
        if (d <= 2 || pick(2)) return s == Sort::P ? t_wbox(term(Sort::L, d - 1)) : t_wdia(term(Sort::L, d - 1));
        return pick(2) ? t_cap(term(s, d - 1), term(s, d - 1)) : t_cup(term(s, d - 1), term(s, d - 1));
    }

    StructPtr structure(Sort s, int d) {
        if (s == Sort::L) {
            int k = d <= 1 ? pick(2) : pick(4);
            if (k == 0) return s_leaf(term(Sort::L, d));
            if (k == 1) return s_i();
            return s_bullet(structure(k == 2 ? Sort::P : Sort::Pop, d - 1));
        }
        int k = d <= 1 ? pick(2) : pick(6);
        switch (k) {
            case 0: return s_leaf(term(s, std::max(d, 2)));
            case 1: return s_scirc(s);
            case 2: return s_circ(structure(Sort::L, d - 1), s);
            case 3:
            case 4: return s_dot(structure(s, d - 1), structure(s, d - 1));
            default: return s_sup(structure(s, d - 1), structure(s, d - 1));
        }
    }
};

}  // namespace

SoundnessResult rule_sound(const RuleSchema& r, const HeterogeneousAlgebra& h, int trials, std::mt19937& rng,
                           int max_depth) {
    SoundnessResult res;
    RandomInst gen{rng};
    bool uniform = false;
    std::vector<int> vars = used_vars(r, &uniform);
    for (int t = 0; t < trials; ++t) {
        Sort u = uniform ? (gen.pick(2) ? Sort::P : Sort::Pop) : Sort::L;
        Substitution sub;
        sub.map.resize(r.vars.size());
        if (uniform) sub.uniform = u;
        for (int v : vars) {
            MKind k = r.vars[v].kind;
            int d = 1 + gen.pick(max_depth);
            if (k == MKind::AtomVar)
                sub.map[v] = t_atom(gen.atoms[gen.pick(2)]);
            else if (kind_is_struct(k))
                sub.map[v] = gen.structure(kind_sort(k, u), d);
            else
                sub.map[v] = gen.term(kind_sort(k, u), d);
        }
        ++res.instances;
        if (!check_instance(r, sub, h, res.witness)) {
            res.sound = false;
            return res;
        }
    }
    return res;
}

}  // namespace dll
