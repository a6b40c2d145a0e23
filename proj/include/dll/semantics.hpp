#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dll/calculus.hpp"
#include "dll/syntax.hpp"

namespace dll {

struct LatticeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Mask = std::uint32_t;

class FiniteLattice {
   public:
    // leq given as the full order relation or any generating set of pairs;
    // the reflexive-transitive closure is taken. Throws LatticeError if the
    // result is not a bounded lattice.
    FiniteLattice(std::string name, std::vector<std::string> elements,
                  const std::vector<std::pair<int, int>>& leq_pairs);

    int size() const { return n_; }
    const std::string& name() const { return name_; }
    const std::vector<std::string>& elements() const { return names_; }
    bool leq(int a, int b) const { return (up_[a] >> b) & 1u; }
    int meet(int a, int b) const { return meet_[a * n_ + b]; }
    int join(int a, int b) const { return join_[a * n_ + b]; }
    int top() const { return top_; }
    int bot() const { return bot_; }
    Mask down(int a) const { return down_[a]; }
    Mask up(int a) const { return up_[a]; }
    Mask full() const { return n_ == 32 ? ~0u : ((1u << n_) - 1u); }
    bool distributive() const;
    int index_of(const std::string& e) const;

    // Canonical string: minimal order-matrix encoding over relabellings.
    std::string canonical() const;

   private:
    std::string name_;
    std::vector<std::string> names_;
    int n_ = 0;
    std::vector<Mask> up_, down_;
    std::vector<int> meet_, join_;
    int top_ = 0, bot_ = 0;
};

FiniteLattice named_lattice(const std::string& name);  // chain2, chain3, chain4, m3, n5, b4 (= 2x2)
std::vector<std::string> named_lattice_names();

// All bounded lattices with 2 <= size <= max_size up to isomorphism, sorted by
// size. max_size <= 7.
std::vector<FiniteLattice> enumerate_lattices(int max_size);

// The size <= max_size pool with the named witnesses given their names.
std::vector<FiniteLattice> lattice_pool(int max_size);

FiniteLattice parse_lattice_json(const std::string& text);
std::string lattice_to_json(const FiniteLattice& l);

class HeterogeneousAlgebra {
   public:
    explicit HeterogeneousAlgebra(FiniteLattice l) : L(std::move(l)) {}

    FiniteLattice L;

    Mask e_ell(int a) const { return L.down(a); }
    Mask e_r(int a) const { return L.up(a); }
    int gamma(Mask s) const;
    int iota(Mask t) const;

    // Orders of D (inclusion) and E (reverse inclusion).
    static bool leq_D(Mask a, Mask b) { return (a & ~b) == 0; }
    static bool leq_E(Mask a, Mask b) { return (b & ~a) == 0; }
};

HeterogeneousAlgebra heterogenize(const FiniteLattice& l);

using Valuation = std::map<std::string, int>;

// Value of a term/structure: an L element index, or a subset mask for P/Pop.
using Value = std::uint32_t;

Value eval_term(const TermPtr& t, const HeterogeneousAlgebra& h, const Valuation& v);
Value eval_structure(const StructPtr& s, Polarity pol, const HeterogeneousAlgebra& h, const Valuation& v);
bool value_leq(Sort s, Value a, Value b, const HeterogeneousAlgebra& h);

// Falsifying valuation of s in h, if any. Exhaustive when |L|^atoms <= 10^4,
// otherwise sampled.
std::optional<Valuation> falsify(const Sequent& s, const HeterogeneousAlgebra& h);
bool sequent_valid(const Sequent& s, const HeterogeneousAlgebra& h);

struct Countermodel {
    std::size_t lattice_index;
    std::string lattice_name;
    Valuation valuation;
};

std::optional<Countermodel> countermodel(const Sequent& s, const std::vector<FiniteLattice>& pool);

// Lattice-level evaluation of single-type formulas.
int eval_formula(const FormulaPtr& f, const FiniteLattice& l, const Valuation& v);
bool formula_leq_valid(const FormulaPtr& a, const FormulaPtr& b, const FiniteLattice& l);

bool consequence_equiv_check(const FormulaPtr& a, const FormulaPtr& b, const std::vector<FiniteLattice>& pool);

// ---------------------------------------------------------------- rule soundness

struct SoundnessResult {
    bool sound = true;
    std::size_t instances = 0;
    std::string witness;  // first failing instance
};

// Values a metavariable of the given kind may take: all terms/structures of
// depth <= depth over the atoms.
std::vector<Binding> instance_pool(MKind kind, Sort uniform, int depth, const std::vector<std::string>& atoms);

// Exhaustive: every substitution drawn from instance_pool(depth, atoms);
// premise-valid implies conclusion-valid, and conversely for invertible rules.
SoundnessResult rule_sound_exhaustive(const RuleSchema& r, const HeterogeneousAlgebra& h, int depth,
                                      const std::vector<std::string>& atoms);

// Random instances of depth up to max_depth.
SoundnessResult rule_sound(const RuleSchema& r, const HeterogeneousAlgebra& h, int trials, std::mt19937& rng,
                           int max_depth = 4);

}  // namespace dll
