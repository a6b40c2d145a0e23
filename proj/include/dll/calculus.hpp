#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dll/syntax.hpp"

namespace dll {

struct KindError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class MKind : std::uint8_t {
    StructL,
    StructP,
    StructPop,
    StructUniform,
    TermL,
    TermP,
    TermPop,
    TermUniform,
    AtomVar
};

struct MetaVar {
    std::string name;
    MKind kind;
};

// Sort annotation on pattern nodes whose sort is not fixed by a child
// (o, S0, cap, cup): a fixed sort or the rule's uniform sort.
enum class SortSpec : std::uint8_t { L, P, Pop, Uniform };

struct Pat;
using PatPtr = std::shared_ptr<const Pat>;

struct Pat {
    enum class K : std::uint8_t { Var, SNode, TNode } k;
    int var = -1;
    SOp sop = SOp::Leaf;
    Op op = Op::Atom;
    SortSpec spec = SortSpec::L;
    PatPtr a, b;
};

struct SeqPat {
    PatPtr left, right;
};

enum class RuleGroup : std::uint8_t { Display, Structural, OperationalIntro, Identity, Cut };

struct RuleSchema {
    std::string name;
    std::vector<MetaVar> vars;
    std::vector<SeqPat> premises;
    SeqPat conclusion;
    bool invertible = false;
    RuleGroup group = RuleGroup::Structural;
    std::vector<int> fresh_in_conclusion;  // W's U, IW's Y
    std::vector<int> premise_only;         // the cut formula
    std::string text;                      // human-readable statement
};

using Binding = std::variant<std::monostate, StructPtr, TermPtr>;

struct Substitution {
    std::vector<Binding> map;
    std::optional<Sort> uniform;

    bool bound(int v) const { return v < static_cast<int>(map.size()) && map[v].index() != 0; }
};

// The 34 schemas listed by name in the rule inventory.
const std::vector<RuleSchema>& builtin_rules();

// Rules outside the builtin set, usable only when explicitly allowed:
// IW_right (X |- I / X |- Y), the missing right dual of IW.
const std::vector<RuleSchema>& extension_rules();

// Builtins only, unless with_extensions.
const RuleSchema* lookup_rule(const std::string& name, bool with_extensions = false);

std::vector<Substitution> match(const RuleSchema& r, const Sequent& conclusion);

// Extend sub so that pattern p matches sequent s. Returns false on mismatch.
bool match_into(const RuleSchema& r, const SeqPat& p, const Sequent& s, Substitution& sub);

struct Instance {
    std::vector<Sequent> premises;
    Sequent conclusion;
};

Instance instantiate(const RuleSchema& r, const Substitution& sub);
Sequent instantiate_pattern(const RuleSchema& r, const SeqPat& p, const Substitution& sub);

// Pattern text with metavariable names, e.g. "S ; T |- U".
std::string print_pattern(const RuleSchema& r, const SeqPat& p);

bool kind_is_struct(MKind k);

}  // namespace dll
