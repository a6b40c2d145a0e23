#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "dll/kernel.hpp"

namespace dll {

// Premise indices from the root.
using DPath = std::vector<int>;

enum class CutClass { Principal, LeftParametric, RightParametric };

const char* cut_class_name(CutClass c);

struct CutSite {
    DPath path;
    CutClass cls;
};

struct NotPrincipal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BudgetExceeded : std::runtime_error {
    DerivPtr partial;
    BudgetExceeded(const std::string& m, DerivPtr d) : std::runtime_error(m), partial(std::move(d)) {}
};

DerivPtr node_at(const DerivPtr& d, const DPath& p);
DerivPtr replace_node(const DerivPtr& d, const DPath& p, std::size_t from, const DerivPtr& repl);

bool is_cut_rule(const std::string& rule);

// Cut nodes in preorder.
std::vector<DPath> cut_sites(const DerivPtr& d);

// Throws PathError when the node at p is not a cut.
CutSite classify_cut(const DerivPtr& d, const DPath& p);

// Replaces the principal cut at p by the reduct: atomic and constant cuts
// vanish, a cut on s cap t / s cup t becomes two cuts on s and t, a cut on a
// unary connective becomes one cut on its argument.
DerivPtr reduce_principal(const DerivPtr& d, const DPath& p);

// Parametric cut at p: follows the ancestors of the cut term up the
// parametric premise, puts the other side of the cut in their place, and cuts
// against the other premise only where the term is introduced.
DerivPtr permute_parametric(const DerivPtr& d, const DPath& p);

// Complexities of all cut formulas, sorted in decreasing order. Compared
// lexicographically this is the multiset ordering.
std::vector<int> cut_measure(const DerivPtr& d);

struct CutElimResult {
    DerivPtr proof;
    std::vector<std::string> log;
    std::size_t steps = 0;
};

// Topmost-leftmost cut first. Throws BudgetExceeded after `budget` steps.
CutElimResult eliminate_cuts(const DerivPtr& d, std::size_t budget = 1000000);

// Every operational term occurring in d is a subterm of a term of the end-sequent.
bool subterm_property(const DerivPtr& d, std::string* witness = nullptr);

}  // namespace dll
