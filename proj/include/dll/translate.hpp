#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dll/kernel.hpp"
#include "dll/syntax.hpp"

namespace dll {

struct ArityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedAxiom : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// No cut-free derivation could be produced (the sequent may still be valid).
struct Underivable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DualityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- translations

TermPtr tau_pre(const FormulaPtr& a);
TermPtr tau_suc(const FormulaPtr& a);

// The algebraic translations, computed through the symbol dictionary
// gamma -> fdia, e_ell -> wbox, iota -> fbox, e_r -> wdia.
TermPtr ell(const FormulaPtr& a);
TermPtr rr(const FormulaPtr& a);

// tau_pre(a) |- tau_suc(b)
Sequent translate_sequent(const FormulaPtr& a, const FormulaPtr& b);

// ---------------------------------------------------------------- axioms

enum class AxiomName {
    cC1, cC2, dC1, dC2,
    cA1, cA2, dA1, dA2,
    cI1, cI2, dI1, dI2,
    cAb1, cAb2, dAb1, dAb2,
    H_id, H_botA, H_Atop, H_orI1, H_orI2, H_andE1, H_andE2,
    cD1
};

const std::vector<AxiomName>& all_axioms();
std::string axiom_name(AxiomName n);
std::optional<AxiomName> parse_axiom_name(std::string_view s);
int arity(AxiomName n);

// The lattice-logic sequent of the axiom, as a pair (lhs, rhs).
std::pair<FormulaPtr, FormulaPtr> axiom_formulas(AxiomName n, const std::vector<FormulaPtr>& params);
Sequent axiom_sequent(AxiomName n, const std::vector<FormulaPtr>& params);

// ---------------------------------------------------------------- duality

FormulaPtr dual_formula(const FormulaPtr& f);
TermPtr dual_term(const TermPtr& t);
StructPtr dual_struct(const StructPtr& s);
Sequent dual_sequent(const Sequent& s);
std::optional<std::string> dual_rule(const std::string& name);
// Throws DualityError when a rule has no dual in the builtin calculus
// (IW, whose dual is the extension IW_right) unless allow_extensions.
DerivPtr dual_derivation(const DerivPtr& d, bool allow_extensions = false);

// ---------------------------------------------------------------- derivations

DerivPtr identity_derivation(const FormulaPtr& a);

struct AxiomDerivation {
    DerivPtr proof;
    std::string method;  // "template", "dual", "search", "extension"
};

// Cut-free, kernel-checked derivation of axiom_sequent(n, params).
// Throws UnsupportedAxiom for cD1, Underivable when no builtin derivation
// was found, ArityError on a wrong parameter count.
DerivPtr axiom_derivation(AxiomName n, const std::vector<FormulaPtr>& params);
AxiomDerivation axiom_derivation_ex(AxiomName n, const std::vector<FormulaPtr>& params);

// Derivation using the opt-in IW_right rule, for the sequents with no
// builtin proof. Checked with allow_extensions.
DerivPtr axiom_derivation_extended(AxiomName n, const std::vector<FormulaPtr>& params);

// ---------------------------------------------------------------- templates

// Proof files embedded in the library: the printed trees ("golden") with
// schematic letters A..D read as atoms, and the hand-written helper templates.
struct EmbeddedProof {
    std::string name;
    std::string text;
    bool golden;
};
const std::vector<EmbeddedProof>& embedded_proofs();
DerivPtr embedded_proof(const std::string& name);

// Replace schematic letters: an occurrence in precedent position becomes
// tau_pre(f), in succedent position tau_suc(f). Id leaves on a letter become
// identity_derivation(f). Plain atoms are renamed through `rename`.
DerivPtr instantiate_template(const DerivPtr& tmpl, const std::map<std::string, FormulaPtr>& letters,
                              const std::map<std::string, std::string>& rename = {});
Sequent instantiate_sequent(const Sequent& s, const std::map<std::string, FormulaPtr>& letters,
                            const std::map<std::string, std::string>& rename = {});

}  // namespace dll
