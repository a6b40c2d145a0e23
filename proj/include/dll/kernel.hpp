#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dll/calculus.hpp"
#include "dll/syntax.hpp"

namespace dll {

struct Derivation;
using DerivPtr = std::shared_ptr<const Derivation>;

inline const std::string kHyp = "HYP";

struct Derivation {
    Sequent conclusion;
    std::string rule;       // rule name without "~", or HYP
    bool backward = false;  // invertible rule read from conclusion to premise
    std::vector<DerivPtr> premises;

    std::string label() const { return backward ? rule + "~" : rule; }
};

DerivPtr make_node(const Sequent& s, const std::string& rule, std::vector<DerivPtr> premises = {},
                   bool backward = false);
DerivPtr make_hyp(const Sequent& s);

struct CheckReport {
    bool ok = true;
    std::vector<int> path;  // premise indices from the root to the failing node
    std::string rule;
    std::string message;
    std::vector<std::string> expected;  // premise sequents required by the rule (when known)
    std::vector<std::string> found;     // premise sequents presented

    std::string describe() const;
};

struct CheckOptions {
    bool allow_hypotheses = false;
    bool allow_extensions = false;  // accept IW_right
};

CheckReport check(const DerivPtr& d, bool allow_hypotheses);
CheckReport check(const DerivPtr& d, const CheckOptions& opt);

// Check a single inference; premises are the conclusions of the child nodes.
bool check_step(const std::string& label, const std::vector<Sequent>& premises, const Sequent& conclusion,
                bool allow_extensions = false, std::string* why = nullptr);

bool is_cut_free(const DerivPtr& d);
bool uses_rule(const DerivPtr& d, const std::string& rule);
std::size_t node_count(const DerivPtr& d);
int height(const DerivPtr& d);
std::vector<Sequent> hypotheses(const DerivPtr& d);

// Replace every HYP leaf whose sequent equals h by proof.
DerivPtr plug(const DerivPtr& d, const Sequent& h, const DerivPtr& proof);

// ---------------------------------------------------------------- display

struct DisplayStep {
    std::string rule;
    bool backward = false;
    Sequent result;
};

struct DisplayError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Forward chain of display postulates and E carrying s to a sequent in which
// the substructure at path is the whole precedent or succedent. Throws
// DisplayError when the path crosses an improperly polarized o or *.
std::vector<DisplayStep> display_chain(const Sequent& s, const Path& path);

// Derivation of the displayed sequent from the hypothesis s.
DerivPtr display_at(const Sequent& s, const Path& path);

// Derivation of the chain's end from d (whose conclusion is the chain's start).
DerivPtr apply_chain(const DerivPtr& d, const std::vector<DisplayStep>& chain);

// Derivation of start from d (whose conclusion is the chain's end), replaying
// the chain inverted.
DerivPtr unapply_chain(const DerivPtr& d, const Sequent& start, const std::vector<DisplayStep>& chain);

// The step that undoes one display/E step.
std::string inverse_label(const std::string& rule, bool backward, bool* inv_backward);

// ---------------------------------------------------------------- proof files

std::string print_proof(const DerivPtr& d);
DerivPtr parse_proof(std::string_view text, const ParseOptions& opt = {});
std::vector<DerivPtr> parse_proofs(std::string_view text, const ParseOptions& opt = {});

}  // namespace dll
