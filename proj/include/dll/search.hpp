#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "dll/kernel.hpp"
#include "dll/syntax.hpp"

namespace dll {

enum class LoopKey { Exact, ModuloAE };

struct SearchConfig {
    // Bound on choice moves (non-invertible rule applications, each bundled
    // with the weakening/contraction/display steps it needs) along a branch.
    // Invertible moves are free.
    int max_depth = 20;
    std::size_t max_nodes = 1000000;
    // Priority of the choice rules; empty means the default order.
    std::vector<std::string> rule_order;
    LoopKey loop_key = LoopKey::ModuloAE;
    int contraction_cap = 2;  // C applications per branch
    bool allow_cut = false;   // analytic Cut_L on subterms of the goal
    // Close X |- Y with F alone in X by IW_right over Bot_left. Proofs then
    // check only with extensions allowed.
    bool allow_extensions = false;
};

enum class SearchStatus { Proved, Exhausted, ResourceOut };

const char* status_name(SearchStatus s);

struct DeadEnd {
    Sequent sequent;
    std::string family;  // Residuation, Exchange, Weakening, Contraction
    std::string branch;  // X-isolated / Y-isolated: side of the first choice at the root
    std::string reason;  // "no rule applies", "all moves fail", "depth bound", "loop"
};

struct SearchOutcome {
    SearchStatus status = SearchStatus::Exhausted;
    DerivPtr proof;               // when Proved; checks with no hypotheses
    std::vector<DeadEnd> frontier;  // when not Proved
    std::size_t nodes = 0;
    int depth = 0;                // last depth bound tried
    bool depth_limited = false;   // some branch was cut by the depth bound
};

SearchOutcome backward_search(const Sequent& goal, const SearchConfig& cfg = {});

// Key identifying s up to display postulates (and, for ModuloAE, associativity
// and exchange of ;).
std::string canonical_key(const Sequent& s, LoopKey k = LoopKey::ModuloAE);

struct DeadlockReport {
    bool proved = false;
    SearchOutcome outcome;
    std::map<std::string, std::vector<DeadEnd>> by_family;

    // "DEADEND <sequent> <family>" lines, grouped under "BRANCH <name>" headers.
    std::string text() const;
};

DeadlockReport deadlock_report(const Sequent& goal, const SearchConfig& cfg = {});

}  // namespace dll
