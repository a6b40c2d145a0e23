#pragma once

#include <string>

#include "dll/kernel.hpp"

namespace dll {

enum class RenderFormat { Text, Latex };

// Text: one "Rule: sequent" line per node, premises indented below.
// Latex: a standalone document with a bussproofs tree.
std::string render(const DerivPtr& d, RenderFormat f);

std::string latex_sequent(const Sequent& s);

}  // namespace dll
