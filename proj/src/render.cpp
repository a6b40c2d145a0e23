#include "dll/render.hpp"

#include <regex>
#include <sstream>

namespace dll {

namespace {

void text_node(const DerivPtr& d, int depth, std::ostringstream& out) {
    out << std::string(2 * depth, ' ') << (d->rule.empty() ? "HYP" : d->label()) << ": "
        << print_sequent(d->conclusion) << "\n";
    for (const auto& p : d->premises) text_node(p, depth + 1, out);
}

std::string latex_label(const DerivPtr& d) {
    std::string r;
    for (char c : d->rule) r += c == '_' ? std::string("\\_") : std::string(1, c);
    return "\\scriptsize " + r + (d->backward ? "$^{-1}$" : "");
}

void latex_node(const DerivPtr& d, std::ostringstream& out) {
    std::string s = "$" + latex_sequent(d->conclusion) + "$";
    if (d->rule.empty()) {
        out << "\\AxiomC{" << s << "}\n";
        return;
    }
    if (d->premises.empty()) out << "\\AxiomC{}\n";
    for (const auto& p : d->premises) latex_node(p, out);
    out << "\\RightLabel{" << latex_label(d) << "}\n";
    switch (d->premises.size()) {
        case 0:
        case 1: out << "\\UnaryInfC{" << s << "}\n"; break;
        case 2: out << "\\BinaryInfC{" << s << "}\n"; break;
        default: out << "\\TrinaryInfC{" << s << "}\n"; break;
    }
}

}  // namespace

std::string latex_sequent(const Sequent& s) {
    static const std::vector<std::pair<std::regex, std::string>> subs{
        {std::regex(R"(\|-)"), "\\vdash"},
        {std::regex(R"(\bfdia\b)"), "\\blacklozenge"},
        {std::regex(R"(\bfbox\b)"), "\\blacksquare"},
        {std::regex(R"(\bwdia\b)"), "\\Diamond"},
        {std::regex(R"(\bwbox\b)"), "\\Box"},
        {std::regex(R"(\bcap\b)"), "\\cap"},
        {std::regex(R"(\bcup\b)"), "\\cup"},
        {std::regex(R"(\bo\[(P|Pop)\])"), "\\circ_{\\mathrm{$1}}"},
        {std::regex(R"(\bo\b)"), "\\circ"},
        {std::regex(R"(\*\[(P|Pop)\])"), "\\bullet_{\\mathrm{$1}}"},
        {std::regex(R"(\*)"), "\\bullet"},
        {std::regex(R"(\bT\b)"), "\\top"},
        {std::regex(R"(\bF\b)"), "\\bot"},
        {std::regex(R"(\bI\b)"), "\\mathrm{I}"},
        {std::regex(R"(>)"), "\\rhd"},
        {std::regex(R"(;)"), "\\,;\\,"},
    };
    std::string out = print_sequent(s);
    for (const auto& [re, rep] : subs) out = std::regex_replace(out, re, rep);
    return out;
}

std::string render(const DerivPtr& d, RenderFormat f) {
    std::ostringstream out;
    if (f == RenderFormat::Text) {
        text_node(d, 0, out);
        return out.str();
    }
    out << "\\documentclass{article}\n\\usepackage{amssymb}\n\\usepackage{bussproofs}\n"
           "\\usepackage[landscape,margin=1cm]{geometry}\n\\begin{document}\n\\begin{prooftree}\n";
    latex_node(d, out);
    out << "\\end{prooftree}\n\\end{document}\n";
    return out.str();
}

}  // namespace dll
