// Converts bussproofs trees (\AX, \AXC, \UI, \BI, \DisplayProof) written in
// the ASCII term syntax into proof files. Rule labels are inferred with the
// kernel; a gap between a printed line and the next is bridged by at most
// four structural or display steps.
//
//   bussproofs_import FILE [FIRST_LINE LAST_LINE]
//
// Each tree is printed as "# tree ending at line N" followed by the proof.

#include <deque>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "dll/calculus.hpp"
#include "dll/kernel.hpp"
#include "dll/syntax.hpp"

using namespace dll;

namespace {

ParseOptions opts() {
    ParseOptions o;
    o.schematic = true;
    o.loose_structural_unary = true;
    return o;
}

std::string clean(std::string s) {
    static const std::vector<std::pair<std::regex, std::string>> subs{
        {std::regex(R"(\^\\tau)"), ""}, {std::regex(R"(_\\tau)"), ""},  {std::regex(R"(\\vdash)"), "|-"},
        {std::regex(R"(\\top)"), "T"},  {std::regex(R"(\\bot)"), "F"}, {std::regex(R"(\s+)"), " "},
    };
    for (const auto& [re, rep] : subs) s = std::regex_replace(s, re, rep);
    return s;
}

struct Step {
    std::string rule;
    bool backward;
    Sequent premise;
};

std::vector<Step> unary_steps(const Sequent& c) {
    std::vector<Step> out;
    for (const auto& r : builtin_rules()) {
        if (r.premises.size() != 1) continue;
        for (const auto& sub : match(r, c)) {
            bool free_premise = false;
            for (int v : r.premise_only) free_premise |= !sub.bound(v);
            if (free_premise) continue;
            out.push_back({r.name, false, instantiate(r, sub).premises[0]});
        }
        if (r.invertible) {
            Substitution sub;
            if (match_into(r, r.premises[0], c, sub)) {
                try {
                    out.push_back({r.name, true, instantiate_pattern(r, r.conclusion, sub)});
                } catch (const std::exception&) {
                }
            }
        }
    }
    return out;
}

// Backward steps leading from c to p, at most `limit` of them.
std::optional<std::vector<Step>> bridge(const Sequent& c, const Sequent& p, int limit) {
    struct Node {
        Sequent s;
        int parent;
        Step via;
    };
    std::vector<Node> nodes{{c, -1, {}}};
    std::deque<std::pair<int, int>> q{{0, 0}};
    std::map<std::string, int> seen{{print_sequent(c), 0}};
    while (!q.empty()) {
        auto [i, d] = q.front();
        q.pop_front();
        if (nodes[i].s == p) {
            std::vector<Step> path;
            for (int k = i; nodes[k].parent >= 0; k = nodes[k].parent) path.insert(path.begin(), nodes[k].via);
            return path;
        }
        if (d == limit) continue;
        Sequent cur = nodes[i].s;
        for (auto& st : unary_steps(cur)) {
            std::string key = print_sequent(st.premise);
            if (seen.count(key)) continue;
            seen[key] = static_cast<int>(nodes.size());
            Sequent prem = st.premise;
            nodes.push_back({prem, i, std::move(st)});
            q.push_back({static_cast<int>(nodes.size()) - 1, d + 1});
        }
    }
    return std::nullopt;
}

DerivPtr chain_to(const Sequent& c, const std::vector<Step>& steps, DerivPtr top) {
    for (std::size_t k = steps.size(); k-- > 0;) {
        const Sequent& concl = k == 0 ? c : steps[k - 1].premise;
        top = make_node(concl, steps[k].rule, {top}, steps[k].backward);
    }
    return top;
}

std::optional<DerivPtr> axiom(const Sequent& s) {
    for (const char* r : {"Id", "Top_right", "Bot_left"})
        if (check_step(r, {}, s)) return make_node(s, r);
    return std::nullopt;
}

DerivPtr leaf(const Sequent& s) {
    if (auto a = axiom(s)) return *a;
    for (const auto& st : unary_steps(s))
        if (auto a = axiom(st.premise)) return chain_to(s, {st}, *a);
    std::cerr << "warning: open leaf " << print_sequent(s) << "\n";
    return make_hyp(s);
}

DerivPtr unary(const Sequent& c, const DerivPtr& p) {
    if (auto path = bridge(c, p->conclusion, 4)) return chain_to(c, *path, p);
    throw std::runtime_error("cannot connect " + print_sequent(p->conclusion) + "  to  " + print_sequent(c));
}

DerivPtr binary(const Sequent& c, const DerivPtr& a, const DerivPtr& b) {
    const Sequent& x = a->conclusion;
    const Sequent& y = b->conclusion;
    std::vector<std::pair<std::string, Sequent>> cands;
    auto add = [&](const char* rule, auto build) {
        try {
            cands.push_back({rule, build()});
        } catch (const std::exception&) {
        }
    };
    if (x.right->op == SOp::Leaf && y.right->op == SOp::Leaf)
        add("Cap_right", [&] {
            return make_sequent(s_dot(x.left, y.left), s_leaf(t_cap(x.right->term, y.right->term)));
        });
    if (x.left->op == SOp::Leaf && y.left->op == SOp::Leaf)
        add("Cup_left", [&] {
            return make_sequent(s_leaf(t_cup(x.left->term, y.left->term)), s_dot(x.right, y.right));
        });
    for (auto& [rule, q] : cands) {
        if (!check_step(rule, {x, y}, q)) continue;
        if (auto path = bridge(c, q, 4)) return chain_to(c, *path, make_node(q, rule, {a, b}));
    }
    throw std::runtime_error("cannot connect binary step to " + print_sequent(c));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: bussproofs_import FILE [FIRST LAST]\n";
        return 2;
    }
    std::ifstream in(argv[1]);
    if (!in) {
        std::cerr << "cannot read " << argv[1] << "\n";
        return 2;
    }
    long first = argc > 3 ? std::stol(argv[2]) : 1, last = argc > 3 ? std::stol(argv[3]) : 1L << 40;
    static const std::regex cmd(R"(\\(AX|UI|BI)\$(.*)\$)");
    std::vector<DerivPtr> stack;
    std::string prev;
    bool in_comment = false;
    int status = 0;
    std::string line;
    for (long no = 1; std::getline(in, line); ++no) {
        if (no < first || no > last) continue;
        if (line.find("\\begin{comment}") != std::string::npos) in_comment = true;
        if (line.find("\\end{comment}") != std::string::npos) {
            in_comment = false;
            continue;
        }
        if (in_comment) continue;
        try {
            if (line.find("\\AXC{") != std::string::npos) {
                stack.push_back(nullptr);
                prev.clear();
                continue;
            }
            if (line.find("\\DisplayProof") != std::string::npos) {
                if (stack.size() == 1 && stack.back()) {
                    std::cout << "# tree ending at line " << no << "\n" << print_proof(stack.back()) << "\n";
                } else {
                    std::cerr << "line " << no << ": unbalanced tree discarded\n";
                    status = 1;
                }
                stack.clear();
                prev.clear();
                continue;
            }
            std::smatch m;
            if (!std::regex_search(line, m, cmd)) continue;
            std::string text = clean(m[2]);
            if (text == prev && m[1] == "UI") continue;  // repeated line
            prev = text;
            Sequent s = parse_sequent(text, opts());
            if (m[1] == "AX") {
                stack.push_back(leaf(s));
            } else if (m[1] == "UI") {
                if (stack.empty()) throw std::runtime_error("UI on empty stack");
                DerivPtr p = stack.back();
                stack.pop_back();
                stack.push_back(p ? unary(s, p) : leaf(s));
            } else {
                if (stack.size() < 2) throw std::runtime_error("BI needs two premises");
                DerivPtr b = stack.back();
                stack.pop_back();
                DerivPtr a = stack.back();
                stack.pop_back();
                if (!a || !b) throw std::runtime_error("BI on placeholder");
                stack.push_back(binary(s, a, b));
            }
        } catch (const std::exception& e) {
            std::cerr << "line " << no << ": " << e.what() << "\n";
            status = 1;
            stack.clear();
            in_comment = false;
            // skip to the end of this tree
            while (std::getline(in, line)) {
                ++no;
                if (line.find("\\DisplayProof") != std::string::npos) break;
            }
            prev.clear();
        }
    }
    return status;
}
