#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dll {

enum class Sort : std::uint8_t { L, P, Pop };

const char* sort_name(Sort s);
inline Sort dual_sort(Sort s) { return s == Sort::P ? Sort::Pop : s == Sort::Pop ? Sort::P : Sort::L; }

struct SyntaxError : std::runtime_error {
    std::size_t offset;
    SyntaxError(const std::string& msg, std::size_t off)
        : std::runtime_error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

struct SortError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- formulas

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind : std::uint8_t { Atom, Top, Bot, And, Or };
    Kind kind;
    std::string name;
    FormulaPtr lhs, rhs;
};

FormulaPtr f_atom(std::string name);
FormulaPtr f_top();
FormulaPtr f_bot();
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);

bool equal(const FormulaPtr& a, const FormulaPtr& b);
std::size_t size(const FormulaPtr& f);
void collect_atoms(const FormulaPtr& f, std::vector<std::string>& out);

std::string print_formula(const FormulaPtr& f, bool full_parens = false);
FormulaPtr parse_formula(std::string_view text);

// ---------------------------------------------------------------- terms

enum class Op : std::uint8_t { Atom, Top, Bot, BDia, BBox, WBox, WDia, Cap, Cup };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    Op op;
    Sort sort;
    std::string name;
    TermPtr a, b;
    std::size_t hash = 0;
};

TermPtr t_atom(std::string name);
TermPtr t_top();
TermPtr t_bot();
TermPtr t_bdia(TermPtr alpha);  // P -> L
TermPtr t_bbox(TermPtr xi);     // Pop -> L
TermPtr t_wbox(TermPtr a);      // L -> P
TermPtr t_wdia(TermPtr a);      // L -> Pop
TermPtr t_cap(TermPtr x, TermPtr y);
TermPtr t_cup(TermPtr x, TermPtr y);

bool equal(const TermPtr& a, const TermPtr& b);
int term_depth(const TermPtr& t);
int term_complexity(const TermPtr& t);
bool is_subterm(const TermPtr& sub, const TermPtr& t);
void collect_atoms(const TermPtr& t, std::vector<std::string>& out);

// ---------------------------------------------------------------- structures

enum class SOp : std::uint8_t { Leaf, I, Bullet, Circ, SCirc, Dot, Sup };

struct Structure;
using StructPtr = std::shared_ptr<const Structure>;

struct Structure {
    SOp op;
    Sort sort;
    TermPtr term;
    StructPtr a, b;
    std::size_t hash = 0;
};

StructPtr s_leaf(TermPtr t);
StructPtr s_i();
StructPtr s_bullet(StructPtr g);          // P or Pop -> L
StructPtr s_circ(StructPtr x, Sort sort); // L -> sort (P or Pop)
StructPtr s_scirc(Sort sort);
StructPtr s_dot(StructPtr x, StructPtr y);
StructPtr s_sup(StructPtr x, StructPtr y);

bool equal(const StructPtr& a, const StructPtr& b);
int struct_depth(const StructPtr& s);
void collect_atoms(const StructPtr& s, std::vector<std::string>& out);

struct Sequent {
    StructPtr left, right;
    Sort sort = Sort::L;
};

Sequent make_sequent(StructPtr left, StructPtr right);
bool equal(const Sequent& a, const Sequent& b);
inline bool operator==(const Sequent& a, const Sequent& b) { return equal(a, b); }
std::size_t hash_of(const Sequent& s);
std::vector<std::string> atoms_of(const Sequent& s);

// ---------------------------------------------------------------- printing

std::string print_term(const TermPtr& t);
std::string print_struct(const StructPtr& s);
std::string print_sequent(const Sequent& s);

// ---------------------------------------------------------------- parsing

struct ParseOptions {
    // Allow upper-case single identifiers as atoms (schematic letters in templates).
    bool schematic = false;
    // Read the operand of o and * as a whole cap/cup expression, so that
    // "* wbox A cap wbox B" means *(wbox A cap wbox B).
    bool loose_structural_unary = false;
};

TermPtr parse_term(std::string_view text, const ParseOptions& opt = {});
Sequent parse_sequent(std::string_view text, const ParseOptions& opt = {});

// ---------------------------------------------------------------- paths

enum class Side : std::uint8_t { Left, Right };
enum class Polarity : std::uint8_t { Precedent, Succedent };

inline Polarity flip(Polarity p) { return p == Polarity::Precedent ? Polarity::Succedent : Polarity::Precedent; }

struct Path {
    Side side = Side::Left;
    std::vector<int> idx;
};

std::string print_path(const Path& p);
Path parse_path(std::string_view text);

StructPtr struct_at(const Sequent& s, const Path& p);
Polarity polarity_at(const Sequent& s, const Path& p);
Sequent replace_at(const Sequent& s, const Path& p, StructPtr repl);
StructPtr replace_in(const StructPtr& s, const std::vector<int>& idx, std::size_t from, StructPtr repl);

// Every node path of the sequent, preorder, left side first.
std::vector<Path> all_paths(const Sequent& s);

// Properly polarized: P-sort o only in succedent, Pop-sort o only in precedent,
// bullet of P only in precedent, bullet of Pop only in succedent.
bool properly_polarized(const Sequent& s);

}  // namespace dll
