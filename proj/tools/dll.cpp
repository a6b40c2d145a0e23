// dll: command-line front end.
//
// Exit codes: 0 success, 1 refutation (check failure, search without proof,
// countermodel found), 2 usage or input errors.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "dll/cutelim.hpp"
#include "dll/kernel.hpp"
#include "dll/render.hpp"
#include "dll/search.hpp"
#include "dll/semantics.hpp"
#include "dll/translate.hpp"

using namespace dll;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& file) {
    if (file == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream in(file);
    if (!in) throw UsageError("cannot read " + file);
    return {std::istreambuf_iterator<char>(in), {}};
}

int pool_max() {
    const char* v = std::getenv("DLL_POOL_MAX");
    if (!v) return 5;
    int n = std::atoi(v);
    if (n < 2 || n > 7) throw UsageError("DLL_POOL_MAX must be between 2 and 7");
    return n;
}

// A display sequent, or a lattice sequent "A |- B" read through the translations.
Sequent read_sequent(const std::string& text) {
    try {
        return parse_sequent(text);
    } catch (const std::exception& first) {
        auto pos = text.find("|-");
        if (pos == std::string::npos) throw;
        try {
            return translate_sequent(parse_formula(text.substr(0, pos)), parse_formula(text.substr(pos + 2)));
        } catch (const std::exception&) {
            throw first;
        }
    }
}

void emit_proof(const DerivPtr& d, const std::string& format) {
    if (format == "text") std::cout << render(d, RenderFormat::Text);
    else if (format == "latex") std::cout << render(d, RenderFormat::Latex);
    else std::cout << print_proof(d) << "\n";
}

std::string countermodel_line(const Countermodel& cm) {
    std::ostringstream o;
    o << "COUNTERMODEL " << cm.lattice_name;
    const auto pool = lattice_pool(pool_max());
    const auto& l = pool[cm.lattice_index];
    for (const auto& [atom, v] : cm.valuation) o << " " << atom << "=" << l.elements()[v];
    return o.str();
}

struct Opts {
    std::string text, file = "-", format = "proof", side, name, lattice;
    std::vector<std::string> params;
    bool pre = false, suc = false, derive = false, hyp = false, ext = false;
    int depth = 20, cap = 2, threads = 0;
    std::size_t nodes = 1000000, budget = 1000000;
};

int cmd_parse(const Opts& o) {
    if (o.text.find("|-") != std::string::npos) {
        std::cout << print_sequent(read_sequent(o.text)) << "\n";
        return 0;
    }
    try {
        std::cout << print_term(parse_term(o.text)) << "\n";
    } catch (const std::exception&) {
        std::cout << print_formula(parse_formula(o.text)) << "\n";
    }
    return 0;
}

int cmd_check(const Opts& o) {
    auto proofs = parse_proofs(read_input(o.file));
    if (proofs.empty()) throw UsageError("no proof in input");
    CheckOptions co;
    co.allow_hypotheses = o.hyp;
    co.allow_extensions = o.ext;
    int status = 0;
    for (const auto& d : proofs) {
        auto r = check(d, co);
        if (r.ok) {
            std::cout << "OK " << print_sequent(d->conclusion) << "\n";
        } else {
            std::cerr << "FAIL " << print_sequent(d->conclusion) << ": " << r.describe() << "\n";
            status = 1;
        }
    }
    return status;
}

int cmd_translate(const Opts& o) {
    if (o.pre == o.suc) throw UsageError("give exactly one of --pre, --suc");
    auto f = parse_formula(o.text);
    std::cout << print_term(o.pre ? tau_pre(f) : tau_suc(f)) << "\n";
    return 0;
}

int cmd_axiom(const Opts& o) {
    auto n = parse_axiom_name(o.name);
    if (!n) throw UsageError("unknown axiom " + o.name);
    std::vector<FormulaPtr> ps;
    for (const auto& p : o.params) ps.push_back(parse_formula(p));
    if (static_cast<int>(ps.size()) != arity(*n))
        throw UsageError(o.name + " takes " + std::to_string(arity(*n)) + " parameters");
    if (!o.derive) {
        std::cout << print_sequent(axiom_sequent(*n, ps)) << "\n";
        return 0;
    }
    try {
        DerivPtr d = o.ext ? axiom_derivation_extended(*n, ps) : axiom_derivation(*n, ps);
        emit_proof(d, o.format);
        return 0;
    } catch (const UnsupportedAxiom& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const Underivable& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}

SearchConfig search_cfg(const Opts& o) {
    SearchConfig cfg;
    cfg.max_depth = o.depth;
    cfg.max_nodes = o.nodes;
    cfg.contraction_cap = o.cap;
    return cfg;
}

int cmd_prove(const Opts& o) {
    Sequent goal = read_sequent(o.text);
    auto rep = deadlock_report(goal, search_cfg(o));
    if (rep.proved) {
        emit_proof(rep.outcome.proof, o.format);
        return 0;
    }
    std::cout << rep.text();
    if (rep.outcome.status == SearchStatus::Exhausted) {
        if (auto cm = countermodel(goal, lattice_pool(pool_max())))
            std::cout << countermodel_line(*cm) << "\n";
        else
            std::cout << "NO COUNTERMODEL in lattices of size <= " << pool_max() << "\n";
    }
    return 1;
}

int cmd_cutelim(const Opts& o) {
    auto d = parse_proof(read_input(o.file));
    CheckOptions co;
    co.allow_extensions = o.ext;
    auto r = check(d, co);
    if (!r.ok) {
        std::cerr << "input does not check: " << r.describe() << "\n";
        return 1;
    }
    try {
        auto res = eliminate_cuts(d, o.budget);
        emit_proof(res.proof, o.format);
        if (o.format == "proof")
            for (const auto& l : res.log) std::cout << "# " << l << "\n";
        std::cerr << res.steps << " steps\n";
        return 0;
    } catch (const BudgetExceeded& e) {
        std::cerr << e.what() << "\n";
        emit_proof(e.partial, o.format);
        return 1;
    }
}

int cmd_semantics(const Opts& o) {
    Sequent s = read_sequent(o.text);
    std::vector<FiniteLattice> pool;
    if (!o.lattice.empty()) pool.push_back(named_lattice(o.lattice));
    else pool = lattice_pool(pool_max());
    if (auto cm = countermodel(s, pool)) {
        Countermodel c = *cm;
        std::ostringstream line;
        line << "COUNTERMODEL " << c.lattice_name;
        for (const auto& [atom, v] : c.valuation) line << " " << atom << "=" << pool[c.lattice_index].elements()[v];
        std::cout << line.str() << "\n";
        return 1;
    }
    std::cout << "VALID in " << pool.size() << " lattice" << (pool.size() == 1 ? "" : "s") << "\n";
    return 0;
}

int cmd_report(const Opts& o) {
    auto p = [](const char* a) { return parse_formula(a); };
    Sequent goal = axiom_sequent(AxiomName::cD1, {p("p"), p("q"), p("r")});
    std::cout << "GOAL " << print_sequent(goal) << "\n";
    auto rep = deadlock_report(goal, search_cfg(o));
    std::cout << rep.text();
    auto cm = countermodel(goal, lattice_pool(pool_max()));
    if (cm) std::cout << countermodel_line(*cm) << "\n";
    else std::cout << "NO COUNTERMODEL in lattices of size <= " << pool_max() << "\n";
    bool ok = !rep.proved && rep.outcome.status == SearchStatus::Exhausted && cm;
    std::cout << (ok ? "NOT DERIVABLE" : "UNDECIDED") << "\n";
    return ok ? 0 : 1;
}

struct CorpusItem {
    std::string name;
    bool ok;
    std::string note;
};

CorpusItem corpus_golden(const EmbeddedProof& e) {
    auto d = embedded_proof(e.name);
    auto r = check(d, false);
    return {"golden " + e.name, r.ok, r.ok ? print_sequent(d->conclusion) : r.describe()};
}

CorpusItem corpus_axiom(AxiomName n, const std::vector<FormulaPtr>& ps) {
    std::string name = "axiom " + axiom_name(n) + "(";
    for (std::size_t i = 0; i < ps.size(); ++i) name += (i ? ", " : "") + print_formula(ps[i]);
    name += ")";
    Sequent goal = axiom_sequent(n, ps);
    try {
        auto x = axiom_derivation_ex(n, ps);
        bool ok = check(x.proof, false).ok && is_cut_free(x.proof) && x.proof->conclusion == goal;
        return {name, ok, x.method};
    } catch (const Underivable&) {
        auto d = axiom_derivation_extended(n, ps);
        CheckOptions co;
        co.allow_extensions = true;
        bool ok = check(d, co).ok && d->conclusion == goal;
        return {name, ok, "extension"};
    }
}

int cmd_corpus(const Opts& o) {
    std::vector<std::function<CorpusItem()>> jobs;
    for (const auto& e : embedded_proofs())
        if (e.golden) jobs.push_back([e] { return corpus_golden(e); });
    std::vector<FormulaPtr> firsts{parse_formula("p"), parse_formula("T"), parse_formula("F"),
                                   parse_formula("p /\\ q"), parse_formula("p \\/ q")};
    for (AxiomName n : all_axioms()) {
        if (n == AxiomName::cD1) continue;
        for (const auto& a : firsts) {
            std::vector<FormulaPtr> ps{a};
            if (arity(n) > 1) ps.push_back(parse_formula("q"));
            if (arity(n) > 2) ps.push_back(parse_formula("r"));
            ps.resize(arity(n));
            jobs.push_back([n, ps] { return corpus_axiom(n, ps); });
        }
    }
    unsigned hw = o.threads > 0 ? static_cast<unsigned>(o.threads) : std::max(1u, std::thread::hardware_concurrency());
    std::vector<CorpusItem> results(jobs.size());
    for (std::size_t start = 0; start < jobs.size(); start += hw) {
        std::vector<std::future<CorpusItem>> fs;
        for (std::size_t i = start; i < std::min(jobs.size(), start + hw); ++i)
            fs.push_back(std::async(std::launch::async, [&jobs, i] {
                try {
                    return jobs[i]();
                } catch (const std::exception& e) {
                    return CorpusItem{"job " + std::to_string(i), false, e.what()};
                }
            }));
        for (std::size_t k = 0; k < fs.size(); ++k) results[start + k] = fs[k].get();
    }
    int failed = 0;
    for (const auto& r : results) {
        std::cout << (r.ok ? "ok   " : "FAIL ") << r.name << "  " << r.note << "\n";
        failed += !r.ok;
    }
    std::cout << results.size() - failed << "/" << results.size() << " passed\n";
    return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"proof engine for the display calculus D.LL"};
    app.require_subcommand(1);
    Opts o;
    auto add_format = [&](CLI::App* c) {
        c->add_option("--format", o.format, "proof output: proof, text or latex")
            ->check(CLI::IsMember({"proof", "text", "latex"}));
    };

    auto* parse = app.add_subcommand("parse", "parse and print a formula, term or sequent");
    parse->add_option("text", o.text)->required();

    auto* chk = app.add_subcommand("check", "check proof files");
    chk->add_option("file", o.file, "proof file, - for stdin");
    chk->add_flag("--hyp", o.hyp, "allow HYP leaves");
    chk->add_flag("--ext", o.ext, "allow extension rules");

    auto* tr = app.add_subcommand("translate", "translate a lattice formula");
    tr->add_option("formula", o.text)->required();
    tr->add_flag("--pre", o.pre, "precedent translation");
    tr->add_flag("--suc", o.suc, "succedent translation");

    auto* ax = app.add_subcommand("axiom", "print the translated axiom sequent or its derivation");
    ax->add_option("name", o.name)->required();
    ax->add_option("params", o.params);
    ax->add_flag("--derive", o.derive, "print a cut-free derivation");
    ax->add_flag("--ext", o.ext, "allow the IW_right extension");
    add_format(ax);

    auto* pr = app.add_subcommand("prove", "backward proof search");
    pr->add_option("sequent", o.text)->required();
    pr->add_option("--depth", o.depth, "bound on choice moves")->check(CLI::NonNegativeNumber);
    pr->add_option("--nodes", o.nodes, "node budget");
    pr->add_option("--cap", o.cap, "contractions per branch")->check(CLI::NonNegativeNumber);
    add_format(pr);

    auto* ce = app.add_subcommand("cutelim", "eliminate cuts from a proof file");
    ce->add_option("file", o.file, "proof file, - for stdin");
    ce->add_option("--budget", o.budget, "step budget");
    ce->add_flag("--ext", o.ext, "allow extension rules in the input");
    add_format(ce);

    auto* se = app.add_subcommand("semantics", "validity over the finite lattice pool");
    se->add_option("sequent", o.text)->required();
    se->add_option("--lattice", o.lattice, "a single named lattice")
        ->check(CLI::IsMember(named_lattice_names()));

    auto* rp = app.add_subcommand("report", "distributivity: deadlock report and countermodel");
    rp->add_option("--depth", o.depth)->check(CLI::NonNegativeNumber);
    rp->add_option("--nodes", o.nodes);
    rp->add_option("--cap", o.cap)->check(CLI::NonNegativeNumber);

    auto* co = app.add_subcommand("corpus", "re-check printed proofs and generated axiom derivations");
    co->add_option("--threads", o.threads)->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*parse) return cmd_parse(o);
        if (*chk) return cmd_check(o);
        if (*tr) return cmd_translate(o);
        if (*ax) return cmd_axiom(o);
        if (*pr) return cmd_prove(o);
        if (*ce) return cmd_cutelim(o);
        if (*se) return cmd_semantics(o);
        if (*rp) return cmd_report(o);
        if (*co) return cmd_corpus(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
