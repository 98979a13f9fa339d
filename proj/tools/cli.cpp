// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "itprove/json_io.hpp"
#include "itprove/syntax.hpp"

namespace itp::cli {

namespace {

namespace fs = std::filesystem;

struct Common {
    std::vector<std::string> premises;
    std::size_t repeat = 1;
    long budget = 20000;
    std::size_t max_cases = 1;
    double tolerance = 1e-8;
    int jobs = 1;
    std::uint64_t seed = 0;
    std::string format = "text";
    std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool search) {
    if (search) {
        cmd->add_option("--premise", c.premises, "copy:<n>,<l> | frl | frl-gap:<g> | double-markov | "
                                                 "infinite-divisibility:<n> | file:<path>");
        cmd->add_option("--repeat", c.repeat, "applications per premise")->check(CLI::PositiveNumber);
        cmd->add_option("--max-cases", c.max_cases, "leaves of a case split; 1 disables splitting")
            ->check(CLI::PositiveNumber);
    }
    cmd->add_option("--budget", c.budget, "LP solves per search")->check(CLI::PositiveNumber);
    cmd->add_option("--tolerance", c.tolerance, "LP optimality tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--jobs", c.jobs, "search workers")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", c.seed, "recorded in the output; the search itself is deterministic");
    cmd->add_option("--format", c.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--out", c.out, "where to write the certificate or proof JSON");
}

SearchOptions search_options(const Common& c) {
    SearchOptions o;
    o.repeat = c.repeat;
    o.budget = c.budget;
    o.max_cases = c.max_cases;
    o.jobs = c.jobs;
    o.lp.tolerance = c.tolerance;
    return o;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool is_file(const std::string& s) {
    std::error_code ec;
    return fs::is_regular_file(s, ec);
}

// A path names a file; anything else is inline text.
std::string text_of(const std::string& arg) { return is_file(arg) ? read_file(arg) : arg; }

void write_json(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw std::invalid_argument("cannot write " + path);
    f << j.dump(1) << '\n';
}

std::string set_text(const VarContext& ctx, Mask m) {
    std::string s;
    for (const auto& n : ctx.names_of(m)) s += (s.empty() ? "" : ",") + n;
    return "(" + s + ")";
}

void print_assignment(std::ostream& out, const Eii& goal, const ProofCertificate& cert) {
    const Eii w = working_eii(cert);
    for (std::size_t k = 0; k < cert.cases.leaves.size(); ++k) {
        const auto& leaf = cert.cases.leaves[k];
        if (cert.cases.leaves.size() > 1) out << "case " << k + 1 << ":";
        for (std::size_t i = 0; i < goal.aux.size(); ++i)
            out << (cert.cases.leaves.size() > 1 || i ? " " : "") << goal.aux[i] << " = "
                << set_text(w.base, leaf.assignment.at(i));
        if (!goal.aux.empty() || cert.cases.leaves.size() > 1) out << '\n';
    }
    const VarContext wf = w.full();
    for (std::size_t k = 0; k < cert.cases.splits.size(); ++k)
        out << "split " << k + 1 << ": " << format_expr(cert.cases.splits[k], wf) << " >= 0\n";
    for (const auto& a : cert.applications) {
        out << "premise " << a.premise << " applied with";
        for (std::size_t i = 0; i < a.substitution.size(); ++i) out << " " << set_text(w.base, a.substitution[i]);
        out << ", copies";
        for (const auto& f : a.fresh) out << " " << f;
        out << '\n';
    }
}

int status_code(SearchStatus s) {
    switch (s) {
        case SearchStatus::Proved: return kProved;
        case SearchStatus::NotProved: return kNotProved;
        case SearchStatus::BudgetExceeded: return kBudget;
    }
    return kBudget;
}

int cmd_prove(const std::string& input, const Common& c, std::ostream& out) {
    const Eii e = parse_statement(text_of(input));
    std::vector<Eii> premises;
    for (const auto& p : c.premises) premises.push_back(premise_from_spec(p));
    const SearchOptions opts = search_options(c);
    SearchResult r = prove_eii(e, premises, opts);

    std::string path;
    std::optional<ProofObject> proof;
    if (r.proved()) {
        proof = certificate_to_proof(*r.certificate, opts.lp);
        CheckResult chk = check_proof(*proof);
        if (!chk) throw SolverFailure("internal: elaborated proof fails at step " + std::to_string(chk.step) + ": " +
                                      chk.reason);
        path = !c.out.empty() ? c.out : is_file(input) ? input + ".proof.json" : "itprove.proof.json";
        write_json(path, proof_document(&*r.certificate, &*proof));
    }

    if (c.format == "json") {
        json j{{"schema_version", kSchemaVersion},
               {"command", "prove"},
               {"statement", print_statement(e)},
               {"seed", c.seed},
               {"result", r}};
        if (proof) {
            j["proof_path"] = path;
            j["proof_steps"] = proof->steps.size();
        }
        out << j.dump(1) << '\n';
    } else {
        out << "statement: " << print_statement(e) << '\n';
        out << "status: " << to_string(r.status) << '\n';
        if (r.certificate) print_assignment(out, e, *r.certificate);
        if (r.status == SearchStatus::NotProved && !e.aux.empty() && r.best_rows_covered > 0)
            out << "rows covered by the best candidate: " << r.best_rows_covered << " of " << e.consequence.size()
                << '\n';
        if (!r.message.empty()) out << "message: " << r.message << '\n';
        out << "lp solves: " << r.lp_solves << '\n';
        if (proof) out << "proof: " << path << " (" << proof->steps.size() << " steps)\n";
    }
    return status_code(r.status);
}

int cmd_check_implies(const std::string& a, const std::string& b, const Common& c, std::ostream& out) {
    auto [p, q] = parse_region_pair(text_of(a), text_of(b));
    SearchOptions opts = search_options(c);
    SearchResult r = eip_implies(p, q, opts);
    if (r.proved() && !c.out.empty()) write_json(c.out, proof_document(&*r.certificate, nullptr));
    if (c.format == "json") {
        out << json{{"schema_version", kSchemaVersion},
                    {"command", "check-implies"},
                    {"left", p},
                    {"right", q},
                    {"seed", c.seed},
                    {"result", r}}
                   .dump(1)
            << '\n';
    } else {
        out << "left:  " << print_region(p) << '\n' << "right: " << print_region(q) << '\n';
        out << "status: " << to_string(r.status) << '\n';
        if (r.certificate) print_assignment(out, implication_eii(p, q), *r.certificate);
        out << "lp solves: " << r.lp_solves << '\n';
    }
    return status_code(r.status);
}

int cmd_simplify(const std::string& input, const Common& c, std::ostream& out) {
    const Eip p = parse_region(text_of(input));
    SearchOptions opts = search_options(c);
    RegionReport rep = simplify(p, opts);
    if (!c.out.empty()) write_json(c.out, json{{"schema_version", kSchemaVersion}, {"report", rep}});
    if (c.format == "json") {
        out << json{{"schema_version", kSchemaVersion}, {"command", "simplify"}, {"seed", c.seed}, {"report", rep}}
                   .dump(1)
            << '\n';
    } else {
        out << "original:   " << print_region(rep.original) << '\n';
        out << "pipeline: rows, then auxiliaries, then Fourier-Motzkin, repeated until nothing changes\n";
        for (const auto& st : rep.log) {
            out << "  " << to_string(st.kind) << ": " << st.detail;
            if (st.kind == RegionStep::Kind::RemoveAuxiliary)
                out << (st.reverse ? " (equivalence certified)" : " (reverse implication not certified)");
            out << '\n';
        }
        out << "simplified: " << print_region(rep.simplified) << '\n';
        if (!rep.complete) out << "incomplete: " << rep.message << '\n';
    }
    return rep.complete ? kProved : kBudget;
}

int cmd_check_proof(const std::string& path, const Common& c, std::ostream& out) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& ex) {
        throw std::invalid_argument(std::string("malformed JSON: ") + ex.what());
    }
    ProofDocument d = read_proof_document(j);
    bool ok = true;
    json report{{"schema_version", kSchemaVersion}, {"command", "check-proof"}};
    std::ostringstream text;
    if (d.certificate) {
        std::string why;
        const bool v = verify_proof_certificate(*d.certificate, &why);
        ok = ok && v;
        report["certificate"] = {{"valid", v}, {"reason", why}};
        text << "certificate: " << (v ? "valid" : "invalid: " + why) << '\n';
    }
    if (d.proof) {
        CheckResult r = check_proof(*d.proof);
        ok = ok && r.valid;
        report["proof"] = {{"valid", r.valid}, {"steps", d.proof->steps.size()}};
        if (!r.valid) {
            report["proof"]["step"] = r.step;
            report["proof"]["reason"] = r.reason;
        }
        text << "proof: ";
        if (r.valid) text << "valid (" << d.proof->steps.size() << " steps)\n";
        else text << "invalid at step " << r.step << ": " << r.reason << '\n';
    }
    if (d.certificate && d.proof && !same_eii(d.certificate->goal, d.proof->goal)) {
        ok = false;
        report["goal_mismatch"] = true;
        text << "certificate and proof state different goals\n";
    }
    const Eii& goal = d.proof ? d.proof->goal : d.certificate->goal;
    report["goal"] = print_statement(goal);
    report["valid"] = ok;
    if (c.format == "json") out << report.dump(1) << '\n';
    else out << "goal: " << print_statement(goal) << '\n' << text.str();
    return ok ? kProved : kNotProved;
}

struct LemmaEntry {
    std::string spec;
    std::string summary;
    Eii instance;
};

std::vector<LemmaEntry> library() {
    return {
        {"copy:<n>,<l>", "conditional copy of Y^l over X^n (shown for n = l = 1)", copy_lemma(1, 1)},
        {"frl", "functional representation", frl()},
        {"frl-gap:<g>", "functional representation with H(Y|U) <= I(X;Y) + g (shown for g = 4)",
         frl_with_gap(4)},
        {"double-markov", "double Markov", double_markov()},
        {"infinite-divisibility:<n>", "n-fold splitting of X (shown for n = 2)", infinite_divisibility(2)},
        {"file:<path>", "any statement in a file", Eii{}},
    };
}

int cmd_lemmas(const Common& c, std::ostream& out) {
    if (c.format == "json") {
        json list = json::array();
        for (const auto& l : library()) {
            json e{{"spec", l.spec}, {"summary", l.summary}};
            if (l.spec.rfind("file:", 0) != 0) e["statement"] = print_statement(l.instance);
            list.push_back(std::move(e));
        }
        out << json{{"schema_version", kSchemaVersion}, {"lemmas", list}}.dump(1) << '\n';
        return kProved;
    }
    for (const auto& l : library()) {
        out << l.spec << "  " << l.summary << '\n';
        if (l.spec.rfind("file:", 0) != 0) out << "    " << print_statement(l.instance) << '\n';
    }
    return kProved;
}

std::size_t to_count(const std::string& s, const std::string& spec) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty()) throw std::invalid_argument("bad number in premise '" + spec + "'");
    return v;
}

}  // namespace

Eii premise_from_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon), arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "frl" && colon == std::string::npos) return frl();
    if (kind == "double-markov" && colon == std::string::npos) return double_markov();
    if (kind == "copy") {
        const auto comma = arg.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("expected copy:<n>,<l>, got '" + spec + "'");
        const std::size_t n = to_count(arg.substr(0, comma), spec), l = to_count(arg.substr(comma + 1), spec);
        if (l == 0 || 2 * l + n > kMaxRandomVars) throw std::invalid_argument("copy lemma size out of range: " + spec);
        return copy_lemma(n, l);
    }
    if (kind == "frl-gap") {
        auto g = parse_rational(arg);
        if (!g || *g < 0) throw std::invalid_argument("expected frl-gap:<nonnegative rational>, got '" + spec + "'");
        return frl_with_gap(*g);
    }
    if (kind == "infinite-divisibility") return infinite_divisibility(to_count(arg, spec));
    if (kind == "file") return parse_statement(read_file(arg));
    throw std::invalid_argument("unknown premise '" + spec + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"information inequalities over the Shannon cone", "itprove"};
    app.require_subcommand(1);
    Common c;
    std::string a, b;

    auto* prove = app.add_subcommand("prove", "prove a CII or EII given as a file or inline text");
    prove->add_option("statement", a, "file or text")->required();
    add_common(prove, c, true);

    auto* implies = app.add_subcommand("check-implies", "does region 1 imply region 2");
    implies->add_option("region1", a)->required();
    implies->add_option("region2", b)->required();
    add_common(implies, c, true);

    auto* simp = app.add_subcommand("simplify", "simplify a region and print the report");
    simp->add_option("region", a)->required();
    add_common(simp, c, false);

    auto* check = app.add_subcommand("check-proof", "re-verify a certificate or proof JSON file");
    check->add_option("file", a)->required()->check(CLI::ExistingFile);
    add_common(check, c, false);

    auto* lemmas = app.add_subcommand("lemmas", "list the lemma library");
    add_common(lemmas, c, false);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kProved;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kProved;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << e.what() << '\n';
            return kProved;
        }
        err << "error: " << e.what() << '\n';
        auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return kInputError;
    }

    try {
        if (prove->parsed()) return cmd_prove(a, c, out);
        if (implies->parsed()) return cmd_check_implies(a, b, c, out);
        if (simp->parsed()) return cmd_simplify(a, c, out);
        if (check->parsed()) return cmd_check_proof(a, c, out);
        if (lemmas->parsed()) return cmd_lemmas(c, out);
    } catch (const BudgetExceeded& e) {
        err << "budget: " << e.what() << '\n';
        return kBudget;
    } catch (const SolverFailure& e) {
        err << "solver: " << e.what() << '\n';
        return kBudget;
    } catch (const json::exception& e) {
        err << "input: " << e.what() << '\n';
        return kInputError;
    } catch (const std::invalid_argument& e) {
        err << "input: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kBudget;
    }
    return kInputError;
}

}  // namespace itp::cli
