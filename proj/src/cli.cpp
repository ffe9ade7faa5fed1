#include "qml/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>

#include "qml/calculus.hpp"
#include "qml/corpus.hpp"
#include "qml/eval.hpp"
#include "qml/formula.hpp"
#include "qml/frame.hpp"
#include "qml/model_json.hpp"
#include "qml/proof_json.hpp"
#include "qml/search.hpp"
#include "qml/suites.hpp"

namespace qml {

namespace {

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error(path + ": cannot open");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw error(path + ": " + e.what());
    }
}

structure load_model(const std::string& path) {
    return structure_from_json(load_json_file(path));
}

// The query commands need the frame laws to hold for their answers to
// mean anything, so a broken model file is an input error, not a verdict.
structure load_valid_model(const std::string& path) {
    structure s = load_model(path);
    std::vector<violation> vs = s.validate();
    if (!vs.empty())
        throw error(path + ": invalid structure: " + vs.front().message());
    return s;
}

int world_from_text(const structure& s, const std::string& text) {
    if (!text.empty() && std::all_of(text.begin(), text.end(),
                                     [](unsigned char c) { return std::isdigit(c); })) {
        int i = std::stoi(text);
        if (i < 0 || i >= s.world_count())
            throw error("world index " + text + " out of range (structure has " +
                        std::to_string(s.world_count()) + " worlds)");
        return i;
    }
    int i = s.world_index(text);
    if (i < 0) throw error("no world named '" + text + "'");
    return i;
}

std::string names_line(const structure& s, const world_set& ws) {
    std::string line;
    for (int i : ws.members()) {
        if (!line.empty()) line += ' ';
        line += s.world_name(i);
    }
    return line;
}

std::string set_braces(const structure& s, const world_set& ws) {
    return "{" + names_line(s, ws) + "}";
}

std::vector<std::string> sequent_atoms(const sequent& sq) {
    std::vector<std::string> atoms = atom_names(sq.left);
    for (const std::string& a : atom_names(sq.right)) atoms.push_back(a);
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    return atoms;
}

std::string path_text(const std::vector<int>& path) {
    std::string t = "root";
    for (int i : path) t += ".premises[" + std::to_string(i) + "]";
    return t;
}

nlohmann::json key_json(const canonical_key& k) {
    return {{"n", k.n}, {"rq", k.rq_mask}, {"rm", k.rm_index}, {"val", k.val_index}};
}

struct cut_names : CLI::Transformer {
    cut_names()
        : CLI::Transformer({{"none", "0"}, {"analytic", "1"}, {"full", "2"}},
                           CLI::ignore_case) {}
};

}  // namespace

int cli_run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"quantum modal logic toolkit"};
    app.require_subcommand(1);
    int code = 0;

    // parse FORMULA
    std::string parse_text;
    bool parse_json = false;
    CLI::App* cmd_parse = app.add_subcommand("parse", "parse a formula and echo its core form");
    cmd_parse->add_option("formula", parse_text, "formula text")->required();
    cmd_parse->add_flag("--json", parse_json, "machine-readable output");
    cmd_parse->callback([&] {
        formula f = parse(parse_text);
        if (parse_json) {
            nlohmann::json j{{"format", 1},
                             {"formula", print(f)},
                             {"depth", f.depth()},
                             {"atoms", atom_names(f)}};
            out << j.dump() << "\n";
        } else {
            out << print(f) << "\n";
        }
    });

    // eval --model FILE --world I --formula F
    std::string eval_model, eval_world, eval_formula;
    bool eval_json = false;
    CLI::App* cmd_eval = app.add_subcommand("eval", "truth of a formula at one world");
    cmd_eval->add_option("--model", eval_model, "model JSON file")->required();
    cmd_eval->add_option("--world", eval_world, "world index or name")->required();
    cmd_eval->add_option("--formula", eval_formula, "formula text")->required();
    cmd_eval->add_flag("--json", eval_json, "machine-readable output");
    cmd_eval->callback([&] {
        structure s = load_valid_model(eval_model);
        int w = world_from_text(s, eval_world);
        bool value = holds(s, w, parse(eval_formula));
        if (eval_json)
            out << nlohmann::json{{"format", 1}, {"value", value}}.dump() << "\n";
        else
            out << (value ? "true" : "false") << "\n";
        code = value ? 0 : 1;
    });

    // truthset --model FILE --formula F
    std::string ts_model, ts_formula;
    bool ts_json = false;
    CLI::App* cmd_ts = app.add_subcommand("truthset", "all worlds satisfying a formula");
    cmd_ts->add_option("--model", ts_model, "model JSON file")->required();
    cmd_ts->add_option("--formula", ts_formula, "formula text")->required();
    cmd_ts->add_flag("--json", ts_json, "machine-readable output");
    cmd_ts->callback([&] {
        structure s = load_valid_model(ts_model);
        world_set ws = truth_set(s, parse(ts_formula));
        if (ts_json) {
            std::vector<std::string> names;
            for (int i : ws.members()) names.push_back(s.world_name(i));
            out << nlohmann::json{{"format", 1}, {"worlds", ws.members()}, {"names", names}}
                       .dump()
                << "\n";
        } else {
            out << set_braces(s, ws) << "\n";
        }
    });

    // closedsets --model FILE
    std::string cs_model;
    bool cs_json = false;
    CLI::App* cmd_cs = app.add_subcommand("closedsets", "all biortho-closed world sets");
    cmd_cs->add_option("--model", cs_model, "model JSON file")->required();
    cmd_cs->add_flag("--json", cs_json, "machine-readable output");
    cmd_cs->callback([&] {
        structure s = load_valid_model(cs_model);
        std::vector<world_set> sets = closed_sets(s);
        if (cs_json) {
            nlohmann::json arr = nlohmann::json::array();
            for (const world_set& ws : sets) arr.push_back(ws.members());
            out << nlohmann::json{{"format", 1}, {"sets", arr}}.dump() << "\n";
        } else {
            for (const world_set& ws : sets) out << set_braces(s, ws) << "\n";
        }
    });

    // validate --model FILE
    std::string va_model;
    bool va_json = false;
    CLI::App* cmd_va = app.add_subcommand("validate", "check the frame laws of a model");
    cmd_va->add_option("--model", va_model, "model JSON file")->required();
    cmd_va->add_flag("--json", va_json, "machine-readable output");
    cmd_va->callback([&] {
        structure s = load_model(va_model);
        std::vector<violation> vs = s.validate();
        if (va_json) {
            std::vector<std::string> msgs;
            for (const violation& v : vs) msgs.push_back(v.message());
            out << nlohmann::json{{"format", 1}, {"ok", vs.empty()}, {"violations", msgs}}
                       .dump()
                << "\n";
        } else if (vs.empty()) {
            out << "ok\n";
        } else {
            for (const violation& v : vs) out << v.message() << "\n";
        }
        code = vs.empty() ? 0 : 1;
    });

    // checkproof FILE
    std::string cp_file;
    bool cp_json = false;
    CLI::App* cmd_cp = app.add_subcommand("checkproof", "verify a derivation file");
    cmd_cp->add_option("file", cp_file, "proof JSON file")->required();
    cmd_cp->add_flag("--json", cp_json, "machine-readable output");
    cmd_cp->callback([&] {
        derivation d = derivation_from_json(load_json_file(cp_file));
        check_result r = check_derivation(d);
        if (cp_json) {
            nlohmann::json j{{"format", 1}, {"ok", r.ok}, {"conclusion", print(d.conclusion)}};
            if (!r.ok) {
                j["path"] = r.path;
                j["reason"] = r.reason;
            }
            out << j.dump() << "\n";
        } else if (r.ok) {
            out << "ok: " << print(d.conclusion) << "\n";
        } else {
            out << "invalid at " << path_text(r.path) << ": " << r.reason << "\n";
        }
        code = r.ok ? 0 : 1;
    });

    // prove "SEQ" --depth D [--cut analytic|none|full]
    std::string pv_seq;
    int pv_depth = proof_search_options{}.depth_limit;
    int pv_cut = 1;
    bool pv_json = false;
    CLI::App* cmd_pv = app.add_subcommand("prove", "backward proof search for a sequent");
    cmd_pv->add_option("sequent", pv_seq, "sequent text, e.g. \"p & q |- p\"")->required();
    cmd_pv->add_option("--depth", pv_depth, "derivation height limit")
        ->check(CLI::PositiveNumber);
    cmd_pv->add_option("--cut", pv_cut, "cut policy: none, analytic or full")
        ->transform(cut_names());
    cmd_pv->add_flag("--json", pv_json, "machine-readable output");
    cmd_pv->callback([&] {
        sequent goal = parse_sequent(pv_seq);
        proof_search_options opts;
        opts.depth_limit = pv_depth;
        opts.cuts = static_cast<cut_policy>(pv_cut);
        std::optional<derivation> d = search_proof(goal, opts);
        if (pv_json) {
            nlohmann::json j{{"format", 1}, {"found", d.has_value()}};
            if (d) j["derivation"] = derivation_to_json(*d);
            out << j.dump() << "\n";
        } else if (d) {
            out << print_tree(*d);
        } else {
            out << "unknown\n";
        }
        code = d ? 0 : 1;
    });

    // countermodel "SEQ" --max-worlds N [--random SEED,SAMPLES]
    std::string cm_seq, cm_random;
    int cm_worlds = k_default_exhaustive_worlds;
    bool cm_json = false;
    CLI::App* cmd_cm = app.add_subcommand("countermodel", "hunt for a refuting structure");
    cmd_cm->add_option("sequent", cm_seq, "sequent text")->required();
    cmd_cm->add_option("--max-worlds", cm_worlds, "largest structure size to try")
        ->envname("QMLKIT_MAX_WORLDS")
        ->check(CLI::PositiveNumber);
    cmd_cm->add_option("--random", cm_random,
                       "SEED,SAMPLES: sample random structures instead of enumerating");
    cmd_cm->add_flag("--json", cm_json, "machine-readable output");
    cmd_cm->callback([&] {
        sequent sq = parse_sequent(cm_seq);
        entailment_query q{sq.left, sq.right};
        search_budget budget;
        if (cm_random.empty()) {
            budget = search_budget::exhaustive(cm_worlds, sequent_atoms(sq));
        } else {
            auto comma = cm_random.find(',');
            if (comma == std::string::npos)
                throw error("--random wants SEED,SAMPLES, got '" + cm_random + "'");
            std::uint64_t seed = 0, samples = 0;
            try {
                seed = std::stoull(cm_random.substr(0, comma));
                samples = std::stoull(cm_random.substr(comma + 1));
            } catch (const std::exception&) {
                throw error("--random wants SEED,SAMPLES, got '" + cm_random + "'");
            }
            budget = search_budget::randomized(cm_worlds, sequent_atoms(sq), seed, samples);
        }
        formula survivor = formula::atom("p");
        bool have_survivor = false;
        std::optional<refutation> r = refute_entailment(q, budget, &survivor);
        if (!r && !sq.right.empty()) have_survivor = true;

        if (cm_json) {
            nlohmann::json j{{"format", 1}, {"refuted", r.has_value()},
                             {"sequent", print(sq)}};
            if (r) {
                nlohmann::json ws = nlohmann::json::array();
                for (const auto& [alpha, cm] : r->per_formula) {
                    nlohmann::json w{{"formula", print(alpha)},
                                     {"world", cm.witness_world},
                                     {"world_name", cm.model.world_name(cm.witness_world)},
                                     {"model", structure_to_json(cm.model)}};
                    if (!budget.random) w["key"] = key_json(cm.where);
                    ws.push_back(std::move(w));
                }
                j["witnesses"] = std::move(ws);
                if (r->gamma_witness) {
                    const countermodel& cm = *r->gamma_witness;
                    nlohmann::json w{{"world", cm.witness_world},
                                     {"world_name", cm.model.world_name(cm.witness_world)},
                                     {"model", structure_to_json(cm.model)}};
                    if (!budget.random) w["key"] = key_json(cm.where);
                    j["gamma_witness"] = std::move(w);
                }
            } else if (have_survivor) {
                j["standing"] = print(survivor);
            }
            out << j.dump() << "\n";
        } else if (r) {
            out << "refuted: " << print(sq) << "\n";
            for (const auto& [alpha, cm] : r->per_formula)
                out << print(alpha) << ": fails at world "
                    << cm.model.world_name(cm.witness_world) << " in "
                    << structure_to_json(cm.model).dump() << "\n";
            if (r->gamma_witness)
                out << "left side satisfiable: world "
                    << r->gamma_witness->model.world_name(r->gamma_witness->witness_world)
                    << " in " << structure_to_json(r->gamma_witness->model).dump() << "\n";
        } else {
            out << "no countermodel within budget";
            if (have_survivor) out << " (standing: " << print(survivor) << ")";
            out << "\n";
        }
        code = r ? 1 : 0;
    });

    // enumerate --worlds N --atoms K [--count]
    int en_worlds = 0;
    int en_atoms = 1;
    bool en_count = false, en_json = false;
    CLI::App* cmd_en = app.add_subcommand("enumerate", "walk the canonical structure stream");
    cmd_en->add_option("--worlds", en_worlds, "largest world count")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd_en->add_option("--atoms", en_atoms, "number of atoms (named p, q, ...)")
        ->check(CLI::NonNegativeNumber);
    cmd_en->add_flag("--count", en_count, "print only the total");
    cmd_en->add_flag("--json", en_json, "machine-readable output");
    cmd_en->callback([&] {
        if (en_atoms > 11) throw error("at most 11 atoms (p through z)");
        std::vector<std::string> atoms;
        for (int i = 0; i < en_atoms; ++i) atoms.push_back(std::string(1, 'p' + i));
        search_budget budget = search_budget::exhaustive(en_worlds, atoms);
        if (en_count) {
            std::uint64_t total = count_structures(budget);
            if (en_json)
                out << nlohmann::json{{"format", 1}, {"count", total}}.dump() << "\n";
            else
                out << total << "\n";
        } else {
            for_each_structure(budget, [&](const structure&, const canonical_key& k) {
                if (en_json)
                    out << key_json(k).dump() << "\n";
                else
                    out << "n=" << k.n << " rq=" << k.rq_mask << " rm=" << k.rm_index
                        << " val=" << k.val_index << "\n";
                return true;
            });
        }
    });

    // soundness-suite [--max-worlds N]
    int ss_worlds = k_default_exhaustive_worlds;
    bool ss_json = false;
    CLI::App* cmd_ss = app.add_subcommand(
        "soundness-suite", "check every shipped derivation and hunt for countermodels");
    cmd_ss->add_option("--max-worlds", ss_worlds, "largest structure size to try")
        ->envname("QMLKIT_MAX_WORLDS")
        ->check(CLI::PositiveNumber);
    cmd_ss->add_flag("--json", ss_json, "machine-readable output");
    cmd_ss->callback([&] {
        const std::vector<corpus_entry>& corpus = builtin_corpus();
        std::vector<soundness_entry> entries;
        std::vector<std::string> proof_errors(corpus.size());
        bool all_ok = true;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            check_result r = check_derivation(corpus[i].proof);
            if (!r.ok) {
                proof_errors[i] = "proof invalid at " + path_text(r.path) + ": " + r.reason;
                all_ok = false;
            }
            entries.push_back({corpus[i].name, corpus[i].proof.conclusion});
        }
        std::vector<soundness_outcome> outcomes = soundness_scan(entries, ss_worlds);

        nlohmann::json jentries = nlohmann::json::array();
        std::size_t sound = 0;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const soundness_outcome& o = outcomes[i];
            bool entry_ok = proof_errors[i].empty() && !o.refuted;
            if (o.refuted) all_ok = false;
            if (entry_ok) ++sound;
            if (ss_json) {
                std::vector<std::string> standing;
                for (const formula& f : o.standing) standing.push_back(print(f));
                jentries.push_back({{"name", o.name},
                                    {"proof_ok", proof_errors[i].empty()},
                                    {"refuted", o.refuted},
                                    {"standing", standing},
                                    {"left_unsatisfiable", o.left_unsatisfiable}});
            } else {
                out << o.name << ": ";
                if (!proof_errors[i].empty())
                    out << proof_errors[i] << "\n";
                else if (o.refuted)
                    out << "REFUTED\n";
                else if (o.left_unsatisfiable)
                    out << "ok (left side unsatisfiable)\n";
                else
                    out << "ok (standing: " << print(o.standing.front()) << ")\n";
            }
        }
        if (ss_json) {
            out << nlohmann::json{{"format", 1},
                                  {"max_worlds", ss_worlds},
                                  {"entries", jentries},
                                  {"ok", all_ok}}
                       .dump()
                << "\n";
        } else {
            out << "corpus: " << sound << "/" << corpus.size() << " sound\n";
        }
        code = all_ok ? 0 : 1;
    });

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return code;
}

}  // namespace qml
