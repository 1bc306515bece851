#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "semitop/checker.hpp"
#include "semitop/model_io.hpp"
#include "semitop/simulator.hpp"
#include "semitop/theory.hpp"

namespace {

using namespace semitop;

Theory resolve_theory(const std::string &spec) {
  if (spec == "vote" || spec == "ThyVote" || spec == "bracha" || spec == "ThyBB" ||
      spec == "crusader" || spec == "ThyCA")
    return theory(spec);
  return load_theory_file(spec);
}

/// Built-in property/lemma suite for a theory, matched by name or, for
/// theories loaded from files, by their predicate signature.
std::optional<std::string> suite_name(const Theory &t) {
  if (t.name == "ThyVote" || t.name == "ThyBB" || t.name == "ThyCA") return t.name;
  std::set<std::string> preds(t.predicates.begin(), t.predicates.end());
  if (preds == std::set<std::string>{"observe", "vote"}) return "ThyVote";
  if (preds == std::set<std::string>{"broadcast", "deliver", "echo", "ready"}) return "ThyBB";
  if (preds == std::set<std::string>{"echo1", "echo2", "input", "output"}) return "ThyCA";
  return std::nullopt;
}

std::string report_summary(const Report &r) {
  std::ostringstream out;
  out << "model " << r.model_digest << "\n";
  for (const auto &v : r.axioms) out << "axiom " << v.name << (v.valid ? " ok" : " FAIL") << "\n";
  for (const auto &s : r.structural)
    out << "structural " << s.name << (s.holds ? " ok" : " FAIL") << "\n";
  for (const auto &v : r.properties)
    out << "property " << v.name << (v.valid ? " ok" : " FAIL") << "\n";
  for (const auto &v : r.lemmas) out << "lemma " << v.name << (v.valid ? " ok" : " FAIL") << "\n";
  out << (r.overall ? "overall ok" : "overall FAIL") << "\n";
  return out.str();
}

void print_report(const Report &r, bool json) {
  std::cout << (json ? report_to_text(r) : report_summary(r));
}

std::size_t parse_participant(const std::string &token) {
  std::string t = token;
  if (!t.empty() && t[0] == 'p') t = t.substr(1);
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("bad participant '" + token + "'");
  return std::stoul(t);
}

Protocol parse_protocol(const std::string &s) {
  if (s == "vote") return Protocol::Vote;
  if (s == "bracha") return Protocol::Bracha;
  if (s == "crusader") return Protocol::Crusader;
  throw std::invalid_argument("unknown protocol '" + s + "'");
}

Strategy parse_strategy(const std::string &s) {
  if (s == "conform") return Strategy::Conform;
  if (s == "equivocate") return Strategy::Equivocate;
  if (s == "silent") return Strategy::Silent;
  if (s == "random") return Strategy::Random;
  throw std::invalid_argument("unknown strategy '" + s + "'");
}

SearchMode parse_mode(const std::string &s) {
  if (s == "exhaustive") return SearchMode::Exhaustive;
  if (s == "random") return SearchMode::Random;
  if (s == "guided") return SearchMode::Guided;
  throw std::invalid_argument("unknown search mode '" + s + "'");
}

struct EvalOpts {
  std::string model, formula, at;
};

int cmd_eval(const EvalOpts &o) {
  Model m = load_model_file(o.model);
  Formula f = parse(o.formula);
  if (auto free = free_vars(f); !free.empty())
    throw std::invalid_argument("formula must be closed (unbound: " + *free.begin() + ")");
  bool all_valid = true;
  if (!o.at.empty()) {
    TV tv = denote(m, f, o.at);
    std::cout << to_string(tv) << "\n";
    all_valid = is_valid(tv);
  } else {
    for (std::size_t p = 0; p < m.points().size(); ++p) {
      TV tv = denote(m, f, p);
      std::cout << m.points()[p] << " " << to_string(tv) << "\n";
      all_valid = all_valid && is_valid(tv);
    }
  }
  return all_valid ? 0 : 1;
}

struct CheckOpts {
  std::string model, theory;
  bool properties = false, lemmas = false, json = false;
};

int cmd_check(const CheckOpts &o) {
  Model m = load_model_file(o.model);
  Theory t = resolve_theory(o.theory);
  Report r = check_theory(m, t);
  if (o.properties || o.lemmas) {
    std::optional<std::string> suite = suite_name(t);
    if (!suite)
      throw std::invalid_argument("no property suite known for theory '" + t.name + "'");
    if (o.properties) {
      Report pr = check_properties(m, properties(*suite));
      r.properties = std::move(pr.properties);
      r.overall = r.overall && pr.overall;
    }
    if (o.lemmas) {
      Report lr = check_properties(m, derived_lemmas(*suite));
      r.lemmas = std::move(lr.properties);
      r.overall = r.overall && lr.overall;
    }
  }
  print_report(r, o.json);
  return r.overall ? 0 : 1;
}

struct SimulateOpts {
  std::string protocol;
  std::size_t n = 4, quorum = 3, contraquorum = 2;
  int f = -1;
  std::vector<std::string> byzantine;
  std::string strategy = "conform";
  std::uint64_t seed = 0;
  std::vector<std::string> votes;
  std::size_t sender = 0;
  std::string sender_value = "u";
  std::vector<std::string> values = {"u", "w"};
  std::vector<std::string> inputs;
  std::size_t max_rounds = 0;
  bool single_output = false;
  std::string emit_model;
  bool check = false, json = false;
  bool n_set = false, quorum_set = false, contraquorum_set = false;
};

int cmd_simulate(const SimulateOpts &o) {
  RunConfig cfg;
  cfg.protocol = parse_protocol(o.protocol);
  cfg.n = o.n;
  cfg.quorum_size = o.quorum;
  cfg.contraquorum_size = o.contraquorum;
  if (o.f >= 0) {
    std::size_t f = static_cast<std::size_t>(o.f);
    if (!o.n_set) cfg.n = 3 * f + 1;
    if (!o.quorum_set) cfg.quorum_size = 2 * f + 1;
    if (!o.contraquorum_set) cfg.contraquorum_size = f + 1;
  }
  for (const std::string &tok : o.byzantine) cfg.byzantine.push_back(parse_participant(tok));
  cfg.strategy = parse_strategy(o.strategy);
  cfg.seed = o.seed;
  cfg.sender = o.sender;
  cfg.sender_value = o.sender_value;
  cfg.values = o.values;
  cfg.inputs = o.inputs;
  cfg.max_rounds = o.max_rounds;
  cfg.single_output = o.single_output;
  if (cfg.protocol == Protocol::Vote) {
    for (const std::string &v : o.votes) {
      if (v == "T" || v == "1")
        cfg.votes.push_back(true);
      else if (v == "F" || v == "0")
        cfg.votes.push_back(false);
      else
        throw std::invalid_argument("bad vote '" + v + "' (expected T/F)");
    }
  }

  Trace tr = run(cfg);
  Model m = extract_model(tr, cfg);
  if (!o.emit_model.empty()) save_model_file(m, o.emit_model);
  if (o.check) {
    const char *name = cfg.protocol == Protocol::Vote      ? "ThyVote"
                       : cfg.protocol == Protocol::Bracha ? "ThyBB"
                                                          : "ThyCA";
    Theory t = theory(name);
    Report r = check_theory(m, t);
    Report pr = check_properties(m, properties(name));
    r.properties = std::move(pr.properties);
    r.overall = r.overall && pr.overall;
    Report lr = check_properties(m, derived_lemmas(name));
    r.lemmas = std::move(lr.properties);
    r.overall = r.overall && lr.overall;
    print_report(r, o.json);
    return r.overall ? 0 : 1;
  }
  std::cout << trace_to_text(tr);
  return 0;
}

struct SearchOpts {
  std::string theory, property = "ALL", mode = "guided", mutate;
  std::uint64_t seed = 0, budget = 1000;
  std::size_t n = 4, quorum = 3, contraquorum = 2;
  std::vector<std::string> values;
};

int cmd_search(const SearchOpts &o) {
  Theory t = resolve_theory(o.theory);
  if (!o.mutate.empty()) {
    std::size_t eq = o.mutate.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--mutate-axiom expects NAME=FORMULA");
    t = with_axiom(t, o.mutate.substr(0, eq), parse(o.mutate.substr(eq + 1)));
  }
  std::optional<std::string> suite = suite_name(t);
  if (!suite) throw std::invalid_argument("no property suite known for theory '" + t.name + "'");
  std::vector<PropertySchema> props = properties(*suite);
  if (o.property != "ALL") {
    std::vector<PropertySchema> narrowed;
    for (auto &p : props)
      if (p.name == o.property) narrowed.push_back(std::move(p));
    if (narrowed.empty()) throw std::invalid_argument("unknown property '" + o.property + "'");
    props = std::move(narrowed);
  }

  SearchConfig cfg;
  cfg.mode = parse_mode(o.mode);
  cfg.seed = o.seed;
  cfg.budget = o.budget;
  cfg.space = Semitopology::from_threshold(o.n, o.quorum);
  cfg.values = o.values.empty() ? std::vector<std::string>{"u", "w"} : o.values;

  std::vector<ModelGenerator> gens;
  if (cfg.mode == SearchMode::Guided) {
    RunConfig base;
    base.n = o.n;
    base.quorum_size = o.quorum;
    base.contraquorum_size = o.contraquorum;
    if (*suite == "ThyVote") {
      base.protocol = Protocol::Vote;
      base.votes.assign(base.n, true);
    } else if (*suite == "ThyBB") {
      base.protocol = Protocol::Bracha;
      base.values = cfg.values;
      base.sender_value = base.values.front();
    } else {
      base.protocol = Protocol::Crusader;
      base.inputs.assign(base.n, "0");
    }
    gens = guided_generators(base);
  }

  std::optional<Model> found = search_counterexample(t, props, cfg, gens);
  if (!found) {
    std::cout << "no counterexample within budget " << o.budget << "\n";
    return 0;
  }
  std::cout << model_to_text(*found);
  return 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"three-valued logic over semitopologies: evaluate, check, simulate, search"};
  app.require_subcommand(1);

  EvalOpts eo;
  CLI::App *eval = app.add_subcommand("eval", "evaluate a formula in a model");
  eval->add_option("--model", eo.model, "model file")->required();
  eval->add_option("--formula", eo.formula, "formula text")->required();
  eval->add_option("--at", eo.at, "evaluate at a single point");

  CheckOpts co;
  CLI::App *check = app.add_subcommand("check", "check a model against a theory");
  check->add_option("--model", co.model, "model file")->required();
  check->add_option("--theory", co.theory, "vote|bracha|crusader or a theory file")->required();
  check->add_flag("--properties", co.properties, "also check the property suite");
  check->add_flag("--lemmas", co.lemmas, "also check the derived lemma suite");
  check->add_flag("--json", co.json, "print the full report as JSON");

  SimulateOpts so;
  CLI::App *sim = app.add_subcommand("simulate", "run a protocol and extract a model");
  sim->add_option("--protocol", so.protocol, "vote|bracha|crusader")->required();
  CLI::Option *n_opt = sim->add_option("--n", so.n, "participant count");
  CLI::Option *q_opt = sim->add_option("--quorum", so.quorum, "quorum size");
  CLI::Option *c_opt = sim->add_option("--contraquorum", so.contraquorum, "contraquorum size");
  sim->add_option("--f", so.f, "preset n=3f+1, quorum=2f+1, contraquorum=f+1");
  sim->add_option("--byzantine", so.byzantine, "byzantine participants, e.g. p2,p3")
      ->delimiter(',');
  sim->add_option("--strategy", so.strategy, "conform|equivocate|silent|random");
  sim->add_option("--seed", so.seed, "adversary seed");
  sim->add_option("--votes", so.votes, "vote: stances, e.g. T,T,T,F")->delimiter(',');
  sim->add_option("--sender", so.sender, "bracha: designated sender");
  sim->add_option("--sender-value", so.sender_value, "bracha: value to broadcast");
  sim->add_option("--values", so.values, "bracha: value universe")->delimiter(',');
  sim->add_option("--inputs", so.inputs, "crusader: inputs, e.g. 0,0,1,1")->delimiter(',');
  sim->add_option("--max-rounds", so.max_rounds, "round bound (0 = participants + 2)");
  sim->add_flag("--single-output", so.single_output, "crusader: stop at the first output");
  sim->add_option("--emit-model", so.emit_model, "write the extracted model to a file");
  sim->add_flag("--check", so.check, "check the extracted model against the protocol theory");
  sim->add_flag("--json", so.json, "print the check report as JSON");

  SearchOpts ro;
  CLI::App *search = app.add_subcommand("search", "search for a property countermodel");
  search->add_option("--theory", ro.theory, "vote|bracha|crusader or a theory file")->required();
  search->add_option("--property", ro.property, "property name or ALL");
  search->add_option("--mode", ro.mode, "exhaustive|random|guided");
  search->add_option("--seed", ro.seed, "search seed");
  search->add_option("--budget", ro.budget, "trial budget for random/guided modes");
  search->add_option("--mutate-axiom", ro.mutate, "swap one axiom, NAME=FORMULA");
  search->add_option("--n", ro.n, "space size for exhaustive/random/guided modes");
  search->add_option("--quorum", ro.quorum, "quorum threshold of the space");
  search->add_option("--contraquorum", ro.contraquorum, "contraquorum for guided runs");
  search->add_option("--values", ro.values, "value set when the theory does not fix one")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  so.n_set = n_opt->count() > 0;
  so.quorum_set = q_opt->count() > 0;
  so.contraquorum_set = c_opt->count() > 0;

  try {
    if (app.got_subcommand("eval")) return cmd_eval(eo);
    if (app.got_subcommand("check")) return cmd_check(co);
    if (app.got_subcommand("simulate")) return cmd_simulate(so);
    return cmd_search(ro);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
