#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "random_formula.hpp"
#include "semitop/checker.hpp"
#include "semitop/simulator.hpp"

using namespace semitop;

namespace {

constexpr TV T = TV::T, B = TV::B, F = TV::F;
constexpr TV kRef[3] = {T, B, F};

std::string fixture(const std::string &name) { return std::string(SEMITOP_FIXTURES) + "/" + name; }

// Criterion 1: every entry of the five binary tables and six unary tables.
bool truth_tables() {
  struct Bin {
    TV (*fn)(TV, TV);
    TV rows[3][3];
  };
  const Bin bins[] = {
      {tv_and, {{T, B, F}, {B, B, F}, {F, F, F}}},
      {tv_or, {{T, T, T}, {T, B, B}, {T, B, F}}},
      {weak_imp, {{T, B, F}, {T, B, B}, {T, T, T}}},
      {strong_imp, {{T, F, F}, {T, B, B}, {T, T, T}}},
      {tv_iff, {{T, F, F}, {F, T, F}, {F, F, T}}},
  };
  struct Un {
    TV (*fn)(TV);
    TV out[3];
  };
  const Un uns[] = {
      {tv_neg, {F, B, T}},  {mod_t, {T, F, F}},  {mod_b, {F, T, F}},
      {mod_f, {F, F, T}},   {mod_tb, {T, T, F}}, {mod_tf, {T, F, T}},
  };
  bool ok = true;
  int binary = 0, unary = 0;
  for (const auto &tab : bins)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j, ++binary) ok = ok && tab.fn(kRef[i], kRef[j]) == tab.rows[i][j];
  for (const auto &tab : uns)
    for (int i = 0; i < 3; ++i, ++unary) ok = ok && tab.fn(kRef[i]) == tab.out[i];
  return ok && binary == 45 && unary == 18;
}

// Criterion 2: kernel laws, exhaustive over one- and two-argument grids.
bool kernel_laws() {
  bool ok = true;
  for (TV a : all_tv) {
    ok = ok && is_valid(tv_or(a, tv_neg(a)));
    ok = ok && (is_valid(tv_and(a, tv_neg(a))) == (a == B));
    ok = ok && mod_tf(a) == tv_or(mod_t(a), mod_f(a));
    ok = ok && tv_neg(mod_t(tv_neg(a))) == mod_tb(a);
  }
  for (TV a : all_tv)
    for (TV b : all_tv) {
      ok = ok && (is_valid(weak_imp(a, b)) == (a != T || is_valid(b)));
      ok = ok && (is_valid(strong_imp(a, b)) == (a != T || b == T));
      ok = ok && tv_neg(tv_and(a, b)) == tv_or(tv_neg(a), tv_neg(b));
      ok = ok && tv_neg(tv_or(a, b)) == tv_and(tv_neg(a), tv_neg(b));
      ok = ok && (is_valid(strong_imp(a, b)) ==
                  is_valid(strong_imp(mod_tb(tv_neg(b)), mod_tb(tv_neg(a)))));
      ok = ok && weak_imp(a, b) == tv_or(tv_neg(a), b);
      ok = ok && strong_imp(a, b) == weak_imp(a, mod_t(b));
      ok = ok && tv_xor(a, b) == tv_or(tv_and(a, tv_neg(b)), tv_and(tv_neg(a), b));
      TV agree = tv_or(tv_or(tv_and(mod_t(a), mod_t(b)), tv_and(mod_b(a), mod_b(b))),
                       tv_and(mod_f(a), mod_f(b)));
      ok = ok && tv_iff(a, b) == agree;
    }
  return ok;
}

std::vector<std::vector<TV>> all_predicates(std::size_t n) {
  std::vector<std::vector<TV>> out;
  std::vector<TV> f(n, F);
  while (true) {
    out.push_back(f);
    std::size_t i = n;
    while (i > 0) {
      if (f[i - 1] == F) {
        f[i - 1] = B;
        break;
      }
      if (f[i - 1] == B) {
        f[i - 1] = T;
        break;
      }
      f[--i] = F;
    }
    if (i == 0) break;
  }
  return out;
}

// Criterion 3: modal inequalities over every predicate pair, and the
// violation witness on a space that is not 3-twined.
bool lattice_modal_lemmas() {
  Semitopology s3 = Semitopology::from_threshold(4, 3);
  bool ok = s3.is_n_twined(3);
  std::vector<std::vector<TV>> preds = all_predicates(4);
  ok = ok && preds.size() == 81;
  for (const auto &f : preds) {
    auto fp = [&f](std::size_t p) { return f[p]; };
    for (const auto &g : preds) {
      auto gp = [&g](std::size_t p) { return g[p]; };
      auto fg = [&](std::size_t p) { return tv_and(f[p], g[p]); };
      auto f_or_g = [&](std::size_t p) { return tv_or(f[p], g[p]); };
      ok = ok && leq(tv_and(s3.everywhere(fp), s3.quorum(gp)), s3.quorum(fg));
      ok = ok && leq(tv_and(s3.quorum(fp), s3.contraquorum(gp)), s3.somewhere(fg));
      ok = ok && leq(tv_and(s3.quorum(fp), s3.quorum(gp)), s3.contraquorum(fg));
      ok = ok && leq(s3.quorum(f_or_g), tv_or(s3.contraquorum(fp), s3.contraquorum(gp)));
      if (!ok) return false;
    }
  }
  Semitopology s2 = Semitopology::from_threshold(4, 2);
  ok = ok && !s2.is_n_twined(3);
  bool violated = false;
  for (const auto &f : preds) {
    for (const auto &g : preds) {
      auto fg = [&](std::size_t p) { return tv_and(f[p], g[p]); };
      if (!leq(tv_and(s2.quorum([&f](std::size_t p) { return f[p]; }),
                      s2.quorum([&g](std::size_t p) { return g[p]; })),
               s2.contraquorum(fg))) {
        violated = true;
        break;
      }
    }
    if (violated) break;
  }
  return ok && violated;
}

// Criterion 4: existence-quantifier characterizations over all maps from a
// three-value set into the lattice, plus the frozen single-point cases.
bool quantifier_characterizations() {
  Model m({"v0", "v1", "v2"}, {"p0"}, Semitopology(1, {{0}}));
  m.declare("echo");
  Formula e = parse("exists a. echo(a)");
  Formula e01 = parse("exists01 a. echo(a)");
  Formula e1 = parse("exists1 a. echo(a)");
  bool ok = true;
  for (int code = 0; code < 27; ++code) {
    std::array<TV, 3> f{};
    int rest = code, ts = 0, bs = 0;
    for (std::size_t v = 0; v < 3; ++v, rest /= 3) {
      f[v] = kRef[2 - rest % 3];
      ts += f[v] == T;
      bs += f[v] == B;
      m.set("echo", 0, v, f[v]);
    }
    TV de = denote(m, e, 0), de01 = denote(m, e01, 0), de1 = denote(m, e1, 0);
    ok = ok && de == fold_or(f);
    ok = ok && (is_valid(de01) == (ts <= 1));
    ok = ok && (is_valid(de1) == (is_valid(de) && is_valid(de01)));
    ok = ok && ((de01 == T) == ((ts <= 1 && bs == 0) || (ts == 0 && bs == 1)));
    ok = ok && ((de1 == T) == (ts == 1 && bs == 0));
  }
  struct Case {
    std::array<TV, 3> f;
    TV e01, e1;
  };
  const Case cases[] = {
      {{T, T, F}, F, F}, {{T, F, F}, T, T}, {{T, B, F}, B, B}, {{B, F, F}, T, B},
      {{B, B, F}, B, B}, {{B, B, B}, B, B}, {{F, F, F}, T, F},
  };
  for (const auto &c : cases) {
    for (std::size_t v = 0; v < 3; ++v) m.set("echo", 0, v, c.f[v]);
    ok = ok && denote(m, e01, 0) == c.e01 && denote(m, e1, 0) == c.e1;
  }
  return ok;
}

// Criterion 5: the exhaustive voting oracle and the drop-Correct control.
bool voting_entailment() {
  Semitopology space = Semitopology::from_threshold(4, 3);
  std::vector<std::string> values{"u"};
  Theory t = theory("ThyVote");
  std::vector<PropertySchema> suite = properties("ThyVote");
  for (PropertySchema &lem : derived_lemmas("ThyVote")) suite.push_back(std::move(lem));
  EntailmentVerdict full = verify_entailment(space, values, t, suite);
  bool ok = full.passes && !full.vacuous && full.models_of_theory > 0;

  Theory reduced = t;
  std::erase_if(reduced.axioms, [](const AxiomSchema &a) { return a.name == "Correct"; });
  EntailmentVerdict broken = verify_entailment(space, values, reduced, properties("ThyVote"));
  ok = ok && !broken.passes && broken.violated == "Agreement" && broken.countermodel.has_value();
  if (broken.countermodel) {
    ok = ok && is_model_of(*broken.countermodel, reduced);
    ok = ok && !is_model_of(*broken.countermodel, t);
    ok = ok && violates_properties(*broken.countermodel, properties("ThyVote"));
  }
  return ok;
}

// Criterion 6: the seeded adversarial grid keeps every broadcast run inside
// the theory, its property suite, and its derived lemmas.
bool bracha_loop_closure() {
  const Theory t = theory("ThyBB");
  const std::vector<PropertySchema> props = properties("ThyBB");
  const Strategy strategies[] = {Strategy::Conform, Strategy::Equivocate, Strategy::Silent,
                                 Strategy::Random};
  bool ok = true;
  for (std::size_t idx = 0; idx < 500; ++idx) {
    std::size_t cell = idx % 16;
    RunConfig cfg;
    cfg.protocol = Protocol::Bracha;
    cfg.n = 4;
    cfg.quorum_size = 3;
    cfg.contraquorum_size = 2;
    cfg.byzantine = {3};
    cfg.strategy = strategies[cell % 4];
    cfg.sender = (cell / 4) % 2 ? 3 : 0;
    cfg.values = (cell / 8) % 2 ? std::vector<std::string>{"u", "w", "x"}
                                : std::vector<std::string>{"u", "w"};
    cfg.sender_value = "u";
    cfg.seed = idx;
    Trace tr = run(cfg);
    ok = ok && !tr.hit_round_bound;
    Report r = run_and_check(cfg, t, props);
    ok = ok && r.overall && r.axioms.size() == 12 && r.structural.size() == 1 &&
         r.properties.size() == 5 && r.lemmas.size() == 10;
    if (!ok) return false;
  }
  return ok;
}

// Criterion 7: the weakened ready rule admits the reviewed countermodel and
// guided search rediscovers one; the unmodified theory survives bounded
// exhaustive sweeps.
bool bracha_negative_control() {
  Theory weak_file = load_theory_file(fixture("bracha_weak_ready.theory"));
  Model counter = load_model_file(fixture("bracha_weak_ready_counter.json"));
  bool ok = is_model_of(counter, weak_file) && !is_model_of(counter, theory("ThyBB"));
  Report pr = check_properties(counter, properties("ThyBB"));
  for (const Verdict &v : pr.properties) {
    if (v.name == "BrIntegrity" || v.name == "BrConsistency") ok = ok && !v.valid;
    if (v.name == "BrValidity" || v.name == "BrTotality") ok = ok && v.valid;
  }

  Theory weak = with_axiom(theory("ThyBB"), "BrReady?",
                           parse("ready(a) -> [Q] echo(a) | [C] ready(a)"));
  RunConfig base;
  base.protocol = Protocol::Bracha;
  base.n = 4;
  base.quorum_size = 3;
  base.contraquorum_size = 2;
  SearchConfig scfg;
  scfg.mode = SearchMode::Guided;
  scfg.seed = 0;
  scfg.budget = 10000;
  std::optional<Model> found =
      search_counterexample(weak, properties("ThyBB"), scfg, guided_generators(base));
  ok = ok && found.has_value();
  if (found) ok = ok && is_model_of(*found, weak) && violates_properties(*found, properties("ThyBB"));

  EntailmentVerdict tiny = verify_entailment(Semitopology::from_threshold(1, 1), {"u", "w"},
                                             theory("ThyBB"), properties("ThyBB"), 10000);
  EntailmentVerdict pair = verify_entailment(Semitopology::from_threshold(2, 2), {"u"},
                                             theory("ThyBB"), properties("ThyBB"), 10000);
  return ok && tiny.passes && pair.passes;
}

// Criterion 8: the crusader grid, including the echo2-half impossibility.
bool crusader_loop_closure() {
  const Theory t = theory("ThyCA");
  const std::vector<PropertySchema> props = properties("ThyCA");
  const Strategy strategies[] = {Strategy::Conform, Strategy::Equivocate, Strategy::Silent,
                                 Strategy::Random};
  bool ok = true;
  std::size_t idx = 0;
  for (const char *pattern : {"0000", "1111", "0001", "0011", "0101"})
    for (bool with_byz : {false, true})
      for (Strategy s : strategies) {
        RunConfig cfg;
        cfg.protocol = Protocol::Crusader;
        cfg.n = 4;
        cfg.quorum_size = 3;
        cfg.contraquorum_size = 2;
        for (const char *p = pattern; *p; ++p) cfg.inputs.push_back(std::string(1, *p));
        if (with_byz) cfg.byzantine = {3};
        cfg.strategy = s;
        cfg.seed = idx++;
        Trace tr = run(cfg);
        ok = ok && !tr.hit_round_bound;
        Report r = run_and_check(cfg, t, props);
        ok = ok && r.overall && r.axioms.size() == 12 && r.properties.size() == 4 &&
             r.lemmas.size() == 16;
        bool half_rule = false;
        for (const Verdict &v : r.lemmas)
          if (v.name == "LemEcho2HalfImpossible") half_rule = v.valid;
        ok = ok && half_rule;
        if (!ok) return false;
      }
  return ok;
}

// Criterion 9: the split-input run satisfies the theory while refusing a
// single-valued output reading, with one point holding half and 1 together.
bool split_input_witness() {
  RunConfig cfg;
  cfg.protocol = Protocol::Crusader;
  cfg.n = 4;
  cfg.quorum_size = 3;
  cfg.contraquorum_size = 2;
  cfg.inputs = {"0", "0", "1", "1"};
  Model m = extract_model(run(cfg), cfg);
  bool ok = is_model_of(m, theory("ThyCA"));
  Formula single = parse("exists01 a. output(a)");
  bool single_valid = true;
  for (std::size_t p = 0; p < 4; ++p) single_valid = single_valid && is_valid(denote(m, single, p));
  ok = ok && !single_valid;
  Formula both = parse("%T (output('half) & output('1))");
  bool witness = false;
  for (std::size_t p = 0; p < 4; ++p) witness = witness || denote(m, both, p) == T;
  return ok && witness;
}

// Criterion 10: determinism of reports and traces, print/parse identity, and
// canonical model round-trips, including through a file.
bool determinism_and_round_trips() {
  RunConfig cfg;
  cfg.protocol = Protocol::Bracha;
  cfg.n = 4;
  cfg.quorum_size = 3;
  cfg.contraquorum_size = 2;
  cfg.byzantine = {3};
  cfg.sender = 3;
  cfg.strategy = Strategy::Random;
  cfg.seed = 5;
  Report a = run_and_check(cfg, theory("ThyBB"), properties("ThyBB"));
  Report b = run_and_check(cfg, theory("ThyBB"), properties("ThyBB"));
  bool ok = report_to_text(a) == report_to_text(b);
  ok = ok && trace_to_text(run(cfg)) == trace_to_text(run(cfg));

  std::mt19937_64 rng(2026);
  for (int i = 0; i < 10000; ++i) {
    Formula f = random_formula(rng, 6);
    std::string s = to_string(f);
    if (to_string(parse(s)) != s) return false;
  }

  Model extracted = extract_model(run(cfg), cfg);
  for (const Model &m : {load_model_file(fixture("bracha_weak_ready_counter.json")), extracted}) {
    std::string text = model_to_text(m);
    if (model_to_text(model_from_text(text)) != text) return false;
  }
  const std::string path = "acceptance_roundtrip.json";
  save_model_file(extracted, path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ok && ss.str() == model_to_text(extracted);
}

} // namespace

int main() {
  struct Criterion {
    int number;
    const char *what;
    double budget_ms;
    bool (*check)();
  };
  const Criterion criteria[] = {
      {1, "truth tables: 45 binary and 18 unary entries", 1000, truth_tables},
      {2, "kernel laws: modus ponens, excluded middle, paraconsistency, dualities", 1000,
       kernel_laws},
      {3, "lattice-modal lemmas over 81x81 predicate pairs; non-3-twined violation", 5000,
       lattice_modal_lemmas},
      {4, "quantifier characterizations over all 27 single-point maps", 1000,
       quantifier_characterizations},
      {5, "voting entailment: exhaustive 6561-model sweep and drop-Correct countermodel", 10000,
       voting_entailment},
      {6, "broadcast loop closure: 500 seeded adversarial runs", 30000, bracha_loop_closure},
      {7, "broadcast negative control: weakened ready rule, guided rediscovery, bounded sweeps",
       60000, bracha_negative_control},
      {8, "crusader loop closure: seeded runs over inputs, faults, strategies", 30000,
       crusader_loop_closure},
      {9, "split-input witness: half and 1 outputs coexist, no single-valued reading", 5000,
       split_input_witness},
      {10, "determinism: reports, print-parse identity, model round-trips", 30000,
       determinism_and_round_trips},
  };
  int failed = 0;
  for (const Criterion &c : criteria) {
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string note;
    try {
      ok = c.check();
    } catch (const std::exception &e) {
      note = std::string(" (") + e.what() + ")";
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count();
    if (ms >= c.budget_ms) {
      ok = false;
      note += " (over budget)";
    }
    if (!ok) ++failed;
    std::printf("[%s] criterion %d: %s%s [%.0f ms]\n", ok ? "PASS" : "FAIL", c.number, c.what,
                note.c_str(), ms);
  }
  return failed ? 1 : 0;
}
