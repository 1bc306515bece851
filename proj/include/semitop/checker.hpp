#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "model.hpp"
#include "model_io.hpp"
#include "print.hpp"
#include "theory.hpp"

namespace semitop {

/// One closed instance of a schema: its printed form, its denotation at every
/// point of the model, and whether it is valid (T or B) at all of them.
struct InstanceVerdict {
  std::string formula;
  std::vector<TV> per_point;
  bool valid = false;
};

/// Outcome for a whole schema. `valid` respects the polarity: a must-be-valid
/// schema needs every instance valid, a must-be-invalid schema needs every
/// instance to fail validity somewhere.
struct Verdict {
  std::string name;
  Polarity polarity = Polarity::MustBeValid;
  std::vector<InstanceVerdict> instances;
  bool valid = false;
};

struct StructuralVerdict {
  std::string name;
  std::size_t twined = 0;
  bool holds = false;
};

struct Report {
  std::string model_digest;
  std::vector<Verdict> axioms;
  std::vector<StructuralVerdict> structural;
  std::vector<Verdict> properties;
  std::vector<Verdict> lemmas;
  bool overall = true;
};

inline Verdict check_schema(const Model &m, const std::string &name, const Formula &f,
                            const Domains &domains, Polarity polarity) {
  Verdict v;
  v.name = name;
  v.polarity = polarity;
  v.valid = true;
  for (const Formula &inst : universal_closure_instances(m, f, domains)) {
    InstanceVerdict iv;
    iv.formula = to_string(inst);
    iv.valid = true;
    iv.per_point.reserve(m.points().size());
    for (std::size_t p = 0; p < m.points().size(); ++p) {
      TV tv = denote(m, inst, p);
      iv.per_point.push_back(tv);
      if (!is_valid(tv)) iv.valid = false;
    }
    if ((polarity == Polarity::MustBeValid) != iv.valid) v.valid = false;
    v.instances.push_back(std::move(iv));
  }
  return v;
}

inline Report check_theory(const Model &m, const Theory &t) {
  if (auto why = profile_mismatch(t, m)) throw std::invalid_argument(*why);
  for (const std::string &pred : t.predicates)
    if (!m.has_pred(pred))
      throw std::invalid_argument("model does not declare predicate '" + pred + "'");
  Report r;
  r.model_digest = model_digest(m);
  for (const AxiomSchema &ax : t.axioms) {
    if (ax.kind == SchemaKind::Structural) {
      StructuralVerdict sv;
      sv.name = ax.name;
      sv.twined = ax.twined;
      sv.holds = m.space().is_n_twined(ax.twined);
      if (!sv.holds) r.overall = false;
      r.structural.push_back(std::move(sv));
    } else {
      Verdict v = check_schema(m, ax.name, ax.formula, ax.domains, Polarity::MustBeValid);
      if (!v.valid) r.overall = false;
      r.axioms.push_back(std::move(v));
    }
  }
  return r;
}

inline Report check_properties(const Model &m, const std::vector<PropertySchema> &props) {
  Report r;
  r.model_digest = model_digest(m);
  for (const PropertySchema &p : props) {
    Verdict v = check_schema(m, p.name, p.formula, p.domains, p.polarity);
    if (!v.valid) r.overall = false;
    r.properties.push_back(std::move(v));
  }
  return r;
}

/// Axiom check without verdict bookkeeping; short-circuits on first failure.
inline bool is_model_of(const Model &m, const Theory &t) {
  for (const AxiomSchema &ax : t.axioms) {
    if (ax.kind == SchemaKind::Structural) {
      if (!m.space().is_n_twined(ax.twined)) return false;
    } else {
      for (const Formula &inst : universal_closure_instances(m, ax.formula, ax.domains))
        if (!is_valid_in_model(m, inst)) return false;
    }
  }
  return true;
}

/// True when some instance of some schema fails its polarity on m.
inline bool violates_properties(const Model &m, const std::vector<PropertySchema> &props) {
  for (const PropertySchema &p : props)
    for (const Formula &inst : universal_closure_instances(m, p.formula, p.domains))
      if ((p.polarity == Polarity::MustBeValid) != is_valid_in_model(m, inst)) return true;
  return false;
}

inline nlohmann::ordered_json verdict_to_json(const Verdict &v) {
  nlohmann::ordered_json insts = nlohmann::ordered_json::array();
  for (const InstanceVerdict &iv : v.instances) {
    nlohmann::ordered_json pts = nlohmann::ordered_json::array();
    for (TV tv : iv.per_point) pts.push_back(to_string(tv));
    insts.push_back({{"formula", iv.formula}, {"per_point", pts}, {"valid", iv.valid}});
  }
  return {{"name", v.name},
          {"polarity", v.polarity == Polarity::MustBeValid ? "must-be-valid" : "must-be-invalid"},
          {"valid", v.valid},
          {"instances", insts}};
}

inline nlohmann::ordered_json report_to_json(const Report &r) {
  auto verdicts = [](const std::vector<Verdict> &vs) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const Verdict &v : vs) arr.push_back(verdict_to_json(v));
    return arr;
  };
  auto passed = [](const std::vector<Verdict> &vs) {
    return std::count_if(vs.begin(), vs.end(), [](const Verdict &v) { return v.valid; });
  };
  nlohmann::ordered_json structural = nlohmann::ordered_json::array();
  long structural_passed = 0;
  for (const StructuralVerdict &sv : r.structural) {
    structural.push_back({{"name", sv.name}, {"twined", sv.twined}, {"holds", sv.holds}});
    if (sv.holds) ++structural_passed;
  }
  nlohmann::ordered_json j;
  j["model"] = r.model_digest;
  j["axioms"] = verdicts(r.axioms);
  j["structural"] = structural;
  j["properties"] = verdicts(r.properties);
  j["lemmas"] = verdicts(r.lemmas);
  j["summary"] = {{"axioms_passed", passed(r.axioms)},
                  {"axioms_total", r.axioms.size()},
                  {"structural_passed", structural_passed},
                  {"structural_total", r.structural.size()},
                  {"properties_passed", passed(r.properties)},
                  {"properties_total", r.properties.size()},
                  {"lemmas_passed", passed(r.lemmas)},
                  {"lemmas_total", r.lemmas.size()},
                  {"overall", r.overall}};
  return j;
}

inline std::string report_to_text(const Report &r) { return report_to_json(r).dump(2) + "\n"; }

/// Enumeration ceiling: how many models an exhaustive pass may touch.
/// SEMITOP_CAP overrides the desk-scale default.
inline std::uint64_t default_cap() {
  if (const char *env = std::getenv("SEMITOP_CAP")) {
    char *end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0)
      throw std::invalid_argument("SEMITOP_CAP must be a positive integer");
    return v;
  }
  return 10'000'000;
}

inline std::vector<std::string> default_point_names(std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back("p" + std::to_string(i));
  return out;
}

/// Visit every interpretation of `preds` over the space and value set, in
/// lexicographic base-3 order (predicates sorted by name, then point order,
/// then value order; digit order F < B < T). With a filter, only models of
/// the theory reach `visit`. Returns the number of models visited; `visit`
/// may stop the stream early by returning false.
inline std::uint64_t enumerate_models(const Semitopology &space,
                                      const std::vector<std::string> &values,
                                      const std::vector<std::string> &preds,
                                      const Theory *filter, std::uint64_t cap,
                                      const std::function<bool(const Model &)> &visit) {
  if (values.empty()) throw std::invalid_argument("enumeration needs at least one value");
  if (preds.empty()) throw std::invalid_argument("enumeration needs at least one predicate");
  std::vector<std::string> names = preds;
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  const std::size_t cells = space.point_count() * values.size() * names.size();
  std::uint64_t size = 1;
  bool saturated = false;
  for (std::size_t i = 0; i < cells; ++i) {
    if (size > std::numeric_limits<std::uint64_t>::max() / 3) {
      saturated = true;
      break;
    }
    size *= 3;
  }
  if (saturated || size > cap)
    throw std::invalid_argument(
        "enumeration needs " +
        (saturated ? "3^" + std::to_string(cells) : std::to_string(size)) +
        " models but the cap allows " + std::to_string(cap));

  const std::vector<std::string> points = default_point_names(space.point_count());
  std::vector<unsigned char> digit(cells, 0);
  std::uint64_t visited = 0;
  while (true) {
    Model m(values, points, space);
    std::size_t c = 0;
    for (const std::string &pred : names) {
      m.declare(pred);
      for (std::size_t p = 0; p < points.size(); ++p)
        for (std::size_t v = 0; v < values.size(); ++v)
          m.set(pred, p, v, static_cast<TV>(digit[c++]));
    }
    if (!filter || is_model_of(m, *filter)) {
      ++visited;
      if (!visit(m)) return visited;
    }
    std::size_t i = cells;
    while (i > 0 && ++digit[i - 1] == 3) digit[--i] = 0;
    if (i == 0) break;
  }
  return visited;
}

struct EntailmentVerdict {
  bool passes = false;
  bool vacuous = false; // no model of the theory exists in the space
  std::uint64_t models_of_theory = 0;
  std::string violated; // first failing schema, when not passing
  std::optional<Model> countermodel;
};

/// Exhaustive entailment: every model of t in the space satisfies the
/// properties. The whole space is always swept so models_of_theory is exact;
/// the first violation encountered is the one reported.
inline EntailmentVerdict verify_entailment(const Semitopology &space,
                                           const std::vector<std::string> &values,
                                           const Theory &t,
                                           const std::vector<PropertySchema> &props,
                                           std::uint64_t cap = default_cap()) {
  EntailmentVerdict out;
  out.passes = true;
  enumerate_models(space, values, t.predicates, &t, cap, [&](const Model &m) {
    ++out.models_of_theory;
    if (out.passes) {
      for (const PropertySchema &p : props) {
        bool ok = true;
        for (const Formula &inst : universal_closure_instances(m, p.formula, p.domains))
          if ((p.polarity == Polarity::MustBeValid) != is_valid_in_model(m, inst)) {
            ok = false;
            break;
          }
        if (!ok) {
          out.passes = false;
          out.violated = p.name;
          out.countermodel = m;
          break;
        }
      }
    }
    return true;
  });
  out.vacuous = out.models_of_theory == 0;
  return out;
}

enum class SearchMode { Exhaustive, Random, Guided };

/// Draws one candidate model from the shared search generator stream.
using ModelGenerator = std::function<Model(std::mt19937_64 &)>;

struct SearchConfig {
  SearchMode mode = SearchMode::Exhaustive;
  std::uint64_t seed = 0;
  std::uint64_t budget = 1000;
  std::uint64_t cap = default_cap();
  // Space and value set for the exhaustive and random modes. A theory with a
  // required value profile overrides `values`.
  std::optional<Semitopology> space;
  std::vector<std::string> values;
};

/// Find a model of t that violates some property, or nothing within budget.
/// Exhaustion is a normal outcome. Runs are reproducible from the seed.
inline std::optional<Model> search_counterexample(const Theory &t,
                                                  const std::vector<PropertySchema> &props,
                                                  const SearchConfig &cfg,
                                                  const std::vector<ModelGenerator> &generators = {}) {
  const std::vector<std::string> &values =
      t.required_values ? *t.required_values : cfg.values;
  if (cfg.mode == SearchMode::Exhaustive) {
    if (!cfg.space) throw std::invalid_argument("exhaustive search needs a space");
    std::optional<Model> found;
    enumerate_models(*cfg.space, values, t.predicates, &t, cfg.cap, [&](const Model &m) {
      if (violates_properties(m, props)) {
        found = m;
        return false;
      }
      return true;
    });
    return found;
  }
  std::mt19937_64 rng(cfg.seed);
  if (cfg.mode == SearchMode::Random) {
    if (!cfg.space) throw std::invalid_argument("random search needs a space");
    const std::vector<std::string> points = default_point_names(cfg.space->point_count());
    for (std::uint64_t trial = 0; trial < cfg.budget; ++trial) {
      Model m(values, points, *cfg.space);
      for (const std::string &pred : t.predicates) {
        m.declare(pred);
        for (std::size_t p = 0; p < points.size(); ++p)
          for (std::size_t v = 0; v < values.size(); ++v)
            m.set(pred, p, v, static_cast<TV>(rng() % 3));
      }
      if (is_model_of(m, t) && violates_properties(m, props)) return m;
    }
    return std::nullopt;
  }
  if (generators.empty()) throw std::invalid_argument("guided search needs generators");
  for (std::uint64_t trial = 0; trial < cfg.budget; ++trial) {
    Model m = generators[trial % generators.size()](rng);
    if (profile_mismatch(t, m)) continue;
    bool declared = true;
    for (const std::string &pred : t.predicates)
      if (!m.has_pred(pred)) declared = false;
    if (!declared) continue;
    if (is_model_of(m, t) && violates_properties(m, props)) return m;
  }
  return std::nullopt;
}

} // namespace semitop
