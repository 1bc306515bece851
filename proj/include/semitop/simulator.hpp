#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "checker.hpp"
#include "model.hpp"
#include "model_io.hpp"
#include "theory.hpp"

namespace semitop {

enum class Protocol { Vote, Bracha, Crusader };
enum class Strategy { Conform, Equivocate, Silent, Random };

struct RunConfig {
  Protocol protocol = Protocol::Vote;
  std::size_t n = 4;
  std::size_t quorum_size = 3;
  std::size_t contraquorum_size = 2;
  std::vector<std::size_t> byzantine;
  Strategy strategy = Strategy::Conform;
  std::uint64_t seed = 0;
  // vote: each participant's stance on the single ballot value
  std::vector<bool> votes;
  // bracha
  std::size_t sender = 0;
  std::string sender_value = "u";
  std::vector<std::string> values = {"u", "w"};
  // crusader: per-participant inputs, each "0" or "1"
  std::vector<std::string> inputs;
  std::size_t max_rounds = 0; // 0 means n + 2
  // crusader: emit only the first output trigger instead of all of them
  bool single_output = false;
};

/// Value set of the extracted model.
inline std::vector<std::string> protocol_values(const RunConfig &cfg) {
  switch (cfg.protocol) {
    case Protocol::Vote: return {"u"};
    case Protocol::Bracha: return cfg.values;
    case Protocol::Crusader: return {"0", "1", "half"};
  }
  return {};
}

/// Value universe messages draw from (votes are yes/no rather than ballots).
inline std::vector<std::string> message_values(const RunConfig &cfg) {
  switch (cfg.protocol) {
    case Protocol::Vote: return {"T", "F"};
    case Protocol::Bracha: return cfg.values;
    case Protocol::Crusader: return {"0", "1", "half"};
  }
  return {};
}

inline void validate(const RunConfig &cfg) {
  auto fail = [](const std::string &why) { throw std::invalid_argument(why); };
  if (cfg.n == 0) fail("need at least one participant");
  if (cfg.quorum_size < 1 || cfg.quorum_size > cfg.n) fail("quorum size out of range");
  if (cfg.contraquorum_size < 1 || cfg.contraquorum_size > cfg.n)
    fail("contraquorum size out of range");
  std::set<std::size_t> byz(cfg.byzantine.begin(), cfg.byzantine.end());
  if (byz.size() != cfg.byzantine.size()) fail("duplicate byzantine participant");
  for (std::size_t id : byz)
    if (id >= cfg.n) fail("byzantine participant out of range");
  if (byz.size() > cfg.n - cfg.quorum_size)
    fail("too many byzantine participants: no honest quorum remains");
  switch (cfg.protocol) {
    case Protocol::Vote:
      if (cfg.votes.size() != cfg.n) fail("need one vote per participant");
      break;
    case Protocol::Bracha: {
      if (cfg.sender >= cfg.n) fail("sender out of range");
      if (cfg.values.empty()) fail("need at least one broadcast value");
      std::set<std::string> uniq(cfg.values.begin(), cfg.values.end());
      if (uniq.size() != cfg.values.size()) fail("duplicate broadcast value");
      if (!uniq.count(cfg.sender_value)) fail("sender value not in the value set");
      break;
    }
    case Protocol::Crusader:
      if (cfg.inputs.size() != cfg.n) fail("need one input per participant");
      for (const std::string &in : cfg.inputs)
        if (in != "0" && in != "1") fail("crusader inputs must be 0 or 1");
      break;
  }
}

struct Message {
  std::size_t from = 0;
  std::size_t to = 0;
  std::string tag;
  std::string value;
};

struct Event {
  std::string tag;
  std::string value;
};

struct Trace {
  std::vector<std::vector<Message>> rounds;
  std::vector<std::vector<Event>> events;     // per participant, emission order
  std::vector<std::set<std::string>> outputs; // deliveries / outputs / observations
  bool hit_round_bound = false;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

inline std::uint64_t adversary_hash(std::uint64_t seed, std::size_t round, std::size_t from,
                                    std::size_t to, const std::string &tag) {
  std::uint64_t h = mix64(seed ^ 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ round);
  h = mix64(h ^ (std::uint64_t(from) << 20));
  h = mix64(h ^ (std::uint64_t(to) << 40));
  return mix64(h ^ fnv1a64(tag));
}

/// Value a byzantine sender puts on the wire in place of the honest one;
/// nothing when the strategy drops the message.
inline std::optional<std::string> twist(const RunConfig &cfg,
                                        const std::vector<std::string> &universe,
                                        std::size_t round, std::size_t from, std::size_t to,
                                        const std::string &tag, const std::string &honest) {
  switch (cfg.strategy) {
    case Strategy::Conform: return honest;
    case Strategy::Silent: return std::nullopt;
    case Strategy::Equivocate: {
      // True value to the first half of the recipients, the cyclically next
      // value (the flipped stance, for votes) to the rest.
      if (to < (cfg.n + 1) / 2) return honest;
      if (cfg.protocol == Protocol::Vote) return honest == "T" ? "F" : "T";
      auto it = std::find(universe.begin(), universe.end(), honest);
      std::size_t i = it == universe.end() ? 0 : std::size_t(it - universe.begin());
      return universe[(i + 1) % universe.size()];
    }
    case Strategy::Random:
      return universe[adversary_hash(cfg.seed, round, from, to, tag) % universe.size()];
  }
  return honest;
}

struct View {
  // Distinct senders per (tag, value), from strictly earlier rounds.
  std::map<std::string, std::map<std::string, std::set<std::size_t>>> seen;
  // First arrival (round, sender) per (tag, value), in arrival order.
  std::map<std::string, std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>>>
      arrivals;

  std::size_t count(const std::string &tag, const std::string &value) const {
    auto t = seen.find(tag);
    if (t == seen.end()) return 0;
    auto v = t->second.find(value);
    return v == t->second.end() ? 0 : v->second.size();
  }

  void merge(const Message &m, std::size_t round) {
    if (seen[m.tag][m.value].insert(m.from).second)
      arrivals[m.tag][m.value].emplace_back(round, m.from);
  }
};

} // namespace detail

inline Trace run(const RunConfig &cfg) {
  validate(cfg);
  const std::size_t n = cfg.n;
  const std::size_t q = cfg.quorum_size;
  const std::size_t c = cfg.contraquorum_size;
  const std::size_t max_rounds = cfg.max_rounds ? cfg.max_rounds : n + 2;
  const std::vector<std::string> universe = message_values(cfg);
  std::vector<bool> byz(n, false);
  for (std::size_t id : cfg.byzantine) byz[id] = true;

  Trace tr;
  tr.events.resize(n);
  tr.outputs.resize(n);
  std::vector<detail::View> view(n);
  std::vector<std::set<std::string>> echoed(n), ready_sent(n), echo1_sent(n);
  std::vector<bool> echo2_sent(n, false), observed(n, false);

  for (std::size_t round = 1;; ++round) {
    std::vector<Message> msgs;
    std::vector<std::vector<Event>> new_events(n);
    std::vector<std::vector<std::string>> new_outputs(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::pair<std::string, std::string>> sends;
      switch (cfg.protocol) {
        case Protocol::Vote: {
          if (round == 1) sends.emplace_back("vote", cfg.votes[i] ? "T" : "F");
          if (round >= 2 && !observed[i]) {
            observed[i] = true;
            if (view[i].count("vote", "T") >= q)
              new_outputs[i].push_back("T");
            else if (view[i].count("vote", "F") >= q)
              new_outputs[i].push_back("F");
          }
          break;
        }
        case Protocol::Bracha: {
          if (round == 1 && i == cfg.sender) sends.emplace_back("broadcast", cfg.sender_value);
          if (echoed[i].empty()) {
            // Echo the first broadcast received, at most once ever.
            std::optional<std::pair<std::pair<std::size_t, std::size_t>, std::string>> best;
            auto bc = view[i].arrivals.find("broadcast");
            if (bc != view[i].arrivals.end())
              for (const auto &[value, arr] : bc->second)
                if (!best || arr.front() < best->first) best = {arr.front(), value};
            if (best) {
              sends.emplace_back("echo", best->second);
              echoed[i].insert(best->second);
            }
          }
          for (const std::string &v : universe)
            if (!ready_sent[i].count(v) &&
                (view[i].count("echo", v) >= q || view[i].count("ready", v) >= c)) {
              sends.emplace_back("ready", v);
              ready_sent[i].insert(v);
            }
          for (const std::string &v : universe)
            if (!tr.outputs[i].count(v) && view[i].count("ready", v) >= q)
              new_outputs[i].push_back(v);
          break;
        }
        case Protocol::Crusader: {
          if (round == 1) {
            sends.emplace_back("echo1", cfg.inputs[i]);
            echo1_sent[i].insert(cfg.inputs[i]);
          }
          for (const std::string &w : {std::string("0"), std::string("1")})
            if (!echo1_sent[i].count(w) && view[i].count("echo1", w) >= c) {
              sends.emplace_back("echo1", w);
              echo1_sent[i].insert(w);
            }
          if (!echo2_sent[i]) {
            // First echo1 value to complete a quorum wins; the completion key
            // is the (round, sender) of the q-th distinct echoer.
            std::optional<std::pair<std::pair<std::size_t, std::size_t>, std::string>> best;
            auto e1 = view[i].arrivals.find("echo1");
            if (e1 != view[i].arrivals.end())
              for (const std::string &v : universe) {
                auto arr = e1->second.find(v);
                if (arr == e1->second.end() || arr->second.size() < q) continue;
                std::pair<std::size_t, std::size_t> key = arr->second[q - 1];
                if (!best || key < best->first) best = {key, v};
              }
            if (best) {
              sends.emplace_back("echo2", best->second);
              echo2_sent[i] = true;
            }
          }
          std::vector<std::string> triggers;
          for (const std::string &u : {std::string("0"), std::string("1")})
            if (!tr.outputs[i].count(u) && view[i].count("echo2", u) >= q)
              triggers.push_back(u);
          if (!tr.outputs[i].count("half") && view[i].count("echo1", "0") >= q &&
              view[i].count("echo1", "1") >= q)
            triggers.push_back("half");
          if (cfg.single_output) {
            if (tr.outputs[i].empty() && !triggers.empty()) new_outputs[i].push_back(triggers[0]);
          } else {
            new_outputs[i] = triggers;
          }
          break;
        }
      }
      for (const auto &[tag, v] : sends) {
        new_events[i].push_back({tag, v});
        for (std::size_t to = 0; to < n; ++to) {
          std::optional<std::string> value =
              byz[i] ? detail::twist(cfg, universe, round, i, to, tag, v) : v;
          if (value) msgs.push_back({i, to, tag, *value});
        }
      }
      for (const std::string &out : new_outputs[i])
        new_events[i].push_back({cfg.protocol == Protocol::Vote      ? "observe"
                                 : cfg.protocol == Protocol::Bracha ? "deliver"
                                                                    : "output",
                                 out});
    }
    bool active = !msgs.empty();
    for (const auto &evs : new_events) active = active || !evs.empty();
    if (!active) break;
    if (round > max_rounds) {
      tr.hit_round_bound = true;
      break;
    }
    std::sort(msgs.begin(), msgs.end(), [](const Message &a, const Message &b) {
      return std::tie(a.from, a.to, a.tag, a.value) < std::tie(b.from, b.to, b.tag, b.value);
    });
    for (const Message &m : msgs) view[m.to].merge(m, round);
    for (std::size_t i = 0; i < n; ++i) {
      for (const Event &e : new_events[i]) tr.events[i].push_back(e);
      for (const std::string &out : new_outputs[i]) tr.outputs[i].insert(out);
    }
    tr.rounds.push_back(std::move(msgs));
  }
  return tr;
}

inline Model extract_model(const Trace &tr, const RunConfig &cfg,
                           std::vector<std::string> values = {}) {
  validate(cfg);
  if (tr.events.size() != cfg.n || tr.outputs.size() != cfg.n)
    throw std::invalid_argument("trace does not match the config");
  if (values.empty()) values = protocol_values(cfg);
  Model m(values, default_point_names(cfg.n),
          Semitopology::from_threshold(cfg.n, cfg.quorum_size));
  std::vector<bool> byz(cfg.n, false);
  for (std::size_t id : cfg.byzantine) byz[id] = true;

  auto mark_emitted = [&](const std::string &pred, std::size_t p, const std::string &tag) {
    for (const Event &e : tr.events[p])
      if (e.tag == tag && std::count(values.begin(), values.end(), e.value))
        m.set(pred, p, m.value_index(e.value), TV::T);
  };
  auto byz_column = [&](const std::string &pred, std::size_t p) {
    for (std::size_t v = 0; v < values.size(); ++v) m.set(pred, p, v, TV::B);
  };

  switch (cfg.protocol) {
    case Protocol::Vote: {
      m.declare("vote");
      m.declare("observe");
      // Reception-based observation at every point: a quorum of identical
      // votes decides the observation, anything else reads as B.
      std::vector<std::size_t> t_votes(cfg.n, 0), f_votes(cfg.n, 0);
      if (!tr.rounds.empty())
        for (const Message &msg : tr.rounds[0])
          if (msg.tag == "vote") (msg.value == "T" ? t_votes : f_votes)[msg.to]++;
      for (std::size_t p = 0; p < cfg.n; ++p) {
        m.set("vote", p, 0, byz[p] ? TV::B : cfg.votes[p] ? TV::T : TV::F);
        TV obs = t_votes[p] >= cfg.quorum_size   ? TV::T
                 : f_votes[p] >= cfg.quorum_size ? TV::F
                                                 : TV::B;
        m.set("observe", p, 0, obs);
      }
      break;
    }
    case Protocol::Bracha: {
      for (const char *pred : {"broadcast", "echo", "ready", "deliver"}) m.declare(pred);
      if (byz[cfg.sender]) {
        for (std::size_t p = 0; p < cfg.n; ++p) byz_column("broadcast", p);
      } else {
        m.set("broadcast", cfg.sender, m.value_index(cfg.sender_value), TV::T);
      }
      for (std::size_t p = 0; p < cfg.n; ++p) {
        if (byz[p]) {
          byz_column("echo", p);
          byz_column("ready", p);
          byz_column("deliver", p);
          continue;
        }
        mark_emitted("echo", p, "echo");
        mark_emitted("ready", p, "ready");
        for (const std::string &v : tr.outputs[p])
          m.set("deliver", p, m.value_index(v), TV::T);
      }
      break;
    }
    case Protocol::Crusader: {
      for (const char *pred : {"input", "echo1", "echo2", "output"}) m.declare(pred);
      for (std::size_t p = 0; p < cfg.n; ++p) {
        if (byz[p]) {
          for (const char *pred : {"input", "echo1", "echo2", "output"}) byz_column(pred, p);
          continue;
        }
        m.set("input", p, m.value_index(cfg.inputs[p]), TV::T);
        mark_emitted("echo1", p, "echo1");
        mark_emitted("echo2", p, "echo2");
        for (const std::string &v : tr.outputs[p])
          m.set("output", p, m.value_index(v), TV::T);
      }
      break;
    }
  }
  return m;
}

inline Report run_and_check(const RunConfig &cfg, const Theory &t,
                            const std::vector<PropertySchema> &props) {
  Model m = extract_model(run(cfg), cfg);
  Report r = check_theory(m, t);
  Report pr = check_properties(m, props);
  r.properties = std::move(pr.properties);
  r.overall = r.overall && pr.overall;
  if (t.name == "ThyVote" || t.name == "ThyBB" || t.name == "ThyCA") {
    Report lr = check_properties(m, derived_lemmas(t.name));
    r.lemmas = std::move(lr.properties);
    r.overall = r.overall && lr.overall;
  }
  return r;
}

inline nlohmann::ordered_json trace_to_json(const Trace &tr) {
  nlohmann::ordered_json rounds = nlohmann::ordered_json::array();
  for (const auto &round : tr.rounds) {
    nlohmann::ordered_json msgs = nlohmann::ordered_json::array();
    for (const Message &m : round)
      msgs.push_back({{"from", m.from}, {"to", m.to}, {"tag", m.tag}, {"value", m.value}});
    rounds.push_back(msgs);
  }
  nlohmann::ordered_json events = nlohmann::ordered_json::array();
  for (const auto &evs : tr.events) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const Event &e : evs) list.push_back({{"tag", e.tag}, {"value", e.value}});
    events.push_back(list);
  }
  nlohmann::ordered_json outputs = nlohmann::ordered_json::array();
  for (const auto &out : tr.outputs) outputs.push_back(out);
  nlohmann::ordered_json j;
  j["rounds"] = rounds;
  j["events"] = events;
  j["outputs"] = outputs;
  j["hit_round_bound"] = tr.hit_round_bound;
  return j;
}

inline std::string trace_to_text(const Trace &tr) { return trace_to_json(tr).dump(2) + "\n"; }

/// Protocol-consistent model source for guided counterexample search: run a
/// randomized variant of the base config, extract, then let honest points
/// overclaim whole (predicate, value) columns. Candidates that no longer
/// satisfy the theory are discarded by the search loop.
inline std::vector<ModelGenerator> guided_generators(const RunConfig &base) {
  validate(base);
  ModelGenerator gen = [base](std::mt19937_64 &rng) {
    RunConfig cfg = base;
    cfg.seed = rng();
    cfg.strategy = static_cast<Strategy>(rng() % 4);
    const std::size_t spare = cfg.n - cfg.quorum_size;
    const std::size_t nbyz = spare ? rng() % (spare + 1) : 0;
    cfg.byzantine.clear();
    while (cfg.byzantine.size() < nbyz) {
      std::size_t id = rng() % cfg.n;
      if (std::find(cfg.byzantine.begin(), cfg.byzantine.end(), id) == cfg.byzantine.end())
        cfg.byzantine.push_back(id);
    }
    std::sort(cfg.byzantine.begin(), cfg.byzantine.end());
    switch (cfg.protocol) {
      case Protocol::Vote:
        cfg.votes.resize(cfg.n);
        for (std::size_t i = 0; i < cfg.n; ++i) cfg.votes[i] = rng() % 2;
        break;
      case Protocol::Bracha:
        cfg.sender = rng() % cfg.n;
        cfg.sender_value = cfg.values[rng() % cfg.values.size()];
        break;
      case Protocol::Crusader:
        cfg.inputs.resize(cfg.n);
        for (std::size_t i = 0; i < cfg.n; ++i) cfg.inputs[i] = rng() % 2 ? "1" : "0";
        break;
    }
    Model m = extract_model(run(cfg), cfg);
    std::vector<bool> byz(cfg.n, false);
    for (std::size_t id : cfg.byzantine) byz[id] = true;
    std::vector<std::string> preds;
    for (const auto &kv : m.interp()) preds.push_back(kv.first);
    const std::size_t mutations = rng() % 3;
    for (std::size_t j = 0; j < mutations; ++j) {
      const std::string &pred = preds[rng() % preds.size()];
      const std::size_t v = rng() % m.values().size();
      for (std::size_t p = 0; p < cfg.n; ++p)
        if (!byz[p]) m.set(pred, p, v, TV::T);
    }
    return m;
  };
  return {gen};
}

} // namespace semitop
