#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "formula.hpp"
#include "model.hpp"
#include "parse.hpp"
#include "print.hpp"

namespace semitop {

enum class SchemaKind { Formula, Structural };
enum class Polarity { MustBeValid, MustBeInvalid };

/// Per-variable instantiation domains; variables not listed range over the
/// whole value set of the model under check.
using Domains = std::map<std::string, std::vector<std::string>>;

struct AxiomSchema {
  std::string name;
  SchemaKind kind = SchemaKind::Formula;
  Formula formula; // null when structural
  Domains domains;
  std::size_t twined = 0; // structural requirement on the space
};

struct PropertySchema {
  std::string name;
  Formula formula;
  Domains domains;
  Polarity polarity = Polarity::MustBeValid;
};

struct Theory {
  std::string name;
  std::vector<std::string> predicates;
  // Exact value set the theory is written against; empty means any
  // nonempty value set is acceptable.
  std::optional<std::vector<std::string>> required_values;
  std::vector<AxiomSchema> axioms;
};

namespace detail {

inline AxiomSchema ax(std::string name, const char *text) {
  AxiomSchema s;
  s.name = std::move(name);
  s.formula = parse(text);
  return s;
}

inline AxiomSchema structural_rule(std::size_t n) {
  AxiomSchema s;
  s.name = std::to_string(n) + "twined";
  s.kind = SchemaKind::Structural;
  s.twined = n;
  return s;
}

inline PropertySchema prop(std::string name, const char *text, Domains domains = {},
                           Polarity polarity = Polarity::MustBeValid) {
  PropertySchema p;
  p.name = std::move(name);
  p.formula = parse(text);
  p.domains = std::move(domains);
  p.polarity = polarity;
  return p;
}

} // namespace detail

inline Theory theory(const std::string &name) {
  using detail::ax;
  using detail::structural_rule;
  if (name == "ThyVote" || name == "vote") {
    Theory t;
    t.name = "ThyVote";
    t.predicates = {"vote", "observe"};
    t.required_values = std::vector<std::string>{"u"};
    t.axioms = {
        ax("Observe?", "observe('u) -> [Q] vote('u)"),
        ax("ObserveNot?", "!observe('u) -> [Q] !vote('u)"),
        ax("Observe!", "[Q] vote('u) => observe('u)"),
        ax("ObserveNot!", "[Q] !vote('u) => !observe('u)"),
        ax("Correct", "[Q] %TF vote('u)"),
        structural_rule(3),
    };
    return t;
  }
  if (name == "ThyBB" || name == "bracha") {
    Theory t;
    t.name = "ThyBB";
    t.predicates = {"broadcast", "echo", "ready", "deliver"};
    t.axioms = {
        ax("BrDeliver?", "deliver(a) -> [Q] ready(a)"),
        ax("BrReady?", "ready(a) -> [Q] echo(a)"),
        ax("BrEcho?", "echo(a) -> [S] broadcast(a)"),
        ax("BrEcho01", "exists01 a. echo(a)"),
        ax("BrBroadcast1", "exists1 a. [S] broadcast(a)"),
        ax("BrDeliver!", "[Q] ready(a) -> deliver(a)"),
        ax("BrReady!", "[Q] echo(a) -> ready(a)"),
        ax("BrEcho!", "[S] broadcast(a) -> exists b. echo(b)"),
        ax("BrReady!!", "[C] ready(a) -> ready(a)"),
        ax("BrCorrect", "[Q] correct{ready} & [Q] correct{echo}"),
        ax("BrCorrect'",
           "(correct{ready} | incorrect{ready}) & (correct{echo} | incorrect{echo})"),
        ax("BrCorrect''", "[E] correct{broadcast} | [E] incorrect{broadcast}"),
        structural_rule(3),
    };
    return t;
  }
  if (name == "ThyCA" || name == "crusader") {
    Theory t;
    t.name = "ThyCA";
    t.predicates = {"input", "echo1", "echo2", "output"};
    t.required_values = std::vector<std::string>{"0", "1", "half"};
    t.axioms = {
        ax("CaEcho1?", "echo1(a) => [S] input(a)"),
        ax("CaEcho2?", "echo2(a) -> [Q] echo1(a)"),
        ax("CaOutput?", "(output('0) -> [Q] echo2('0)) & (output('1) -> [Q] echo2('1))"),
        ax("CaOutput'?", "output('half) -> ([Q] echo1('0) & [Q] echo1('1))"),
        ax("CaCorrect",
           "[Q] (correct{input} & correct{echo1} & correct{echo2} & correct{output})"),
        ax("CaCorrect'",
           "(correct{input} | incorrect{input}) & (correct{echo1} | incorrect{echo1}) & "
           "(correct{echo2} | incorrect{echo2}) & (correct{output} | incorrect{output})"),
        ax("CaInput", "(input('0) (+) input('1)) & !input('half)"),
        ax("CaEcho2_01", "exists01 a. echo2(a)"),
        ax("CaEcho1!", "(input(a) | [C] echo1(a)) -> echo1(a)"),
        ax("CaEcho2!", "(exists a. [Q] echo1(a)) -> (exists a. echo2(a))"),
        ax("CaOutput!", "[Q] echo2(a) -> output(a)"),
        ax("CaOutput'!", "([Q] echo1('0) & [Q] echo1('1)) -> output('half)"),
        structural_rule(3),
    };
    return t;
  }
  throw std::invalid_argument("unknown theory '" + name + "'");
}

inline std::vector<PropertySchema> properties(const std::string &name) {
  using detail::prop;
  if (name == "ThyVote" || name == "vote")
    return {prop("Agreement", "[S] %T observe('u) & [S] %T !observe('u)", {},
                 Polarity::MustBeInvalid)};
  if (name == "ThyBB" || name == "bracha")
    return {
        prop("BrValidity", "[S] broadcast(a) -> [E] deliver(a)"),
        prop("BrNoDup", "exists01 a. deliver(a)"),
        prop("BrIntegrity", "deliver(a) -> [S] broadcast(a)"),
        prop("BrConsistency", "exists01 a. [S] deliver(a)"),
        prop("BrTotality", "[S] deliver(a) -> [E] deliver(a)"),
    };
  if (name == "ThyCA" || name == "crusader") {
    Domains binary = {{"v", {"0", "1"}}};
    Domains pair = {{"v", {"0", "1"}}, {"v'", {"0", "1"}}};
    Domains wide = {{"v", {"0", "1"}}, {"v'", {"0", "half", "1"}}};
    return {
        prop("CaAgree", "([S] output(v) & [S] output(v')) => v == v'", pair),
        prop("CaValid1", "(%TB [E] input(v) & output(v')) => v == v'", wide),
        prop("CaValid2", "[S] output(v) => [S] input(v)", binary),
        prop("CaLive", "[E] exists a. output(a)"),
    };
  }
  throw std::invalid_argument("unknown theory '" + name + "'");
}

inline std::vector<PropertySchema> derived_lemmas(const std::string &name) {
  using detail::prop;
  if (name == "ThyVote" || name == "vote")
    return {
        prop("LemObserve", "[S] observe('u) -> [Q] vote('u)"),
        prop("LemObserveEverywhere", "[Q] vote('u) => [E] observe('u)"),
        prop("LemObserveNot", "[S] !observe('u) -> [Q] !vote('u)"),
        prop("LemObserveNotEverywhere", "[Q] !vote('u) => [E] !observe('u)"),
    };
  if (name == "ThyBB" || name == "bracha")
    return {
        prop("LemSendDichotomy",
             "([E] correct{broadcast} & (exists1 a. %T [S] broadcast(a))) (+) "
             "[E] incorrect{broadcast}"),
        prop("LemBroadcastEcho", "[S] broadcast(a) -> echo(a)"),
        prop("LemBroadcastEchoEverywhere", "[S] broadcast(a) -> [E] echo(a)"),
        prop("LemEchoReady", "[Q] echo(a) -> [E] ready(a)"),
        prop("LemReadyDeliver", "[Q] ready(a) -> [E] deliver(a)"),
        prop("LemEveryoneEchoQuorum", "%TB [E] echo(a) => %T [Q] echo(a)"),
        prop("LemEveryoneReadyQuorum", "%TB [E] ready(a) => %T [Q] ready(a)"),
        prop("LemQuorumReadyContra", "%TB [Q] ready(a) => %T [C] ready(a)"),
        prop("LemTwoQuorumsEcho",
             "(%TB [Q] echo(a) & %TB [Q] echo(b)) => %T [S] (echo(a) & echo(b))"),
        prop("LemTwoQuorumsReady",
             "(%TB [Q] ready(a) & %TB [Q] ready(b)) => %T [S] (ready(a) & ready(b))"),
    };
  if (name == "ThyCA" || name == "crusader")
    return {
        prop("LemInputDichotomy",
             "(%TB input('0) <-> %TB !input('1)) & (%TB input('1) <-> %TB !input('0))"),
        prop("LemInputUnique", "(%T input(a) & %T input(b)) => a == b"),
        prop("LemInputAgree", "(%TB [E] input(a) & %T [S] input(b)) => a == b"),
        prop("LemEcho1QuorumContra", "%TB [Q] echo1(a) => %T [C] echo1(a)"),
        prop("LemEcho1ContraEverywhere", "%T [C] echo1(a) => %TB [E] echo1(a)"),
        prop("LemEcho1EveryoneQuorum", "%TB [E] echo1(a) => %T [Q] echo1(a)"),
        prop("LemEcho2Quorum", "echo2(a) => [Q] echo1(a)"),
        prop("LemContraInput",
             "%T [C] (input('0) & correct{echo1}) | %T [C] (input('1) & correct{echo1})"),
        prop("LemContraEcho1", "%T [C] echo1('0) | %T [C] echo1('1)"),
        prop("LemQuorumEcho1", "%T [Q] echo1('0) | %T [Q] echo1('1)"),
        prop("LemEveryoneEcho2", "[E] (echo2('0) | echo2('1))"),
        prop("LemQuorumEcho2", "%T [Q] (echo2('0) | echo2('1))"),
        prop("LemInputBinary", "input(a) => (a == '0 | a == '1)"),
        prop("LemEcho1Binary", "echo1(a) => (a == '0 | a == '1)"),
        prop("LemEcho2Binary", "echo2(a) => (a == '0 | a == '1)"),
        prop("LemEcho2HalfImpossible", "echo2('half) => bot"),
    };
  throw std::invalid_argument("unknown theory '" + name + "'");
}

/// Swap one named axiom's formula, keeping everything else; the handle used
/// by counterexample search to probe weakened rule variants.
inline Theory with_axiom(Theory t, const std::string &name, Formula f) {
  for (auto &a : t.axioms) {
    if (a.name == name) {
      a.kind = SchemaKind::Formula;
      a.formula = std::move(f);
      a.twined = 0;
      return t;
    }
  }
  throw std::invalid_argument("unknown axiom '" + name + "'");
}

inline void collect_pred_symbols(const Formula &f, std::set<std::string> &out) {
  if (!f) return;
  if (f->kind == FKind::Pred) out.insert(f->pred);
  for (const auto &p : f->preds) out.insert(p);
  collect_pred_symbols(f->lhs, out);
  collect_pred_symbols(f->rhs, out);
}

/// Check a model's value set against the theory's required profile; returns
/// a diagnostic when they differ.
inline std::optional<std::string> profile_mismatch(const Theory &t, const Model &m) {
  if (!t.required_values) return std::nullopt;
  std::set<std::string> have(m.values().begin(), m.values().end());
  std::set<std::string> want(t.required_values->begin(), t.required_values->end());
  if (have == want) return std::nullopt;
  std::string msg = "theory " + t.name + " requires values {";
  bool first = true;
  for (const auto &v : want) {
    if (!first) msg += ", ";
    msg += v;
    first = false;
  }
  return msg + "}";
}

namespace detail {

inline std::string trim(const std::string &s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline Domains parse_domains(const std::string &text, int line_no) {
  Domains out;
  std::size_t i = 0;
  auto fail = [&](const std::string &why) {
    throw std::invalid_argument("theory line " + std::to_string(line_no) +
                                ": bad domain clause (" + why + ")");
  };
  auto skip_ws = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
  while (true) {
    skip_ws();
    if (i >= text.size()) break;
    std::size_t b = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::string var = text.substr(b, i - b);
    skip_ws();
    if (text.compare(i, 2, "in") != 0) fail("expected 'in'");
    i += 2;
    skip_ws();
    if (i >= text.size() || text[i] != '{') fail("expected '{'");
    ++i;
    std::size_t close = text.find('}', i);
    if (close == std::string::npos) fail("expected '}'");
    std::vector<std::string> values;
    std::string body = text.substr(i, close - i);
    std::size_t from = 0;
    while (from <= body.size()) {
      std::size_t comma = body.find(',', from);
      std::string v = trim(body.substr(from, comma - from));
      if (v.empty()) fail("empty value");
      values.push_back(v);
      if (comma == std::string::npos) break;
      from = comma + 1;
    }
    if (out.count(var)) fail("duplicate variable " + var);
    out[var] = std::move(values);
    i = close + 1;
    skip_ws();
    if (i < text.size()) {
      if (text[i] != ',') fail("expected ','");
      ++i;
    }
  }
  return out;
}

} // namespace detail

/// Theory text: one schema per line, `NAME : DOMAINS? : FORMULA`; `#` starts
/// a comment; `@structural <k>twined` states the space requirement.
inline Theory theory_from_text(const std::string &name, const std::string &text) {
  Theory t;
  t.name = name;
  std::set<std::string> seen;
  std::set<std::string> preds;
  int line_no = 0;
  std::size_t from = 0;
  while (from <= text.size()) {
    std::size_t nl = text.find('\n', from);
    std::string line = text.substr(from, nl == std::string::npos ? nl : nl - from);
    from = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (std::size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    if (line[0] == '@') {
      std::string rest = detail::trim(line.substr(1));
      std::size_t sp = rest.find_first_of(" \t");
      std::string kw = rest.substr(0, sp);
      if (kw != "structural")
        throw std::invalid_argument("theory line " + std::to_string(line_no) +
                                    ": unknown directive '@" + kw + "'");
      std::string arg = sp == std::string::npos ? "" : detail::trim(rest.substr(sp));
      std::size_t digits = 0;
      while (digits < arg.size() && std::isdigit(static_cast<unsigned char>(arg[digits]))) ++digits;
      if (digits == 0 || arg.substr(digits) != "twined")
        throw std::invalid_argument("theory line " + std::to_string(line_no) +
                                    ": expected '@structural <k>twined'");
      t.axioms.push_back(detail::structural_rule(std::stoul(arg.substr(0, digits))));
      continue;
    }

    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      std::size_t colon = line.find(':', start);
      parts.push_back(detail::trim(line.substr(start, colon - start)));
      if (colon == std::string::npos) break;
      start = colon + 1;
    }
    if (parts.size() < 2 || parts.size() > 3)
      throw std::invalid_argument("theory line " + std::to_string(line_no) +
                                  ": expected 'NAME : DOMAINS? : FORMULA'");
    AxiomSchema s;
    s.name = parts[0];
    if (s.name.empty())
      throw std::invalid_argument("theory line " + std::to_string(line_no) + ": empty name");
    if (!seen.insert(s.name).second)
      throw std::invalid_argument("theory line " + std::to_string(line_no) +
                                  ": duplicate schema '" + s.name + "'");
    if (parts.size() == 3) s.domains = detail::parse_domains(parts[1], line_no);
    try {
      s.formula = parse(parts.back());
    } catch (const ParseError &e) {
      throw std::invalid_argument("theory line " + std::to_string(line_no) + ": " + e.what());
    }
    collect_pred_symbols(s.formula, preds);
    t.axioms.push_back(std::move(s));
  }
  t.predicates.assign(preds.begin(), preds.end());
  return t;
}

inline std::string theory_to_text(const Theory &t) {
  std::string out = "# " + t.name + "\n";
  for (const auto &s : t.axioms) {
    if (s.kind == SchemaKind::Structural) {
      out += "@structural " + std::to_string(s.twined) + "twined\n";
      continue;
    }
    out += s.name + " : ";
    if (!s.domains.empty()) {
      bool first = true;
      for (const auto &[var, values] : s.domains) {
        if (!first) out += ", ";
        first = false;
        out += var + " in {";
        for (std::size_t i = 0; i < values.size(); ++i) {
          if (i) out += ",";
          out += values[i];
        }
        out += "}";
      }
      out += " : ";
    }
    out += to_string(s.formula) + "\n";
  }
  return out;
}

inline Theory load_theory_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open theory file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::string base = path;
  if (std::size_t slash = base.find_last_of('/'); slash != std::string::npos)
    base = base.substr(slash + 1);
  if (std::size_t dot = base.find_last_of('.'); dot != std::string::npos && dot > 0)
    base = base.substr(0, dot);
  return theory_from_text(base, text);
}

} // namespace semitop
