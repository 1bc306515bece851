#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "model.hpp"

namespace semitop {

class ModelFileError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Canonical model JSON: fixed key order (values, points, opens,
/// predicates), all arrays and object keys sorted, every interpretation
/// entry written out. Loading any well-formed file and saving it again
/// yields this form; saving is then a fixed point byte for byte.
inline nlohmann::ordered_json model_to_json(const Model &m) {
  std::vector<std::string> values = m.values();
  std::sort(values.begin(), values.end());
  std::vector<std::string> points = m.points();
  std::sort(points.begin(), points.end());

  std::set<std::vector<std::string>> opens;
  for (const auto &open : m.space().basis()) {
    std::vector<std::string> named;
    named.reserve(open.size());
    for (std::size_t i : open) named.push_back(m.points()[i]);
    std::sort(named.begin(), named.end());
    opens.insert(std::move(named));
  }

  nlohmann::ordered_json j;
  j["values"] = values;
  j["points"] = points;
  j["opens"] = opens;
  auto &preds = j["predicates"] = nlohmann::ordered_json::object();
  for (const auto &[pred, table] : m.interp()) {
    auto &per_point = preds[pred] = nlohmann::ordered_json::object();
    for (const auto &point : points) {
      std::size_t pi = m.point_index(point);
      auto &per_value = per_point[point] = nlohmann::ordered_json::object();
      for (const auto &value : values)
        per_value[value] = to_string(table[pi][m.value_index(value)]);
    }
  }
  return j;
}

inline std::string model_to_text(const Model &m) {
  return model_to_json(m).dump(2) + "\n";
}

inline Model model_from_json(const nlohmann::ordered_json &j) {
  if (!j.is_object()) throw ModelFileError("model file must be a JSON object");
  for (const auto &[key, _] : j.items())
    if (key != "values" && key != "points" && key != "opens" && key != "predicates")
      throw ModelFileError("unknown key '" + key + "' in model file");

  auto str_array = [&](const char *key, bool required) {
    std::vector<std::string> out;
    if (!j.contains(key)) {
      if (required) throw ModelFileError(std::string("model file needs '") + key + "'");
      return out;
    }
    if (!j[key].is_array()) throw ModelFileError(std::string("'") + key + "' must be an array");
    for (const auto &e : j[key]) {
      if (!e.is_string()) throw ModelFileError(std::string("'") + key + "' must hold strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  };

  std::vector<std::string> values = str_array("values", true);
  std::vector<std::string> points = str_array("points", true);
  if (values.empty()) throw ModelFileError("'values' must be nonempty");
  if (points.empty()) throw ModelFileError("'points' must be nonempty");

  auto index_of = [](const std::vector<std::string> &xs, const std::string &x,
                     const char *what) {
    auto it = std::find(xs.begin(), xs.end(), x);
    if (it == xs.end())
      throw ModelFileError(std::string("unknown ") + what + " '" + x + "'");
    return static_cast<std::size_t>(it - xs.begin());
  };

  std::vector<Semitopology::PointSet> basis;
  if (j.contains("opens")) {
    if (!j["opens"].is_array()) throw ModelFileError("'opens' must be an array");
    for (const auto &open : j["opens"]) {
      if (!open.is_array()) throw ModelFileError("each open must be an array of points");
      Semitopology::PointSet s;
      for (const auto &e : open) {
        if (!e.is_string()) throw ModelFileError("each open must be an array of points");
        s.push_back(index_of(points, e.get<std::string>(), "point"));
      }
      basis.push_back(std::move(s));
    }
  }

  Model m(values, points, Semitopology(points.size(), basis));
  if (j.contains("predicates")) {
    if (!j["predicates"].is_object()) throw ModelFileError("'predicates' must be an object");
    for (const auto &[pred, per_point] : j["predicates"].items()) {
      m.declare(pred); // unlisted points and values stay F
      if (!per_point.is_object()) throw ModelFileError("predicate '" + pred + "' must be an object");
      for (const auto &[point, per_value] : per_point.items()) {
        std::size_t pi = index_of(points, point, "point");
        if (!per_value.is_object()) throw ModelFileError("point '" + point + "' must map to an object");
        for (const auto &[value, tv] : per_value.items()) {
          std::size_t vi = index_of(values, value, "value");
          if (!tv.is_string())
            throw ModelFileError("truth values must be \"T\", \"B\" or \"F\"");
          try {
            m.set(pred, pi, vi, tv_from_string(tv.get<std::string>()));
          } catch (const std::invalid_argument &) {
            throw ModelFileError("truth values must be \"T\", \"B\" or \"F\"");
          }
        }
      }
    }
  }
  return m;
}

inline Model model_from_text(const std::string &text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ModelFileError(std::string("model file is not valid JSON: ") + e.what());
  }
  return model_from_json(j);
}

inline Model load_model_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ModelFileError("cannot open model file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return model_from_text(text);
}

inline void save_model_file(const Model &m, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw ModelFileError("cannot write model file '" + path + "'");
  out << model_to_text(m);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

/// Digest of the canonical model text; reports key models by this value.
inline std::string model_digest(const Model &m) {
  std::uint64_t h = fnv1a64(model_to_text(m));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace semitop
