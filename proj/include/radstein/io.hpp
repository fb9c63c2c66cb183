#pragma once

#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "radstein/chaos.hpp"
#include "radstein/engine.hpp"
#include "radstein/kernel.hpp"
#include "radstein/sparse.hpp"
#include "radstein/weights.hpp"

namespace radstein::io {

using nlohmann::json;

// Scalar encoding: doubles as JSON numbers, rationals as "p/q" strings (or
// plain integers).  Rational mode also accepts JSON numbers whose exact
// binary value fits, so float-mode files stay readable.
inline json scalar_to_json(double v) { return json(v); }
inline json scalar_to_json(const rational& v) {
  if (v.den() == 1) return json(v.num());
  return json(v.str());
}

template <class T>
T scalar_from_json(const json& j);

template <>
inline double scalar_from_json<double>(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos) return std::stod(s);
    return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
  }
  throw parse_error("expected a numeric value");
}

template <>
inline rational scalar_from_json<rational>(const json& j) {
  if (j.is_number_integer()) return rational(j.get<long long>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos) return rational(std::stoll(s));
    return rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  }
  if (j.is_number_float()) {
    // doubles are dyadic; convert exactly or refuse
    double x = j.get<double>();
    if (x == 0.0) return rational(0);
    int e = 0;
    double m = std::frexp(x, &e);
    long long mant = static_cast<long long>(std::ldexp(m, 53));
    int shift = 53 - e;
    if (shift < 0 || shift > 62) throw rational_overflow("value not representable");
    return rational(mant, 1LL << shift);
  }
  throw parse_error("expected a numeric value");
}

// ---------------------------------------------------------------------------
// Kernel files: {"order": q, "entries": [[[i1,...,iq], value], ...]}
// ---------------------------------------------------------------------------

template <class T>
json kernel_to_json(const symmetric_kernel<T>& k) {
  json entries = json::array();
  for (const auto& [t, v] : k.entries())
    entries.push_back(json::array({json(t), scalar_to_json(v)}));
  return json{{"order", k.order()}, {"entries", entries}};
}

template <class T>
symmetric_kernel<T> kernel_from_json(const json& j) {
  if (!j.contains("order") || !j.contains("entries"))
    throw parse_error("kernel file needs 'order' and 'entries'");
  const int order = j.at("order").get<int>();
  std::vector<std::pair<index_tuple, T>> raw;
  for (const auto& e : j.at("entries")) {
    if (!e.is_array() || e.size() != 2) throw parse_error("entry must be [tuple, value]");
    raw.emplace_back(e.at(0).get<index_tuple>(), scalar_from_json<T>(e.at(1)));
  }
  return make_symmetric_kernel<T>(order, raw);
}

// ---------------------------------------------------------------------------
// Decompositions: {"dimension": d, "mean": c, "kernels": [...]}
// ---------------------------------------------------------------------------

template <class T>
json decomposition_to_json(const chaos_decomposition<T>& dec) {
  json kernels = json::array();
  for (const auto& [n, k] : dec.kernels()) {
    (void)n;
    kernels.push_back(kernel_to_json(k));
  }
  return json{{"dimension", dec.dimension()},
              {"mean", scalar_to_json(dec.mean())},
              {"kernels", kernels}};
}

template <class T>
chaos_decomposition<T> decomposition_from_json(const json& j) {
  if (!j.contains("dimension")) throw parse_error("decomposition file needs 'dimension'");
  chaos_decomposition<T> dec(j.at("dimension").get<int>(),
                             j.contains("mean") ? scalar_from_json<T>(j.at("mean"))
                                                : scalar_traits<T>::zero());
  if (j.contains("kernels"))
    for (const auto& kj : j.at("kernels")) {
      auto k = kernel_from_json<T>(kj);
      if (dec.has_order(k.order())) throw parse_error("duplicate kernel order");
      dec.set_kernel(k);
    }
  return dec;
}

// ---------------------------------------------------------------------------
// Truth tables: {"d": d, "values": [2^d reals]}
// ---------------------------------------------------------------------------

template <class T>
json table_to_json(const truth_table<T>& t) {
  json vals = json::array();
  for (const auto& v : t.values) vals.push_back(scalar_to_json(v));
  return json{{"d", t.d}, {"values", vals}};
}

template <class T>
truth_table<T> table_from_json(const json& j) {
  if (!j.contains("d") || !j.contains("values"))
    throw parse_error("table file needs 'd' and 'values'");
  std::vector<T> vals;
  for (const auto& v : j.at("values")) vals.push_back(scalar_from_json<T>(v));
  return truth_table<T>(j.at("d").get<int>(), std::move(vals));
}

// ---------------------------------------------------------------------------
// Sparse sets: {"d": d, "N": N, "tuples": [[...], ...]} (representatives)
// ---------------------------------------------------------------------------

inline json sparse_set_to_json(const sparse_index_set& F) {
  json tuples = json::array();
  for (const auto& t : F.reps()) tuples.push_back(json(t));
  return json{{"d", F.d()}, {"N", F.N()}, {"tuples", tuples}};
}

inline sparse_index_set sparse_set_from_json(const json& j) {
  if (!j.contains("d") || !j.contains("N") || !j.contains("tuples"))
    throw parse_error("set file needs 'd', 'N' and 'tuples'");
  std::vector<index_tuple> reps;
  for (const auto& t : j.at("tuples")) reps.push_back(t.get<index_tuple>());
  return sparse_index_set(j.at("d").get<int>(), j.at("N").get<index_t>(), std::move(reps));
}

// ---------------------------------------------------------------------------
// Estimates and weight sequences
// ---------------------------------------------------------------------------

inline json estimate_to_json(const estimate& e) {
  return json{{"value", e.value},
              {"std_error", e.std_error},
              {"samples", e.samples},
              {"seed", e.seed}};
}

inline json weights_to_json(const weight_sequence& w) {
  json j{{"offset", w.offset}, {"values", w.values}};
  if (w.tail)
    j["tail"] = {{"sq_lo", w.tail->sq_lo},
                 {"sq_hi", w.tail->sq_hi},
                 {"quad_hi", w.tail->quad_hi}};
  if (w.truncated_infinite) j["truncated_infinite"] = true;
  return j;
}

inline weight_sequence weights_from_json(const json& j) {
  weight_sequence w;
  if (j.contains("offset")) w.offset = j.at("offset").get<long long>();
  if (j.contains("values")) w.values = j.at("values").get<std::vector<double>>();
  if (j.contains("tail")) {
    tail_certificate t;
    t.sq_lo = j.at("tail").value("sq_lo", 0.0);
    t.sq_hi = j.at("tail").value("sq_hi", 0.0);
    t.quad_hi = j.at("tail").value("quad_hi", 0.0);
    w.tail = t;
  }
  w.truncated_infinite = j.value("truncated_infinite", false);
  return w;
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw parse_error(path + ": " + e.what());
  }
  return j;
}

inline void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace radstein::io
