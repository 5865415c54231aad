#pragma once

// JSON interchange for complexes and regions. Complex format:
//   { "generators": [{"name", "A", "M", "spinc"}], "arrows": [{"from","to","m"}] }
// A is an integer, M a rational serialized as "p/q" (bare "p" when integral),
// spinc an integer or null. Region format: {"pieces": [[{"a","b","c"}]]}.
// Emission order is deterministic so outputs are byte-stable.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ups/complex_core.hpp"
#include "ups/regions.hpp"

namespace ups {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline ordered_json rat_to_json(const Rat& r) {
  if (r.is_integer()) return ordered_json(r.as_integer());
  return ordered_json(r.str());
}

inline Rat rat_from_json(const json& j) {
  if (j.is_number_integer()) return Rat(j.get<std::int64_t>());
  if (j.is_string()) return Rat::parse(j.get<std::string>());
  throw std::runtime_error("expected integer or \"p/q\" string for rational");
}

inline ordered_json complex_to_json(const KnotComplex& K) {
  ordered_json jgens = ordered_json::array();
  for (const auto& g : K.generators) {
    ordered_json jg;
    jg["name"] = g.name;
    if (!g.A.is_integer())
      throw std::runtime_error("generator " + g.name +
                               " has non-integral Alexander grading " + g.A.str());
    jg["A"] = g.A.as_integer();
    jg["M"] = g.M.str();
    jg["spinc"] = g.spinc ? ordered_json(*g.spinc) : ordered_json(nullptr);
    jgens.push_back(std::move(jg));
  }
  ordered_json jarrows = ordered_json::array();
  auto sorted = K.arrows;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& a : sorted) {
    ordered_json ja;
    ja["from"] = a.from;
    ja["to"] = a.to;
    ja["m"] = a.u_exp;
    jarrows.push_back(std::move(ja));
  }
  ordered_json out;
  out["generators"] = std::move(jgens);
  out["arrows"] = std::move(jarrows);
  return out;
}

inline KnotComplex complex_from_json(const json& j) {
  KnotComplex K;
  for (const auto& jg : j.at("generators")) {
    Generator g;
    g.name = jg.at("name").get<std::string>();
    g.A = rat_from_json(jg.at("A"));
    g.M = rat_from_json(jg.at("M"));
    if (jg.contains("spinc") && !jg.at("spinc").is_null())
      g.spinc = jg.at("spinc").get<int>();
    K.generators.push_back(std::move(g));
  }
  if (j.contains("arrows"))
    for (const auto& ja : j.at("arrows"))
      K.arrows.push_back({ja.at("from").get<std::string>(),
                          ja.at("to").get<std::string>(),
                          ja.at("m").get<std::int64_t>()});
  return K;
}

inline ordered_json region_to_json(const SouthWestRegion& C) {
  ordered_json pieces = ordered_json::array();
  for (const auto& piece : C.pieces) {
    ordered_json jp = ordered_json::array();
    for (const auto& h : piece) {
      ordered_json jh;
      jh["a"] = h.a.str();
      jh["b"] = h.b.str();
      jh["c"] = h.c.str();
      jp.push_back(std::move(jh));
    }
    pieces.push_back(std::move(jp));
  }
  ordered_json out;
  out["pieces"] = std::move(pieces);
  return out;
}

inline SouthWestRegion region_from_json(const json& j) {
  SouthWestRegion C;
  for (const auto& jp : j.at("pieces")) {
    std::vector<HalfPlane> piece;
    for (const auto& jh : jp)
      piece.push_back({rat_from_json(jh.at("a")), rat_from_json(jh.at("b")),
                       rat_from_json(jh.at("c"))});
    C.pieces.push_back(std::move(piece));
  }
  return C;
}

inline std::string dump_deterministic(const ordered_json& j) {
  return j.dump(2) + "\n";
}

inline void write_json_file(const std::string& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << dump_deterministic(j);
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  json j;
  in >> j;
  return j;
}

}  // namespace ups
