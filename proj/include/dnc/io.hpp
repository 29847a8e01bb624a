#pragma once

// Text and JSON file formats.
//
//   graph:       "n m" header, then m lines "u v [w]" (0-based; w written only for weighted graphs)
//   polynomial:  {"num_vars": n, "terms": [{"vars": [...], "coeff": c}, ...]} in canonical term order
//   membership:  one "vertex community" line per vertex

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dnc/error.hpp"
#include "dnc/graph.hpp"
#include "dnc/polynomial.hpp"

namespace dnc {

namespace detail {

inline std::string format_real(double x) {
  if (x == std::floor(x) && std::abs(x) < 1e15) {
    std::ostringstream os;
    os << static_cast<long long>(x);
    return os.str();
  }
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
  return os.str();
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace detail

inline void write_graph(std::ostream& out, const Graph& g) {
  const bool weighted = g.weighted();
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const auto& e : g.edges()) {
    out << e.u << ' ' << e.v;
    if (weighted) out << ' ' << detail::format_real(e.weight);
    out << '\n';
  }
}

inline Graph read_graph(std::istream& in) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      auto pos = line.find_first_not_of(" \t\r");
      if (pos != std::string::npos && line[pos] != '#') return true;
    }
    return false;
  };
  if (!next_line()) throw IoError("graph file is empty");
  std::size_t n = 0, m = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> n >> m)) throw IoError("malformed graph header '" + line + "'");
  }
  Graph g(n);
  for (std::size_t i = 0; i < m; ++i) {
    if (!next_line()) {
      throw IoError("graph file ends after " + std::to_string(i) + " of " + std::to_string(m) + " edges");
    }
    std::istringstream ls(line);
    std::size_t u = 0, v = 0;
    if (!(ls >> u >> v)) throw IoError("malformed edge line '" + line + "'");
    double w = 1.0;
    if (!(ls >> w)) w = 1.0;
    g.add_edge(u, v, w);
  }
  return g;
}

inline void save_graph(const std::string& path, const Graph& g) {
  auto out = detail::open_out(path);
  write_graph(out, g);
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline Graph load_graph(const std::string& path) {
  auto in = detail::open_in(path);
  try {
    return read_graph(in);
  } catch (const Error& e) {
    throw IoError(path + ": " + e.what());
  }
}

inline nlohmann::json polynomial_to_json(const PuboPolynomial& poly) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [vars, c] : poly.terms()) {
    terms.push_back({{"vars", vars}, {"coeff", c}});
  }
  return {{"num_vars", poly.num_vars()}, {"terms", std::move(terms)}};
}

inline PuboPolynomial polynomial_from_json(const nlohmann::json& j) {
  try {
    PuboPolynomial poly(j.at("num_vars").get<std::size_t>());
    for (const auto& t : j.at("terms")) {
      poly.add_term(t.at("vars").get<std::vector<std::size_t>>(), t.at("coeff").get<double>());
    }
    return poly;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed polynomial JSON: ") + e.what());
  }
}

inline void save_json(const std::string& path, const nlohmann::json& j) {
  auto out = detail::open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline nlohmann::json load_json(const std::string& path) {
  auto in = detail::open_in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
}

inline void save_polynomial(const std::string& path, const PuboPolynomial& poly) {
  save_json(path, polynomial_to_json(poly));
}

inline PuboPolynomial load_polynomial(const std::string& path) {
  return polynomial_from_json(load_json(path));
}

inline void write_membership(std::ostream& out, const std::vector<std::size_t>& membership) {
  for (std::size_t v = 0; v < membership.size(); ++v) out << v << ' ' << membership[v] << '\n';
}

inline std::vector<std::size_t> read_membership(std::istream& in) {
  std::vector<std::size_t> membership;
  std::size_t v = 0, c = 0;
  while (in >> v >> c) {
    if (v != membership.size()) throw IoError("membership lines must list vertices 0, 1, 2, ... in order");
    membership.push_back(c);
  }
  if (!in.eof()) throw IoError("malformed membership line");
  return membership;
}

}  // namespace dnc
