#include "qg/graphspec.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace qg {

cx parse_complex(const std::string& token) {
  // forms: a | a+bi | a-bi, with a and b decimal floats (exponents allowed)
  const char* s = token.c_str();
  char* end = nullptr;
  const double a = std::strtod(s, &end);
  if (end == s) throw parse_error("malformed complex number '" + token + "'");
  if (*end == '\0') return cx(a, 0);
  const char sign = *end;
  if (sign != '+' && sign != '-') throw parse_error("malformed complex number '" + token + "'");
  const char* s2 = end;
  char* end2 = nullptr;
  const double b = std::strtod(s2, &end2);
  if (end2 == s2 || *end2 != 'i' || *(end2 + 1) != '\0')
    throw parse_error("malformed complex number '" + token + "'");
  return cx(a, b);
}

std::string format_complex(cx z) {
  char buf[80];
  if (z.imag() == 0) {
    std::snprintf(buf, sizeof buf, "%.17g", z.real());
    return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

namespace {

struct Line {
  int number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::istringstream ls(raw);
    Line line{number, {}};
    std::string tok;
    // '#' opens a comment only at a token boundary; split-vertex names like
    // "v#2" keep their hash
    while (ls >> tok && tok[0] != '#') line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

double parse_length(const std::string& tok, int line) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') throw parse_error("malformed number '" + tok + "'", line);
  return v;
}

}  // namespace

ParsedGraph parse_graphspec(const std::string& text) {
  const std::vector<Line> lines = tokenize(text);
  if (lines.empty() || lines[0].tokens.size() != 2 || lines[0].tokens[0] != "graphspec" ||
      lines[0].tokens[1] != "v1")
    throw parse_error("expected header 'graphspec v1'", lines.empty() ? 1 : lines[0].number);

  std::vector<std::string> vertex_names;
  std::vector<Edge> edges;
  auto vertex_id = [&](const std::string& name) {
    for (size_t i = 0; i < vertex_names.size(); ++i)
      if (vertex_names[i] == name) return static_cast<int>(i);
    return -1;
  };

  struct SpaceDirective {
    int line;
    std::string vertex;
    std::string kind;
    int magnetic_p = 0;
    std::vector<std::vector<std::string>> rows;
  };
  std::vector<SpaceDirective> directives;

  size_t i = 1;
  while (i < lines.size()) {
    const Line& ln = lines[i];
    const std::string& cmd = ln.tokens[0];
    if (cmd == "vertex") {
      if (ln.tokens.size() != 2) throw parse_error("vertex takes one name", ln.number);
      if (vertex_id(ln.tokens[1]) >= 0) throw parse_error("duplicate vertex '" + ln.tokens[1] + "'", ln.number);
      vertex_names.push_back(ln.tokens[1]);
      ++i;
    } else if (cmd == "edge") {
      if (ln.tokens.size() != 5) throw parse_error("edge takes name, tail, head, length", ln.number);
      const int t = vertex_id(ln.tokens[2]), h = vertex_id(ln.tokens[3]);
      if (t < 0) throw parse_error("edge references undeclared vertex '" + ln.tokens[2] + "'", ln.number);
      if (h < 0) throw parse_error("edge references undeclared vertex '" + ln.tokens[3] + "'", ln.number);
      edges.push_back(Edge{ln.tokens[1], t, h, parse_length(ln.tokens[4], ln.number)});
      ++i;
    } else if (cmd == "space") {
      if (ln.tokens.size() < 3) throw parse_error("space takes a vertex and a kind", ln.number);
      SpaceDirective d;
      d.line = ln.number;
      d.vertex = ln.tokens[1];
      d.kind = ln.tokens[2];
      if (d.kind == "magnetic") {
        if (ln.tokens.size() != 4) throw parse_error("magnetic takes one integer", ln.number);
        d.magnetic_p = static_cast<int>(parse_length(ln.tokens[3], ln.number));
      } else if (d.kind == "basis") {
        if (ln.tokens.size() != 4) throw parse_error("basis takes a row count", ln.number);
        const int k = static_cast<int>(parse_length(ln.tokens[3], ln.number));
        if (k < 0) throw parse_error("negative row count", ln.number);
        for (int r = 0; r < k; ++r) {
          if (++i >= lines.size()) throw parse_error("missing basis row", ln.number);
          d.rows.push_back(lines[i].tokens);
        }
      } else if (ln.tokens.size() != 3) {
        throw parse_error("space kind '" + d.kind + "' takes no arguments", ln.number);
      }
      directives.push_back(std::move(d));
      ++i;
    } else {
      throw parse_error("unknown directive '" + cmd + "'", ln.number);
    }
  }

  WeightedGraph g(std::move(vertex_names), std::move(edges));
  g.validate();

  TotalVertexSpace total = standard_total(g);
  std::vector<char> assigned(g.num_vertices(), 0);
  for (const auto& d : directives) {
    const int v = g.vertex_index(d.vertex);
    if (v < 0) throw parse_error("space for undeclared vertex '" + d.vertex + "'", d.line);
    if (assigned[v]) throw parse_error("duplicate space for vertex '" + d.vertex + "'", d.line);
    assigned[v] = 1;
    if (d.kind == "standard") {
      total.spaces[v] = make_space(SpaceKind::standard, g, v);
    } else if (d.kind == "minimal") {
      total.spaces[v] = make_space(SpaceKind::minimal, g, v);
    } else if (d.kind == "maximal") {
      total.spaces[v] = make_space(SpaceKind::maximal, g, v);
    } else if (d.kind == "dualstandard") {
      total.spaces[v] = make_space(SpaceKind::dualstandard, g, v);
    } else if (d.kind == "magnetic") {
      try {
        total.spaces[v] = make_space(SpaceKind::magnetic, g, v, d.magnetic_p);
      } catch (const precondition_error& err) {
        throw parse_error(err.what(), d.line);
      }
    } else if (d.kind == "basis") {
      const int deg = g.degree(v);
      Mat rows(static_cast<int>(d.rows.size()), deg);
      for (size_t r = 0; r < d.rows.size(); ++r) {
        if (static_cast<int>(d.rows[r].size()) != deg)
          throw parse_error("basis row has wrong arity (deg v = " + std::to_string(deg) + ")", d.line);
        for (int c = 0; c < deg; ++c) rows(static_cast<int>(r), c) = parse_complex(d.rows[r][c]);
      }
      try {
        total.spaces[v] = make_basis_space(g, v, rows);
      } catch (const numeric_error& err) {
        throw parse_error(std::string("non-orthonormalizable basis: ") + err.what(), d.line);
      }
    } else {
      throw parse_error("unknown space kind '" + d.kind + "'", d.line);
    }
  }
  return ParsedGraph{std::move(g), std::move(total)};
}

ParsedGraph parse_graphspec_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graphspec(buf.str());
}

std::string print_graphspec(const WeightedGraph& g, const TotalVertexSpace& total) {
  std::ostringstream out;
  out << "graphspec v1\n";
  for (int v = 0; v < g.num_vertices(); ++v) out << "vertex " << g.vertex_name(v) << "\n";
  char buf[64];
  for (const Edge& e : g.edges()) {
    std::snprintf(buf, sizeof buf, "%.17g", e.length);
    out << "edge " << e.name << " " << g.vertex_name(e.tail) << " " << g.vertex_name(e.head)
        << " " << buf << "\n";
  }
  for (int v = 0; v < g.num_vertices(); ++v) {
    const VertexSpace& s = total.spaces[v];
    const std::string kind = recognize_space(s);
    if (kind == "standard") continue;  // the default
    if (!kind.empty()) {
      out << "space " << g.vertex_name(v) << " " << kind << "\n";
      continue;
    }
    out << "space " << g.vertex_name(v) << " basis " << s.dim() << "\n";
    for (int c = 0; c < s.dim(); ++c) {
      for (int r = 0; r < s.deg(); ++r) out << (r ? " " : "") << format_complex(s.basis(r, c));
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace qg
