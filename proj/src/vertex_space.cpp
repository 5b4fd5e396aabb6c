#include "qg/vertex_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace qg {

int TotalVertexSpace::total_dim() const {
  int d = 0;
  for (const auto& s : spaces) d += s.dim();
  return d;
}

int TotalVertexSpace::offset(int v) const {
  int off = 0;
  for (int i = 0; i < v; ++i) off += spaces[i].dim();
  return off;
}

Mat TotalVertexSpace::full_basis(const WeightedGraph& g) const {
  Mat b = Mat::Zero(g.num_slots(), total_dim());
  int col = 0;
  for (int v = 0; v < g.num_vertices(); ++v) {
    const VertexSpace& s = spaces[v];
    b.block(g.slot_offset(v), col, s.deg(), s.dim()) = s.basis;
    col += s.dim();
  }
  return b;
}

Mat TotalVertexSpace::full_projection(const WeightedGraph& g) const {
  Mat b = full_basis(g);
  return b * b.adjoint();
}

VertexSpace make_space(SpaceKind kind, const WeightedGraph& g, int v, int magnetic_p) {
  const int d = g.degree(v);
  VertexSpace s;
  s.vertex = v;
  switch (kind) {
    case SpaceKind::standard:
      s.basis = Mat::Constant(d, 1, cx(1.0 / std::sqrt(double(d)), 0));
      break;
    case SpaceKind::minimal:
      s.basis = Mat(d, 0);
      break;
    case SpaceKind::maximal:
      s.basis = Mat::Identity(d, d);
      break;
    case SpaceKind::dualstandard:
      s.basis = orthonormal_complement(make_space(SpaceKind::standard, g, v).basis);
      break;
    case SpaceKind::magnetic: {
      if (magnetic_p < 0 || magnetic_p >= d)
        throw precondition_error("magnetic parameter out of range [0, deg v)");
      s.basis = Mat(d, 1);
      const double w = 2.0 * std::numbers::pi * magnetic_p / d;
      for (int j = 0; j < d; ++j)
        s.basis(j, 0) = std::polar(1.0 / std::sqrt(double(d)), w * j);
      break;
    }
  }
  return s;
}

VertexSpace make_basis_space(const WeightedGraph& g, int v, const Mat& rows, double drop_tol) {
  if (rows.cols() != g.degree(v))
    throw precondition_error("basis row arity does not match deg v");
  VertexSpace s;
  s.vertex = v;
  // rows are given as row vectors; orthonormalize as columns
  s.basis = orthonormalize_columns(rows.transpose(), drop_tol);
  return s;
}

TotalVertexSpace make_total(SpaceKind kind, const WeightedGraph& g) {
  TotalVertexSpace t;
  for (int v = 0; v < g.num_vertices(); ++v) t.spaces.push_back(make_space(kind, g, v));
  return t;
}

VertexSpace dual_space(const VertexSpace& s) {
  VertexSpace d;
  d.vertex = s.vertex;
  d.basis = orthonormal_complement(s.basis);
  return d;
}

TotalVertexSpace dual_total(const TotalVertexSpace& t) {
  TotalVertexSpace d;
  for (const auto& s : t.spaces) d.spaces.push_back(dual_space(s));
  return d;
}

static RVec slot_signs(const WeightedGraph& g, int v) {
  const auto& slots = g.incident_slots(v);
  RVec sg(slots.size());
  for (size_t i = 0; i < slots.size(); ++i)
    sg(i) = slots[i].end == EdgeEnd::minus ? -1.0 : 1.0;
  return sg;
}

VertexSpace oriented_space(const VertexSpace& s, const WeightedGraph& g) {
  VertexSpace o;
  o.vertex = s.vertex;
  o.basis = slot_signs(g, s.vertex).cast<cx>().asDiagonal() * s.basis;
  return o;
}

TotalVertexSpace oriented_total(const TotalVertexSpace& t, const WeightedGraph& g) {
  TotalVertexSpace o;
  for (const auto& s : t.spaces) o.spaces.push_back(oriented_space(s, g));
  return o;
}

Mat scattering_matrix(const VertexSpace& s) {
  return 2.0 * s.projection() - Mat::Identity(s.deg(), s.deg());
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { for (int i = 0; i < n; ++i) parent[i] = i; }
  int find(int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Components of the slot graph at one vertex, ordered by smallest slot index.
std::vector<std::vector<int>> slot_components(const Mat& p, double tol) {
  const int d = static_cast<int>(p.rows());
  UnionFind uf(d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (std::abs(p(i, j)) > tol) uf.unite(i, j);
  std::vector<std::vector<int>> comps;
  std::vector<int> root_of(d, -1);
  for (int i = 0; i < d; ++i) {
    int r = uf.find(i);
    if (root_of[r] < 0) {
      root_of[r] = static_cast<int>(comps.size());
      comps.push_back({});
    }
    comps[root_of[r]].push_back(i);
  }
  return comps;
}

// Orthonormal basis of G_v restricted to a slot subset, from the restricted
// projection block (eigenvectors with eigenvalue near 1).
Mat restricted_basis(const Mat& p, const std::vector<int>& comp) {
  const int k = static_cast<int>(comp.size());
  Mat block(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) block(i, j) = p(comp[i], comp[j]);
  HermEig eig = hermitian_eigen(block, 1e-8);
  int dim = 0;
  for (int i = 0; i < k; ++i) {
    if (eig.values(i) > 0.2 && eig.values(i) < 0.8)
      throw numeric_error("vertex space does not split cleanly over slot components");
    if (eig.values(i) > 0.5) ++dim;
  }
  return eig.vectors.rightCols(dim);
}

}  // namespace

Decomposition irreducible_decomposition(const WeightedGraph& g, const TotalVertexSpace& total,
                                        double block_tol) {
  std::vector<std::string> names;
  std::vector<VertexSpace> spaces;
  std::vector<int> pi;
  std::vector<std::vector<int>> fibers(g.num_vertices());
  // slot of g -> new vertex index
  std::vector<int> owner(g.num_slots(), -1);

  for (int v = 0; v < g.num_vertices(); ++v) {
    const Mat p = total.spaces[v].projection();
    auto comps = slot_components(p, block_tol);
    int check_dim = 0;
    for (size_t c = 0; c < comps.size(); ++c) {
      const int nv = static_cast<int>(names.size());
      names.push_back(comps.size() == 1 ? g.vertex_name(v)
                                        : g.vertex_name(v) + "#" + std::to_string(c + 1));
      pi.push_back(v);
      fibers[v].push_back(nv);
      for (int local : comps[c]) owner[g.slot_offset(v) + local] = nv;
      VertexSpace s;
      s.vertex = nv;
      s.basis = restricted_basis(p, comps[c]);
      check_dim += s.dim();
      spaces.push_back(std::move(s));
    }
    if (check_dim != total.spaces[v].dim())
      throw numeric_error("decomposition lost dimensions at vertex " + g.vertex_name(v));
  }

  std::vector<Edge> edges;
  for (int e = 0; e < g.num_edges(); ++e) {
    Edge ed = g.edge(e);
    ed.tail = owner[g.slot_index(e, EdgeEnd::minus)];
    ed.head = owner[g.slot_index(e, EdgeEnd::plus)];
    edges.push_back(ed);
  }
  WeightedGraph ng(std::move(names), std::move(edges));

  // the component slots keep their relative order, but re-check against the
  // new graph's SlotOrder and permute basis rows if the orders differ
  TotalVertexSpace nt;
  nt.spaces.resize(ng.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) {
    auto comps = slot_components(total.spaces[v].projection(), block_tol);
    for (size_t c = 0; c < comps.size(); ++c) {
      int nv = fibers[v][c];
      const auto& new_slots = ng.incident_slots(nv);
      VertexSpace& s = spaces[nv];
      Mat reordered(s.deg(), s.dim());
      for (int r = 0; r < s.deg(); ++r) {
        // locate new slot r among the old component slots
        const Slot& ns = new_slots[r];
        int old_local = -1;
        for (size_t q = 0; q < comps[c].size(); ++q) {
          const Slot& os = g.incident_slots(v)[comps[c][q]];
          if (os.edge == ns.edge && os.end == ns.end) { old_local = static_cast<int>(q); break; }
        }
        reordered.row(r) = s.basis.row(old_local);
      }
      s.basis = std::move(reordered);
      nt.spaces[nv] = std::move(s);
    }
  }
  return Decomposition{std::move(ng), std::move(nt), std::move(pi), std::move(fibers)};
}

bool is_connected(const WeightedGraph& g, const TotalVertexSpace& total) {
  return irreducible_decomposition(g, total).graph.connected_underlying();
}

VertexSpace permutation_closure(const VertexSpace& s) {
  const int d = s.deg();
  Mat basis = s.basis;
  // closing under adjacent transpositions closes under all of S_d
  bool grew = true;
  while (grew) {
    grew = false;
    for (int t = 0; t + 1 < d; ++t) {
      Mat swapped = basis;
      swapped.row(t).swap(swapped.row(t + 1));
      Mat joint(d, basis.cols() + swapped.cols());
      joint << basis, swapped;
      Mat q = orthonormalize_columns(joint, 1e-10, true);
      if (q.cols() > basis.cols()) {
        basis = q;
        grew = true;
      }
    }
  }
  VertexSpace out;
  out.vertex = s.vertex;
  out.basis = basis;
  return out;
}

std::string recognize_space(const VertexSpace& s, double tol) {
  const int d = s.deg();
  const Mat p = s.projection();
  auto matches = [&](const Mat& q) { return inf_norm(p - q) <= tol; };
  if (s.dim() == 0) return "minimal";
  if (s.dim() == d && matches(Mat::Identity(d, d))) return "maximal";
  if (s.dim() == 1) {
    for (int mp = 0; mp < d; ++mp) {
      Mat m(d, 1);
      const double w = 2.0 * std::numbers::pi * mp / d;
      for (int j = 0; j < d; ++j) m(j, 0) = std::polar(1.0 / std::sqrt(double(d)), w * j);
      if (matches(m * m.adjoint())) return mp == 0 ? "standard" : "magnetic " + std::to_string(mp);
    }
  }
  if (s.dim() == d - 1) {
    Mat e = Mat::Constant(d, d, cx(1.0 / d, 0));
    if (matches(Mat::Identity(d, d) - e)) return "dualstandard";
  }
  return "";
}

}  // namespace qg
