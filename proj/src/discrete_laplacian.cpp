#include "qg/discrete_laplacian.hpp"

#include <cmath>

namespace qg {

Mat exterior_derivative(const WeightedGraph& g, const TotalVertexSpace& total) {
  Mat d_max = Mat::Zero(g.num_edges(), g.num_slots());
  for (int e = 0; e < g.num_edges(); ++e) {
    const double w = 1.0 / std::sqrt(g.edge(e).length);
    d_max(e, g.slot_index(e, EdgeEnd::plus)) += w;
    d_max(e, g.slot_index(e, EdgeEnd::minus)) -= w;
  }
  return d_max * total.full_basis(g);
}

Mat laplacian(const WeightedGraph& g, const TotalVertexSpace& total, int form_degree) {
  Mat d = exterior_derivative(g, total);
  if (form_degree == 0) return d.adjoint() * d;
  if (form_degree == 1) return d * d.adjoint();
  throw precondition_error("form_degree must be 0 or 1");
}

SpectrumResult spectrum_discrete(const Mat& op, double delta) {
  RVec ev = hermitian_eigenvalues(op, 1e-10);
  if (delta < 0) delta = 1e-8 * (1 + (ev.size() ? std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1))) : 0.0));
  SpectrumResult r;
  r.cluster_tol = delta;
  for (auto [val, mult] : cluster_values(ev, delta)) r.lines.push_back({val, mult, "discrete"});
  return r;
}

PrincipalPart principal_part(const WeightedGraph& g, const TotalVertexSpace& total) {
  if (g.has_self_loops()) throw precondition_error("principal part requires a graph without self-loops");
  if (g.has_double_edges()) throw precondition_error("principal part requires a graph without double edges");
  if (!g.is_equilateral() || std::abs(g.min_length() - 1.0) > 1e-12)
    throw precondition_error("principal part requires all edge lengths equal to 1");

  Mat a_max = Mat::Zero(g.num_slots(), g.num_slots());
  for (int e = 0; e < g.num_edges(); ++e) {
    a_max(g.slot_index(e, EdgeEnd::minus), g.slot_index(e, EdgeEnd::plus)) = 1;
    a_max(g.slot_index(e, EdgeEnd::plus), g.slot_index(e, EdgeEnd::minus)) = 1;
  }
  Mat b = total.full_basis(g);
  PrincipalPart out;
  out.m = b.adjoint() * a_max * b;

  Mat delta0 = laplacian(g, total, 0);
  Mat identity = Mat::Identity(out.m.rows(), out.m.cols());
  if (inf_norm(identity - out.m - delta0) > 1e-10)
    throw numeric_error("principal part consistency check Delta = 1 - M failed");

  for (int e = 0; e < g.num_edges(); ++e) {
    const int v = g.edge(e).tail, w = g.edge(e).head;
    for (auto [a, bb] : {std::pair{v, w}, std::pair{w, v}}) {
      const VertexSpace& sa = total.spaces[a];
      const VertexSpace& sb = total.spaces[bb];
      Mat block = Mat::Zero(sa.deg(), sb.deg());
      int ia = g.slot_index(e, a == v ? EdgeEnd::minus : EdgeEnd::plus) - g.slot_offset(a);
      int ib = g.slot_index(e, bb == v ? EdgeEnd::minus : EdgeEnd::plus) - g.slot_offset(bb);
      block(ia, ib) = 1;
      out.blocks[{a, bb}] = sa.basis.adjoint() * block * sb.basis;
    }
  }
  return out;
}

IndexResult index_discrete(const WeightedGraph& g, const TotalVertexSpace& total) {
  Mat d = exterior_derivative(g, total);
  const int dim_g = static_cast<int>(d.cols());
  // a numerically zero d stays decidable against its norm bound sqrt(2/l0)
  const double scale = std::sqrt(2.0 / g.min_length());
  const int h0 = kernel_dimension(d, 1e-10, scale);
  const int h1 = kernel_dimension(Mat(d.adjoint()), 1e-10, scale);
  IndexResult r{h0, h1, h0 - h1};
  if (r.index != dim_g - g.num_edges())
    throw numeric_error("index does not match dim G - |E|; rank decision suspect");
  return r;
}

}  // namespace qg
