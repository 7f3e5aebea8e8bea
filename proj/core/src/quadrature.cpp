#include "spinsurf/quadrature.hpp"

#include <cstdlib>
#include <sstream>

#include "spinsurf/error.hpp"
#include "spinsurf/parallel.hpp"

namespace spinsurf {
namespace {

double axis_weight(int k, int n, bool periodic) { return (!periodic && (k == 0 || k == n - 1)) ? 0.5 : 1.0; }

void require_form_grid(const Form1& form) {
  require_same_grid(form.p, form.q, "Form1");
}

}  // namespace

cplx integrate2d(const ComplexField& f, MaskPolicy policy) {
  const Grid2D& g = f.grid();
  if (policy == MaskPolicy::reject && f.has_singular())
    throw MaskError("integrate2d: field has singular nodes and no mask policy was given");
  std::vector<cplx> terms(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.is_singular(i)) {
      terms[i] = 0.0;
      continue;
    }
    const double w = axis_weight(g.ix_of(i), g.nx(), g.periodic_x()) * axis_weight(g.iy_of(i), g.ny(), g.periodic_y());
    terms[i] = w * f[i];
  }
  return pairwise_sum(std::span<const cplx>(terms)) * (g.hx() * g.hy());
}

cplx path_integrate(const Form1& form, std::span<const NodeIndex> path) {
  require_form_grid(form);
  const Grid2D& g = form.p.grid();
  std::vector<cplx> terms;
  terms.reserve(path.size());
  for (std::size_t s = 1; s < path.size(); ++s) {
    const NodeIndex a = path[s - 1];
    const NodeIndex b = path[s];
    if (!g.contains(a) || !g.contains(b)) throw PathError("path_integrate: node outside the grid");
    int dx = b.ix - a.ix;
    int dy = b.iy - a.iy;
    if (g.periodic_x() && std::abs(dx) == g.nx() - 1) dx = dx > 0 ? -1 : 1;
    if (g.periodic_y() && std::abs(dy) == g.ny() - 1) dy = dy > 0 ? -1 : 1;
    if (std::abs(dx) + std::abs(dy) != 1) {
      std::ostringstream os;
      os << "path_integrate: nodes (" << a.ix << "," << a.iy << ") and (" << b.ix << "," << b.iy
         << ") are not adjacent";
      throw PathError(os.str());
    }
    const cplx dz(dx * g.hx(), dy * g.hy());
    const std::size_t ia = g.index(a), ib = g.index(b);
    terms.push_back(0.5 * (form.p[ia] + form.p[ib]) * dz + 0.5 * (form.q[ia] + form.q[ib]) * std::conj(dz));
  }
  return pairwise_sum(std::span<const cplx>(terms));
}

std::vector<NodeIndex> l_path(NodeIndex from, NodeIndex to, PathOrder order) {
  std::vector<NodeIndex> path{from};
  NodeIndex cur = from;
  auto walk_x = [&] {
    while (cur.ix != to.ix) {
      cur.ix += to.ix > cur.ix ? 1 : -1;
      path.push_back(cur);
    }
  };
  auto walk_y = [&] {
    while (cur.iy != to.iy) {
      cur.iy += to.iy > cur.iy ? 1 : -1;
      path.push_back(cur);
    }
  };
  if (order == PathOrder::x_first) {
    walk_x();
    walk_y();
  } else {
    walk_y();
    walk_x();
  }
  return path;
}

ComplexField primitive(const Form1& form, NodeIndex base, PathOrder order) {
  require_form_grid(form);
  const Grid2D& g = form.p.grid();
  if (!g.contains(base)) throw PathError("primitive: basepoint outside the grid");
  ComplexField out(g);
  const cplx dzx(g.hx(), 0.0), dzy(0.0, g.hy());
  auto seg = [&](std::size_t ia, std::size_t ib, cplx dz) {
    return 0.5 * (form.p[ia] + form.p[ib]) * dz + 0.5 * (form.q[ia] + form.q[ib]) * std::conj(dz);
  };
  auto sweep_x = [&](int iy, int from_ix) {
    for (int ix = from_ix + 1; ix < g.nx(); ++ix)
      out(ix, iy) = out(ix - 1, iy) + seg(g.index(ix - 1, iy), g.index(ix, iy), dzx);
    for (int ix = from_ix - 1; ix >= 0; --ix)
      out(ix, iy) = out(ix + 1, iy) - seg(g.index(ix, iy), g.index(ix + 1, iy), dzx);
  };
  auto sweep_y = [&](int ix, int from_iy) {
    for (int iy = from_iy + 1; iy < g.ny(); ++iy)
      out(ix, iy) = out(ix, iy - 1) + seg(g.index(ix, iy - 1), g.index(ix, iy), dzy);
    for (int iy = from_iy - 1; iy >= 0; --iy)
      out(ix, iy) = out(ix, iy + 1) - seg(g.index(ix, iy), g.index(ix, iy + 1), dzy);
  };
  out(base.ix, base.iy) = 0.0;
  if (order == PathOrder::x_first) {
    sweep_x(base.iy, base.ix);
    parallel_for(static_cast<std::size_t>(g.nx()), [&](std::size_t ix) { sweep_y(static_cast<int>(ix), base.iy); });
  } else {
    sweep_y(base.ix, base.iy);
    parallel_for(static_cast<std::size_t>(g.ny()), [&](std::size_t iy) { sweep_x(static_cast<int>(iy), base.ix); });
  }
  out.merge_mask(form.p);
  out.merge_mask(form.q);
  return out;
}

std::vector<NodeIndex> rectangle_loop(NodeIndex lo, NodeIndex hi) {
  std::vector<NodeIndex> loop;
  for (int ix = lo.ix; ix <= hi.ix; ++ix) loop.push_back({ix, lo.iy});
  for (int iy = lo.iy + 1; iy <= hi.iy; ++iy) loop.push_back({hi.ix, iy});
  for (int ix = hi.ix - 1; ix >= lo.ix; --ix) loop.push_back({ix, hi.iy});
  for (int iy = hi.iy - 1; iy >= lo.iy; --iy) loop.push_back({lo.ix, iy});
  return loop;
}

}  // namespace spinsurf
