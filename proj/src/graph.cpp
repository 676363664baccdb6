#include "polylap/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>

#include "polylap/error.hpp"
#include "polylap/format.hpp"
#include "polylap/rng.hpp"

namespace polylap {

KernelGraph::KernelGraph(std::size_t n, int dim, double eps, KernelProfile kernel,
                         std::vector<std::size_t> row_offsets,
                         std::vector<std::uint32_t> neighbors, std::vector<double> weights)
    : n_(n),
      dim_(dim),
      eps_(eps),
      kernel_(kernel),
      offsets_(std::move(row_offsets)),
      neighbors_(std::move(neighbors)),
      weights_(std::move(weights)),
      degrees_(n, 0.0) {
  if (offsets_.size() != n_ + 1 || neighbors_.size() != weights_.size() ||
      offsets_.back() != neighbors_.size()) {
    throw ValidationError("KernelGraph: inconsistent adjacency arrays");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    double d = 0.0;
    for (double w : this->weights(i)) d += w;
    degrees_[i] = d;
  }
}

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0)) throw ValidationError("eps must be positive");
  if (eps > 0.5) throw ValidationError("eps must be <= 1/2 (torus metric ball is ambiguous)");
}

void check_cloud(const PointCloud& cloud) {
  if (cloud.size() == 0) throw ValidationError("point cloud is empty");
  if (cloud.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw ValidationError("point cloud too large for 32-bit node indices");
  }
}

/// W_ij for a pair, or 0 when the pair is not an edge.  Shared by the cell
/// list and the brute-force builder so both select identical edge sets.
struct PairWeight {
  int d;
  double eps;
  double inv_eps_d;
  KernelProfile kernel;

  double operator()(const double* x, const double* y) const {
    const double dist = std::sqrt(torus_distance_sq_unchecked(x, y, d));
    if (!(dist < eps)) return 0.0;
    return inv_eps_d * kernel(dist / eps);
  }
};

PairWeight make_pair_weight(const PointCloud& cloud, double eps, const KernelProfile& kernel) {
  return {cloud.dim, eps, std::pow(eps, -cloud.dim), kernel};
}

struct Row {
  std::vector<std::uint32_t> idx;
  std::vector<double> w;
};

void sort_row(Row& row) {
  std::vector<std::size_t> order(row.idx.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return row.idx[a] < row.idx[b]; });
  Row sorted;
  sorted.idx.reserve(order.size());
  sorted.w.reserve(order.size());
  for (auto k : order) {
    sorted.idx.push_back(row.idx[k]);
    sorted.w.push_back(row.w[k]);
  }
  row = std::move(sorted);
}

/// Builds rows in fixed-size chunks so peak memory stays close to the final
/// adjacency size.
template <class RowFn>
KernelGraph assemble(const PointCloud& cloud, double eps, const KernelProfile& kernel,
                     RowFn&& fill_row) {
  const std::size_t n = cloud.size();
  std::vector<std::size_t> offsets{0};
  offsets.reserve(n + 1);
  std::vector<std::uint32_t> nbrs;
  std::vector<double> wts;
  constexpr std::size_t kChunk = 4096;
  std::vector<Row> rows;
  for (std::size_t lo = 0; lo < n; lo += kChunk) {
    const std::size_t hi = std::min(n, lo + kChunk);
    rows.assign(hi - lo, Row{});
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(hi - lo); ++r) {
      Row& row = rows[static_cast<std::size_t>(r)];
      fill_row(lo + static_cast<std::size_t>(r), row);
      sort_row(row);
    }
    for (auto& row : rows) {
      nbrs.insert(nbrs.end(), row.idx.begin(), row.idx.end());
      wts.insert(wts.end(), row.w.begin(), row.w.end());
      offsets.push_back(nbrs.size());
    }
  }
  return KernelGraph(n, cloud.dim, eps, kernel, std::move(offsets), std::move(nbrs),
                     std::move(wts));
}

}  // namespace

KernelGraph build_graph(const PointCloud& cloud, double eps, const KernelProfile& kernel) {
  check_eps(eps);
  check_cloud(cloud);
  const int d = cloud.dim;
  const std::size_t n = cloud.size();

  // Cells per axis: side 1/m >= eps; total cell count capped.
  std::size_t m = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(1.0 / eps)));
  while (m > 1 && std::pow(static_cast<double>(m), d) > static_cast<double>(1u << 24)) --m;
  std::size_t cells = 1;
  for (int l = 0; l < d; ++l) cells *= m;

  auto cell_coord = [m](double x) {
    return std::min(m - 1, static_cast<std::size_t>(x * static_cast<double>(m)));
  };
  auto cell_of = [&](std::size_t i) {
    const auto p = cloud.point(i);
    std::size_t c = 0;
    for (int l = 0; l < d; ++l) c = c * m + cell_coord(p[static_cast<std::size_t>(l)]);
    return c;
  };

  // Counting sort of points into cells.
  std::vector<std::size_t> cell_start(cells + 1, 0);
  std::vector<std::size_t> point_cell(n);
  for (std::size_t i = 0; i < n; ++i) {
    point_cell[i] = cell_of(i);
    ++cell_start[point_cell[i] + 1];
  }
  for (std::size_t c = 0; c < cells; ++c) cell_start[c + 1] += cell_start[c];
  std::vector<std::uint32_t> cell_points(n);
  {
    std::vector<std::size_t> fill(cell_start.begin(), cell_start.end() - 1);
    for (std::size_t i = 0; i < n; ++i) cell_points[fill[point_cell[i]]++] = static_cast<std::uint32_t>(i);
  }

  // Distinct periodic shifts per axis; fewer than 3 when m < 3.
  std::vector<std::size_t> shifts;
  for (std::size_t s : {std::size_t{0}, std::size_t{1}, m - 1}) {
    if (s < m && std::find(shifts.begin(), shifts.end(), s) == shifts.end()) shifts.push_back(s);
  }

  const PairWeight weight = make_pair_weight(cloud, eps, kernel);
  const double* xs = cloud.coords.data();
  const auto ud = static_cast<std::size_t>(d);

  return assemble(cloud, eps, kernel, [&](std::size_t i, Row& row) {
    std::vector<std::size_t> home(ud);
    {
      std::size_t c = point_cell[i];
      for (int l = d - 1; l >= 0; --l) {
        home[static_cast<std::size_t>(l)] = c % m;
        c /= m;
      }
    }
    const std::size_t ns = shifts.size();
    std::size_t combos = 1;
    for (int l = 0; l < d; ++l) combos *= ns;
    for (std::size_t combo = 0; combo < combos; ++combo) {
      std::size_t rest = combo;
      std::size_t c = 0;
      for (int l = 0; l < d; ++l) {
        const std::size_t sh = shifts[rest % ns];
        rest /= ns;
        c = c * m + (home[static_cast<std::size_t>(l)] + sh) % m;
      }
      for (std::size_t k = cell_start[c]; k < cell_start[c + 1]; ++k) {
        const std::uint32_t j = cell_points[k];
        if (j == i) continue;
        const double w = weight(xs + i * ud, xs + j * ud);
        if (w > 0.0) {
          row.idx.push_back(j);
          row.w.push_back(w);
        }
      }
    }
  });
}

KernelGraph build_graph_brute_force(const PointCloud& cloud, double eps,
                                    const KernelProfile& kernel) {
  check_eps(eps);
  check_cloud(cloud);
  const PairWeight weight = make_pair_weight(cloud, eps, kernel);
  const double* xs = cloud.coords.data();
  const auto ud = static_cast<std::size_t>(cloud.dim);
  const std::size_t n = cloud.size();
  return assemble(cloud, eps, kernel, [&](std::size_t i, Row& row) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double w = weight(xs + i * ud, xs + j * ud);
      if (w > 0.0) {
        row.idx.push_back(static_cast<std::uint32_t>(j));
        row.w.push_back(w);
      }
    }
  });
}

namespace {

inline double row_apply(const KernelGraph& g, std::span<const double> u, std::size_t i) {
  const auto nb = g.neighbors(i);
  const auto w = g.weights(i);
  const double ui = u[i];
  double acc = 0.0;
  for (std::size_t k = 0; k < nb.size(); ++k) acc += w[k] * (ui - u[nb[k]]);
  return acc;
}

}  // namespace

void GraphLaplacian::apply(std::span<const double> u, std::span<double> out) const {
  const KernelGraph& g = *graph_;
  check_length(u.size(), g.size(), "apply_laplacian");
  check_length(out.size(), g.size(), "apply_laplacian");
  const double c = scale();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(g.size()); ++i) {
    out[static_cast<std::size_t>(i)] = c * row_apply(g, u, static_cast<std::size_t>(i));
  }
}

GraphSignal apply_laplacian(const KernelGraph& graph, std::span<const double> u) {
  GraphSignal out(graph.size());
  GraphLaplacian(graph).apply(u, out);
  return out;
}

GraphSignal apply_laplacian_serial(const KernelGraph& graph, std::span<const double> u) {
  check_length(u.size(), graph.size(), "apply_laplacian");
  GraphSignal out(graph.size());
  const double c = GraphLaplacian(graph).scale();
  for (std::size_t i = 0; i < graph.size(); ++i) out[i] = c * row_apply(graph, u, i);
  return out;
}

GraphSignal apply_poly_laplacian(const LaplacianOperator& op, std::span<const double> u, int s) {
  check_length(u.size(), op.size(), "apply_poly_laplacian");
  if (s < 0) throw ValidationError("apply_poly_laplacian: s must be >= 0");
  GraphSignal cur(u.begin(), u.end());
  GraphSignal next(u.size());
  for (int k = 0; k < s; ++k) {
    op.apply(cur, next);
    std::swap(cur, next);
  }
  return cur;
}

GraphSignal apply_poly_laplacian(const KernelGraph& graph, std::span<const double> u, int s) {
  return apply_poly_laplacian(GraphLaplacian(graph), u, s);
}

double dirichlet_energy(const LaplacianOperator& op, std::span<const double> u, int s) {
  if (s < 1) throw ValidationError("dirichlet_energy: s must be >= 1");
  const GraphSignal hi = apply_poly_laplacian(op, u, (s + 1) / 2);
  const GraphSignal lo = apply_poly_laplacian(op, u, s / 2);
  return dot_mu(hi, lo);
}

double dirichlet_energy(const KernelGraph& graph, std::span<const double> u, int s) {
  return dirichlet_energy(GraphLaplacian(graph), u, s);
}

double operator_norm_estimate(const LaplacianOperator& op, int iters, std::uint64_t seed) {
  if (iters < 1) throw ValidationError("operator_norm_estimate: iters must be >= 1");
  const std::size_t n = op.size();
  if (n == 0) return 0.0;
  CounterRng rng(seed, stream::kPower);
  GraphSignal v(n), w(n);
  for (auto& x : v) x = rng.normal();
  double nv = norm_mu(v);
  for (auto& x : v) x /= nv;
  double rayleigh = 0.0;
  for (int it = 0; it < iters; ++it) {
    op.apply(v, w);
    rayleigh = dot_mu(w, v);
    const double nw = norm_mu(w);
    if (nw == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
  }
  return std::max(rayleigh, 0.0);
}

double operator_norm_estimate(const KernelGraph& graph, int iters, std::uint64_t seed) {
  return operator_norm_estimate(GraphLaplacian(graph), iters, seed);
}

DegreeStatistics degree_statistics(const KernelGraph& graph) {
  DegreeStatistics st;
  const std::size_t n = graph.size();
  if (n == 0) return st;
  const double inv_n = 1.0 / static_cast<double>(n);
  st.min_normalized_degree = std::numeric_limits<double>::infinity();
  st.max_normalized_degree = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = graph.degree(i) * inv_n;
    st.min_normalized_degree = std::min(st.min_normalized_degree, d);
    st.max_normalized_degree = std::max(st.max_normalized_degree, d);
    st.max_neighbor_count = std::max(st.max_neighbor_count, graph.neighbors(i).size());
  }
  return st;
}

void write_edge_list(std::ostream& os, const KernelGraph& graph) {
  os << graph.size() << ' ' << graph.dim() << ' ' << format_double(graph.eps()) << ' '
     << graph.kernel().name() << '\n';
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const auto nb = graph.neighbors(i);
    const auto w = graph.weights(i);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (nb[k] > i) os << i << ' ' << nb[k] << ' ' << format_double(w[k]) << '\n';
    }
  }
  if (!os) throw IoError("write_edge_list: stream write failed");
}

KernelGraph read_edge_list(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("read_edge_list: missing header");
  std::istringstream header(line);
  std::string n_s, d_s, eps_s, kernel_s;
  if (!(header >> n_s >> d_s >> eps_s >> kernel_s)) {
    throw ValidationError("read_edge_list: header must be 'n d eps kernel'");
  }
  const auto n = static_cast<std::size_t>(parse_int(n_s, "edge list n"));
  const int d = static_cast<int>(parse_int(d_s, "edge list d"));
  const double eps = parse_double(eps_s, "edge list eps");
  const KernelProfile kernel = KernelProfile::parse(kernel_s);

  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(n);
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string a, b, w;
    if (!(ls >> a >> b >> w)) {
      throw ValidationError("read_edge_list: malformed line " + std::to_string(line_no));
    }
    const auto i = static_cast<std::size_t>(parse_int(a, "edge index"));
    const auto j = static_cast<std::size_t>(parse_int(b, "edge index"));
    const double wt = parse_double(w, "edge weight");
    if (i >= n || j >= n || i == j) {
      throw ValidationError("read_edge_list: bad edge on line " + std::to_string(line_no));
    }
    rows[i].emplace_back(static_cast<std::uint32_t>(j), wt);
    rows[j].emplace_back(static_cast<std::uint32_t>(i), wt);
  }
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> nbrs;
  std::vector<double> wts;
  for (auto& row : rows) {
    std::sort(row.begin(), row.end());
    for (const auto& [j, wt] : row) {
      nbrs.push_back(j);
      wts.push_back(wt);
    }
    offsets.push_back(nbrs.size());
  }
  return KernelGraph(n, d, eps, kernel, std::move(offsets), std::move(nbrs), std::move(wts));
}

}  // namespace polylap
