#include "cusp/modespace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include "cusp/numerics.hpp"

namespace cusp {

namespace {

constexpr double kNodeTol = 1e-12;

void append_span(std::vector<double>& nodes, double from, double to,
                 double& h, double h_min, double h_max, double growth,
                 double layer_end) {
  // Marches from `from` (already in nodes) to `to`, landing exactly on `to`.
  double y = from;
  while (y < to - kNodeTol) {
    if (y >= layer_end) h = std::min(h * growth, h_max);
    double step = std::max(h, h_min);
    if (y + 1.5 * step >= to) {
      // Split the remainder evenly to avoid a sliver cell.
      const int k = std::max(1, static_cast<int>(std::ceil((to - y) / step)));
      const double hh = (to - y) / k;
      for (int i = 1; i <= k; ++i) nodes.push_back(y + i * hh);
      return;
    }
    y += step;
    nodes.push_back(y);
  }
}

}  // namespace

std::size_t CuspGrid::node_at(double value) const {
  for (std::size_t i = 0; i < y.size(); ++i)
    if (std::abs(y[i] - value) <= kNodeTol * std::max(1.0, std::abs(value)))
      return i;
  throw BetaNotOnGrid("requested breakpoint " + std::to_string(value) +
                      " is not a grid node");
}

GridPtr graded_grid(double t_min, double beta, double alpha_bar, double y_max,
                    double h_max, int n_layer, double growth, int quad_order) {
  if (!(beta > 1.0) || !(y_max > beta))
    throw BetaNotOnGrid("graded_grid requires 1 < beta < y_max");
  auto g = std::make_shared<CuspGrid>();
  const double lw = std::pow(t_min, 2.0 / 3.0);
  const double h_min = lw / n_layer;
  const double layer_end = std::min(1.0 + 10.0 * lw, y_max);
  g->layer_width = lw;
  g->h_min = h_min;
  g->quad_order = quad_order;
  g->beta = beta;
  g->alpha_bar = alpha_bar;

  std::vector<double> brk = {1.0, y_max};
  if (alpha_bar > 1.0 && alpha_bar < y_max) brk.push_back(alpha_bar);
  brk.push_back(beta);
  if (layer_end > 1.0 && layer_end < y_max) brk.push_back(layer_end);
  std::sort(brk.begin(), brk.end());
  brk.erase(std::unique(brk.begin(), brk.end(),
                        [](double a, double b) { return std::abs(a - b) < kNodeTol; }),
            brk.end());

  std::vector<double> nodes = {1.0};
  double h = h_min;
  for (std::size_t i = 0; i + 1 < brk.size(); ++i)
    append_span(nodes, brk[i], brk[i + 1], h, h_min, h_max, growth, layer_end);
  g->y = std::move(nodes);
  g->beta_index = g->node_at(beta);
  return g;
}

GridPtr uniform_grid(double y_end, std::size_t n, double beta,
                     int quad_order) {
  auto g = std::make_shared<CuspGrid>();
  g->quad_order = quad_order;
  g->y.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    g->y[i] = 1.0 + (y_end - 1.0) * static_cast<double>(i) / n;
  g->beta = beta > 0.0 ? beta : y_end;
  g->beta_index = g->node_at(g->beta);
  g->h_min = (y_end - 1.0) / n;
  return g;
}

GridPtr log_grid(double y_end, std::size_t n, double beta, int quad_order) {
  auto g = std::make_shared<CuspGrid>();
  g->quad_order = quad_order;
  g->y.resize(n + 1);
  const double L = std::log(y_end);
  for (std::size_t i = 0; i <= n; ++i)
    g->y[i] = std::exp(L * static_cast<double>(i) / n);
  g->y[0] = 1.0;
  g->y[n] = y_end;
  g->beta = beta > 0.0 ? beta : y_end;
  g->beta_index = g->node_at(g->beta);
  g->h_min = g->y[1] - g->y[0];
  return g;
}

ModeFunction::ModeFunction(GridPtr grid, int k_max)
    : grid_(std::move(grid)), k_max_(k_max) {
  profiles_.assign(k_max_ + 1,
                   Eigen::VectorXd::Zero(static_cast<long>(grid_->n_nodes())));
}

ModeFunction ModeFunction::zeros(GridPtr grid, int k_max) {
  return ModeFunction(std::move(grid), k_max);
}

Eigen::VectorXd& ModeFunction::profile(int k) {
  if (k < 0 || k > k_max_) throw ModeOutOfRange("mode index out of range");
  return profiles_[k];
}

const Eigen::VectorXd& ModeFunction::profile(int k) const {
  if (k < 0 || k > k_max_) throw ModeOutOfRange("mode index out of range");
  return profiles_[k];
}

double mode_basis(int k, double x) {
  return k == 0 ? 1.0 : std::sqrt(2.0) * std::cos(k * M_PI * x);
}

double mode_basis_deriv(int k, double x) {
  return k == 0 ? 0.0 : -std::sqrt(2.0) * k * M_PI * std::sin(k * M_PI * x);
}

double ModeFunction::operator()(double x, double y) const {
  const auto& yn = grid_->y;
  auto it = std::upper_bound(yn.begin(), yn.end(), y);
  std::size_t i = it == yn.begin() ? 0 : static_cast<std::size_t>(it - yn.begin()) - 1;
  if (i >= yn.size() - 1) i = yn.size() - 2;
  const double s = (y - yn[i]) / (yn[i + 1] - yn[i]);
  double out = 0.0;
  for (int k = 0; k <= k_max_; ++k) {
    const double pk = profiles_[k][static_cast<long>(i)] * (1.0 - s) +
                      profiles_[k][static_cast<long>(i + 1)] * s;
    out += pk * mode_basis(k, x);
  }
  return out;
}

ModeFunction& ModeFunction::operator*=(double s) {
  for (auto& p : profiles_) p *= s;
  return *this;
}

ModeFunction& ModeFunction::operator+=(const ModeFunction& other) {
  if (other.grid_ != grid_ || other.k_max_ != k_max_)
    throw GridMismatch("ModeFunction::operator+= on different spaces");
  for (int k = 0; k <= k_max_; ++k) profiles_[k] += other.profiles_[k];
  return *this;
}

double inner_product(const ModeFunction& u, const ModeFunction& v) {
  const auto& g = *u.grid();
  if (u.grid() != v.grid() || u.k_max() != v.k_max())
    throw GridMismatch("inner_product: grids or mode cutoffs differ");
  const QuadRule base = gauss_legendre(g.quad_order);
  double total = 0.0;
  for (std::size_t c = 0; c < g.n_cells(); ++c) {
    const double y0 = g.y[c], y1 = g.y[c + 1];
    const double mid = 0.5 * (y0 + y1), half = 0.5 * (y1 - y0);
    for (int q = 0; q < g.quad_order; ++q) {
      const double y = mid + half * base.x[q];
      const double w = half * base.w[q];
      const double s = (y - y0) / (y1 - y0);
      double acc = 0.0;
      for (int k = 0; k <= u.k_max(); ++k) {
        const double uk = u.profile(k)[static_cast<long>(c)] * (1 - s) +
                          u.profile(k)[static_cast<long>(c + 1)] * s;
        const double vk = v.profile(k)[static_cast<long>(c)] * (1 - s) +
                          v.profile(k)[static_cast<long>(c + 1)] * s;
        acc += uk * vk;
      }
      total += w * acc / (y * y);
    }
  }
  return total;
}

double norm(const ModeFunction& u) { return std::sqrt(inner_product(u, u)); }

ModeFunction project_mode(const ModeFunction& u, int ell) {
  if (ell < 0 || ell > u.k_max())
    throw ModeOutOfRange("project_mode: ell out of range");
  ModeFunction out(u.grid(), u.k_max());
  out.profile(ell) = u.profile(ell);
  return out;
}

ModeFunction project_below(const ModeFunction& u, int k) {
  if (k < 0 || k > u.k_max() + 1)
    throw ModeOutOfRange("project_below: k out of range");
  ModeFunction out(u.grid(), u.k_max());
  for (int ell = 0; ell < k; ++ell) out.profile(ell) = u.profile(ell);
  return out;
}

ModeFunction truncate_zero_mode(const ModeFunction& u, double beta) {
  const std::size_t bi = u.grid()->node_at(beta);
  ModeFunction out = u;
  for (std::size_t i = bi; i < u.grid()->n_nodes(); ++i)
    out.profile(0)[static_cast<long>(i)] = 0.0;
  return out;
}

void ModeFunction::write_csv(std::ostream& os) const {
  os << "y";
  for (int k = 0; k <= k_max_; ++k) os << ",profile_" << k;
  os << "\n";
  char buf[32];
  for (std::size_t i = 0; i < grid_->n_nodes(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", grid_->y[i]);
    os << buf;
    for (int k = 0; k <= k_max_; ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g", profiles_[k][static_cast<long>(i)]);
      os << "," << buf;
    }
    os << "\n";
  }
}

void ModeFunction::write_binary(std::ostream& os) const {
  // Header: magic "CUSPMF01", then little-endian u32 k_max, u64 node count,
  // u64 beta index, followed by the node ordinates and the K+1 profiles.
  os.write("CUSPMF01", 8);
  const std::uint32_t kk = static_cast<std::uint32_t>(k_max_);
  const std::uint64_t nn = grid_->n_nodes();
  const std::uint64_t bi = grid_->beta_index;
  os.write(reinterpret_cast<const char*>(&kk), 4);
  os.write(reinterpret_cast<const char*>(&nn), 8);
  os.write(reinterpret_cast<const char*>(&bi), 8);
  os.write(reinterpret_cast<const char*>(grid_->y.data()),
           static_cast<std::streamsize>(8 * nn));
  for (const auto& p : profiles_)
    os.write(reinterpret_cast<const char*>(p.data()),
             static_cast<std::streamsize>(8 * nn));
}

ModeFunction ModeFunction::read_binary(std::istream& is) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, "CUSPMF01", 8) != 0)
    throw Error("ModeFunction::read_binary: bad magic");
  std::uint32_t kk = 0;
  std::uint64_t nn = 0, bi = 0;
  is.read(reinterpret_cast<char*>(&kk), 4);
  is.read(reinterpret_cast<char*>(&nn), 8);
  is.read(reinterpret_cast<char*>(&bi), 8);
  auto g = std::make_shared<CuspGrid>();
  g->y.resize(nn);
  is.read(reinterpret_cast<char*>(g->y.data()),
          static_cast<std::streamsize>(8 * nn));
  g->beta_index = bi;
  g->beta = g->y.at(bi);
  ModeFunction out(g, static_cast<int>(kk));
  for (std::uint32_t k = 0; k <= kk; ++k)
    is.read(reinterpret_cast<char*>(out.profile(static_cast<int>(k)).data()),
            static_cast<std::streamsize>(8 * nn));
  if (!is) throw Error("ModeFunction::read_binary: truncated stream");
  return out;
}

}  // namespace cusp
