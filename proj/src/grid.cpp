#include <cmath>
#include <numbers>
#include <string>

#include "lich/error.hpp"
#include "lich/fields.hpp"

namespace lich {

std::shared_ptr<const Grid> Grid::make(const ModelSpace& space, std::vector<int> resolution) {
  if (!space.discretizable())
    fail(ErrorKind::capability, "space '" + space.spec_string() +
                                    "' has no field discretization (flat tori n<=3 and the round 2-sphere only)");
  auto g = std::shared_ptr<Grid>(new Grid());
  g->space_ = space;
  g->n_ = space.dim();
  if (space.kind() == SpaceKind::flat_torus) {
    g->torus_ = true;
    const auto periods = space.torus_periods();
    g->periods_.assign(periods.begin(), periods.end());
    if (resolution.size() == 1) resolution.assign(std::size_t(g->n_), resolution.front());
    if (resolution.size() != std::size_t(g->n_))
      fail(ErrorKind::capability, "torus resolution needs one entry per axis");
    std::size_t nodes = 1;
    double w = 1.0;
    for (int a = 0; a < g->n_; ++a) {
      const int na = resolution[std::size_t(a)];
      if (na < 4) fail(ErrorKind::capability, "torus resolution must be >= 4 per axis");
      nodes *= std::size_t(na);
      w *= g->periods_[std::size_t(a)] / na;
    }
    if (nodes > kMaxTorusNodes)
      fail(ErrorKind::capability, "torus grid with " + std::to_string(nodes) +
                                      " nodes exceeds the supported maximum of 4096");
    g->res_ = std::move(resolution);
    g->nodes_ = nodes;
    g->weights_.assign(nodes, w);
  } else {
    g->torus_ = false;
    g->radius_ = space.sphere_radius();
    if (resolution.size() == 1) resolution = {resolution.front(), 2 * resolution.front()};
    if (resolution.size() != 2) fail(ErrorKind::capability, "sphere resolution is N_theta x N_phi");
    const int nt = resolution[0];
    const int np = resolution[1];
    if (nt < 4 || np < 8 || np % 2 != 0)
      fail(ErrorKind::capability, "sphere resolution needs N_theta >= 4 and even N_phi >= 8");
    if (nt > kMaxSphereTheta || np > kMaxSpherePhi)
      fail(ErrorKind::capability, "sphere grid exceeds the supported maximum of 96x192");
    g->res_ = std::move(resolution);
    g->nodes_ = std::size_t(nt) * std::size_t(np);
    g->weights_.resize(g->nodes_);
    const double r2 = g->radius_ * g->radius_;
    for (int j = 0; j < nt; ++j)
      for (int k = 0; k < np; ++k)
        g->weights_[std::size_t(j * np + k)] = r2 * std::sin(g->theta(j)) * g->dtheta() * g->dphi();
  }
  return g;
}

double Grid::volume() const noexcept {
  double v = 0.0;
  for (double w : weights_) v += w;
  return v;
}

void Grid::node_multi_index(std::size_t node, std::span<int> out) const noexcept {
  for (int a = int(res_.size()) - 1; a >= 0; --a) {
    out[std::size_t(a)] = int(node % std::size_t(res_[std::size_t(a)]));
    node /= std::size_t(res_[std::size_t(a)]);
  }
}

std::size_t Grid::node_at(std::span<const int> index) const noexcept {
  std::size_t node = 0;
  for (std::size_t a = 0; a < res_.size(); ++a) {
    const int na = res_[a];
    int i = index[a];
    if (torus_ || a == 1) i = ((i % na) + na) % na;
    node = node * std::size_t(na) + std::size_t(i);
  }
  return node;
}

double Grid::coordinate(std::size_t node, int axis) const noexcept {
  int idx[3] = {0, 0, 0};
  node_multi_index(node, {idx, res_.size()});
  if (torus_) return idx[axis] * periods_[std::size_t(axis)] / res_[std::size_t(axis)];
  return axis == 0 ? theta(idx[0]) : phi(idx[1]);
}

double Grid::theta(int j) const noexcept { return (j + 0.5) * dtheta(); }
double Grid::phi(int k) const noexcept { return k * dphi(); }
double Grid::dtheta() const noexcept { return std::numbers::pi / res_[0]; }
double Grid::dphi() const noexcept { return 2.0 * std::numbers::pi / res_[1]; }

std::string Grid::resolution_string() const {
  std::string s;
  for (std::size_t a = 0; a < res_.size(); ++a) s += (a ? "x" : "") + std::to_string(res_[a]);
  return s;
}

}  // namespace lich
