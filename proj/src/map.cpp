#include "sing/map.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "sing/error.hpp"

namespace sing {

QuadratureRule gauss_legendre(int order) {
  if (order < 1) throw InvalidArgument("quadrature order must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int n = order;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    if (n == 1) {
      x = 0.0;
      dp = 1.0;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

SparsityPattern SparsityPattern::dense(int p) {
  SparsityPattern s;
  s.dimension = p;
  s.order.resize(p);
  std::iota(s.order.begin(), s.order.end(), 0);
  return s;
}

SparsityPattern SparsityPattern::diagonal(int p) {
  SparsityPattern s = dense(p);
  for (int k = 0; k < p; ++k)
    for (int j = 0; j < k; ++j) s.inactive.emplace(j, k);
  return s;
}

std::vector<int> SparsityPattern::active_inputs(int k) const {
  std::vector<int> out;
  for (int j = 0; j < k; ++j) {
    if (!inactive.contains({j, k})) out.push_back(j);
  }
  out.push_back(k);
  return out;
}

std::vector<int> SparsityPattern::position_of() const {
  std::vector<int> pos(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
  return pos;
}

void SparsityPattern::validate() const {
  if (dimension < 1) throw InvalidArgument("pattern dimension must be positive");
  if (static_cast<int>(order.size()) != dimension) throw InvalidArgument("pattern ordering has wrong length");
  std::vector<bool> seen(dimension, false);
  for (int v : order) {
    if (v < 0 || v >= dimension || seen[v]) throw InvalidArgument("pattern ordering is not a permutation");
    seen[v] = true;
  }
  for (const auto& [j, k] : inactive) {
    if (!(0 <= j && j < k && k < dimension)) throw InvalidArgument("inactive pair out of range");
  }
}

MapComponent::MapComponent(int index, std::vector<int> active_inputs, int max_degree, int quadrature_order)
    : index_(index), active_(std::move(active_inputs)), max_degree_(max_degree) {
  if (max_degree < 1) throw InvalidArgument("max degree must be >= 1");
  if (active_.empty() || active_.back() != index_ || !std::is_sorted(active_.begin(), active_.end()) ||
      std::adjacent_find(active_.begin(), active_.end()) != active_.end() || active_.front() < 0) {
    throw InvalidArgument("active inputs must be sorted, unique, and end with the component index");
  }
  const int d = local_dimension();
  c_basis_ = Basis({d - 1, max_degree, BasisFamily::Polynomial});
  h_basis_ = Basis({d, max_degree - 1, BasisFamily::FunctionWithConstant});
  c_ = Eigen::VectorXd::Zero(c_basis_.size());
  h_ = Eigen::VectorXd::Zero(h_basis_.size());
  rule_ = gauss_legendre(quadrature_order);
}

Eigen::VectorXd MapComponent::coefficients() const {
  Eigen::VectorXd out(num_coefficients());
  out << c_, h_;
  return out;
}

void MapComponent::set_coefficients(const Eigen::VectorXd& c, const Eigen::VectorXd& h) {
  if (c.size() != num_c() || h.size() != num_h()) throw InvalidArgument("coefficient vector has wrong length");
  if (!c.allFinite() || !h.allFinite()) throw InvalidArgument("coefficients must be finite");
  c_ = c;
  h_ = h;
}

void MapComponent::set_coefficients(const Eigen::VectorXd& packed) {
  if (packed.size() != num_coefficients()) throw InvalidArgument("coefficient vector has wrong length");
  set_coefficients(packed.head(num_c()), packed.tail(num_h()));
}

void MapComponent::gather(std::span<const double> x, std::span<double> local) const {
  for (std::size_t a = 0; a < active_.size(); ++a) local[a] = x[active_[a]];
}

namespace {

double checked_exp(double h) {
  if (!(h <= kExponentClamp)) throw FitDivergence("map exponent exceeded clamp threshold (fit diverged)");
  return std::exp(h);
}

}  // namespace

double MapComponent::evaluate(std::span<const double> x) const {
  const int d = local_dimension();
  std::vector<double> local(d);
  gather(x, local);
  Eigen::VectorXd cv(num_c()), hv(num_h());
  c_basis_.values(std::span<const double>(local.data(), d - 1), cv);
  double value = c_.dot(cv);
  const double xk = local[d - 1];
  if (h_basis_.spec().max_degree == 0) return value + xk * checked_exp(h_[0]);
  double integral = 0.0;
  for (std::size_t q = 0; q < rule_.nodes.size(); ++q) {
    local[d - 1] = 0.5 * xk * (1.0 + rule_.nodes[q]);
    h_basis_.values(local, hv);
    integral += rule_.weights[q] * checked_exp(h_.dot(hv));
  }
  return value + 0.5 * xk * integral;
}

double MapComponent::h_value(std::span<const double> x) const {
  std::vector<double> local(local_dimension());
  gather(x, local);
  Eigen::VectorXd hv(num_h());
  h_basis_.values(local, hv);
  return h_.dot(hv);
}

double MapComponent::diag_deriv(std::span<const double> x) const { return checked_exp(h_value(x)); }

void MapComponent::jet(std::span<const double> x, ComponentJet& out, bool coefficient_derivatives) const {
  const int d = local_dimension();
  const int last = d - 1;
  const int dc = d - 1;
  const int nc = num_c();
  const int nh = num_h();
  const int nt = nc + nh;

  std::vector<double> local(d);
  gather(x, local);

  Eigen::VectorXd cv(nc);
  Eigen::MatrixXd cg, ch;
  c_basis_.evaluate(std::span<const double>(local.data(), dc), cv, &cg, &ch);

  Eigen::VectorXd hv(nh);
  Eigen::MatrixXd hg, hh;
  h_basis_.evaluate(local, hv, &hg, &hh);
  out.h = h_.dot(hv);
  const double E = checked_exp(out.h);
  out.h_grad = hg.transpose() * h_;
  out.h_hess.resize(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) out.h_hess(a, b) = hh.col(a * d + b).dot(h_);

  // Quadrature accumulations over t in [0, x_k].
  const double xk = local[last];
  double I0 = 0.0;
  Eigen::VectorXd I1 = Eigen::VectorXd::Zero(dc);
  Eigen::MatrixXd I2 = Eigen::MatrixXd::Zero(dc, dc);
  Eigen::VectorXd dI0;
  Eigen::MatrixXd dI1, dI2;
  if (coefficient_derivatives) {
    dI0 = Eigen::VectorXd::Zero(nh);
    dI1 = Eigen::MatrixXd::Zero(nh, dc);
    dI2 = Eigen::MatrixXd::Zero(nh, dc * dc);
  }
  std::vector<double> y = local;
  Eigen::VectorXd pv(nh), gq(d);
  Eigen::MatrixXd pg, ph;
  Eigen::MatrixXd hab(dc, dc);
  // With beta = 1 the integrand is a constant and the quadrature is skipped.
  const bool constant_h = h_basis_.spec().max_degree == 0;
  if (constant_h) {
    I0 = xk * E;
    if (coefficient_derivatives) dI0 = I0 * hv;
  }
  for (std::size_t q = 0; !constant_h && q < rule_.nodes.size(); ++q) {
    y[last] = 0.5 * xk * (1.0 + rule_.nodes[q]);
    const double w = 0.5 * xk * rule_.weights[q];
    if (dc > 0) {
      h_basis_.evaluate(y, pv, &pg, &ph);
    } else {
      h_basis_.values(y, pv);
    }
    const double e = checked_exp(h_.dot(pv)) * w;
    I0 += e;
    if (coefficient_derivatives) dI0.noalias() += e * pv;
    if (dc == 0) continue;
    gq.noalias() = pg.transpose() * h_;
    for (int a = 0; a < dc; ++a) {
      I1[a] += gq[a] * e;
      for (int b = 0; b < dc; ++b) {
        hab(a, b) = ph.col(a * d + b).dot(h_);
        I2(a, b) += (hab(a, b) + gq[a] * gq[b]) * e;
      }
    }
    if (!coefficient_derivatives) continue;
    for (int a = 0; a < dc; ++a) {
      dI1.col(a).noalias() += e * (pg.col(a) + gq[a] * pv);
      for (int b = 0; b < dc; ++b) {
        dI2.col(a * dc + b).noalias() +=
            e * (ph.col(a * d + b) + gq[b] * pg.col(a) + gq[a] * pg.col(b) + (hab(a, b) + gq[a] * gq[b]) * pv);
      }
    }
  }

  out.value = c_.dot(cv) + I0;
  out.grad.resize(d);
  out.hess.resize(d, d);
  for (int a = 0; a < dc; ++a) {
    out.grad[a] = cg.col(a).dot(c_) + I1[a];
    for (int b = 0; b < dc; ++b) out.hess(a, b) = ch.col(a * dc + b).dot(c_) + I2(a, b);
  }
  out.grad[last] = E;
  for (int a = 0; a < d; ++a) {
    out.hess(a, last) = out.h_grad[a] * E;
    out.hess(last, a) = out.hess(a, last);
  }

  out.has_coefficient_derivatives = coefficient_derivatives;
  if (!coefficient_derivatives) return;

  out.value_theta.resize(nt);
  out.value_theta << cv, dI0;
  out.grad_theta = Eigen::MatrixXd::Zero(nt, d);
  out.hess_theta = Eigen::MatrixXd::Zero(nt, d * d);
  out.h_hess_theta = Eigen::MatrixXd::Zero(nt, d * d);
  for (int a = 0; a < dc; ++a) {
    out.grad_theta.col(a).head(nc) = cg.col(a);
    out.grad_theta.col(a).tail(nh) = dI1.col(a);
    for (int b = 0; b < dc; ++b) {
      out.hess_theta.col(a * d + b).head(nc) = ch.col(a * dc + b);
      out.hess_theta.col(a * d + b).tail(nh) = dI2.col(a * dc + b);
    }
  }
  out.grad_theta.col(last).tail(nh) = E * hv;
  for (int a = 0; a < d; ++a) {
    const Eigen::VectorXd mixed = E * (hg.col(a) + out.h_grad[a] * hv);
    out.hess_theta.col(a * d + last).tail(nh) = mixed;
    out.hess_theta.col(last * d + a).tail(nh) = mixed;
    for (int b = 0; b < d; ++b) out.h_hess_theta.col(a * d + b).tail(nh) = hh.col(a * d + b);
  }
}

TriangularMap::TriangularMap(SparsityPattern pattern, int max_degree, int quadrature_order)
    : pattern_(std::move(pattern)), max_degree_(max_degree) {
  pattern_.validate();
  components_.reserve(pattern_.dimension);
  for (int k = 0; k < pattern_.dimension; ++k)
    components_.emplace_back(k, pattern_.active_inputs(k), max_degree, quadrature_order);
  build_offsets();
}

TriangularMap::TriangularMap(SparsityPattern pattern, std::vector<MapComponent> components)
    : pattern_(std::move(pattern)), components_(std::move(components)) {
  pattern_.validate();
  if (static_cast<int>(components_.size()) != pattern_.dimension)
    throw InvalidArgument("component count does not match pattern dimension");
  max_degree_ = components_.front().max_degree();
  for (int k = 0; k < pattern_.dimension; ++k) {
    const MapComponent& c = components_[k];
    if (c.index() != k || c.active_inputs() != pattern_.active_inputs(k))
      throw InvalidArgument("component active inputs inconsistent with sparsity pattern");
  }
  build_offsets();
}

void TriangularMap::build_offsets() {
  offsets_.assign(1, 0);
  for (const auto& c : components_) offsets_.push_back(offsets_.back() + c.num_coefficients());
}

Eigen::VectorXd eval_map(const TriangularMap& map, std::span<const double> x) {
  Eigen::VectorXd out(map.dimension());
  for (int k = 0; k < map.dimension(); ++k) out[k] = map.component(k).evaluate(x);
  return out;
}

Eigen::VectorXd invert_map(const TriangularMap& map, std::span<const double> y) {
  const int p = map.dimension();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(p);
  std::span<const double> xs(x.data(), p);
  for (int k = 0; k < p; ++k) {
    const MapComponent& comp = map.component(k);
    auto residual = [&](double t) {
      x[k] = t;
      return comp.evaluate(xs) - y[k];
    };
    double lo = -1.0, hi = 1.0;
    double flo = residual(lo), fhi = residual(hi);
    while (flo > 0.0 || fhi < 0.0) {
      if (flo > 0.0) {
        lo *= 2.0;
        flo = residual(lo);
      }
      if (fhi < 0.0) {
        hi *= 2.0;
        fhi = residual(hi);
      }
      if (hi > 1e6 || lo < -1e6) throw NumericalError("invert_map: root not bracketed within |x| <= 1e6");
    }
    while (hi - lo > 1e-6) {
      const double mid = 0.5 * (lo + hi);
      (residual(mid) > 0.0 ? hi : lo) = mid;
    }
    double t = 0.5 * (lo + hi);
    for (int iter = 0; iter < 50; ++iter) {
      const double f = residual(t);
      if (std::abs(f) < 1e-10) break;
      double next = t - f / comp.diag_deriv(xs);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      (f > 0.0 ? hi : lo) = t;
      t = next;
    }
    x[k] = t;
  }
  return x;
}

double pullback_logdensity(const TriangularMap& map, std::span<const double> x) {
  const int p = map.dimension();
  double out = -0.5 * p * std::log(2.0 * std::numbers::pi);
  for (int k = 0; k < p; ++k) {
    const MapComponent& comp = map.component(k);
    const double s = comp.evaluate(x);
    out += -0.5 * s * s + comp.h_value(x);
  }
  return out;
}

Eigen::MatrixXd logpullback_hessian(const TriangularMap& map, std::span<const double> x) {
  const int p = map.dimension();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(p, p);
  ComponentJet jet;
  for (int m = 0; m < p; ++m) {
    const MapComponent& comp = map.component(m);
    comp.jet(x, jet, false);
    const auto& act = comp.active_inputs();
    const int d = comp.local_dimension();
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        out(act[a], act[b]) += -(jet.grad[a] * jet.grad[b] + jet.value * jet.hess(a, b)) + jet.h_hess(a, b);
  }
  return out;
}

double mixed_partial_logpullback(const TriangularMap& map, std::span<const double> x, int j, int k) {
  const int p = map.dimension();
  if (j < 0 || k < 0 || j >= p || k >= p) throw InvalidArgument("mixed partial index out of range");
  double out = 0.0;
  ComponentJet jet;
  for (int m = std::max(j, k); m < p; ++m) {
    const MapComponent& comp = map.component(m);
    const auto& act = comp.active_inputs();
    const auto ia = std::lower_bound(act.begin(), act.end(), j);
    const auto ib = std::lower_bound(act.begin(), act.end(), k);
    if (ia == act.end() || *ia != j || ib == act.end() || *ib != k) continue;
    comp.jet(x, jet, false);
    const auto a = ia - act.begin();
    const auto b = ib - act.begin();
    out += -(jet.grad[a] * jet.grad[b] + jet.value * jet.hess(a, b)) + jet.h_hess(a, b);
  }
  return out;
}

}  // namespace sing
