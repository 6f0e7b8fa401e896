#include "sing/basis.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

#include "sing/error.hpp"

namespace sing {

namespace {

// He_0..He_nmax and first two derivatives at x.
void hermite_poly_table(int nmax, double x, double* v, double* d1, double* d2) {
  v[0] = 1.0;
  if (nmax >= 1) v[1] = x;
  for (int n = 1; n < nmax; ++n) v[n + 1] = x * v[n] - n * v[n - 1];
  for (int n = 0; n <= nmax; ++n) {
    d1[n] = n >= 1 ? n * v[n - 1] : 0.0;
    d2[n] = n >= 2 ? n * (n - 1) * v[n - 2] : 0.0;
  }
}

// psi_0..psi_{nmax+1}; psi_{nmax+1} is needed for the derivative of psi_nmax.
void hermite_func_table(int nmax, double x, double* v, double* d1, double* d2) {
  std::vector<double> psi(nmax + 2);
  psi[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  psi[1] = std::numbers::sqrt2 * x * psi[0];
  for (int n = 1; n <= nmax; ++n) {
    psi[n + 1] = std::sqrt(2.0 / (n + 1)) * x * psi[n] - std::sqrt(static_cast<double>(n) / (n + 1)) * psi[n - 1];
  }
  for (int n = 0; n <= nmax; ++n) {
    v[n] = psi[n];
    d1[n] = (n >= 1 ? std::sqrt(n / 2.0) * psi[n - 1] : 0.0) - std::sqrt((n + 1) / 2.0) * psi[n + 1];
    d2[n] = (x * x - (2.0 * n + 1.0)) * psi[n];
  }
}

void check_degree(int degree) {
  if (degree < 0) throw InvalidArgument("Hermite degree must be non-negative");
}

}  // namespace

double hermite_poly(int degree, double x) {
  check_degree(degree);
  std::vector<double> v(degree + 1), d1(degree + 1), d2(degree + 1);
  hermite_poly_table(degree, x, v.data(), d1.data(), d2.data());
  return v[degree];
}

double hermite_poly_deriv(int degree, double x) { return degree == 0 ? 0.0 : degree * hermite_poly(degree - 1, x); }

double hermite_poly_deriv2(int degree, double x) {
  return degree < 2 ? 0.0 : degree * (degree - 1) * hermite_poly(degree - 2, x);
}

double hermite_func(int degree, double x) {
  check_degree(degree);
  std::vector<double> v(degree + 1), d1(degree + 1), d2(degree + 1);
  hermite_func_table(degree, x, v.data(), d1.data(), d2.data());
  return v[degree];
}

double hermite_func_deriv(int degree, double x) {
  check_degree(degree);
  std::vector<double> v(degree + 1), d1(degree + 1), d2(degree + 1);
  hermite_func_table(degree, x, v.data(), d1.data(), d2.data());
  return d1[degree];
}

double hermite_func_deriv2(int degree, double x) { return (x * x - (2.0 * degree + 1.0)) * hermite_func(degree, x); }

namespace {

void append_with_total(int dimension, int position, int remaining, MultiIndex& current,
                       std::vector<MultiIndex>& out) {
  if (position == dimension - 1) {
    current[position] = remaining;
    out.push_back(current);
    return;
  }
  for (int d = remaining; d >= 0; --d) {
    current[position] = d;
    append_with_total(dimension, position + 1, remaining - d, current, out);
  }
}

}  // namespace

std::vector<MultiIndex> multiindex_set(int dimension, int max_degree) {
  if (dimension < 0 || max_degree < 0) throw InvalidArgument("multiindex_set: negative dimension or degree");
  std::vector<MultiIndex> out;
  if (dimension == 0) {
    out.emplace_back();
    return out;
  }
  MultiIndex current(dimension, 0);
  for (int total = 0; total <= max_degree; ++total) append_with_total(dimension, 0, total, current, out);
  return out;
}

Basis::Basis(BasisSpec spec) : spec_(spec), indices_(multiindex_set(spec.dimension, spec.max_degree)) {
  for (auto& t : table_) t.resize(spec_.max_degree + 1, spec_.dimension);
  support_.reserve(indices_.size());
  for (const auto& m : indices_) {
    std::vector<int> sup;
    for (int i = 0; i < spec_.dimension; ++i)
      if (m[i] > 0) sup.push_back(i);
    support_.push_back(std::move(sup));
  }
}

void Basis::univariate(std::span<const double> point, int /*order*/) const {
  assert(static_cast<int>(point.size()) == spec_.dimension);
  const int nmax = spec_.max_degree;
  std::vector<double> v(nmax + 1), d1(nmax + 1), d2(nmax + 1);
  for (int i = 0; i < spec_.dimension; ++i) {
    if (spec_.family == BasisFamily::Polynomial) {
      hermite_poly_table(nmax, point[i], v.data(), d1.data(), d2.data());
      for (int m = 0; m <= nmax; ++m) {
        table_[0](m, i) = v[m];
        table_[1](m, i) = d1[m];
        table_[2](m, i) = d2[m];
      }
    } else {
      table_[0](0, i) = 1.0;
      table_[1](0, i) = 0.0;
      table_[2](0, i) = 0.0;
      if (nmax >= 1) {
        hermite_func_table(nmax - 1, point[i], v.data(), d1.data(), d2.data());
        for (int m = 1; m <= nmax; ++m) {
          table_[0](m, i) = v[m - 1];
          table_[1](m, i) = d1[m - 1];
          table_[2](m, i) = d2[m - 1];
        }
      }
    }
  }
}

void Basis::values(std::span<const double> point, Eigen::Ref<Eigen::VectorXd> out) const {
  evaluate(point, out, nullptr, nullptr);
}

void Basis::evaluate(std::span<const double> point, Eigen::Ref<Eigen::VectorXd> values, Eigen::MatrixXd* gradient,
                     Eigen::MatrixXd* hessian) const {
  if (static_cast<int>(point.size()) != spec_.dimension) throw InvalidArgument("Basis::evaluate: wrong point length");
  const int dim = spec_.dimension;
  const int nb = size();
  univariate(point, hessian ? 2 : (gradient ? 1 : 0));
  if (gradient) gradient->setZero(nb, dim);
  if (hessian) hessian->setZero(nb, dim * dim);

  // Degree-0 factors are 1 with zero derivatives in both families, so only the
  // support of each index contributes.
  for (int b = 0; b < nb; ++b) {
    const MultiIndex& m = indices_[b];
    const std::vector<int>& sup = support_[b];
    double prod = 1.0;
    for (int i : sup) prod *= table_[0](m[i], i);
    values[b] = prod;
    if (!gradient && !hessian) continue;
    for (int a : sup) {
      double ga = table_[1](m[a], a);
      for (int i : sup) {
        if (i != a) ga *= table_[0](m[i], i);
      }
      if (gradient) (*gradient)(b, a) = ga;
      if (!hessian) continue;
      for (int c : sup) {
        double hac;
        if (c == a) {
          hac = table_[2](m[a], a);
          for (int i : sup) {
            if (i != a) hac *= table_[0](m[i], i);
          }
        } else {
          hac = table_[1](m[a], a) * table_[1](m[c], c);
          for (int i : sup) {
            if (i != a && i != c) hac *= table_[0](m[i], i);
          }
        }
        (*hessian)(b, a * dim + c) = hac;
      }
    }
  }
}

Eigen::VectorXd eval_basis(const BasisSpec& spec, std::span<const double> point) {
  Basis basis(spec);
  Eigen::VectorXd out(basis.size());
  basis.values(point, out);
  return out;
}

Eigen::VectorXd eval_basis_partial(const BasisSpec& spec, std::span<const double> point, int coord) {
  Basis basis(spec);
  Eigen::VectorXd v(basis.size());
  Eigen::MatrixXd g;
  basis.evaluate(point, v, &g, nullptr);
  return g.col(coord);
}

Eigen::VectorXd eval_basis_mixed(const BasisSpec& spec, std::span<const double> point, int coord_a, int coord_b) {
  Basis basis(spec);
  Eigen::VectorXd v(basis.size());
  Eigen::MatrixXd g, h;
  basis.evaluate(point, v, &g, &h);
  return h.col(coord_a * spec.dimension + coord_b);
}

}  // namespace sing
