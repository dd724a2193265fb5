#include "ultrarelax/dense.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "ultrarelax/errors.hpp"

namespace ultrarelax {

namespace {

constexpr int dense_state_cap = 2000;

// Length of the common digit prefix of two leaves given as ordinals.
int common_prefix(std::uint64_t a, std::uint64_t b, int p, int n) {
  int k = 0;
  std::uint64_t pw = ipow(p, n - 1);
  while (k < n && a / pw == b / pw) {
    ++k;
    pw /= static_cast<std::uint64_t>(p);
  }
  return k;
}

}  // namespace

int dense_dimension(const LandscapeModel& model, int n) {
  model.validate();
  if (n < 1) throw ConfigError("dense: depth must be >= 1");
  const auto leaves = ipow(model.p, n);
  const auto dim = static_cast<std::uint64_t>(model.num_basins) * leaves;
  if (dim > dense_state_cap)
    throw ConfigError("dense: " + std::to_string(dim) + " states exceed the cap of " +
                      std::to_string(dense_state_cap) +
                      "; lower the depth or use the spectral solver");
  return static_cast<int>(dim);
}

std::size_t dense_index(const LandscapeModel& model, int n, const TreeAddress& x) {
  validate_address(model.p, x);
  if (x.basin >= model.num_basins) throw ConfigError("dense: address basin exceeds the model");
  if (x.depth() != n) throw ConfigError("dense: address depth does not match the grid");
  return static_cast<std::size_t>(x.basin) * ipow(model.p, n) + leaf_ordinal(model.p, x);
}

TreeAddress dense_address(const LandscapeModel& model, int n, std::size_t index) {
  const auto leaves = ipow(model.p, n);
  const auto basin = static_cast<int>(index / leaves);
  if (basin >= model.num_basins) throw ConfigError("dense: index out of range");
  return leaf_address(model.p, n, basin, index % leaves);
}

Eigen::MatrixXd build_dense_generator(const LandscapeModel& model, int n, double t) {
  const int dim = dense_dimension(model, n);
  const auto leaves = static_cast<int>(ipow(model.p, n));
  const double leaf_volume = ball_volume(model.p, -n);

  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(dim, dim);

  // Intra-basin block: rate density by distance class.
  for (int basin = 0; basin < model.num_basins; ++basin) {
    const auto& profile = model.profiles[static_cast<std::size_t>(basin)];
    std::vector<double> level_rate(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
      level_rate[static_cast<std::size_t>(m)] = profile.level(m, t);
      if (!(level_rate[static_cast<std::size_t>(m)] > 0.0))
        throw ConfigError("dense: intra-basin rates must be strictly positive");
    }
    const int base = basin * leaves;
    for (int a = 0; a < leaves; ++a)
      for (int b = 0; b < leaves; ++b) {
        if (a == b) continue;
        const int k = common_prefix(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b),
                                    model.p, n);
        q(base + a, base + b) = level_rate[static_cast<std::size_t>(k)] * leaf_volume;
      }
  }

  // Exchange blocks: uniform landing density in the destination basin.
  for (int to = 0; to < model.num_basins; ++to)
    for (int from = 0; from < model.num_basins; ++from) {
      if (to == from) continue;
      const double w = model.exchange_rate(to, from)(t);
      if (!(w >= 0.0)) throw ConfigError("dense: exchange rates must be non-negative");
      const double entry = w * leaf_volume;
      for (int a = 0; a < leaves; ++a)
        for (int b = 0; b < leaves; ++b) q(to * leaves + a, from * leaves + b) = entry;
    }

  for (int col = 0; col < dim; ++col) {
    q(col, col) = 0.0;
    q(col, col) = -q.col(col).sum();
  }
  return q;
}

Eigen::VectorXd uniform_ball_mass(const LandscapeModel& model, int n, const BallSpec& ball) {
  const int dim = dense_dimension(model, n);
  validate_ball(model.p, ball);
  if (ball.basin >= model.num_basins) throw ConfigError("dense: ball basin exceeds the model");
  if (-ball.scale > n) throw ConfigError("dense: ball is finer than the grid");

  Eigen::VectorXd mass = Eigen::VectorXd::Zero(dim);
  const auto leaves = ipow(model.p, n);
  const auto inside = ipow(model.p, n + ball.scale);
  const double share = 1.0 / static_cast<double>(inside);
  for (std::uint64_t leaf = 0; leaf < leaves; ++leaf) {
    const auto x = leaf_address(model.p, n, ball.basin, leaf);
    if (ball_contains(ball, x)) mass(static_cast<Eigen::Index>(dense_index(model, n, x))) = share;
  }
  return mass;
}

DenseEvolution solve_dense_ode(const Eigen::VectorXd& mass0, const LandscapeModel& model, int n,
                               const std::vector<double>& grid, double dt) {
  const int dim = dense_dimension(model, n);
  if (mass0.size() != dim) throw ConfigError("dense ode: state size does not match the grid");
  if (std::abs(mass0.sum() - 1.0) > 1e-12)
    throw ConfigError("dense ode: initial mass must sum to 1 within 1e-12");
  if (mass0.minCoeff() < -1e-12) throw ConfigError("dense ode: initial mass must be non-negative");
  if (!(dt > 0.0)) throw ConfigError("dense ode: dt must be positive");
  if (grid.empty()) throw ConfigError("dense ode: empty time grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ConfigError("dense ode: time grid must be strictly increasing");

  DenseEvolution evo;
  evo.times = grid;
  evo.states.reserve(grid.size());
  evo.states.push_back(mass0);

  Eigen::VectorXd u = mass0;
  for (std::size_t cell = 1; cell < grid.size(); ++cell) {
    const double a = grid[cell - 1];
    const double b = grid[cell];
    const auto steps = std::max<long long>(1, std::llround((b - a) / dt));
    const double h = (b - a) / static_cast<double>(steps);
    for (long long k = 0; k < steps; ++k) {
      const double tk = a + h * static_cast<double>(k);
      const Eigen::MatrixXd qa = build_dense_generator(model, n, tk);
      const Eigen::MatrixXd qm = build_dense_generator(model, n, tk + 0.5 * h);
      const Eigen::MatrixXd qb = build_dense_generator(model, n, tk + h);
      const Eigen::VectorXd k1 = qa * u;
      const Eigen::VectorXd k2 = qm * (u + 0.5 * h * k1);
      const Eigen::VectorXd k3 = qm * (u + 0.5 * h * k2);
      const Eigen::VectorXd k4 = qb * (u + h * k3);
      u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (u.minCoeff() < -1e-9)
        throw NumericalError("dense ode: mass went below -1e-9 at t=" + std::to_string(tk + h) +
                             "; reduce dt");
      const double drift = std::abs(u.sum() - 1.0);
      if (drift > 1e-12) {
        evo.max_renormalization = std::max(evo.max_renormalization, drift);
        u /= u.sum();
      }
    }
    evo.states.push_back(u);
  }
  return evo;
}

SpectralMatchReport spectral_match(const LandscapeModel& model, int n, double t, double rel_tol,
                                   EigenlevelConvention convention) {
  const int dim = dense_dimension(model, n);
  const auto q = build_dense_generator(model, n, t);

  std::vector<std::complex<double>> dense;
  {
    const Eigen::EigenSolver<Eigen::MatrixXd> solver(q);
    if (solver.info() != Eigen::Success)
      throw NumericalError("spectral_match: dense eigensolver failed to converge");
    dense.reserve(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) dense.push_back(solver.eigenvalues()(i));
  }

  std::vector<std::complex<double>> predicted;
  predicted.reserve(static_cast<std::size_t>(dim));
  {
    const auto qm = generator_matrix(model, t);
    const Eigen::EigenSolver<Eigen::MatrixXd> solver(qm);
    if (solver.info() != Eigen::Success)
      throw NumericalError("spectral_match: mean-sector eigensolver failed to converge");
    for (int i = 0; i < model.num_basins; ++i) predicted.push_back(solver.eigenvalues()(i));
  }

  std::ostringstream detail;
  for (int basin = 0; basin < model.num_basins; ++basin) {
    const int b = basin;
    const auto outflow = [&model, b](double tau) { return model.exit_rate(b, tau); };
    for (int r = 1 - n; r <= 0; ++r) {
      const int gscale = convention == EigenlevelConvention::support ? r : r - 1;
      const double gamma =
          gamma_eigenvalue(model.profiles[static_cast<std::size_t>(basin)], outflow(t), gscale, t);
      const auto multiplicity = (static_cast<std::uint64_t>(model.p) - 1) * ipow(model.p, -r);
      detail << "basin " << basin << " scale " << r << ": -gamma = " << -gamma
             << ", multiplicity " << multiplicity << "\n";
      for (std::uint64_t c = 0; c < multiplicity; ++c) predicted.emplace_back(-gamma, 0.0);
    }
  }

  const auto by_parts = [](const std::complex<double>& a, const std::complex<double>& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  };
  std::sort(dense.begin(), dense.end(), by_parts);
  std::sort(predicted.begin(), predicted.end(), by_parts);

  SpectralMatchReport report;
  report.detail = detail.str();
  if (predicted.size() != dense.size()) {
    // Counting bug: the predicted multiset must tile the space exactly.
    report.ok = false;
    report.max_rel_mismatch = std::numeric_limits<double>::infinity();
    return report;
  }

  double max_abs = 0.0;
  for (const auto& v : predicted) max_abs = std::max(max_abs, std::abs(v));
  const double floor = std::max(1e-3 * max_abs, 1e-30);

  report.dense_eigenvalues.reserve(dense.size());
  report.predicted_eigenvalues.reserve(predicted.size());
  for (std::size_t i = 0; i < dense.size(); ++i) {
    report.max_imag = std::max(report.max_imag, std::abs(dense[i].imag()));
    const double denom = std::max(std::abs(predicted[i]), floor);
    report.max_rel_mismatch =
        std::max(report.max_rel_mismatch, std::abs(dense[i] - predicted[i]) / denom);
    report.dense_eigenvalues.push_back(dense[i].real());
    report.predicted_eigenvalues.push_back(predicted[i].real());
  }
  report.ok = report.max_rel_mismatch <= rel_tol;
  return report;
}

}  // namespace ultrarelax
