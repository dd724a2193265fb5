#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ultrarelax/landscape.hpp"
#include "ultrarelax/spectral.hpp"

namespace ultrarelax {

// Dense reference representation at quotient depth n: one mass per leaf,
// basin-major ordering (index = basin * p^n + leaf ordinal). Depths are
// capped at N * p^n <= 2000 states; beyond that the dense oracle is the
// wrong tool and construction refuses.
int dense_dimension(const LandscapeModel& model, int n);

std::size_t dense_index(const LandscapeModel& model, int n, const TreeAddress& x);
TreeAddress dense_address(const LandscapeModel& model, int n, std::size_t index);

// Full jump generator on the leaves at time t. Off-diagonal entry (a, b) is
// the probability flow b -> a: w_I(dist(a,b), t) p^{-n} within basin I, and
// w_{IJ}(t) p^{-n} from any leaf of basin J to any leaf of basin I. The
// diagonal is the negated off-diagonal column sum, so mass is conserved up
// to summation-order rounding.
Eigen::MatrixXd build_dense_generator(const LandscapeModel& model, int n, double t);

// Leaf-mass vector of the normalized uniform density on a ball.
Eigen::VectorXd uniform_ball_mass(const LandscapeModel& model, int n, const BallSpec& ball);

struct DenseEvolution {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;  // leaf masses
  double max_renormalization = 0.0;
};

// Fixed-step rk4 on the dense master equation, recorded at the grid times.
// Mass is renormalized when it drifts beyond 1e-12 (drift recorded); a leaf
// below -1e-9 aborts with a step diagnostic.
DenseEvolution solve_dense_ode(const Eigen::VectorXd& mass0, const LandscapeModel& model, int n,
                               const std::vector<double>& grid, double dt);

// Frozen-time eigenvalue audit: diagonalizes the dense generator and
// compares its spectrum, as a sorted multiset, against the predictions
//   { mean-sector eigenvalues } union
//   { -gamma_I(r), multiplicity (p-1) p^{-r}, r = 1-n..0, every basin I },
// with gamma assigned to wavelet scales by the chosen convention. The
// mismatch is reported relative to each predicted magnitude (floored at a
// fraction of the spectral radius); multiplicities are enforced by the
// elementwise sorted comparison.
struct SpectralMatchReport {
  bool ok = false;
  double max_rel_mismatch = 0.0;
  double max_imag = 0.0;
  std::vector<double> dense_eigenvalues;      // sorted ascending
  std::vector<double> predicted_eigenvalues;  // sorted ascending
  std::string detail;
};

SpectralMatchReport spectral_match(const LandscapeModel& model, int n, double t,
                                   double rel_tol = 1e-8,
                                   EigenlevelConvention convention = EigenlevelConvention::support);

}  // namespace ultrarelax
