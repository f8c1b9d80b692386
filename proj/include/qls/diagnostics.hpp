// Conserved quantities, error norms and convergence-order fits.
#pragma once

#include "qls/model.hpp"
#include "qls/spectral.hpp"

#include <vector>

namespace qls {

/// Integral of |u|^2 over the period, via Parseval.
double mass(const Field& u);

/// Hamiltonian of the pseudo-attractive film model:
///   1/2 int |u_x|^2 + 1/4 int |u|^4 - 1/4 int |(|u|^2)_x|^2
double energy(const Field& u);

/// Hamiltonian of a general polynomial model:
///   1/2 int |u_x|^2 + 1/2 int F(|u|^2) - sign/4 int |(g(|u|^2))_x|^2,  F' = f.
/// The gradient terms are evaluated as -1/2 <u, D2 u> and sign/4 <g, D2 g>
/// with the same D2 the flow uses (Nyquist mode included), which makes the
/// value an exact invariant of the semi-discrete system.
double energy(const ModelSpec& model, const Field& u);

struct ErrorNorms {
  double l2;
  double h1;
};

/// Throws std::invalid_argument when the grids differ.
ErrorNorms error_norms(const Field& u, const Field& reference);

struct ConvergenceRow {
  long n_steps;
  double err_l2;
  double err_h1;
};

struct ConvergenceTable {
  double t_final = 0.0;
  std::vector<ConvergenceRow> rows;

  /// Throws unless step counts strictly increase and every error is positive.
  void validate() const;
};

struct ConvergenceOrder {
  double l2;
  double h1;
};

/// Least-squares slope of log(err) against log(tau), tau = T / N_t, with
/// equal weights. Throws std::invalid_argument for fewer than three rows.
ConvergenceOrder fit_order(const ConvergenceTable& table);

/// Successive error ratios err(N_t) / err(2 N_t) down the table.
std::vector<double> halving_ratios(const ConvergenceTable& table, bool h1);

} // namespace qls
