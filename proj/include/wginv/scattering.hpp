// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef WGINV_SCATTERING_HPP
#define WGINV_SCATTERING_HPP

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "wginv/fem.hpp"
#include "wginv/geometry.hpp"

namespace wginv
{

struct ScatteringOptions
{
  double target_h = 0.05;
  int order = 2;
  int M = -1;  // highest DtN index; -1 selects max(10, N + 5)
  double eta = 0.0;
  SolverBackend backend = SolverBackend::SparseLu;
};

int default_truncation(BcKind bc, double k);

struct ScatteringSolution
{
  double k = 0.0;
  IncidentWave incident;
  std::shared_ptr<const Mesh> mesh;
  std::vector<cplx> field;  // nodal values of the total field
  std::vector<int> modes;   // propagating transverse indices
  std::vector<cplx> reflection;    // s_{n->p} on the inflow side, p over modes
  std::vector<cplx> transmission;  // t_{n->p} on the outflow side (empty for half guides)
  cplx R = 0.0;  // reflection into the incident mode
  cplx T = 0.0;  // transmission into the incident mode
  double energy_defect = 0.0;
  int M_used = 0;
  bool trapped_mode_warning = false;
  double rcond = 0.0;
};

// Single incidence on a prepared mesh.
ScatteringSolution solve_scattering(const std::shared_ptr<const Mesh> &mesh, const GeometrySpec &spec, double k,
                                    IncidentWave incident, const ScatteringOptions &options = {});

// Builds the mesh, then solves.
ScatteringSolution solve_scattering(const GeometrySpec &spec, double k, IncidentWave incident,
                                    const ScatteringOptions &options = {});

// Several incidences sharing one factorization.
std::vector<ScatteringSolution> solve_incidences(const std::shared_ptr<const Mesh> &mesh, const GeometrySpec &spec,
                                                 double k, const std::vector<IncidentWave> &incidences,
                                                 const ScatteringOptions &options = {});

struct ScatteringMatrix
{
  double k = 0.0;
  Eigen::MatrixXcd S;  // flux-normalized; channels: left modes then right modes
  std::vector<int> modes;
  double defect_unitarity = 0.0;  // max |S S^H - I|
  double defect_symmetry = 0.0;   // max |S - S^T|
};

ScatteringMatrix scattering_matrix(const std::shared_ptr<const Mesh> &mesh, const GeometrySpec &spec, double k,
                                   const ScatteringOptions &options = {});
ScatteringMatrix scattering_matrix(const GeometrySpec &spec, double k, const ScatteringOptions &options = {});

struct HalfGuideCoefficients
{
  cplx R_N, R_D, R, T;
};

// Neumann and Dirichlet conditions on the symmetry plane of the half guide.
HalfGuideCoefficients half_guide_coefficients(const GeometrySpec &spec, double k,
                                              const ScatteringOptions &options = {});

struct SweepRow
{
  double k = 0.0;
  cplx R_plus = 0.0;   // incidence from the left
  cplx R_minus = 0.0;  // incidence from the right
  cplx T = 0.0;
  double energy_defect = 0.0;
  std::string error;  // empty on success
};

std::vector<SweepRow> frequency_sweep(const GeometrySpec &spec, double k0, double k1, int steps,
                                      const ScatteringOptions &options = {});
std::vector<SweepRow> frequency_sweep(const GeometrySpec &spec, const std::vector<double> &ks,
                                      const ScatteringOptions &options = {});

void write_sweep_csv(std::ostream &os, const std::vector<SweepRow> &rows);

// Reflection into mode n from the flux form -(1/(2 i beta_n)) * integral of (dx u w_n^+ - u dx w_n^+)
// on the left section, with dx u taken from the element gradients.
cplx reflection_flux_formula(const ScatteringSolution &sol, const GeometrySpec &spec, int n);

// L2 norm of a nodal field difference over the mesh.
double l2_norm(const Mesh &mesh, const std::vector<cplx> &field);

}  // namespace wginv

#endif  // WGINV_SCATTERING_HPP
