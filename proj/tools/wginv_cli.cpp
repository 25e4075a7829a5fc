// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0
//
// wginv: command-line front end.
//   wginv <command> [flags]            flags as listed by --help
//   wginv --config FILE [flags]        FILE is JSON; keys mirror the flag names
// Exit codes: 0 success, 2 validation error, 3 numerical failure. Errors are also
// reported on stderr as {"error": NAME, "message": TEXT}.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "wginv/design.hpp"
#include "wginv/error.hpp"
#include "wginv/geometry.hpp"
#include "wginv/io_util.hpp"
#include "wginv/modes.hpp"
#include "wginv/scattering.hpp"
#include "wginv/spectral.hpp"
#include "wginv/toy1d.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wginv;

namespace
{

constexpr double pi = std::numbers::pi;

struct Params
{
  std::string geometry;
  std::string out = ".";
  std::string format = "csv";
  std::string bc = "neumann";
  std::string mu0 = "sine";
  double k = NAN, eps = NAN, mesh_h = 0.05, eta_stop = 1e-4;
  double k0 = NAN, k1 = NAN;
  int steps = 100, modes = -1, max_iter = 100, count = 24;
  double theta = pi / 4.0, L = 1.0, L_trunc = 12.0;
  double k_min = 0.1, k_max = 4.2, dk = 0.25;
  double mu_min = -10.0, mu_max = 10.0;
  std::vector<std::string> shifts;
  bool conjugated = false, raw_mesh = false, half = false, export_modes = false;
  double L_export = 4.0;
};

[[noreturn]] void validation(const std::string &what) { fail(ErrorCode::InvalidArgument, what); }

BcKind parse_bc(const std::string &s)
{
  if (s == "dirichlet") return BcKind::Dirichlet;
  if (s == "neumann") return BcKind::Neumann;
  validation("--bc must be 'dirichlet' or 'neumann'");
}

void require(double v, const char *flag)
{
  if (std::isnan(v)) validation(std::string("missing required flag ") + flag);
}

std::string path_in(const Params &p, const std::string &name)
{
  fs::create_directories(p.out);
  return (fs::path(p.out) / name).string();
}

GeometrySpec geometry_or_strip(const Params &p, BcKind bc, double half_length)
{
  if (!p.geometry.empty()) return load_spec(p.geometry);
  GeometrySpec g;
  g.wall_bc = bc;
  g.half_length = half_length;
  return g;
}

ScatteringOptions scattering_options(const Params &p)
{
  ScatteringOptions o;
  o.target_h = p.mesh_h;
  o.M = p.modes;
  return o;
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

int cmd_modes(const Params &p)
{
  require(p.k, "--k");
  const BcKind bc = parse_bc(p.bc);
  check_wavenumber(p.k);
  const int M = p.modes >= 0 ? p.modes : default_truncation(bc, p.k);
  const ModeBasis basis = ModeBasis::make(bc, p.k, M);
  write_atomically(path_in(p, "modes.csv"), [&](std::ostream &os) {
    os << "n,Re_beta,Im_beta,propagating\n" << std::setprecision(17);
    for (int n = basis.first(); n <= M; ++n)
    {
      const cplx b = basis.beta_of(n);
      os << n << ',' << b.real() << ',' << b.imag() << ',' << (n * pi < p.k ? 1 : 0) << '\n';
    }
  });
  return 0;
}

int cmd_scatter(const Params &p)
{
  require(p.k, "--k");
  const GeometrySpec g = geometry_or_strip(p, parse_bc(p.bc), 2.0);
  const ScatteringOptions o = scattering_options(p);
  auto mesh = std::make_shared<const Mesh>(build_mesh(g, o.target_h, o.order));
  const int first = first_index(g.wall_bc);
  const std::vector<ScatteringSolution> sols =
      solve_incidences(mesh, g, p.k, {IncidentWave{first, Side::Left}, IncidentWave{first, Side::Right}}, o);
  write_atomically(path_in(p, "scatter.csv"), [&](std::ostream &os) {
    os << "k,Re_Rp,Im_Rp,Re_Rm,Im_Rm,Re_T,Im_T,energy_defect\n" << std::setprecision(17);
    os << p.k << ',' << sols[0].R.real() << ',' << sols[0].R.imag() << ',' << sols[1].R.real() << ','
       << sols[1].R.imag() << ',' << sols[0].T.real() << ',' << sols[0].T.imag() << ','
       << std::max(sols[0].energy_defect, sols[1].energy_defect) << '\n';
  });
  if (p.format == "vtk")
  {
    write_atomically(path_in(p, "field.vtk"), [&](std::ostream &os) {
      if (p.raw_mesh) write_vtk(os, *mesh, &sols[0].field);
      else write_vtk_sampled(os, *mesh, sols[0].field, mesh->x_min, mesh->x_max, 400, 100);
    });
  }
  if (p.format == "json")
  {
    json j{{"k", p.k},
           {"R", cjson(sols[0].R)},
           {"T", cjson(sols[0].T)},
           {"R_minus", cjson(sols[1].R)},
           {"energy_defect", sols[0].energy_defect},
           {"M", sols[0].M_used},
           {"trapped_mode_warning", sols[0].trapped_mode_warning}};
    write_atomically(path_in(p, "scatter.json"), [&](std::ostream &os) { os << j.dump(2) << '\n'; });
  }
  return 0;
}

int cmd_sweep(const Params &p)
{
  require(p.k0, "--k0");
  require(p.k1, "--k1");
  if (p.steps < 1) validation("--steps must be positive");
  const GeometrySpec g = geometry_or_strip(p, parse_bc(p.bc), 2.0);
  const ScatteringOptions o = scattering_options(p);
  if (p.half)
  {
    std::vector<double> ks;
    for (int i = 0; i <= p.steps; ++i) ks.push_back(p.k0 + (p.k1 - p.k0) * i / p.steps);
    std::vector<HalfGuideCoefficients> rows(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) rows[i] = half_guide_coefficients(g, ks[i], o);
    write_atomically(path_in(p, "half_sweep.csv"), [&](std::ostream &os) {
      os << "k,Re_RN,Im_RN,Re_RD,Im_RD,Re_R,Im_R,Re_T,Im_T\n" << std::setprecision(17);
      for (std::size_t i = 0; i < ks.size(); ++i)
      {
        const auto &r = rows[i];
        os << ks[i] << ',' << r.R_N.real() << ',' << r.R_N.imag() << ',' << r.R_D.real() << ',' << r.R_D.imag()
           << ',' << r.R.real() << ',' << r.R.imag() << ',' << r.T.real() << ',' << r.T.imag() << '\n';
      }
    });
    return 0;
  }
  const std::vector<SweepRow> rows = frequency_sweep(g, p.k0, p.k1, p.steps, o);
  write_atomically(path_in(p, "sweep.csv"), [&](std::ostream &os) { write_sweep_csv(os, rows); });
  return 0;
}

void write_design(const Params &p, const DesignState &st, const std::string &stem)
{
  write_atomically(path_in(p, stem + ".json"), [&](std::ostream &os) { os << design_report_json(st) << '\n'; });
  write_atomically(path_in(p, stem + "_geometry.json"), [&](std::ostream &os) { os << spec_to_json(st.geometry) << '\n'; });
  if (p.format == "vtk")
  {
    const Mesh mesh = build_mesh(st.geometry, p.mesh_h);
    write_atomically(path_in(p, stem + "_mesh.vtk"), [&](std::ostream &os) { write_vtk(os, mesh); });
  }
}

int design_exit(const DesignState &st)
{
  if (st.converged) return 0;
  fail(ErrorCode::Diverged, st.note.empty() ? "design did not converge" : st.note);
}

int cmd_design_zero_r(const Params &p)
{
  require(p.k, "--k");
  require(p.eps, "--eps");
  const BcKind bc = parse_bc(p.bc);
  Mu0Kind kind = Mu0Kind::Sine;
  if (p.mu0 == "tent") kind = Mu0Kind::Tent;
  else if (p.mu0 != "sine") validation("--mu0 must be 'sine' or 'tent'");
  const DesignBasis basis = zero_r_basis(bc, p.k, kind);
  double support = 0.0;
  for (const Profile &m : basis.mu) support = std::max({support, std::abs(m.support().first), std::abs(m.support().second)});
  const GeometrySpec base = geometry_or_strip(p, bc, support + 1.0);
  DesignOptions o;
  o.scattering = scattering_options(p);
  o.throw_on_divergence = false;
  const DesignState st = fixed_point_zero_R(base, basis, p.eps, p.eta_stop, p.max_iter, o);
  write_design(p, st, "design_zero_r");
  return design_exit(st);
}

int cmd_design_t1(const Params &p)
{
  require(p.k, "--k");
  require(p.eps, "--eps");
  const DesignBasis basis = perfect_t_basis(p.k);
  double support = 0.0;
  for (const Profile &m : basis.mu) support = std::max({support, std::abs(m.support().first), std::abs(m.support().second)});
  const GeometrySpec base = geometry_or_strip(p, BcKind::Dirichlet, support + 1.0);
  DesignOptions o;
  o.scattering = scattering_options(p);
  o.throw_on_divergence = false;
  const DesignState st = fixed_point_perfect_T(base, basis, p.eps, p.eta_stop, p.max_iter, o);
  write_design(p, st, "design_t1");
  if (st.converged && p.format == "vtk")
  {
    const ScatteringSolution s =
        solve_scattering(st.geometry, p.k, IncidentWave{1, Side::Left}, scattering_options(p));
    write_atomically(path_in(p, "design_t1_field.vtk"), [&](std::ostream &os) {
      write_vtk_sampled(os, *s.mesh, s.field, s.mesh->x_min, s.mesh->x_max, 400, 100);
    });
  }
  return design_exit(st);
}

int cmd_chimney(const Params &p)
{
  require(p.k, "--k");
  require(p.eps, "--eps");
  GeometrySpec base = geometry_or_strip(p, BcKind::Neumann, 2.0);
  if (base.chimneys.empty()) base.chimneys = default_chimney_layout(p.k, p.eps);
  DesignOptions o;
  o.scattering = scattering_options(p);
  o.throw_on_divergence = false;
  const DesignState st = chimney_tune_zero_R(base, p.eps, p.k, p.eta_stop, p.max_iter, o);
  write_design(p, st, "chimney");
  return design_exit(st);
}

int cmd_fano1d(const Params &p)
{
  require(p.eps, "--eps");
  const double k0 = std::isnan(p.k0) ? 0.05 : p.k0;
  const double k1 = std::isnan(p.k1) ? pi - 0.05 : p.k1;
  if (p.steps < 1) validation("--steps must be positive");
  write_atomically(path_in(p, "fano1d.csv"),
                   [&](std::ostream &os) { toy1d::write_sweep_csv(os, toy1d::Config{p.eps}, k0, k1, p.steps); });
  write_atomically(path_in(p, "mobius.csv"),
                   [&](std::ostream &os) { toy1d::write_mobius_csv(os, p.eps, p.mu_min, p.mu_max, p.steps); });
  return 0;
}

cplx parse_shift(const std::string &s)
{
  const auto comma = s.find(',');
  try
  {
    if (comma == std::string::npos) return {std::stod(s), 0.0};
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  }
  catch (const std::exception &)
  {
    validation("--shift expects RE or RE,IM (a value of k)");
  }
}

int cmd_spectrum(const Params &p)
{
  if (p.geometry.empty()) validation("spectrum requires --geometry");
  const GeometrySpec g = load_spec(p.geometry);
  ScalingSpec s;
  s.theta = p.theta;
  s.L = p.L;
  s.L_trunc = p.L_trunc;
  s.conjugated = p.conjugated;
  validate(s);
  std::vector<cplx> shifts = default_shifts(p.k_min, p.k_max, p.dk);
  for (const std::string &t : p.shifts)
  {
    const cplx k = parse_shift(t);
    shifts.push_back(k * k);
  }
  SpectrumOptions o;
  o.target_h = p.mesh_h;
  o.count_per_shift = p.count;
  const SpectrumResult r = compute_spectrum(g, s, shifts, o);
  write_atomically(path_in(p, "spectrum.csv"), [&](std::ostream &os) { write_spectrum_csv(os, r); });
  if (p.export_modes)
  {
    int idx = 0;
    for (std::size_t i = 0; i < r.eigen_k.size(); ++i)
    {
      if (r.classes[i] != SpectralClass::Trapped && r.classes[i] != SpectralClass::Reflectionless) continue;
      std::ostringstream name;
      name << "mode_" << idx++ << ".vtk";
      write_atomically(path_in(p, name.str()), [&](std::ostream &os) {
        write_vtk_sampled(os, *r.mesh, r.modes[i], -p.L_export, p.L_export, 400, 50,
                          "w_k" + std::to_string(r.eigen_k[i].real()));
      });
    }
  }
  return 0;
}

// Turns a JSON config into argv tokens placed before the command-line ones, so flags win.
std::vector<std::string> config_tokens(const std::string &path)
{
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoFailure, "cannot open config '" + path + "'");
  json j;
  try
  {
    in >> j;
  }
  catch (const json::exception &e)
  {
    validation(std::string("config JSON: ") + e.what());
  }
  const fs::path dir = fs::path(path).parent_path();
  std::vector<std::string> tokens;
  if (j.contains("command")) tokens.push_back(j["command"].get<std::string>());
  for (const auto &[key, value] : j.items())
  {
    if (key == "command") continue;
    const std::string flag = "--" + key;
    auto scalar = [&](const json &v) -> std::string {
      if (v.is_string())
      {
        std::string s = v.get<std::string>();
        if ((key == "geometry" || key == "out") && fs::path(s).is_relative()) s = (dir / s).string();
        return s;
      }
      std::ostringstream os;
      os << std::setprecision(17) << v;
      return os.str();
    };
    if (value.is_boolean())
    {
      if (value.get<bool>()) tokens.push_back(flag);
    }
    else if (value.is_array())
    {
      for (const json &v : value)
      {
        tokens.push_back(flag);
        tokens.push_back(v.is_array() ? scalar(v[0]) + "," + scalar(v[1]) : scalar(v));
      }
    }
    else
    {
      tokens.push_back(flag);
      tokens.push_back(scalar(value));
    }
  }
  return tokens;
}

void report(const std::string &name, const std::string &message)
{
  std::cerr << json{{"error", name}, {"message", message}}.dump() << '\n';
}

}  // namespace

int main(int argc, char **argv)
{
  Params p;
  CLI::App app{"Waveguide scattering, shape design and complex-scaled spectra"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  auto common = [&](CLI::App *c) {
    c->add_option("--geometry", p.geometry, "GeometrySpec JSON file");
    c->add_option("--out", p.out, "output directory");
    c->add_option("--format", p.format, "extra output: csv, vtk or json")
        ->check(CLI::IsMember({"csv", "vtk", "json"}));
    c->add_option("--mesh-h", p.mesh_h, "target element size")->check(CLI::PositiveNumber);
    c->add_option("--modes", p.modes, "highest DtN index (default max(10, N + 5))");
    c->add_option("--bc", p.bc, "wall condition: dirichlet or neumann");
    c->add_flag("--raw-mesh", p.raw_mesh, "dump the raw P2 mesh instead of a uniform grid");
  };
  CLI::App *modes = app.add_subcommand("modes", "transverse modes and propagation constants");
  CLI::App *scatter = app.add_subcommand("scatter", "scattering coefficients at one wavenumber");
  CLI::App *sweep = app.add_subcommand("sweep", "frequency sweep of R and T");
  CLI::App *dzr = app.add_subcommand("design-zero-r", "wall profile with zero reflection");
  CLI::App *dt1 = app.add_subcommand("design-t1", "wall profile with T = 1 (Dirichlet)");
  CLI::App *chim = app.add_subcommand("chimney", "chimney heights tuned to zero reflection");
  CLI::App *fano = app.add_subcommand("fano1d", "1D junction model sweeps and Mobius curve");
  CLI::App *spec = app.add_subcommand("spectrum", "complex-scaled eigenvalues and classification");
  for (CLI::App *c : {modes, scatter, sweep, dzr, dt1, chim, fano, spec})
  {
    common(c);
    c->add_option("--k", p.k, "wavenumber");
    c->add_option("--eps", p.eps, "perturbation amplitude");
    c->add_option("--eta-stop", p.eta_stop, "design stopping tolerance");
    c->add_option("--max-iter", p.max_iter, "design iteration cap");
    c->add_option("--k0", p.k0, "sweep start");
    c->add_option("--k1", p.k1, "sweep end");
    c->add_option("--steps", p.steps, "sweep intervals");
  }
  sweep->add_flag("--half", p.half, "half-guide R_N, R_D sweep with the parity recombination");
  dzr->add_option("--mu0", p.mu0, "mu_0 family: sine or tent (Neumann)");
  fano->add_option("--mu-min", p.mu_min);
  fano->add_option("--mu-max", p.mu_max);
  spec->add_option("--theta", p.theta, "scaling angle in (0, pi/2)");
  spec->add_option("--L", p.L, "scaling starts at |x| = L");
  spec->add_option("--L-trunc", p.L_trunc, "Dirichlet truncation at |x| = L_trunc");
  spec->add_flag("--conjugated", p.conjugated, "conjugated scaling (reflectionless spectrum)");
  spec->add_option("--shift", p.shifts, "extra shift in the k plane, RE,IM")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  spec->add_option("--k-min", p.k_min);
  spec->add_option("--k-max", p.k_max);
  spec->add_option("--dk", p.dk, "spacing of the default real shifts");
  spec->add_option("--count", p.count, "eigenvalues per shift");
  spec->add_flag("--export-modes", p.export_modes, "VTK of real-classified modes on |x| < L_export");
  spec->add_option("--L-export", p.L_export);

  std::vector<std::string> user(argv + 1, argv + argc);
  try
  {
    std::vector<std::string> cfg;
    for (std::size_t i = 0; i < user.size(); ++i)
    {
      if (user[i] == "--config")
      {
        if (i + 1 >= user.size()) validation("--config needs a file");
        cfg = config_tokens(user[i + 1]);
        user.erase(user.begin() + static_cast<std::ptrdiff_t>(i), user.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        break;
      }
    }
    // Order: command, config flags, user flags; with TakeLast the user's flags win.
    std::vector<std::string> forward;
    std::size_t skip = 0;
    if (!user.empty() && app.get_subcommand_no_throw(user[0]) != nullptr)
    {
      forward.push_back(user[0]);
      skip = 1;
    }
    else if (!cfg.empty() && app.get_subcommand_no_throw(cfg[0]) != nullptr)
    {
      forward.push_back(cfg[0]);
    }
    const std::size_t cfg_skip = !cfg.empty() && app.get_subcommand_no_throw(cfg[0]) != nullptr ? 1 : 0;
    forward.insert(forward.end(), cfg.begin() + static_cast<std::ptrdiff_t>(cfg_skip), cfg.end());
    forward.insert(forward.end(), user.begin() + static_cast<std::ptrdiff_t>(skip), user.end());
    std::vector<std::string> args(forward.rbegin(), forward.rend());
    app.parse(args);
  }
  catch (const CLI::CallForHelp &e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError &e)
  {
    report("InvalidArgument", e.what());
    return 2;
  }
  catch (const Error &e)
  {
    report(std::string(error_name(e.code())), e.what());
    return is_validation_error(e.code()) ? 2 : 3;
  }

  try
  {
    if (*modes) return cmd_modes(p);
    if (*scatter) return cmd_scatter(p);
    if (*sweep) return cmd_sweep(p);
    if (*dzr) return cmd_design_zero_r(p);
    if (*dt1) return cmd_design_t1(p);
    if (*chim) return cmd_chimney(p);
    if (*fano) return cmd_fano1d(p);
    if (*spec) return cmd_spectrum(p);
  }
  catch (const Error &e)
  {
    report(std::string(error_name(e.code())), e.what());
    return is_validation_error(e.code()) ? 2 : 3;
  }
  catch (const std::exception &e)
  {
    report("IoFailure", e.what());
    return 3;
  }
  return 2;
}
