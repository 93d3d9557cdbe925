#include "aquifer/verify.hpp"

#include "aquifer/analysis.hpp"
#include "aquifer/assembly.hpp"
#include "aquifer/darcy.hpp"
#include "aquifer/dispersion.hpp"
#include "aquifer/error.hpp"
#include "aquifer/mesh.hpp"
#include "aquifer/norms.hpp"
#include "aquifer/transport.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace aquifer {

namespace {

class Checker {
 public:
  explicit Checker(SuiteResult& r) : r_(r) {}

  void expect(bool ok, const std::string& what) {
    ++r_.checks;
    if (!ok && r_.passed) {
      r_.passed = false;
      r_.detail = what;
    }
  }
  void near(double a, double b, double tol, const std::string& what) {
    std::ostringstream o;
    o.precision(17);
    o << what << " (" << a << " vs " << b << ", tol " << tol << ")";
    expect(std::abs(a - b) <= tol, o.str());
  }

 private:
  SuiteResult& r_;
};

using Rng = std::mt19937_64;

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

DispersionParams random_params(Rng& rng) {
  const double at = uniform(rng, 0.0, 0.5);
  const double al = uniform(rng, std::nextafter(at, 1.0), 1.0);
  return {uniform(rng, 1e-3, 1.0), std::max(al, std::nextafter(at, 1.0)), at};
}

template <int N>
void check_dispersion(Checker& c, Rng& rng) {
  using Vec = Eigen::Matrix<double, N, 1>;
  using Mat = Eigen::Matrix<double, N, N>;
  const auto p = random_params(rng);
  Vec v;
  for (int i = 0; i < N; ++i) v[i] = uniform(rng, -10.0, 10.0);
  const Mat s = dispersion_tensor(p, v).matrix();
  const Mat root = dispersion_sqrt(p, v).matrix();
  const Mat inv = dispersion_inv(p, v).matrix();
  const Mat inv_root = dispersion_inv_sqrt(p, v).matrix();
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  c.expect(((root * root - s).cwiseAbs().maxCoeff()) <= 1e-12 * scale, "sqrt(S)^2 = S");
  c.expect(((s * inv - Mat::Identity()).cwiseAbs().maxCoeff()) <= 1e-12 * scale, "S S^-1 = Id");
  c.expect(((inv_root * inv_root - inv).cwiseAbs().maxCoeff()) <= 1e-12 * std::max(1.0, inv.cwiseAbs().maxCoeff()),
           "S^-1/2 S^-1/2 = S^-1");
  const Vec q = dispersion_inv_times_v(p, v);
  c.expect(q.norm() <= 1.0 / p.alpha_l() + 1e-12, "|S^-1 v| <= 1/alpha_L");
  c.expect((inv * v - q).norm() <= 1e-12 * std::max(1.0, q.norm()), "S^-1 v closed form");
  const double speed = v.norm();
  for (int k = 0; k < 4; ++k) {
    Vec xi;
    for (int i = 0; i < N; ++i) xi[i] = uniform(rng, -1.0, 1.0);
    const double quad = xi.dot(s * xi);
    const double x2 = xi.squaredNorm();
    c.expect(quad - (p.molecular() + p.alpha_t() * speed) * x2 >= -1e-12 * std::max(1.0, quad), "S xi.xi lower bound");
    c.expect((p.molecular() + p.alpha_l() * speed) * x2 - quad >= -1e-12 * std::max(1.0, quad), "S xi.xi upper bound");
  }
}

void suite_mesh(Checker& c, Rng& rng) {
  for (int trial = 0; trial < 20; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    Rectangle d;
    d.x0 = uniform(rng, -2.0, 2.0);
    d.x1 = d.x0 + uniform(rng, 0.1, 3.0);
    d.y0 = uniform(rng, -2.0, 2.0);
    d.y1 = d.y0 + uniform(rng, 0.1, 3.0);
    const Mesh m = build_structured_mesh(n, d);
    c.near(m.total_area(), d.area(), 1e-12 * d.area(), "cell areas sum to the domain area");
    c.near(m.boundary_enclosed_area(), d.area(), 1e-12 * d.area(), "boundary encloses the domain");
    c.expect(m.num_vertices() - m.num_edges() + m.num_cells() == 1, "Euler characteristic of a disk");
    c.expect(m.num_boundary_edges() == 4 * n, "boundary edge count");
    bool ok = true;
    for (const auto& e : m.edges()) ok = ok && e.sigma > 0.0 && (e.boundary == (e.cells[1] < 0));
    c.expect(ok, "edge sigma positive and boundary flags consistent");
    for (const auto& cell : m.cells()) {
      double sum = 0.0;
      for (int k = 0; k < 3; ++k) {
        const auto& e = m.edge(cell.edges[k]);
        sum += cell.edge_signs[k] * e.length * e.normal.dot(e.midpoint);
      }
      // divergence theorem with the field x: integral of div x = 2 |T|
      c.near(sum, 2.0 * cell.area, 1e-12 * std::max(1.0, cell.area), "outward normals close each cell");
    }
    const Mesh back = parse_mesh(format_mesh(m));
    c.expect(back.num_cells() == m.num_cells() && back.num_edges() == m.num_edges(), "format/parse round trip");
    const Point p(uniform(rng, d.x0, d.x1), uniform(rng, d.y0, d.y1));
    const auto loc = m.locate(p);
    c.expect(loc.has_value(), "locate finds interior points");
  }
}

void suite_dispersion(Checker& c, Rng& rng) {
  for (int i = 0; i < 200; ++i) {
    check_dispersion<2>(c, rng);
    check_dispersion<3>(c, rng);
  }
  for (int i = 0; i < 50; ++i) {
    const auto p = random_params(rng);
    const double vmax = uniform(rng, 0.0, 20.0);
    const auto b = bound_constants(p, vmax);
    c.expect(b.m_minus > 0.0 && b.m_plus > 0.0, "M_- and M_+ positive");
    for (int k = 0; k < 5; ++k) {
      const double theta = uniform(rng, 0.0, 2.0 * M_PI);
      const Eigen::Vector2d v = uniform(rng, 0.0, vmax) * Eigen::Vector2d(std::cos(theta), std::sin(theta));
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(dispersion_tensor(p, v).matrix());
      c.expect(es.eigenvalues().minCoeff() >= b.lambda_min * (1.0 - 1e-12), "lambda_min bound");
      c.expect(es.eigenvalues().maxCoeff() <= b.lambda_max * (1.0 + 1e-12), "lambda_max bound");
      const double sq = std::sqrt(es.eigenvalues().maxCoeff()) / (1.0 + std::sqrt(v.norm()));
      c.expect(sq <= b.sqrt_growth * (1.0 + 1e-12), "|S^1/2| <= C (1 + |v|^1/2)");
      c.expect(1.0 / es.eigenvalues().maxCoeff() >= b.m_minus * (1.0 - 1e-12), "S^-1 xi.xi >= M_- |xi|^2");
      c.expect(dispersion_inv_times_v(p, v).norm() <= b.m_plus * (1.0 + 1e-12), "|S^-1 v| <= M_+");
    }
  }
}

void suite_assembly(Checker& c, Rng& rng) {
  const int n = std::uniform_int_distribution<int>(2, 6)(rng);
  const Mesh m = build_structured_mesh(n);
  for (int t = 0; t < m.num_cells(); ++t) {
    const auto basis = rt0_local_basis(m, t);
    const auto& cell = m.cell(t);
    for (int k = 0; k < 3; ++k) {
      for (int j = 0; j < 3; ++j) {
        const auto& e = m.edge(cell.edges[j]);
        const double flux = basis[k](e.midpoint).dot(e.normal);
        c.near(flux, k == j ? 1.0 : 0.0, 1e-12, "RT0 basis normal components are Kronecker");
      }
      c.near(basis[k].divergence() * cell.area, cell.edge_signs[k] * m.edge(cell.edges[k]).length, 1e-12,
             "RT0 divergence integrates to the edge flux");
    }
  }
  const SparseMatrix mass = assemble_rt0_mass(m);
  c.expect((SparseMatrix(mass.transpose()) - mass).norm() <= 1e-14 * mass.norm(), "RT0 mass symmetric");
  Vector x(m.num_edges());
  for (auto& xi : x) xi = uniform(rng, -1.0, 1.0);
  c.expect(x.dot(mass * x) > 0.0, "RT0 mass positive");
  const double a = uniform(rng, -1.0, 1.0), b = uniform(rng, -1.0, 1.0), d = uniform(rng, -1.0, 1.0);
  const auto lin = project_P_h(m, [&](const Point& p) { return a + b * p.x() + d * p.y(); });
  bool ok = true;
  for (int t = 0; t < m.num_cells(); ++t) {
    const Point& g = m.cell(t).centroid;
    ok = ok && std::abs(lin[t] - (a + b * g.x() + d * g.y())) <= 1e-13;
  }
  c.expect(ok, "P_h of an affine field is its centroid value");
  const Point w(a, b);
  const RT0Field pw = project_Pi_h(m, [&](const Point&) { return w; });
  ok = true;
  for (int t = 0; t < m.num_cells(); ++t) {
    ok = ok && (rt0_value(m, pw, t, m.vertex(m.cell(t).vertices[0])) - w).norm() <= 1e-13;
  }
  c.expect(ok, "Pi_h reproduces constant vectors");
  const SparseMatrix div = assemble_div(m);
  const Vector integrals = div * pw.values;
  c.expect(integrals.cwiseAbs().maxCoeff() <= 1e-13, "constant field is divergence free");
}

void suite_darcy(Checker& c, Rng& rng) {
  for (int trial = 0; trial < 3; ++trial) {
    Tensor2 kappa;
    const double l1 = uniform(rng, 0.5, 2.0), l2 = uniform(rng, 0.5, 2.0), th = uniform(rng, 0.0, M_PI);
    Eigen::Matrix2d r;
    r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    kappa = Tensor2::from_matrix(r * Eigen::Vector2d(l1, l2).asDiagonal() * r.transpose());
    const auto mc = manufactured_linear(kappa, uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
    const Mesh m = build_structured_mesh(std::uniform_int_distribution<int>(2, 6)(rng));
    DarcyProblem p = DarcyProblem::uniform(m, kappa, mc.source, mc.mode);
    p.boundary_head = mc.boundary_head;
    const auto sol = solve_darcy(m, p);
    c.expect(l2_error(m, sol.v, mc.velocity) <= 1e-10, "linear head gives the exact velocity");
    const Vector div = assemble_div(m) * sol.v.values;
    bool ok = true;
    for (int t = 0; t < m.num_cells(); ++t) ok = ok && std::abs(div[t] - p.source[t] * m.cell(t).area) <= 1e-10;
    c.expect(ok, "cellwise flux balance");
  }
  const Mesh m = build_structured_mesh(4);
  Tensor2 id = Tensor2::identity(1.0);
  bool threw = false;
  try {
    solve_darcy(m, DarcyProblem::uniform(m, id, [](const Point&) { return 1.0; }, BoundaryMode::neumann));
  } catch (const InvalidArgument&) {
    threw = true;
  }
  c.expect(threw, "incompatible Neumann source rejected");
}

void suite_transport(Checker& c, Rng& rng) {
  const Mesh m = build_structured_mesh(6);
  Tensor2 id = Tensor2::identity(1.0);
  const auto mc = manufactured_sinsin(id);
  const auto darcy =
      solve_darcy(m, DarcyProblem::uniform(m, id, [&](const Point& x) { return 0.1 * mc.source(x); }));
  TransportParams p;
  p.retardation = uniform(rng, 0.5, 2.0);
  p.porosity = P0Field::constant(m, uniform(rng, 0.4, 0.6));
  p.dispersion = DispersionParams(uniform(rng, 0.005, 0.05), 0.1, 0.01);
  p.isotherm = Isotherm::langmuir(uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0));
  p.source = P0Field::constant(m, 0.0);
  p.mode = BoundaryMode::neumann;
  p.initial = project_P_h(m, [](const Point& x) { return std::exp(-20.0 * (x - Point(0.5, 0.5)).squaredNorm()); });
  const double tau_cfl = cfl_timestep(m.metrics().h, 2, 0.1, 1.0);
  const double tau = std::min(tau_cfl, 0.5 * solvability_threshold(p, darcy.vmax));
  c.expect(cfl_satisfied(tau_cfl, m.metrics().h, 2, 0.1, 1.0), "cfl_timestep satisfies the CFL bound");
  for (int k = 0; k < 10; ++k) {
    const double h = uniform(rng, 1e-3, 1.0), eps = uniform(rng, 0.01, 0.9), cc = uniform(rng, 0.1, 10.0);
    c.expect(cfl_satisfied(cfl_timestep(h, 2, eps, cc), h, 2, eps, cc), "random CFL timestep compliant");
  }
  const TransportStepper stepper(m, p, darcy, tau);
  auto state = stepper.initial_state();
  for (int n = 0; n < 5; ++n) {
    const auto next = stepper.step(state);
    c.expect(stepper.mass_residual(state, next) <= 1e-10, "discrete mass balance");
    const auto again = stepper.step(state);
    c.expect((again.c.values - next.c.values).cwiseAbs().maxCoeff() <= 1e-12, "repeated solve agrees");
    state = next;
  }
  const double thr = solvability_threshold(p, darcy.vmax);
  if (std::isfinite(thr)) {
    bool refused = false;
    try {
      TransportStepper(m, p, darcy, 2.0 * thr);
    } catch (const StepRefused&) {
      refused = true;
    }
    c.expect(refused, "guard refuses tau above the threshold");
  }
}

void suite_analysis(Checker& c, Rng& rng) {
  const Mesh m = build_structured_mesh(std::uniform_int_distribution<int>(2, 6)(rng));
  const double k = uniform(rng, -3.0, 3.0);
  c.near(discrete_h1_norm(m, P0Field::constant(m, k), BoundaryMode::neumann), 0.0, 1e-13,
         "Neumann seminorm vanishes on constants");
  for (int trial = 0; trial < 10; ++trial) {
    Vector v(m.num_cells());
    for (auto& x : v) x = uniform(rng, -1.0, 1.0);
    const P0Field f(v);
    const double nd = discrete_h1_norm(m, f, BoundaryMode::dirichlet);
    c.expect(nd > 0.0, "Dirichlet norm positive on nonzero fields");
    const double a = uniform(rng, -5.0, 5.0);
    c.near(discrete_h1_norm(m, P0Field(a * v), BoundaryMode::dirichlet), std::abs(a) * nd, 1e-12 * (1.0 + nd),
           "homogeneity");
  }
  std::vector<TransportState> traj;
  for (int n = 0; n < 4; ++n) {
    Vector v(m.num_cells());
    for (auto& x : v) x = uniform(rng, 0.0, 1.0);
    traj.push_back({n, 0.1 * n, P0Field(v), RT0Field::zero(m)});
  }
  for (int n = 1; n < 4; ++n) {
    c.expect((time_interpolant(traj, traj[n].t).c.values - traj[n].c.values).norm() == 0.0, "exact at nodes");
    for (int k = 0; k < 10; ++k) {
      const double s = uniform(rng, 0.0, 1.0);
      const double t = traj[n - 1].t + s * (traj[n].t - traj[n - 1].t);
      const Vector expect = s * traj[n].c.values + (1.0 - s) * traj[n - 1].c.values;
      c.expect((time_interpolant(traj, t).c.values - expect).cwiseAbs().maxCoeff() <= 1e-14, "linear in time");
    }
  }
  std::vector<double> e{uniform(rng, 1.0, 2.0)};
  for (int i = 0; i < 3; ++i) e.push_back(e.back() * uniform(rng, 0.2, 0.6));
  const auto o1 = observed_orders(e);
  const double s = uniform(rng, 1e-3, 1e3);
  std::vector<double> es;
  for (double x : e) es.push_back(s * x);
  const auto o2 = observed_orders(es);
  bool ok = true;
  for (std::size_t i = 0; i < o1.size(); ++i) ok = ok && std::abs(o1[i] - o2[i]) <= 1e-12;
  c.expect(ok, "orders invariant under error scaling");
}

struct Suite {
  const char* name;
  std::function<void(Checker&, Rng&)> body;
};

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all{
      {"mesh", suite_mesh},         {"dispersion", suite_dispersion}, {"assembly", suite_assembly},
      {"darcy", suite_darcy},       {"transport", suite_transport},   {"analysis", suite_analysis},
  };
  return all;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& s : suites()) names.emplace_back(s.name);
  return names;
}

std::vector<SuiteResult> run_suites(std::uint64_t seed, const std::string& filter) {
  std::vector<SuiteResult> out;
  for (std::size_t i = 0; i < suites().size(); ++i) {
    const auto& s = suites()[i];
    if (!filter.empty() && std::string(s.name).find(filter) == std::string::npos) continue;
    SuiteResult r;
    r.name = s.name;
    Checker c(r);
    Rng rng(seed + 7919 * i);
    try {
      s.body(c, rng);
    } catch (const std::exception& ex) {
      r.passed = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_result(const SuiteResult& r) {
  if (r.passed) return "PASS " + r.name + " (" + std::to_string(r.checks) + " checks)";
  return "FAIL " + r.name + ": " + r.detail;
}

}  // namespace aquifer
