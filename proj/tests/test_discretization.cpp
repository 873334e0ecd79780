// Quadrature grids, finite-volume operators, and Krylov solvers.
//
// The operator tests check structural identities (adjointness, symmetry,
// conservation, annihilation of constants) that the energy ledger relies on;
// most of them must hold to rounding, not to discretization order.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>

#include <cmath>
#include <numeric>
#include <random>

#include "polyflow/errors.hpp"
#include "polyflow/grid.hpp"
#include "polyflow/linsolve.hpp"
#include "polyflow/model.hpp"
#include "polyflow/operators.hpp"
#include "polyflow/psi_ops.hpp"
#include "polyflow/quadrature.hpp"
#include "polyflow/regularization.hpp"

using namespace polyflow;

namespace {

Field random_field(const OmegaGrid& g, std::mt19937& rng, double lo = -1.0,
                   double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Field f(static_cast<std::size_t>(g.cells()));
  for (auto& v : f) v = d(rng);
  return f;
}

double linf(const Field& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

double dot_plain(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

TEST_CASE("gauss rule integrates monomials against the beta weight") {
  // Oracle: int_0^1 t^m (1-t)^alpha dt = B(m+1, alpha+1), via lgamma.
  const double alpha = 1.0;
  const int n = 12;
  const auto rule = quad::gauss_jacobi01(n, alpha);
  for (int m = 0; m <= 2 * n - 1; ++m) {
    double got = 0.0;
    for (int j = 0; j < n; ++j) got += rule.weight[j] * std::pow(rule.node[j], m);
    const double exact = std::exp(std::lgamma(m + 1.0) + std::lgamma(alpha + 1.0) -
                                  std::lgamma(m + alpha + 2.0));
    CHECK(std::abs(got - exact) <= 1e-13 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("spring grid weights are a probability measure") {
  auto chain = make_chain(1, 2, {4.0}, linear_chain_rouse(1));
  auto cg = make_config_grid(chain, 16, 32);
  const auto& sg = cg.spring[0];

  double s = 0.0;
  for (double w : sg.w) s += w;
  CHECK(std::abs(s - 1.0) <= 1e-13);
  CHECK(std::abs(sg.raw_sum - 1.0) <= 1e-10);

  // The normalization estimate is resolution-insensitive because the radial
  // integrand is polynomial; compare against the closed form 2 pi b / (b+2).
  const double b = 4.0;
  const double z_exact = 2.0 * M_PI * b / (b + 2.0);
  CHECK(std::abs(sg.partition_estimate - z_exact) <= 1e-8 * z_exact);

  // Node caches agree with the model functions.
  for (int j = 0; j < sg.n_r; j += 3) {
    for (int mm = 0; mm < sg.n_th; mm += 5) {
      const int nn = sg.nidx(j, mm);
      const double q[2] = {sg.qx[nn], sg.qy[nn]};
      const auto me = maxwellian(q, chain);
      CHECK(sg.m[nn] == doctest::Approx(me.value).epsilon(1e-12));
      const double r2 = q[0] * q[0] + q[1] * q[1];
      CHECK(sg.uprime[nn] == doctest::Approx(1.0 / (1.0 - r2 / b)).epsilon(1e-12));
    }
  }
}

TEST_CASE("spring grid second moment matches the closed form and an adaptive oracle") {
  for (double b : {4.0, 3.0, 7.5}) {
    auto chain = make_chain(1, 2, {b}, linear_chain_rouse(1));
    auto cg = make_config_grid(chain, 32, 48);
    const double m2 = grid_second_moment(cg.spring[0]);
    const double closed = 2.0 * b / (b + 4.0);
    CHECK(std::abs(m2 - closed) <= 1e-6 * closed);

    const double theta = b / 2.0;
    const double den =
        quad::adaptive([&](double t) { return std::pow(1.0 - t, theta); }, 0.0,
                       1.0, 1e-12);
    const double num =
        b * quad::adaptive([&](double t) { return t * std::pow(1.0 - t, theta); },
                           0.0, 1.0, 1e-12);
    CHECK(m2 == doctest::Approx(num / den).epsilon(1e-9));
  }
}

TEST_CASE("configuration edge tables are geometrically consistent") {
  auto chain = make_chain(1, 2, {4.0}, linear_chain_rouse(1));
  auto cg = make_config_grid(chain, 12, 16);
  const auto& sg = cg.spring[0];

  const std::size_t radial = static_cast<std::size_t>(sg.n_th) * (sg.n_r - 1);
  const std::size_t angular = static_cast<std::size_t>(sg.n_th) * sg.n_r;
  CHECK(cg.edges.size() == radial + angular);
  for (const auto& e : cg.edges) {
    CHECK(e.cond > 0.0);
    CHECK(e.mcoef > 0.0);
    CHECK(e.a != e.b);
    // unit tangent
    CHECK(e.tx * e.tx + e.ty * e.ty == doctest::Approx(1.0).epsilon(1e-13));
    // edge midpoint stays strictly inside the disc
    CHECK(e.qex * e.qex + e.qey * e.qey < sg.b);
  }

  // radial control volumes tile (0, sqrt(b))
  double width = 0.0;
  for (int j = 0; j < sg.n_r; ++j) {
    const double lo = (j == 0) ? 0.0 : 0.5 * (sg.r[j - 1] + sg.r[j]);
    const double hi =
        (j == sg.n_r - 1) ? std::sqrt(sg.b) : 0.5 * (sg.r[j] + sg.r[j + 1]);
    width += hi - lo;
  }
  CHECK(width == doctest::Approx(std::sqrt(sg.b)).epsilon(1e-12));
}

TEST_CASE("two-spring grids index the product measure correctly") {
  auto chain = make_chain(2, 2, {4.0, 6.0}, linear_chain_rouse(2));
  auto cg = make_config_grid(chain, 8, 8);
  CHECK(cg.nodes() == 64 * 64);
  double s = 0.0;
  for (int n = 0; n < cg.nodes(); ++n) s += cg.weight(n);
  CHECK(std::abs(s - 1.0) <= 1e-10);
  // flattened index has the last spring fastest
  const int ns1 = cg.spring[1].nodes();
  for (int n : {0, 63, 64, 4095}) {
    CHECK(n == cg.sub_node(n, 0) * ns1 + cg.sub_node(n, 1));
  }
}

TEST_CASE("centered differences with zero ghosts are exactly skew-adjoint") {
  for (Bc bc : {Bc::Periodic, Bc::NoSlipNeumann}) {
    auto g = make_omega_grid(8, 6, 1.0, 1.3, bc);
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      Field f = random_field(g, rng);
      Field h = random_field(g, rng);
      Field dxf, dxh, dyf, dyh;
      diff_x(g, Ghost::Zero, f, dxf);
      diff_x(g, Ghost::Zero, h, dxh);
      diff_y(g, Ghost::Zero, f, dyf);
      diff_y(g, Ghost::Zero, h, dyh);
      CHECK(std::abs(dot_cells(g, dxf, h) + dot_cells(g, f, dxh)) <= 1e-13);
      CHECK(std::abs(dot_cells(g, dyf, h) + dot_cells(g, f, dyh)) <= 1e-13);
    }
  }
}

TEST_CASE("periodic differences annihilate constants") {
  auto g = make_omega_grid(8, 8, 1.0, 1.0, Bc::Periodic);
  Field c(g.cells(), 3.7), out;
  diff_x(g, Ghost::Zero, c, out);
  CHECK(linf(out) == 0.0);
  diff_y(g, Ghost::Zero, c, out);
  CHECK(linf(out) == 0.0);
}

TEST_CASE("viscous apply is the adjoint of the viscous form") {
  for (Bc bc : {Bc::Periodic, Bc::NoSlipNeumann}) {
    auto g = make_omega_grid(9, 7, 1.1, 0.9, bc);
    std::mt19937 rng(23);
    const double mu_s = 0.3, c_b = 0.8;
    for (int trial = 0; trial < 10; ++trial) {
      Field ux = random_field(g, rng), uy = random_field(g, rng);
      Field wx = random_field(g, rng), wy = random_field(g, rng);
      if (bc == Bc::NoSlipNeumann)
        for (Field* f : {&ux, &uy, &wx, &wy}) mask_boundary(g, *f);
      Field ax, ay;
      visc_apply(g, mu_s, c_b, ux, uy, ax, ay);
      const double lhs = dot_cells(g, ax, wx) + dot_cells(g, ay, wy);
      const double rhs = visc_form(g, mu_s, c_b, ux, uy, wx, wy);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
      CHECK(visc_form(g, mu_s, c_b, ux, uy, ux, uy) >= 0.0);
    }
  }
}

TEST_CASE("viscous form splits into deviatoric and dilatational parts") {
  auto g = make_omega_grid(8, 8, 1.0, 1.0, Bc::Periodic);
  std::mt19937 rng(31);
  const double mu_s = 0.4, c_b = 0.9;
  Field ux = random_field(g, rng), uy = random_field(g, rng);

  VelGrad gu;
  gu.resize(g.cells());
  velocity_gradient(g, ux, uy, gu);
  double dev = 0.0, dil = 0.0;
  for (int c = 0; c < g.cells(); ++c) {
    const double dxy = 0.5 * (gu.xy[c] + gu.yx[c]);
    const double tr = gu.xx[c] + gu.yy[c];
    const double exx = gu.xx[c] - 0.5 * tr, eyy = gu.yy[c] - 0.5 * tr;
    dev += exx * exx + 2.0 * dxy * dxy + eyy * eyy;
    dil += tr * tr;
  }
  const double expanded = g.cell_w * (mu_s * dev + (c_b + 0.5 * mu_s) * dil);
  CHECK(visc_form(g, mu_s, c_b, ux, uy, ux, uy) ==
        doctest::Approx(expanded).epsilon(1e-12));
}

TEST_CASE("convection form is exactly antisymmetric") {
  for (Bc bc : {Bc::Periodic, Bc::NoSlipNeumann}) {
    auto g = make_omega_grid(8, 6, 1.0, 1.0, bc);
    std::mt19937 rng(47);
    for (int trial = 0; trial < 10; ++trial) {
      Field vx = random_field(g, rng), vy = random_field(g, rng);
      Field rho = random_field(g, rng, 0.2, 2.0);
      Field ux = random_field(g, rng), uy = random_field(g, rng);
      Field wx = random_field(g, rng), wy = random_field(g, rng);
      if (bc == Bc::NoSlipNeumann)
        for (Field* f : {&vx, &vy, &ux, &uy, &wx, &wy}) mask_boundary(g, *f);

      // Bitwise zero on the diagonal: this is what removes convection from
      // the kinetic-energy budget.
      CHECK(skew_form(g, rho, vx, vy, ux, uy, ux, uy) == 0.0);

      const double fwd = skew_form(g, rho, vx, vy, ux, uy, wx, wy);
      const double bwd = skew_form(g, rho, vx, vy, wx, wy, ux, uy);
      CHECK(fwd == doctest::Approx(-bwd).epsilon(1e-12));

      Field ax, ay;
      skew_apply(g, rho, vx, vy, ux, uy, ax, ay);
      CHECK(dot_cells(g, ax, wx) + dot_cells(g, ay, wy) ==
            doctest::Approx(fwd).epsilon(1e-12));
    }
  }
}

TEST_CASE("cell laplacian is a symmetric psd graph form that kills constants") {
  for (Bc bc : {Bc::Periodic, Bc::NoSlipNeumann}) {
    auto g = make_omega_grid(7, 9, 1.4, 1.0, bc);
    std::mt19937 rng(59);
    Field f = random_field(g, rng), h = random_field(g, rng);

    CHECK(lap_form(g, f, h) == doctest::Approx(lap_form(g, h, f)).epsilon(1e-13));
    CHECK(lap_form(g, f, f) >= 0.0);

    Field c(g.cells(), 2.25), out;
    lap_apply(g, c, out);
    CHECK(linf(out) == 0.0);

    Field af;
    lap_apply(g, f, af);
    CHECK(dot_cells(g, af, h) == doctest::Approx(lap_form(g, f, h)).epsilon(1e-12));
  }
}

TEST_CASE("upwind divergence conserves cell totals") {
  for (Bc bc : {Bc::Periodic, Bc::NoSlipNeumann}) {
    auto g = make_omega_grid(8, 8, 1.0, 1.0, bc);
    std::mt19937 rng(67);
    Field ux = random_field(g, rng), uy = random_field(g, rng);
    Field c = random_field(g, rng, 0.0, 2.0);
    Field out;
    upwind_div_apply(g, ux, uy, c, out);
    double tot = 0.0;
    for (double v : out) tot += v * g.cell_w;
    CHECK(std::abs(tot) <= 1e-13);

    // The Jacobi diagonal matches the assembled operator on unit vectors.
    Field diag;
    upwind_div_diag(g, ux, uy, diag);
    for (int c0 : {0, g.cells() / 2, g.cells() - 1}) {
      Field e(g.cells(), 0.0);
      e[c0] = 1.0;
      Field ae;
      upwind_div_apply(g, ux, uy, e, ae);
      CHECK(ae[c0] == doctest::Approx(diag[c0]).epsilon(1e-13));
    }
  }
}

TEST_CASE("face-mean right-hand sides pair against face averages") {
  for (Bc bc : {Bc::Periodic, Bc::NoSlipNeumann}) {
    auto g = make_omega_grid(6, 10, 1.0, 2.0, bc);
    std::mt19937 rng(71);
    Field wx = random_field(g, rng), wy = random_field(g, rng);

    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Field cx(n_xfaces(g)), cy(n_yfaces(g));
    for (auto& v : cx) v = d(rng);
    for (auto& v : cy) v = d(rng);

    Field rx(g.cells(), 0.0), ry(g.cells(), 0.0);
    face_mean_rhs(g, cx, cy, rx, ry);

    double expect = 0.0;
    int a, b;
    for (int f = 0; f < n_xfaces(g); ++f) {
      xface_cells(g, f, a, b);
      expect += cx[f] * 0.5 * (wx[a] + wx[b]);
    }
    for (int f = 0; f < n_yfaces(g); ++f) {
      yface_cells(g, f, a, b);
      expect += cy[f] * 0.5 * (wy[a] + wy[b]);
    }
    CHECK(dot_cells(g, rx, wx) + dot_cells(g, ry, wy) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("conjugate gradient matches a dense factorization oracle") {
  std::mt19937 rng(83);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const int n = 24;
  Eigen::MatrixXd B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = d(rng);
  Eigen::MatrixXd A = B.transpose() * B + Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) rhs(i) = d(rng);

  LinOp op;
  op.n = n;
  op.apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    Eigen::Map<const Eigen::VectorXd> xv(x.data(), n);
    Eigen::Map<Eigen::VectorXd> yv(y.data(), n);
    yv = A * xv;
  };
  std::vector<double> x(n, 0.0), b(rhs.data(), rhs.data() + n);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = A(i, i);
  SolveOpts opts;
  opts.rel_tol = 1e-13;
  opts.max_iter = 2000;
  auto st = solve_cg(op, b, x, &diag, opts);
  CHECK(st.rel_residual <= 1e-12);

  Eigen::VectorXd xe = A.partialPivLu().solve(rhs);
  for (int i = 0; i < n; ++i) CHECK(std::abs(x[i] - xe(i)) <= 1e-10);
}

TEST_CASE("bicgstab matches a dense factorization oracle on nonsymmetric systems") {
  std::mt19937 rng(89);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const int n = 24;
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = 0.3 * d(rng);
    A(i, i) += 4.0;
  }
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) rhs(i) = d(rng);

  LinOp op;
  op.n = n;
  op.apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    Eigen::Map<const Eigen::VectorXd> xv(x.data(), n);
    Eigen::Map<Eigen::VectorXd> yv(y.data(), n);
    yv = A * xv;
  };
  std::vector<double> x(n, 0.0), b(rhs.data(), rhs.data() + n);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = A(i, i);
  SolveOpts opts;
  opts.rel_tol = 1e-13;
  opts.max_iter = 2000;
  solve_bicgstab(op, b, x, &diag, opts);

  Eigen::VectorXd xe = A.partialPivLu().solve(rhs);
  for (int i = 0; i < n; ++i) CHECK(std::abs(x[i] - xe(i)) <= 1e-10);
}

TEST_CASE("krylov solvers keep an already-converged initial guess untouched") {
  const int n = 8;
  LinOp op;
  op.n = n;
  op.apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (int i = 0; i < n; ++i) y[i] = 2.0 * x[i];
  };
  std::vector<double> x(n, 1.5), b(n, 3.0);
  auto st = solve_cg(op, b, x);
  CHECK(st.iters == 0);
  for (double v : x) CHECK(v == 1.5);

  std::vector<double> zero(n, 0.0), xz(n, 7.0);
  solve_cg(op, zero, xz);
  for (double v : xz) CHECK(v == 0.0);
}

TEST_CASE("conjugate gradient rejects indefinite operators") {
  const int n = 4;
  LinOp op;
  op.n = n;
  op.apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (int i = 0; i < n; ++i) y[i] = (i % 2 == 0 ? 1.0 : -1.0) * x[i];
  };
  std::vector<double> x(n, 0.0), b(n, 1.0);
  CHECK_THROWS_AS(solve_cg(op, b, x), SolverError);
}

namespace {

struct PsiFixture {
  SpringChain chain = make_chain(1, 2, {4.0}, linear_chain_rouse(1));
  ConfigGrid cg;
  OmegaGrid g;
  int nq, nc;
  PsiFixture()
      : cg(make_config_grid(chain, 10, 16)),
        g(make_omega_grid(5, 4, 1.0, 1.0, Bc::Periodic)) {
    nq = cg.nodes();
    nc = g.cells();
  }
  std::vector<double> random_psi(std::mt19937& rng, double lo, double hi) const {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> p(static_cast<std::size_t>(nc) * nq);
    for (auto& v : p) v = d(rng);
    return p;
  }
};

}  // namespace

TEST_CASE("configuration-space forms are symmetric psd and constant-annihilating") {
  PsiFixture fx;
  std::mt19937 rng(101);
  auto a = fx.random_psi(rng, -1.0, 1.0);
  auto b = fx.random_psi(rng, -1.0, 1.0);

  CHECK(psi_mass_form(fx.g, fx.cg, a, b) ==
        doctest::Approx(psi_mass_form(fx.g, fx.cg, b, a)).epsilon(1e-13));
  CHECK(psi_xdiff_form(fx.g, fx.cg, a, b) ==
        doctest::Approx(psi_xdiff_form(fx.g, fx.cg, b, a)).epsilon(1e-13));
  CHECK(psi_qdiff_form(fx.g, fx.cg, a, b) ==
        doctest::Approx(psi_qdiff_form(fx.g, fx.cg, b, a)).epsilon(1e-13));
  CHECK(psi_xdiff_form(fx.g, fx.cg, a, a) >= 0.0);
  CHECK(psi_qdiff_form(fx.g, fx.cg, a, a) >= 0.0);

  std::vector<double> c(a.size(), 1.7), out(a.size());
  psi_xdiff_apply(fx.g, fx.cg, c, out);
  CHECK(linf(out) == 0.0);
  psi_qdiff_apply(fx.g, fx.cg, c, out);
  CHECK(linf(out) == 0.0);

  // apply/form consistency through the plain euclidean pairing
  std::vector<double> ma(a.size());
  psi_mass_apply(fx.g, fx.cg, a, ma);
  CHECK(dot_plain(ma, b) ==
        doctest::Approx(psi_mass_form(fx.g, fx.cg, a, b)).epsilon(1e-12));
  psi_xdiff_apply(fx.g, fx.cg, a, ma);
  CHECK(dot_plain(ma, b) ==
        doctest::Approx(psi_xdiff_form(fx.g, fx.cg, a, b)).epsilon(1e-12));
  psi_qdiff_apply(fx.g, fx.cg, a, ma);
  CHECK(dot_plain(ma, b) ==
        doctest::Approx(psi_qdiff_form(fx.g, fx.cg, a, b)).epsilon(1e-12));
}

TEST_CASE("system diagonal matches the assembled operator on unit vectors") {
  PsiFixture fx;
  const double dt_eps = 0.037, dt_qc = 0.061;
  Field diag;
  psi_system_diag(fx.g, fx.cg, dt_eps, dt_qc, diag);
  std::mt19937 rng(103);
  std::uniform_int_distribution<int> pick(0, fx.nc * fx.nq - 1);
  for (int trial = 0; trial < 8; ++trial) {
    const int i = pick(rng);
    Field e(static_cast<std::size_t>(fx.nc) * fx.nq, 0.0);
    e[i] = 1.0;
    Field m, xd, qd;
    psi_mass_apply(fx.g, fx.cg, e, m);
    psi_xdiff_apply(fx.g, fx.cg, e, xd);
    psi_qdiff_apply(fx.g, fx.cg, e, qd);
    const double aii = m[i] + dt_eps * xd[i] + dt_qc * qd[i];
    CHECK(diag[i] == doctest::Approx(aii).epsilon(1e-12));
  }
}

TEST_CASE("configuration diffusion form approximates a smooth dirichlet integral") {
  // psi = qx has unit configuration gradient, so the Maxwellian-weighted form
  // approaches the total measure sum_c cell_w.
  auto chain = make_chain(1, 2, {4.0}, linear_chain_rouse(1));
  auto cg = make_config_grid(chain, 24, 48);
  auto g = make_omega_grid(4, 4, 1.0, 1.0, Bc::Periodic);
  const int nq = cg.nodes(), nc = g.cells();
  std::vector<double> p(static_cast<std::size_t>(nc) * nq);
  for (int c = 0; c < nc; ++c)
    for (int n = 0; n < nq; ++n) p[c * nq + n] = cg.spring[0].qx[n];
  const double form = psi_qdiff_form(g, cg, p, p);
  CHECK(form == doctest::Approx(nc * g.cell_w).epsilon(0.05));
}

TEST_CASE("drag and transport sources conserve totals and vanish without drivers") {
  PsiFixture fx;
  std::mt19937 rng(113);
  auto lag = fx.random_psi(rng, 0.4, 2.0);
  const double L = 20.0;

  VelGrad sigma;
  sigma.resize(fx.nc);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (auto* comp : {&sigma.xx, &sigma.xy, &sigma.yx, &sigma.yy})
    for (auto& v : *comp) v = d(rng);

  std::vector<double> drag(static_cast<std::size_t>(fx.nc) * fx.nq, 0.0);
  psi_drag_rhs(fx.g, fx.cg, sigma, lag, L, 0.0, drag);
  // outputs are pre-weighted, so conservation is the plain sum
  CHECK(std::abs(std::accumulate(drag.begin(), drag.end(), 0.0)) <=
        1e-12 * (1.0 + linf(drag) * drag.size()));

  Field ux = random_field(fx.g, rng), uy = random_field(fx.g, rng);
  std::vector<double> trans(drag.size(), 0.0);
  Field xbx, xby;
  psi_transport_rhs(fx.g, fx.cg, ux, uy, lag, L, 0.0, trans, &xbx, &xby);
  CHECK(std::abs(std::accumulate(trans.begin(), trans.end(), 0.0)) <=
        1e-12 * (1.0 + linf(trans) * trans.size()));

  // zero drivers produce bitwise-zero sources
  VelGrad zsig;
  zsig.resize(fx.nc);
  std::vector<double> out(drag.size(), 0.0);
  psi_drag_rhs(fx.g, fx.cg, zsig, lag, L, 0.0, out);
  CHECK(linf(out) == 0.0);
  Field zu(fx.nc, 0.0);
  psi_transport_rhs(fx.g, fx.cg, zu, zu, lag, L, 0.0, out, &xbx, &xby);
  CHECK(linf(out) == 0.0);
}

TEST_CASE("drag source tested with the entropy derivative telescopes to plain increments") {
  // The edge coefficient is the divided difference of the cutoff entropy, so
  // pairing the drag source with F'(lag) removes the coefficient exactly.
  // This identity is what cancels the elastic forcing in the energy budget.
  PsiFixture fx;
  std::mt19937 rng(127);
  auto lag = fx.random_psi(rng, 0.4, 2.0);
  const double L = 20.0;

  VelGrad sigma;
  sigma.resize(fx.nc);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (auto* comp : {&sigma.xx, &sigma.xy, &sigma.yx, &sigma.yy})
    for (auto& v : *comp) v = d(rng);

  std::vector<double> drag(static_cast<std::size_t>(fx.nc) * fx.nq, 0.0);
  psi_drag_rhs(fx.g, fx.cg, sigma, lag, L, 0.0, drag);

  std::vector<double> gprime(drag.size());
  for (std::size_t i = 0; i < gprime.size(); ++i)
    gprime[i] = entropy_FL(lag[i], L).first;
  const double lhs = dot_plain(drag, gprime);

  double rhs = 0.0;
  for (int c = 0; c < fx.nc; ++c) {
    const int base = c * fx.nq;
    for (const auto& e : fx.cg.edges) {
      const double vx = sigma.xx[c] * e.qex + sigma.xy[c] * e.qey;
      const double vy = sigma.yx[c] * e.qex + sigma.yy[c] * e.qey;
      const double vt = vx * e.tx + vy * e.ty;
      rhs += fx.g.cell_w * e.mcoef * vt * (lag[base + e.b] - lag[base + e.a]);
    }
  }
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("transport source telescopes to marginal increments and reports face means") {
  PsiFixture fx;
  std::mt19937 rng(131);
  auto lag = fx.random_psi(rng, 0.4, 2.0);
  const double L = 20.0;
  const auto& g = fx.g;

  Field ux = random_field(g, rng), uy = random_field(g, rng);
  std::vector<double> trans(static_cast<std::size_t>(fx.nc) * fx.nq, 0.0);
  Field xbx, xby;
  psi_transport_rhs(g, fx.cg, ux, uy, lag, L, 0.0, trans, &xbx, &xby);

  std::vector<double> gprime(trans.size());
  for (std::size_t i = 0; i < gprime.size(); ++i)
    gprime[i] = entropy_FL(lag[i], L).first;
  const double lhs = dot_plain(trans, gprime);

  Field marg;
  psi_marginal(g, fx.cg, lag, marg);
  double rhs = 0.0;
  int a, b;
  for (int f = 0; f < n_xfaces(g); ++f) {
    xface_cells(g, f, a, b);
    rhs += 0.5 * (ux[a] + ux[b]) * g.hy * (marg[b] - marg[a]);
  }
  for (int f = 0; f < n_yfaces(g); ++f) {
    yface_cells(g, f, a, b);
    rhs += 0.5 * (uy[a] + uy[b]) * g.hx * (marg[b] - marg[a]);
  }
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));

  // A configuration-independent test function exposes the accumulated face
  // means of the cutoff coefficient.
  Field phi = random_field(g, rng);
  std::vector<double> phiq(trans.size());
  for (int c = 0; c < fx.nc; ++c)
    for (int n = 0; n < fx.nq; ++n) phiq[c * fx.nq + n] = phi[c];
  const double lhs2 = dot_plain(trans, phiq);
  double rhs2 = 0.0;
  for (int f = 0; f < n_xfaces(g); ++f) {
    xface_cells(g, f, a, b);
    rhs2 += 0.5 * (ux[a] + ux[b]) * g.hy * (phi[b] - phi[a]) * xbx[f];
  }
  for (int f = 0; f < n_yfaces(g); ++f) {
    yface_cells(g, f, a, b);
    rhs2 += 0.5 * (uy[a] + uy[b]) * g.hx * (phi[b] - phi[a]) * xby[f];
  }
  CHECK(lhs2 == doctest::Approx(rhs2).epsilon(1e-10));
}

TEST_CASE("unit distribution has unit marginal and zero entropy rates") {
  PsiFixture fx;
  std::vector<double> one(static_cast<std::size_t>(fx.nc) * fx.nq, 1.0);
  Field marg;
  psi_marginal(fx.g, fx.cg, one, marg);
  for (double v : marg) CHECK(std::abs(v - 1.0) <= 1e-13);
  CHECK(psi_fisher_q(fx.g, fx.cg, one) == 0.0);
  CHECK(psi_fisher_x(fx.g, fx.cg, one) == 0.0);
}
