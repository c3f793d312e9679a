// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include "siren/constants.hpp"
#include "siren/estimators.hpp"
#include "siren/geometry.hpp"
#include "siren/harness.hpp"
#include "siren/kernels.hpp"
#include "siren/links.hpp"
#include "siren/oracle.hpp"
#include "siren/selection.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

using namespace siren;

namespace {

struct Outcome
{
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why)
  {
    if (pass)
      detail << "first failure: " << why << "; ";
    pass = false;
  }
};

double rel_gap(double a, double b)
{
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

// ---------------------------------------------------------------- 1

double integrate_kernel(const Kernel1D& k, const std::function<double(double)>& w)
{
  const auto bp = k.breakpoints();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i)
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double u) { return w(u) * k(u); }, bp[i], bp[i + 1], 0, 0.0);
  return total;
}

void kernel_suite(Outcome& o)
{
  double worst_moment = 0.0, worst_mass = 0.0;
  for (int m = 1; m <= 4; ++m) {
    const Kernel1D k = m == 1 ? build_triangular() : build_orthopoly_kernel(m);
    if (k.moment_order() < m)
      o.fail("moment order of order-" + std::to_string(m) + " kernel");
    const double mass = integrate_kernel(k, [](double) { return 1.0; });
    worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
    for (int j = 1; j <= m; ++j) {
      const double mj = integrate_kernel(k, [j](double u) { return std::pow(u, j); });
      worst_moment = std::max(worst_moment, std::abs(mj));
    }
    for (int i = 0; i <= 20000; ++i) {
      const double u = -0.6 + i * 6e-5;
      if (k(u) != k(-u)) {
        o.fail("asymmetry at u = " + std::to_string(u));
        break;
      }
    }
  }
  if (worst_moment > 1e-10)
    o.fail("moment too large");
  if (worst_mass > 1e-12)
    o.fail("mass differs from 1");
  o.detail << "max |moment| " << worst_moment << ", max |mass - 1| " << worst_mass;
}

// ---------------------------------------------------------------- 2

void geometry_suite(Outcome& o)
{
  const double h_min = bandwidth_scales(10000, 2.0).h_min;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI), uh(h_min, 1.0);
  double det_single = 0.0, exch = 0.0, dil = 0.0;
  std::size_t bad_det = 0, bad_class = 0;
  auto entry_gap = [](const Matrix2& a, const Matrix2& b) {
    return std::max({ std::abs(a.a11 - b.a11) / std::max(1.0, std::abs(b.a11)),
                      std::abs(a.a12 - b.a12) / std::max(1.0, std::abs(b.a12)),
                      std::abs(a.a21 - b.a21) / std::max(1.0, std::abs(b.a21)),
                      std::abs(a.a22 - b.a22) / std::max(1.0, std::abs(b.a22)) });
  };
  auto in_class = [h_min](const Matrix2& e) {
    const double d = std::abs(e.a11 * e.a22 - e.a12 * e.a21);
    const double sup = std::max({ std::abs(e.a11), std::abs(e.a12), std::abs(e.a21), std::abs(e.a22) });
    // a = 1/8: |E|_inf <= |det| / sqrt(2a) = 2 |det|
    return d <= 1.0 / h_min && sup <= 2.0 * d * (1 + 1e-12);
  };
  for (int i = 0; i < 100000; ++i) {
    const double a = ang(rng), b = ang(rng), h = uh(rng);
    const double t1 = std::cos(a), t2 = std::sin(a), n1 = std::cos(b), n2 = std::sin(b);
    const auto th = Direction::from_angle(a), nu = Direction::from_angle(b);
    const Matrix2 s = single_matrix(th, h);
    const double ds = s.a11 * s.a22 - s.a12 * s.a21;
    det_single = std::max(det_single, std::abs(ds * h - 1.0));
    const Matrix2 p = pair_matrix(th, nu, h);
    const double dp = p.a11 * p.a22 - p.a12 * p.a21;
    if (dp < 1.0 / (4 * h) * (1 - 1e-12) || dp > 1.0 / (2 * h) * (1 + 1e-12))
      ++bad_det;
    const Matrix2 q = pair_matrix(nu, th, h);
    exch = std::max(exch, std::min(entry_gap(p, q), entry_gap(p, q.scaled(-1.0))));
    // axis unit(theta + nu), or unit(nu - theta) when theta.nu < 0
    const double c = t1 * n1 + t2 * n2;
    const double sgn = c >= 0 ? 1.0 : -1.0;
    const double u1 = sgn * t1 + n1, u2 = sgn * t2 + n2, norm = std::hypot(u1, u2);
    const double f = 1.0 / std::sqrt(2.0 * (1.0 + std::abs(c)));
    const double e1 = u1 / norm, e2 = u2 / norm;
    const Matrix2 ref(f * e1 / h, f * e2 / h, -f * e2, f * e1);
    dil = std::max(dil, entry_gap(p, ref));
    if (!in_class(s) || !in_class(p))
      ++bad_class;
  }
  if (det_single > 1e-12)
    o.fail("single determinant");
  if (bad_det)
    o.fail(std::to_string(bad_det) + " pair determinants out of range");
  if (exch > 1e-12)
    o.fail("exchange symmetry");
  if (dil > 1e-12)
    o.fail("dilation identity");
  if (bad_class)
    o.fail(std::to_string(bad_class) + " matrices outside the class");
  o.detail << "1e5 draws; det rel err " << det_single << ", exchange " << exch << ", dilation "
           << dil;
}

// ---------------------------------------------------------------- 3

Sample noisy_uniform(std::size_t n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::normal_distribution<double> e(0.0, 0.5);
  std::vector<Point> xs(n);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = { u(rng), u(rng) };
    ys[i] = std::cos(0.54 * xs[i].x + 0.84 * xs[i].y) + e(rng);
  }
  return Sample(xs, ys);
}

// Moves every observation outside the window |a.d| <= w_along, |a_perp.d| <= w_across
// further out and scrambles its response.
Sample perturb_outside(const Sample& s, Point t, Direction a, double w_along, double w_across,
                       std::size_t& moved)
{
  std::vector<Point> xs(s.xs().begin(), s.xs().end());
  std::vector<double> ys(s.ys().begin(), s.ys().end());
  moved = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Point d = xs[i] - t;
    if (std::abs(a.dot(d)) > w_along + 1e-9 || std::abs(a.perp().dot(d)) > w_across + 1e-9) {
      xs[i] = { t.x + 1.05 * d.x, t.y + 1.05 * d.y };
      ys[i] = -5.0 * ys[i] + 11.0;
      ++moved;
    }
  }
  return Sample(xs, ys);
}

void estimator_suite(Outcome& o)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI), tt(-0.5, 0.5), lh(std::log(0.05), 0.0);
  const auto g = DesignDensity::uniform_box(3);
  const auto k = build_triangular();
  double worst = 0.0;
  std::size_t local_bad = 0, checks = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const Sample s = noisy_uniform(512, 100 + rep);
    const Estimator est(s, g, k);
    for (int i = 0; i < 10; ++i) {
      const auto th = Direction::from_angle(ang(rng)), nu = Direction::from_angle(ang(rng));
      const double h = std::exp(lh(rng));
      const Point t{ tt(rng), tt(rng) };
      worst = std::max(worst, rel_gap(est.pair(th, nu, h, t), est.pair(nu, th, h, t)));
    }
    const auto th = Direction::from_angle(ang(rng)), nu = Direction::from_angle(ang(rng));
    const double h = std::exp(lh(rng));
    const Point t{ tt(rng), tt(rng) };
    std::size_t moved = 0;
    const Estimator single_other(perturb_outside(s, t, th, h / 2, 0.5, moved), g, k);
    ++checks;
    if (moved == 0 || single_other.single(th, h, t) != est.single(th, h, t))
      ++local_bad;
    const PairFrame fr = pair_frame(th, nu);
    const double dil = fr.dilation();
    const Estimator pair_other(perturb_outside(s, t, fr.axis, h * dil / 2, dil / 2, moved), g, k);
    ++checks;
    if (moved == 0 || pair_other.pair(th, nu, h, t) != est.pair(th, nu, h, t))
      ++local_bad;
  }
  if (worst > 1e-10)
    o.fail("exchange symmetry");
  if (local_bad)
    o.fail(std::to_string(local_bad) + " locality checks changed the estimate");
  o.detail << "max relative exchange gap " << worst << ", " << checks - local_bad << "/" << checks
           << " locality checks bitwise equal";
}

// ---------------------------------------------------------------- 4

void oracle_closed_form(Outcome& o)
{
  const double ksup = build_triangular().sup_norm();
  double worst = 0.0;
  std::size_t cases = 0, floored = 0;
  for (double beta : { 0.5, 1.0, 1.5, 2.0 })
    for (double c : { 0.1, 0.5, 2.0, 8.0 })
      for (std::int64_t n : { 1000, 10000, 100000 }) {
        const double h_min = bandwidth_scales(n, 2.0).h_min;
        const auto rep = oracle_bandwidth_profile(
          [&](double h) { return c * std::pow(h, beta); }, ksup, n, h_min);
        const double closed = std::min(
          1.0, std::pow(ksup * ksup * std::log(double(n)) / (n * c * c), 1 / (2 * beta + 1)));
        ++cases;
        if (closed < h_min) {
          ++floored;
          if (!rep.at_floor)
            o.fail("expected the h_min floor");
          continue;
        }
        worst = std::max(worst, std::abs(rep.h_star - closed) / closed);
      }
  if (worst > 1e-3)
    o.fail("bisection differs from closed form");
  o.detail << cases << " cases (" << floored << " below h_min), max relative error " << worst;
}

// ---------------------------------------------------------------- 5

void bias_bounds(Outcome& o)
{
  const std::int64_t n = 10000;
  const auto k = build_triangular();
  const double ksup = k.sup_norm();
  const Direction ts = Direction::from_angle(1.0);
  const LinkFunction f = bump_link(1.0, 1.0, 1.0);
  const double h_min = bandwidth_scales(n, 2.0).h_min;
  const auto hs = build_bandwidth_grid(h_min).values;
  const auto nus = build_direction_grid(32).directions;
  const double noise = std::sqrt(std::log(double(n)) / n);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> tt(-0.5, 0.5);
  double m3 = 0.0, m1 = 0.0, m2 = 0.0; // largest ratio of each quantity to its bound
  std::size_t evaluated = 0;
  double smallest_h_star = 1.0;
  for (int i = 0; i < 20; ++i) {
    const Point t{ tt(rng), tt(rng) };
    const double z = ts.dot(t);
    const double h_star = oracle_bandwidth(f, k, n, z, h_min).h_star;
    smallest_h_star = std::min(smallest_h_star, h_star);
    const double b3 = std::pow(h_star, -0.5) * ksup * noise;
    const double b12 = 2.0 * std::pow(h_star, -0.5) * ksup * ksup * noise;
    const double F = f(z);
    std::vector<std::size_t> ks;
    for (std::size_t j = 0; j < hs.size(); ++j)
      if (hs[j] <= h_star / 2)
        ks.push_back(j);
    // S_(nu, h)(t) for every grid direction and admissible h
    std::vector<std::vector<double>> single(nus.size(), std::vector<double>(hs.size(), 0.0));
    for (std::size_t m = 0; m < nus.size(); ++m)
      for (std::size_t j : ks)
        single[m][j] = bias_functional(f, ts, k, nus[m], hs[j], t);
    for (std::size_t j : ks) {
      const double h = hs[j];
      m3 = std::max(m3, std::abs(bias_functional(f, ts, k, ts, h, t) - F) / b3);
      for (std::size_t m = 0; m < nus.size(); ++m) {
        const double pair = bias_functional(f, ts, k, ts, h, t, nus[m]);
        m1 = std::max(m1, std::abs(pair - single[m][j]) / b12);
        for (std::size_t e : ks)
          if (hs[e] <= h)
            m2 = std::max(m2, std::abs(single[m][j] - single[m][e]) / b12);
        ++evaluated;
      }
    }
  }
  if (evaluated == 0)
    o.fail("no admissible bandwidths");
  if (m1 > 1.0)
    o.fail("pair bound");
  if (m2 > 1.0)
    o.fail("chain bound");
  if (m3 > 1.0)
    o.fail("bias bound");
  o.detail << "smallest h* " << smallest_h_star << ", " << evaluated
           << " (t, h, nu) cells; max ratio to bound: pair " << m1 << ", chain " << m2
           << ", bias " << m3;
}

// ---------------------------------------------------------------- 6

void oracle_lower_bound(Outcome& o)
{
  const auto k = build_triangular();
  double worst = INFINITY;
  std::size_t cases = 0;
  for (double beta : { 0.5, 1.0, 2.0 })
    for (double L : { 0.5, 1.0, 2.0 }) {
      if (k.moment_order() < static_cast<int>(std::ceil(beta)) - 1)
        o.fail("kernel order too low");
      const LinkFunction f = holder_link(beta, L);
      for (std::int64_t n : { 1000, 10000 }) {
        const double h_min = bandwidth_scales(n, 2.0).h_min;
        const double bound = std::pow(std::log(double(n)) / (L * L * n), 1 / (2 * beta + 1));
        for (int i = 0; i < 10; ++i) {
          const double z = -0.9 + 0.2 * i;
          const double h_star = oracle_bandwidth(f, k, n, z, h_min).h_star;
          worst = std::min(worst, h_star / bound);
          ++cases;
          if (h_star < bound) {
            std::ostringstream why;
            why << "beta " << beta << " L " << L << " n " << n << " z " << z;
            o.fail(why.str());
          }
        }
      }
    }
  o.detail << cases << " cases, min h*/bound " << worst;
}

// ---------------------------------------------------------------- 7

DerivedConstants calibrated(std::int64_t n, double kappa)
{
  ProcedureParams p;
  p.mode = ThresholdMode::calibrated;
  p.kappa = kappa;
  return derive_constants(n, { 0.5, 0.5, 2.0 }, p);
}

void selection_suite(Outcome& o)
{
  const auto k = build_triangular();
  const auto g = DesignDensity::uniform_box(3);
  // degeneracy
  {
    const Sample s = noisy_uniform(3000, 1);
    const Estimator est(s.with_responses(std::vector<double>(3000, 0.0)), g, k);
    for (ThresholdMode mode : { ThresholdMode::calibrated, ThresholdMode::theory }) {
      ProcedureParams p;
      p.mode = mode;
      const auto dc = derive_constants(3000, { 0.5, 0.5, 2.0 }, p);
      const auto ctx = make_selection_context(est, 16, dc, k.sup_norm());
      const double th1 = threshold(1.0, 3000, 2.0 * dc.C5, dc, k.sup_norm());
      for (Point t : { Point{ 0, 0 }, Point{ 0.3, -0.4 }, Point{ -0.5, 0.5 } }) {
        const auto r = select(t, ctx);
        if (r.h_hat != 1.0 || r.estimate != 0.0 || r.objective != th1)
          o.fail("degenerate selection");
      }
    }
  }
  // exhaustive recheck
  std::size_t points = 0;
  std::size_t grid_h = 0;
  for (std::uint64_t seed : { 2, 3, 4 }) {
    const Sample s = noisy_uniform(2000, seed);
    const Estimator est(s, g, k);
    for (double kappa : { 1.0, 1.0 / 16, 1.0 / 256 }) {
      const auto ctx = make_selection_context(est, 16, calibrated(2000, kappa), k.sup_norm());
      const auto& hs = ctx.grids.h.values;
      const auto& dirs = ctx.grids.theta.directions;
      const auto& th = ctx.thresholds;
      grid_h = hs.size();
      if (hs.size() > 8)
        o.fail("bandwidth grid larger than 8");
      for (Point t : { Point{ 0.0, 0.0 }, Point{ 0.2, -0.35 } }) {
        // fresh estimates, no cache
        std::vector<std::vector<double>> sg(hs.size(), std::vector<double>(dirs.size()));
        for (std::size_t e = 0; e < hs.size(); ++e)
          for (std::size_t m = 0; m < dirs.size(); ++m)
            sg[e][m] = est.single(dirs[m], hs[e], t);
        double best = INFINITY;
        std::size_t best_k = 0, best_j = 0;
        for (std::size_t kk = 0; kk < hs.size(); ++kk)
          for (std::size_t j = 0; j < dirs.size(); ++j) {
            double r1 = 0.0, r2 = 0.0;
            for (std::size_t e = kk; e < hs.size(); ++e) {
              double s1 = 0.0, s2 = 0.0;
              for (std::size_t m = 0; m < dirs.size(); ++m) {
                s1 = std::max(s1, std::abs(est.pair(dirs[j], dirs[m], hs[e], t) - sg[e][m]));
                s2 = std::max(s2, std::abs(sg[kk][m] - sg[e][m]));
              }
              r1 = std::max(r1, std::max(0.0, s1 - th[e]));
              r2 = std::max(r2, std::max(0.0, s2 - th[e]));
            }
            const double obj = (r1 + r2) + th[kk];
            if (obj < best * (1 - 1e-12)) {
              best = obj;
              best_k = kk;
              best_j = j;
            }
          }
        const auto r = select(t, ctx);
        ++points;
        if (std::abs(r.objective - best) > 1e-12 * best)
          o.fail("objective is not the exhaustive minimum");
        if (r.h_index != best_k || r.theta_index != best_j) {
          // another cell within rounding of the minimum is acceptable only if
          // its objective agrees to 1e-12
          if (std::abs(r.objective - best) > 1e-12 * best)
            o.fail("selected cell differs");
        }
        if (r.estimate != est.single(dirs[r.theta_index], hs[r.h_index], t))
          o.fail("estimate differs from the selected single estimate");
      }
    }
  }
  o.detail << "degenerate case exact; " << points << " exhaustive rechecks on N_theta = 16, |H| = "
           << grid_h;
}

// ---------------------------------------------------------------- 8 - 10

ExperimentConfig rate_setup()
{
  ExperimentConfig c;
  c.n_values = { 1024, 2048, 4096, 8192, 16384 };
  c.link.kind = "bump";
  c.link.beta = 1.0;
  c.link.L = 1.0;
  c.link.h_scale = 1.0;
  c.theta_star[0] = std::cos(1.0);
  c.theta_star[1] = std::sin(1.0);
  c.noise.kind = "gaussian";
  c.noise.sigma = 0.5;
  c.design.kind = "uniform";
  c.t = { 0.0, 0.0 };
  c.reps = 200;
  c.n_theta = 64;
  c.mode = ThresholdMode::calibrated;
  c.calibrate_reps = 100;
  return c;
}

struct RateRun
{
  ExperimentConfig cfg;
  bool calibrated = false;
  RiskReport report;
};

RateRun run_rates(std::ostream& log)
{
  RateRun run{ rate_setup(), false, {} };
  const auto cal = calibrate(run.cfg);
  for (const auto& row : cal.sweep)
    log << "  calibrate kappa " << row.kappa << ": " << row.small_h << "/" << row.runs
        << " runs with h_hat < 1\n";
  if (!cal.kappa)
    return run;
  run.calibrated = true;
  run.cfg.kappa = *cal.kappa;
  run.report = run_experiment(run.cfg);
  for (const auto& row : run.report.rows)
    log << "  n " << row.n << ": risk " << row.risk << " (se " << row.std_error << "), mean h_hat "
        << row.mean_h_hat << ", mean angle error " << row.mean_angle_err << "\n";
  return run;
}

void rate_slope(const RateRun& run, Outcome& o)
{
  if (!run.calibrated) {
    o.fail("calibration found no kappa");
    return;
  }
  const RateFit fit = rate_fit(run.report);
  o.detail << "kappa " << run.cfg.kappa << ", slope " << fit.slope << " (se " << fit.slope_stderr
           << "), target 1/3 +- 0.15";
  if (std::abs(fit.slope - 1.0 / 3.0) > 0.15)
    o.fail("slope outside the band");
}

void oracle_ratio(const RateRun& run, Outcome& o)
{
  if (!run.calibrated) {
    o.fail("calibration found no kappa");
    return;
  }
  const auto k = run.cfg.kernel();
  const double z = run.cfg.index_direction().dot(run.cfg.t);
  double lo = INFINITY, hi = 0.0;
  for (const auto& row : run.report.rows) {
    const double h_min = bandwidth_scales(row.n, run.cfg.noise.envelope().omega).h_min;
    const double h_star = oracle_bandwidth(run.cfg.link_for(row.n), k, row.n, z, h_min).h_star;
    const double ratio =
      row.risk / std::sqrt(std::log(double(row.n)) / (double(row.n) * h_star));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    o.detail << "n " << row.n << " h* " << h_star << " ratio " << ratio << "; ";
  }
  o.detail << "band [" << lo << ", " << hi << "]";
  if (hi > 10.0)
    o.fail("ratio exceeds 10");
}

void plugin_mode(const RateRun& run, Outcome& o)
{
  if (!run.calibrated) {
    o.fail("calibration found no kappa");
    return;
  }
  ExperimentConfig c = run.cfg;
  c.plugin_density = true;
  c.gamma = 2.0;
  const double plug = mc_risk(c, 8192).row.risk;
  double known = NAN;
  for (const auto& row : run.report.rows)
    if (row.n == 8192)
      known = row.risk;
  const double ratio = plug / known;
  o.detail << "n 8192: plug-in risk " << plug << ", known-density risk " << known << ", ratio "
           << ratio;
  if (!(ratio <= 1.5))
    o.fail("plug-in risk above 1.5x");
}

} // namespace

int main()
{
  std::cout << std::setprecision(6);
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<void(Outcome&)>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      body(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << id << " (" << name << "): " << (o.pass ? "PASS" : "FAIL") << " - "
              << o.detail.str() << " [" << std::fixed << std::setprecision(1) << secs << " s]"
              << std::defaultfloat << std::setprecision(6) << std::endl;
    if (!o.pass)
      ++failures;
  };

  report(1, "kernel moments and symmetry", kernel_suite);
  report(2, "geometry properties", geometry_suite);
  report(3, "estimator symmetry and locality", estimator_suite);
  report(4, "oracle bandwidth closed form", oracle_closed_form);
  report(5, "bias bounds", bias_bounds);
  report(6, "oracle bandwidth lower bound", oracle_lower_bound);
  report(7, "selection degeneracy and optimality", selection_suite);

  RateRun run;
  bool have_run = false;
  auto ensure_run = [&] {
    if (!have_run) {
      run = run_rates(std::cout);
      have_run = true;
    }
  };
  report(8, "pointwise rate slope", [&](Outcome& o) {
    ensure_run();
    rate_slope(run, o);
  });
  report(9, "oracle inequality ratio", [&](Outcome& o) {
    ensure_run();
    oracle_ratio(run, o);
  });
  report(10, "plug-in density", [&](Outcome& o) {
    ensure_run();
    plugin_mode(run, o);
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
