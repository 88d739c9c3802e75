//! Acceptance gate for the boosted density estimator. Each numbered criterion
//! prints exactly one PASS/FAIL line on stdout; the exit status is the number
//! of failures. Progress and timing go to stderr.
//!
//! Environment:
//!   BNPMLE_HEART_CSV   path to the South African heart-disease CSV; when set
//!                      and readable, criterion 9 runs the real-data benchmark,
//!                      otherwise it falls back to the shipped synthetic task.
//!   BNPMLE_ACCEPT_FULL "1" runs the mixture sweep of criterion 8 with 50
//!                      replicates instead of the reduced 10.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "core/banded.hpp"
#include "core/bayes.hpp"
#include "core/boosting.hpp"
#include "core/cart.hpp"
#include "core/dataset.hpp"
#include "core/distributions.hpp"
#include "core/kernel_ridge.hpp"
#include "core/kl.hpp"
#include "core/likelihood.hpp"
#include "core/model_io.hpp"
#include "core/rng.hpp"
#include "core/spline.hpp"

using namespace bnpmle;

namespace {

struct Criterion {
  std::string label;
  bool pass = false;
  std::string detail;
};

std::vector<Criterion> g_criteria;

void report(std::size_t index, bool pass, const std::string& detail) {
  g_criteria.at(index - 1).pass = pass;
  g_criteria.at(index - 1).detail = detail;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

//! Every trace recorded by any fit in this harness feeds the bound audit:
//! the exact objective must dominate one plus its surrogate at every iterate.
struct SandwichAudit {
  double min_margin = std::numeric_limits<double>::infinity();
  std::size_t entries = 0;
  std::size_t traces = 0;

  void absorb(const Ensemble& ens) {
    if (ens.trace.empty()) return;
    ++traces;
    for (const TraceEntry& t : ens.trace) {
      min_margin = std::min(min_margin, t.log_lik - (1.0 + t.surrogate));
      ++entries;
    }
  }
};

SandwichAudit g_sandwich;

std::shared_ptr<const std::vector<double>> share(std::vector<double> v) {
  return std::make_shared<const std::vector<double>>(std::move(v));
}

std::vector<double> mean_one(const std::vector<double>& w) {
  double sum = 0.0;
  for (double v : w) sum += v;
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    out[i] = w[i] * static_cast<double>(w.size()) / sum;
  }
  return out;
}

//! Small dataset with duplicated values so the frequencies are nontrivial.
Dataset lattice_dataset(std::mt19937_64& rng, std::size_t max_raw) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    const std::size_t n_raw = 3 + rng() % (max_raw - 2);
    RawSamples raw;
    for (std::size_t i = 0; i < n_raw; ++i) {
      raw.values.push_back(std::round(u(rng) * 12.0) / 3.0);
    }
    bool distinct = false;
    for (double v : raw.values) distinct = distinct || v != raw.values[0];
    if (!distinct) continue;
    return build_dataset(raw);
  }
}

// ---------------------------------------------------------------------------
// c1: the closed-form surrogate gradient against central finite differences.
void criterion1() {
  std::mt19937_64 rng(4111);
  std::uniform_real_distribution<double> fdist(-3.0, 3.0);
  const double h = 1e-5;
  double max_diff = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    const Dataset ds = lattice_dataset(rng, 20);
    const QuadratureWeights qw = trapezoid_weights(ds);
    std::vector<double> f(ds.size());
    for (double& v : f) v = fdist(rng);

    const std::vector<double> grad = surrogate_gradient(ds, qw, f);
    for (std::size_t i = 0; i < f.size(); ++i) {
      std::vector<double> fp = f, fm = f;
      fp[i] += h;
      fm[i] -= h;
      const double fd =
          (surrogate(ds, qw, fp) - surrogate(ds, qw, fm)) / (2.0 * h);
      max_diff = std::max(max_diff, std::fabs(grad[i] - fd));
    }
  }
  report(1, max_diff <= 1e-6,
         "max |analytic - central difference| " + fmt(max_diff) +
             " over 100 instances (tol 1e-6)");
}

// ---------------------------------------------------------------------------
// c2: at f_i = log(q_i / a_i) both objectives are stationary and the
// normalizing constant is one — the shared-maximum property.
void criterion2() {
  std::mt19937_64 rng(4127);
  const Distribution gen = parse_distribution("gmm(0.5)");
  double max_grad = 0.0;
  double max_zdev = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    Rng draw(900 + static_cast<std::uint64_t>(inst));
    const std::size_t n_raw = 50 + rng() % 351;
    std::vector<double> values = sample_n(gen, draw, n_raw);
    for (double& v : values) v = std::round(v * 10.0) / 10.0;  // force ties
    const Dataset ds = build_dataset(RawSamples{values});
    const QuadratureWeights qw = trapezoid_weights(ds);

    std::vector<double> fstar(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
      fstar[i] = std::log(ds.freq[i] / qw.a[i]);
    }
    const double z = normalizer(qw, fstar);
    max_zdev = std::max(max_zdev, std::fabs(z - 1.0));
    const std::vector<double> sg = surrogate_gradient(ds, qw, fstar);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      max_grad = std::max(max_grad, std::fabs(sg[i]));
      const double exact = ds.freq[i] - qw.a[i] * std::exp(fstar[i]) / z;
      max_grad = std::max(max_grad, std::fabs(exact));
    }
  }
  report(2, max_grad <= 1e-10 && max_zdev <= 1e-12,
         "max |gradient| " + fmt(max_grad) + " (tol 1e-10), max |Z-1| " +
             fmt(max_zdev) + " (tol 1e-12) over 20 datasets");
}

// ---------------------------------------------------------------------------
// Dense references for c5/c6, mirroring the unit-test constructions.

Eigen::MatrixXd dense_q(const std::vector<double>& x) {
  const auto n = static_cast<Eigen::Index>(x.size());
  const Eigen::Index m = n - 2;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double hj = x[static_cast<std::size_t>(j + 1)] -
                      x[static_cast<std::size_t>(j)];
    const double hj1 = x[static_cast<std::size_t>(j + 2)] -
                       x[static_cast<std::size_t>(j + 1)];
    q(j, j) = 1.0 / hj;
    q(j + 1, j) = -1.0 / hj - 1.0 / hj1;
    q(j + 2, j) = 1.0 / hj1;
  }
  return q;
}

Eigen::MatrixXd dense_r(const std::vector<double>& x) {
  const auto n = static_cast<Eigen::Index>(x.size());
  const Eigen::Index m = n - 2;
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double hj = x[static_cast<std::size_t>(j + 1)] -
                      x[static_cast<std::size_t>(j)];
    const double hj1 = x[static_cast<std::size_t>(j + 2)] -
                       x[static_cast<std::size_t>(j + 1)];
    r(j, j) = (hj + hj1) / 3.0;
    if (j + 1 < m) r(j, j + 1) = r(j + 1, j) = hj1 / 6.0;
  }
  return r;
}

Eigen::MatrixXd dense_smoother(const std::vector<double>& x,
                               const std::vector<double>& wn, double lambda) {
  const auto n = static_cast<Eigen::Index>(x.size());
  const Eigen::MatrixXd q = dense_q(x);
  const Eigen::MatrixXd r = dense_r(x);
  Eigen::VectorXd winv(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    winv(i) = 1.0 / wn[static_cast<std::size_t>(i)];
  }
  const Eigen::MatrixXd c = q.transpose() * winv.asDiagonal() * q;
  const Eigen::MatrixXd b = r + lambda * c;
  return Eigen::MatrixXd::Identity(n, n) -
         lambda * winv.asDiagonal() * q * b.ldlt().solve(q.transpose());
}

void dense_kernel_ridge(const std::vector<double>& centers,
                        const std::vector<double>& w,
                        const std::vector<double>& g, double bandwidth,
                        double ridge_lambda, double& intercept,
                        Eigen::VectorXd& coef) {
  const auto n = static_cast<Eigen::Index>(centers.size());
  double wsum = 0.0;
  for (double v : w) wsum += v;
  Eigen::VectorXd wn(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    wn(i) = w[static_cast<std::size_t>(i)] * static_cast<double>(n) / wsum;
  }
  const Eigen::MatrixXd k =
      gaussian_kernel_matrix(centers, centers, bandwidth);
  Eigen::MatrixXd x(n, n + 1);
  x.col(0).setOnes();
  x.rightCols(n) = k;
  Eigen::MatrixXd a = x.transpose() * wn.asDiagonal() * x;
  for (Eigen::Index j = 1; j <= n; ++j) a(j, j) += ridge_lambda;
  const Eigen::VectorXd gv = Eigen::Map<const Eigen::VectorXd>(g.data(), n);
  const Eigen::VectorXd beta =
      a.ldlt().solve(x.transpose() * wn.asDiagonal() * gv);
  intercept = beta(0);
  coef = beta.tail(n);
}

struct WlsInstance {
  std::vector<double> x;
  std::vector<double> w;
  std::vector<double> g;
};

WlsInstance random_wls(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> gap(0.05, 1.0);
  std::uniform_real_distribution<double> weight(0.2, 3.0);
  std::uniform_real_distribution<double> resp(-2.0, 2.0);
  WlsInstance inst;
  inst.x.push_back(0.0);
  for (std::size_t i = 1; i < n; ++i) inst.x.push_back(inst.x.back() + gap(rng));
  for (std::size_t i = 0; i < n; ++i) {
    inst.w.push_back(weight(rng));
    inst.g.push_back(resp(rng));
  }
  return inst;
}

//! Exhaustive weighted-SSE root split with two-pass means: independent of the
//! tree fitter's prefix-sum bookkeeping.
struct RootSplit {
  bool split = false;
  double threshold = 0.0;
};

double weighted_sse(const std::vector<double>& w, const std::vector<double>& g,
                    std::size_t lo, std::size_t hi) {
  double wsum = 0.0, mean = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    wsum += w[i];
    mean += w[i] * g[i];
  }
  mean /= wsum;
  double sse = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    sse += w[i] * (g[i] - mean) * (g[i] - mean);
  }
  return sse;
}

RootSplit exhaustive_root(const WlsInstance& inst, int minsplit) {
  const std::size_t n = inst.x.size();
  RootSplit out;
  if (n < static_cast<std::size_t>(minsplit)) return out;
  const double root_sse = weighted_sse(inst.w, inst.g, 0, n);
  double best = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double reduction = root_sse -
                             weighted_sse(inst.w, inst.g, 0, k) -
                             weighted_sse(inst.w, inst.g, k, n);
    if (reduction > best && reduction > 1e-12 * root_sse) {
      best = reduction;
      out.split = true;
      out.threshold = 0.5 * (inst.x[k - 1] + inst.x[k]);
    }
  }
  return out;
}

// c5: each weak-learner fit against an independent dense (or exhaustive)
// reference implementation.
void criterion5() {
  std::mt19937_64 rng(4139);
  std::uniform_real_distribution<double> width(0.3, 2.0);
  std::uniform_real_distribution<double> penalty(0.01, 30.0);
  double kernel_dev = 0.0;
  double spline_dev = 0.0;
  int cart_mismatch = 0;

  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t n = 3 + rng() % 18;  // kernel instances stay small
    const WlsInstance wls = random_wls(rng, n);
    const double h = width(rng);
    const double lambda = penalty(rng);
    const KernelLearner fit =
        KernelRidgeSolver(share(wls.x), h, lambda).fit(wls.w, wls.g);
    double intercept = 0.0;
    Eigen::VectorXd coef;
    dense_kernel_ridge(wls.x, wls.w, wls.g, h, lambda, intercept, coef);
    kernel_dev = std::max(kernel_dev, std::fabs(fit.intercept - intercept));
    for (std::size_t i = 0; i < n; ++i) {
      kernel_dev = std::max(
          kernel_dev,
          std::fabs(fit.coef[i] - coef(static_cast<Eigen::Index>(i))));
    }
  }

  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t n = 5 + rng() % 36;
    const WlsInstance wls = random_wls(rng, n);
    std::uniform_real_distribution<double> dfpick(
        2.2, std::min(8.0, static_cast<double>(n) - 1.0));
    const double df = dfpick(rng);
    const SplineFit fit = fit_spline(share(wls.x), wls.w, wls.g, df);
    const std::vector<double> wn = mean_one(wls.w);
    const double lambda = std::pow(10.0, fit.log10_lambda);
    const Eigen::VectorXd ref =
        dense_smoother(wls.x, wn, lambda) *
        Eigen::Map<const Eigen::VectorXd>(wls.g.data(),
                                          static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      spline_dev = std::max(
          spline_dev, std::fabs(fit.learner.values[i] -
                                ref(static_cast<Eigen::Index>(i))));
    }
  }

  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t n = 2 + rng() % 59;
    const WlsInstance wls = random_wls(rng, n);
    const int minsplit = (inst % 5 == 4) ? static_cast<int>(n) + 3
                                         : 2 + static_cast<int>(rng() % 9);
    const CartLearner tree = fit_cart(wls.x, wls.w, wls.g, minsplit);
    const RootSplit oracle = exhaustive_root(wls, minsplit);
    const bool tree_split = tree.nodes.at(0).left != -1;
    if (tree_split != oracle.split ||
        (tree_split && tree.nodes[0].threshold != oracle.threshold)) {
      ++cart_mismatch;
    }
  }

  report(5,
         kernel_dev <= 1e-8 && spline_dev <= 1e-6 && cart_mismatch == 0,
         "kernel max dev " + fmt(kernel_dev) + " (tol 1e-8), spline max dev " +
             fmt(spline_dev) + " (tol 1e-6), tree root mismatches " +
             std::to_string(cart_mismatch) + "/50");
}

// ---------------------------------------------------------------------------
// c6: the penalty search really lands on three effective degrees of freedom,
// confirmed by summing the diagonal of an explicitly formed smoother matrix.
void criterion6() {
  std::mt19937_64 rng(4153);
  double max_df_dev = 0.0;
  double max_trace_gap = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    const std::size_t n = 10 + rng() % 191;
    const WlsInstance wls = random_wls(rng, n);
    const SplineFit fit = fit_spline(share(wls.x), wls.w, wls.g, 3.0);
    max_df_dev = std::max(max_df_dev, std::fabs(fit.df_achieved - 3.0));

    const std::vector<double> wn = mean_one(wls.w);
    const SplineSystem sys = build_spline_system(wls.x, wn);
    const double lambda = std::pow(10.0, fit.log10_lambda);

    // Column-by-column: apply the smoother to every unit vector and sum the
    // diagonal. Exercises the linear solver, not the spectral trace formula.
    double trace_cols = 0.0;
    std::vector<double> unit(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      unit[j] = 1.0;
      trace_cols += solve_penalized(sys, wn, unit, lambda)[j];
      unit[j] = 0.0;
    }
    max_trace_gap =
        std::max(max_trace_gap, std::fabs(trace_cols - fit.df_achieved));

    if (n <= 30) {
      const double dense = dense_smoother(wls.x, wn, lambda).trace();
      max_trace_gap =
          std::max(max_trace_gap, std::fabs(dense - fit.df_achieved));
    }
  }
  report(6, max_df_dev <= 1e-3 && max_trace_gap <= 1e-6,
         "max |df - 3| " + fmt(max_df_dev) +
             " (tol 1e-3), max |explicit trace - reported df| " +
             fmt(max_trace_gap) + " (tol 1e-6) over 20 instances");
}

// ---------------------------------------------------------------------------
// Shared fit helper for the simulation criteria.

const std::vector<std::string> kBenchmarkDists{
    "uniform", "exponential", "laplace-mixture", "student-t"};

LearnerSpec spline_spec() {
  LearnerSpec s;
  s.kind = LearnerKind::smooth_spline;
  s.df = 3.0;
  return s;
}

LearnerSpec kernel_spec() {
  LearnerSpec s;
  s.kind = LearnerKind::gaussian_kernel;
  s.ridge_lambda = 1e4;
  s.bandwidth = 0.0;  // resolved by the automatic rule at fit time
  return s;
}

Ensemble traced_fit(const Distribution& dist, std::uint64_t seed,
                    std::size_t n, const LearnerSpec& spec, int iterations) {
  Rng rng(seed);
  RawSamples raw{sample_n(dist, rng, n)};
  FitConfig cfg;
  cfg.learner = spec;
  cfg.iterations = iterations;
  cfg.record_trace = true;
  Ensemble ens = fit_boosted(raw, cfg);
  g_sandwich.absorb(ens);
  return ens;
}

// c4: the multiplicative weight recursion carried across 200 iterations
// agrees with recomputing every weight from the summed potential.
void criterion4() {
  double max_rel = 0.0;
  for (const std::string& name : kBenchmarkDists) {
    const Distribution dist = parse_distribution(name);
    for (const LearnerSpec& spec : {spline_spec(), kernel_spec()}) {
      const Ensemble ens = traced_fit(dist, 2026, 500, spec, 200);
      Ensemble refreshed = ens;
      refresh_ensemble_caches(refreshed);
      for (std::size_t i = 0; i < ens.weights.size(); ++i) {
        const double rel = std::fabs(ens.weights[i] - refreshed.weights[i]) /
                           refreshed.weights[i];
        max_rel = std::max(max_rel, rel);
      }
      std::fprintf(stderr, "[accept] c4 %s/%s max rel %.3g\n", name.c_str(),
                   spec.kind == LearnerKind::smooth_spline ? "spline"
                                                          : "kernel",
                   max_rel);
    }
  }
  report(4, max_rel <= 1e-10,
         "max relative weight deviation " + fmt(max_rel) +
             " over 8 fits of 200 iterations at N=500 (tol 1e-10)");
}

// c7: on the four benchmark distributions, 200 rounds of boosting beat a
// single round in KL divergence for at least 8 of 10 seeds per learner.
void criterion7() {
  const std::vector<std::size_t> prefixes{1, 200};
  int worst_wins = 10;
  std::string worst_combo = "-";
  bool pass = true;
  for (const std::string& name : kBenchmarkDists) {
    const Distribution dist = parse_distribution(name);
    for (const LearnerSpec& spec : {spline_spec(), kernel_spec()}) {
      int wins = 0;
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Ensemble ens = traced_fit(dist, seed, 500, spec, 200);
        const std::vector<KlResult> kl =
            kl_at_prefixes(dist, ens, prefixes, 2001);
        if (kl[1].kl < kl[0].kl) ++wins;
      }
      const std::string combo =
          name + "/" +
          (spec.kind == LearnerKind::smooth_spline ? "spline" : "kernel");
      std::fprintf(stderr, "[accept] c7 %s: %d/10 improved\n", combo.c_str(),
                   wins);
      if (wins < worst_wins) {
        worst_wins = wins;
        worst_combo = combo;
      }
      pass = pass && wins >= 8;
    }
  }
  report(7, pass,
         "KL(M=200) < KL(M=1) on >= 8/10 seeds for all 8 combinations; "
         "worst " + worst_combo + " with " + std::to_string(worst_wins) +
             "/10");
}

// c8: the two-component normal mixture sweep. More boosting means lower mean
// KL for every mixing weight, and the spread of the mean across mixing
// weights tightens.
void criterion8() {
  const bool full = []() {
    const char* v = std::getenv("BNPMLE_ACCEPT_FULL");
    return v != nullptr && std::string(v) == "1";
  }();
  const std::size_t replicates = full ? 50 : 10;
  const std::vector<double> betas{0.0, 0.25, 0.5, 0.75, 1.0};

  std::vector<double> mean_m1, mean_m1000;
  bool per_beta = true;
  for (double beta : betas) {
    char text[64];
    std::snprintf(text, sizeof(text), "gmm(%.17g)", beta);
    SweepConfig cfg;
    cfg.truth = parse_distribution(text);
    cfg.sample_size = 500;
    cfg.prefixes = {1, 1000};
    cfg.replicates = replicates;
    cfg.base_seed = 11;
    cfg.learner = spline_spec();
    cfg.grid_points = 2001;
    const SweepResult res = kl_sweep(cfg);
    mean_m1.push_back(res.aggregate[0].mean_kl);
    mean_m1000.push_back(res.aggregate[1].mean_kl);
    per_beta = per_beta && res.aggregate[1].mean_kl < res.aggregate[0].mean_kl;
    std::fprintf(stderr,
                 "[accept] c8 beta=%.2f mean KL %.4g (M=1) -> %.4g (M=1000)\n",
                 beta, res.aggregate[0].mean_kl, res.aggregate[1].mean_kl);
  }

  const auto sd_of = [](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
  };
  const double sd1 = sd_of(mean_m1);
  const double sd1000 = sd_of(mean_m1000);
  report(8, per_beta && sd1000 < sd1,
         "mean KL drops from M=1 to M=1000 for every mixing weight " +
             std::string(per_beta ? "(yes)" : "(NO)") +
             "; across-weight sd " + fmt(sd1) + " -> " + fmt(sd1000) + " (" +
             std::to_string(replicates) + " replicates)");
}

// c9: classification benchmark. With the real heart-disease CSV, both
// learners must land near the published reference error rates; without it,
// the shipped synthetic two-class task must track its analytic Bayes error.
void criterion9() {
  const char* heart = std::getenv("BNPMLE_HEART_CSV");
  const bool have_heart =
      heart != nullptr && std::ifstream(heart).good();

  if (have_heart) {
    const LabeledDataset data = read_labeled_csv(heart, "age", "chd");
    bool pass = true;
    std::string detail = "heart-disease data (" + std::to_string(data.size()) +
                         " rows): ";
    const double targets[2] = {0.3258, 0.3238};
    const LearnerSpec specs[2] = {spline_spec(), kernel_spec()};
    const char* names[2] = {"spline", "kernel"};
    for (int i = 0; i < 2; ++i) {
      FitConfig cfg;
      cfg.learner = specs[i];
      cfg.iterations = 2000;
      const SplitExperimentResult res =
          split_experiment(data, cfg, 100, 0.7, 1);
      const double dev = std::fabs(res.mean_error - targets[i]);
      pass = pass && dev <= 0.02;
      detail += std::string(names[i]) + " mean " + fmt(res.mean_error) +
                " vs " + fmt(targets[i]) + " (dev " + fmt(dev) +
                ", tol 0.02) ";
      std::fprintf(stderr, "[accept] c9 heart %s mean error %.4f\n", names[i],
                   res.mean_error);
    }
    report(9, pass, detail);
    return;
  }

  // Fallback: two well-separated normal classes; the optimal rule errs with
  // probability Phi(-1.5) = 0.066807201268858085.
  const std::string path =
      std::string(BNPMLE_DATA_DIR) + "/synthetic_twoclass.csv";
  const LabeledDataset data = read_labeled_csv(path, "value", "label");
  FitConfig cfg;
  cfg.learner = spline_spec();
  cfg.iterations = 2000;
  const SplitExperimentResult res = split_experiment(data, cfg, 25, 0.7, 1);
  const double bayes = 0.066807201268858085;
  const double dev = std::fabs(res.mean_error - bayes);
  std::fprintf(stderr, "[accept] c9 synthetic mean error %.4f (bayes %.4f)\n",
               res.mean_error, bayes);
  report(9, dev <= 0.015,
         "synthetic fallback (heart CSV not provided): mean error " +
             fmt(res.mean_error) + " vs analytic optimum " + fmt(bayes) +
             " (dev " + fmt(dev) + ", tol 0.015, " +
             std::to_string(res.used) + "/25 splits)");
}

// c10: pushing the iteration count an order of magnitude past its useful
// range must not degrade the fit: KL at M=2000 stays within 1.2x of M=200.
void criterion10() {
  const Distribution dist = parse_distribution("gmm(0.5)");
  const std::vector<std::size_t> prefixes{200, 2000};
  double worst_ratio = 0.0;
  bool pass = true;
  for (const LearnerSpec& spec : {spline_spec(), kernel_spec()}) {
    const char* name =
        spec.kind == LearnerKind::smooth_spline ? "spline" : "kernel";
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Ensemble ens = traced_fit(dist, seed, 500, spec, 2000);
      const std::vector<KlResult> kl =
          kl_at_prefixes(dist, ens, prefixes, 2001);
      const double ratio = kl[1].kl / kl[0].kl;
      worst_ratio = std::max(worst_ratio, ratio);
      pass = pass && kl[1].kl <= 1.2 * kl[0].kl;
      std::fprintf(stderr,
                   "[accept] c10 %s seed %llu: KL %.4g -> %.4g (ratio %.3f)\n",
                   name, static_cast<unsigned long long>(seed), kl[0].kl,
                   kl[1].kl, ratio);
    }
  }
  report(10, pass,
         "KL(M=2000) <= 1.2 x KL(M=200) for both learners over 10 seeds; "
         "worst ratio " + fmt(worst_ratio));
}

// ---------------------------------------------------------------------------
// c11: determinism and persistence through the command-line tool: identical
// invocations give byte-identical model files, a manifest replay reproduces
// them, and save -> load round-trips the density.

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<unreadable:" + path + ">";
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(BNPMLE_CLI_PATH) + " " + args +
                          " >/dev/null 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void criterion11() {
  namespace fs = std::filesystem;
  const fs::path dir = "/tmp/bnpmle_accept";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string sample = (dir / "sample.csv").string();
  const std::string m1 = (dir / "m1.json").string();
  const std::string m2 = (dir / "m2.json").string();
  const std::string m3 = (dir / "m3.json").string();

  bool ok = run_cli("simulate --dist 'gmm(0.5)' --n 200 --seed 33 --output " +
                    sample) == 0;
  const std::string fit_args =
      "fit --input " + sample + " --learner spline --iterations 8 --output ";
  ok = ok && run_cli(fit_args + m1) == 0;
  ok = ok && run_cli(fit_args + m2) == 0;
  const bool identical_runs = ok && slurp(m1) == slurp(m2);

  const std::string replay_dir = (dir / "replay").string();
  ok = ok && run_cli("replay --manifest " + m1 + ".manifest.json --into " +
                     replay_dir) == 0;
  const bool replay_identical =
      ok && slurp(replay_dir + "/m1.json") == slurp(m1);

  double max_density_dev = std::numeric_limits<double>::infinity();
  bool resave_identical = false;
  if (ok) {
    const Ensemble a = load_model(m1);
    save_model(a, m3);
    resave_identical = slurp(m3) == slurp(m1);
    const Ensemble b = load_model(m3);
    max_density_dev = 0.0;
    const std::vector<double> grid =
        uniform_grid(a.support_lo(), a.support_hi(), 100);
    for (double x : grid) {
      max_density_dev =
          std::max(max_density_dev, std::fabs(a.density(x) - b.density(x)));
    }
  }

  report(11,
         ok && identical_runs && replay_identical && resave_identical &&
             max_density_dev <= 1e-12,
         std::string("identical runs byte-identical: ") +
             (identical_runs ? "yes" : "NO") + ", manifest replay identical: " +
             (replay_identical ? "yes" : "NO") + ", resave identical: " +
             (resave_identical ? "yes" : "NO") +
             ", save/load max density dev " + fmt(max_density_dev) +
             " (tol 1e-12)");
}

} // namespace

int main() {
  g_criteria = {
      {"c1 surrogate gradient matches central finite differences", false, ""},
      {"c2 stationary point shared by exact and surrogate objectives", false,
       ""},
      {"c3 exact objective dominates 1 + surrogate along every trace", false,
       ""},
      {"c4 recursive weight update equals from-scratch recomputation", false,
       ""},
      {"c5 weak-learner fits match dense/exhaustive references", false, ""},
      {"c6 spline penalty search achieves three degrees of freedom", false,
       ""},
      {"c7 boosting improves KL on the four benchmark distributions", false,
       ""},
      {"c8 mixture sweep: more iterations help and tighten the envelope",
       false, ""},
      {"c9 two-class benchmark error rate", false, ""},
      {"c10 KL does not degrade when boosting runs 10x longer", false, ""},
      {"c11 determinism and persistence through the command line", false, ""},
  };

  const struct {
    std::size_t index;
    void (*fn)();
  } order[] = {
      {1, criterion1}, {2, criterion2},  {5, criterion5},
      {6, criterion6}, {4, criterion4},  {7, criterion7},
      {10, criterion10}, {8, criterion8}, {9, criterion9},
      {11, criterion11},
  };

  for (const auto& step : order) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      step.fn();
    } catch (const std::exception& e) {
      report(step.index, false, std::string("exception: ") + e.what());
    }
    std::fprintf(stderr, "[accept] c%zu done in %.1fs\n", step.index,
                 seconds_since(t0));
  }

  // The bound audit draws on every trace recorded above.
  report(3, g_sandwich.entries > 0 && g_sandwich.min_margin >= -1e-10,
         "min margin " + fmt(g_sandwich.min_margin) + " over " +
             std::to_string(g_sandwich.entries) + " iterates from " +
             std::to_string(g_sandwich.traces) + " traces (tol -1e-10)");

  int failures = 0;
  for (const Criterion& c : g_criteria) {
    std::printf("%s %s: %s\n", c.pass ? "PASS" : "FAIL", c.label.c_str(),
                c.detail.c_str());
    if (!c.pass) ++failures;
  }
  std::fflush(stdout);
  return failures;
}
