#pragma once

#include <span>
#include <string>
#include <vector>

#include "bmlab/accumulator.hpp"
#include "bmlab/basis.hpp"
#include "bmlab/experiment.hpp"

namespace bmlab::stats {

struct KsResult {
    double statistic = 0.0;
    double p_value = 0.0;
};

// One-sample Kolmogorov-Smirnov against N(0,1) with the asymptotic p-value.
// Values must arrive standardized by their *predicted* mean and variance
// (exact_variance / limit_variance), not empirical ones.  Needs >= 100
// values.
KsResult ks_normal_test(std::span<const double> standardized_values);

struct Verdict {
    std::string name;
    double observed = 0.0;
    double predicted = 0.0;
    std::string rule;  // "absolute" | "k_se" | "relative"
    double tolerance = 0.0;
    double se = 0.0;
    bool pass = false;
};

Verdict verdict_abs(std::string name, double observed, double predicted, double tol);
Verdict verdict_se(std::string name, double observed, double predicted, double k,
                   double se);
Verdict verdict_rel(std::string name, double observed, double predicted, double tol);

// Entrywise comparison of the empirical covariance matrix of k replica
// series against a predicted k x k matrix, with k_se * jackknife-SE rules.
std::vector<Verdict> covariance_verdict(
    const std::vector<std::vector<double>>& samples,
    const std::vector<double>& predicted, double k_se,
    const std::vector<std::string>& labels);

// Per-replica output of one experiment run.
struct FunctionalSeries {
    std::vector<double> raw;                 // <Phi_N, f> at the N^{-d} scaling
    std::vector<std::vector<double>> s_q;    // S_{N,q}(f) per active q
};

struct SobolevSeries {
    std::vector<double> norm_sq;                       // per replica
    std::vector<double> tail_bound;                    // per replica
    std::vector<std::vector<double>> coeffs;           // per replica, flattened modes
};

struct RunResult {
    experiment::ExperimentConfig config;
    double variance_base = 1.0;
    int rank = 1;
    std::vector<int> active_q;
    double c_m_signed = 0.0;
    double c_m_abs = 0.0;
    std::vector<std::vector<FunctionalSeries>> series;   // [N][f]
    std::vector<SobolevSeries> sobolev;                  // [N] (alpha > 0 only)
    std::vector<std::vector<std::vector<double>>> exact_var;  // [N][f][qi]
    std::vector<std::vector<double>> limit_var;               // [f][qi]
    std::vector<std::vector<ReplicaAccumulator>> func_acc;    // centered functional
};

// Samples every replica, evaluates every requested ChaosStatistic and
// Sobolev norm.  Deterministic given the seed (thread-count independent);
// a replica failure aborts with the failing index in the message.
RunResult run_replicas(const experiment::ExperimentConfig& cfg);

// CLT verdict set: per-(N, f, q) Monte-Carlo-vs-exact variance anchors
// (4 SE), KS normality of the CLT-scaled functional, fourth-moment gap of
// the rank component, and the covariance matrix against <f_i, f_j>.
std::vector<Verdict> clt_verdicts(const RunResult& run);

struct TightnessRow {
    int N = 0;
    double mean = 0.0;
    double se = 0.0;
    double tail_bound = 0.0;
};

struct TightnessResult {
    std::vector<TightnessRow> rows;
    double slope = 0.0;
    double slope_se = 0.0;
    basis::KernelBound kernel_base, kernel_doubled;
    int kernel_kmax = 0;
    std::vector<Verdict> verdicts;
    RunResult run;  // the underlying replica run (Sobolev series included)
};

// E||Phi_N||^2_{H^-alpha} across the N-list with a trend verdict (least
// squares slope within 2 SE of the non-increasing direction) and the kernel
// stability check under k_max doubling.
TightnessResult tightness_survey(const experiment::ExperimentConfig& cfg);

struct GffOddRow {
    int N = 0;
    double empirical = 0.0;       // Cov(N^{d/2}<Phi_N,f>, N^{d/2}<Phi_N,g>)
    double predicted = 0.0;       // c1^2 N^{-d} sum f G_box g
    double ratio = 0.0;
    double remainder_var = 0.0;   // Var of the He_{>=3} remainder at N^{d/2} scale
    double remainder_rel = 0.0;   // remainder_var / Var(N^{d/2}<Phi_N,f>)
};

struct GffOddResult {
    double c1 = 0.0;
    double green_diagonal = 0.0;
    std::vector<GffOddRow> rows;
    std::vector<Verdict> verdicts;
};

// Odd powers of the GFF: the normalization-free Green quadratic-form ratio
// at the largest N and the relative-remainder decay across the N-list.
GffOddResult gff_odd_power_verdict(const experiment::ExperimentConfig& cfg);

}  // namespace bmlab::stats
