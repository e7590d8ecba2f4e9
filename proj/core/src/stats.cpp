#include "bmlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "bmlab/errors.hpp"
#include "bmlab/green.hpp"
#include "bmlab/lattice.hpp"
#include "bmlab/parallel.hpp"
#include "bmlab/sampler.hpp"

namespace bmlab::stats {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// P(K > t) for the Kolmogorov distribution; two complementary expansions.
double kolmogorov_q(double t) {
    if (t <= 0.0) return 1.0;
    if (t < 1.18) {
        // 1 - sqrt(2 pi)/t sum_{k odd} exp(-k^2 pi^2 / (8 t^2))
        const double a = M_PI * M_PI / (8.0 * t * t);
        double s = 0.0;
        for (int k = 1; k <= 19; k += 2) s += std::exp(-a * k * k);
        return std::clamp(1.0 - std::sqrt(2.0 * M_PI) / t * s, 0.0, 1.0);
    }
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * t * t);
        s += (k % 2 == 1 ? term : -term);
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

double sample_variance(std::span<const double> v) {
    ReplicaAccumulator acc;
    for (double x : v) acc.push(x);
    return acc.variance();
}

}  // namespace

KsResult ks_normal_test(std::span<const double> standardized_values) {
    const std::size_t n = standardized_values.size();
    if (n < 100)
        throw validation_error("ks_normal_test: need at least 100 values");
    std::vector<double> sorted(standardized_values.begin(), standardized_values.end());
    std::sort(sorted.begin(), sorted.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double cdf = normal_cdf(sorted[i]);
        const double hi = static_cast<double>(i + 1) / static_cast<double>(n) - cdf;
        const double lo = cdf - static_cast<double>(i) / static_cast<double>(n);
        d = std::max({d, hi, lo});
    }
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_q(std::sqrt(static_cast<double>(n)) * d);
    return r;
}

Verdict verdict_abs(std::string name, double observed, double predicted, double tol) {
    Verdict v;
    v.name = std::move(name);
    v.observed = observed;
    v.predicted = predicted;
    v.rule = "absolute";
    v.tolerance = tol;
    v.pass = std::abs(observed - predicted) <= tol;
    return v;
}

Verdict verdict_se(std::string name, double observed, double predicted, double k,
                   double se) {
    Verdict v;
    v.name = std::move(name);
    v.observed = observed;
    v.predicted = predicted;
    v.rule = "k_se";
    v.tolerance = k;
    v.se = se;
    v.pass = std::abs(observed - predicted) <= k * se;
    return v;
}

Verdict verdict_rel(std::string name, double observed, double predicted, double tol) {
    Verdict v;
    v.name = std::move(name);
    v.observed = observed;
    v.predicted = predicted;
    v.rule = "relative";
    v.tolerance = tol;
    v.pass = std::abs(observed - predicted) <= tol * std::abs(predicted);
    return v;
}

std::vector<Verdict> covariance_verdict(const std::vector<std::vector<double>>& samples,
                                        const std::vector<double>& predicted,
                                        double k_se,
                                        const std::vector<std::string>& labels) {
    const std::size_t k = samples.size();
    if (k < 2) throw validation_error("covariance_verdict: need k >= 2 series");
    if (predicted.size() != k * k)
        throw validation_error("covariance_verdict: predicted matrix size mismatch");
    const std::size_t n = samples[0].size();
    for (const auto& s : samples)
        if (s.size() != n)
            throw validation_error("covariance_verdict: ragged sample series");
    if (n < 3) throw validation_error("covariance_verdict: need more replicas");

    std::vector<Verdict> out;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            // jackknife over delete-one covariances from running sums
            double sx = 0, sy = 0, sxy = 0;
            for (std::size_t r = 0; r < n; ++r) {
                sx += samples[i][r];
                sy += samples[j][r];
                sxy += samples[i][r] * samples[j][r];
            }
            const double nn = static_cast<double>(n);
            const double cov_full = (sxy - sx * sy / nn) / (nn - 1.0);
            double jk_sum = 0, jk_sum_sq = 0;
            for (std::size_t r = 0; r < n; ++r) {
                const double x = samples[i][r], y = samples[j][r];
                const double c =
                    ((sxy - x * y) - (sx - x) * (sy - y) / (nn - 1.0)) / (nn - 2.0);
                jk_sum += c;
                jk_sum_sq += c * c;
            }
            const double jk_mean = jk_sum / nn;
            const double jk_var = std::max(0.0, jk_sum_sq / nn - jk_mean * jk_mean);
            const double se = std::sqrt((nn - 1.0) * jk_var);
            std::string name = "cov[" + labels.at(i) + "," + labels.at(j) + "]";
            out.push_back(verdict_se(std::move(name), cov_full,
                                     predicted[i * k + j], k_se, se));
        }
    }
    return out;
}

RunResult run_replicas(const experiment::ExperimentConfig& cfg) {
    cfg.validate(/*require_replicas=*/false);
    RunResult run;
    run.config = cfg;
    const int d = cfg.dimension;
    const auto model = cfg.build_effective_model();
    const auto expansion = cfg.build_expansion();
    run.variance_base = expansion.variance_base;
    run.rank = hermite::hermite_rank(expansion);
    const double thresh = expansion.zero_threshold();
    for (int q = run.rank; q <= expansion.q_max(); ++q)
        if (std::abs(expansion.coeff(q)) > thresh) run.active_q.push_back(q);

    {
        const auto cm = hermite::limit_constant(expansion, model, cfg.lattice_radius);
        run.c_m_signed = cm.signed_value;
        run.c_m_abs = cm.abs_value;
    }

    const std::size_t n_f = cfg.test_functions.size();
    const std::size_t n_N = cfg.N_list.size();
    const long R = cfg.replicas;

    std::vector<chaos::TestFunction> fs;
    for (std::size_t i = 0; i < n_f; ++i) fs.push_back(cfg.build_test_function(i));

    // exact and limiting variances per (N, f, q)
    run.exact_var.assign(n_N, std::vector<std::vector<double>>(
                                  n_f, std::vector<double>(run.active_q.size(), 0.0)));
    run.limit_var.assign(n_f, std::vector<double>(run.active_q.size(), 0.0));
    for (std::size_t fi = 0; fi < n_f; ++fi) {
        for (std::size_t qi = 0; qi < run.active_q.size(); ++qi) {
            const int q = run.active_q[qi];
            run.limit_var[fi][qi] = chaos::limit_variance(
                q, expansion.coeff(q), model, fs[fi], d, cfg.lattice_radius);
            for (std::size_t ni = 0; ni < n_N; ++ni)
                run.exact_var[ni][fi][qi] = chaos::exact_variance(
                    q, expansion.coeff(q), model, fs[fi], cfg.N_list[ni], d);
        }
    }

    // group the N-list by torus size so one field serves every window it fits
    const bool gff = cfg.field.kind == "gff_box";
    std::vector<int> M_of_N(n_N);
    std::map<int, std::vector<std::size_t>> by_M;
    for (std::size_t ni = 0; ni < n_N; ++ni) {
        const int M = gff ? cfg.field.M : cfg.torus_size_for(cfg.N_list[ni]);
        M_of_N[ni] = M;
        by_M[M].push_back(ni);
    }

    // f value tables per (N, f)
    std::vector<std::vector<std::vector<double>>> f_tables(n_N);
    for (std::size_t ni = 0; ni < n_N; ++ni) {
        f_tables[ni].resize(n_f);
        for (std::size_t fi = 0; fi < n_f; ++fi)
            f_tables[ni][fi] = fs[fi].tabulate(d, cfg.N_list[ni]);
    }

    run.series.assign(n_N, std::vector<FunctionalSeries>(n_f));
    for (std::size_t ni = 0; ni < n_N; ++ni)
        for (std::size_t fi = 0; fi < n_f; ++fi) {
            run.series[ni][fi].raw.assign(static_cast<std::size_t>(R), 0.0);
            run.series[ni][fi].s_q.assign(run.active_q.size(),
                                          std::vector<double>(static_cast<std::size_t>(R), 0.0));
        }
    const bool want_sobolev = cfg.alpha > 0.0;
    if (want_sobolev) {
        run.sobolev.assign(n_N, SobolevSeries{});
        for (std::size_t ni = 0; ni < n_N; ++ni) {
            run.sobolev[ni].norm_sq.assign(static_cast<std::size_t>(R), 0.0);
            run.sobolev[ni].tail_bound.assign(static_cast<std::size_t>(R), 0.0);
            run.sobolev[ni].coeffs.assign(static_cast<std::size_t>(R), {});
        }
    }

    // warm the sampler caches before the parallel region
    for (const auto& [M, nis] : by_M) {
        (void)nis;
        if (gff)
            (void)sampler::sample_gff(d, M, cfg.seed, 0);
        else
            (void)sampler::sample_stationary(model, M, cfg.seed, 0);
    }

    const auto base_model = cfg.build_model();
    par::parallel_for(static_cast<std::size_t>(R), [&](std::size_t r) {
        try {
            for (const auto& [M, nis] : by_M) {
                sampler::FieldSample field =
                    gff ? sampler::sample_gff(d, M, cfg.seed, r)
                        : sampler::sample_stationary(base_model, M, cfg.seed, r);
                if (cfg.field.gradient_axis >= 0)
                    field = sampler::gradient_field(field, cfg.field.gradient_axis);
                for (std::size_t ni : nis) {
                    const int N = cfg.N_list[ni];
                    sampler::Window w;
                    w.N = N;
                    const auto window = sampler::extract_window(field, w);
                    for (std::size_t fi = 0; fi < n_f; ++fi) {
                        const auto sums =
                            chaos::window_sums(window, expansion, f_tables[ni][fi]);
                        run.series[ni][fi].raw[r] =
                            sums.centered_sum / std::pow(static_cast<double>(N), d);
                        for (std::size_t qi = 0; qi < run.active_q.size(); ++qi) {
                            const int q = run.active_q[qi];
                            run.series[ni][fi].s_q[qi][r] =
                                expansion.coeff(q) *
                                sums.t_q[static_cast<std::size_t>(q)] /
                                std::pow(static_cast<double>(N), 0.5 * d);
                        }
                    }
                    if (want_sobolev) {
                        const auto coeffs = basis::project_all(
                            window, expansion, N, d, cfg.alpha, cfg.sobolev_kmax);
                        double sup = 0.0;
                        for (double x : window)
                            sup = std::max(sup, std::abs(expansion.centered_eval(x)));
                        const auto norm = basis::sobolev_norm_sq(
                            coeffs, basis::project_bound(sup, N, d));
                        run.sobolev[ni].norm_sq[r] = norm.value;
                        run.sobolev[ni].tail_bound[r] = norm.tail_bound;
                        run.sobolev[ni].coeffs[r] = coeffs.coeffs;
                    }
                }
            }
        } catch (const std::exception& e) {
            throw numerical_error("run_replicas: replica " + std::to_string(r) +
                                  " failed: " + e.what());
        }
    });

    // merged accumulators of the centered functional, fixed order
    run.func_acc.assign(n_N, std::vector<ReplicaAccumulator>(n_f));
    for (std::size_t ni = 0; ni < n_N; ++ni) {
        const double nd2 = std::pow(static_cast<double>(cfg.N_list[ni]), 0.5 * d);
        for (std::size_t fi = 0; fi < n_f; ++fi)
            for (long r = 0; r < R; ++r)
                run.func_acc[ni][fi].push(
                    run.series[ni][fi].raw[static_cast<std::size_t>(r)] * nd2);
    }
    return run;
}

std::vector<Verdict> clt_verdicts(const RunResult& run) {
    std::vector<Verdict> out;
    const auto& cfg = run.config;
    const int d = cfg.dimension;
    const long R = cfg.replicas;
    const std::size_t n_f = cfg.test_functions.size();

    std::vector<chaos::TestFunction> fs;
    for (std::size_t fi = 0; fi < n_f; ++fi) fs.push_back(cfg.build_test_function(fi));
    std::vector<std::string> labels;
    for (const auto& f : fs) labels.push_back(f.label());

    for (std::size_t ni = 0; ni < cfg.N_list.size(); ++ni) {
        const int N = cfg.N_list[ni];
        const double nd2 = std::pow(static_cast<double>(N), 0.5 * d);
        char tag[64];
        for (std::size_t fi = 0; fi < n_f; ++fi) {
            // Monte Carlo vs exact variance, per chaos order (4 SE anchor)
            double total_exact = 0.0;
            for (std::size_t qi = 0; qi < run.active_q.size(); ++qi) {
                const double exact = run.exact_var[ni][fi][qi];
                total_exact += exact;
                const double emp = sample_variance(run.series[ni][fi].s_q[qi]);
                const double se = exact * std::sqrt(2.0 / (static_cast<double>(R) - 1.0));
                std::snprintf(tag, sizeof tag, "var[N=%d,f=%s,q=%d]", N,
                              labels[fi].c_str(), run.active_q[qi]);
                out.push_back(verdict_se(tag, emp, exact, 4.0, se));
            }
            if (R >= 100) {
                // KS against N(0,1), standardized by the exact variance
                std::vector<double> y(static_cast<std::size_t>(R));
                const double sd = std::sqrt(total_exact);
                for (long r = 0; r < R; ++r)
                    y[static_cast<std::size_t>(r)] =
                        run.series[ni][fi].raw[static_cast<std::size_t>(r)] * nd2 / sd;
                const auto ks = ks_normal_test(y);
                std::snprintf(tag, sizeof tag, "ks_p[N=%d,f=%s]", N, labels[fi].c_str());
                out.push_back(verdict_abs(tag, ks.p_value, 1.0, 0.99));
                // fourth moment of the rank component
                const auto fm = chaos::fourth_moment_gap(run.series[ni][fi].s_q[0]);
                std::snprintf(tag, sizeof tag, "m4[N=%d,f=%s,q=%d]", N,
                              labels[fi].c_str(), run.active_q[0]);
                out.push_back(
                    verdict_abs(tag, fm.m4, 3.0, std::max(0.1, 4.0 * fm.se)));
            }
        }
        if (n_f >= 2 && R >= 3 && run.c_m_signed > 0.0) {
            // covariance matrix of the CLT-scaled vector vs <f_i, f_j>
            std::vector<std::vector<double>> scaled(n_f);
            const double scale = nd2 / std::sqrt(run.c_m_signed);
            for (std::size_t fi = 0; fi < n_f; ++fi) {
                scaled[fi].resize(static_cast<std::size_t>(R));
                for (long r = 0; r < R; ++r)
                    scaled[fi][static_cast<std::size_t>(r)] =
                        run.series[ni][fi].raw[static_cast<std::size_t>(r)] * scale;
            }
            std::vector<double> predicted(n_f * n_f);
            for (std::size_t i = 0; i < n_f; ++i)
                for (std::size_t j = 0; j < n_f; ++j)
                    predicted[i * n_f + j] =
                        chaos::TestFunction::inner_product(fs[i], fs[j], d);
            std::vector<std::string> nf_labels;
            for (std::size_t i = 0; i < n_f; ++i)
                nf_labels.push_back("N=" + std::to_string(N) + "," + labels[i]);
            auto cov_v = covariance_verdict(scaled, predicted, cfg.se_rule, nf_labels);
            out.insert(out.end(), cov_v.begin(), cov_v.end());

            // the same matrix against the exact finite-N prediction
            // sum_q Cov(S_{N,q}(f_i), S_{N,q}(f_j)) / C_m: valid at every N,
            // not only in the limit
            const auto expansion = cfg.build_expansion();
            const auto model = cfg.build_effective_model();
            std::vector<double> exact_pred(n_f * n_f, 0.0);
            for (std::size_t i = 0; i < n_f; ++i)
                for (std::size_t j = 0; j < n_f; ++j)
                    for (int q : run.active_q)
                        exact_pred[i * n_f + j] +=
                            chaos::exact_covariance(q, expansion.coeff(q), model,
                                                    fs[i], fs[j], N, d) /
                            run.c_m_signed;
            auto exact_v =
                covariance_verdict(scaled, exact_pred, cfg.se_rule, nf_labels);
            for (auto& v : exact_v) {
                v.name = "exact_" + v.name;
                out.push_back(v);
            }
        }
    }
    return out;
}

TightnessResult tightness_survey(const experiment::ExperimentConfig& cfg) {
    if (!(cfg.alpha > 0.5 * cfg.dimension))
        throw validation_error("tightness_survey: alpha must exceed d/2");
    auto run = run_replicas(cfg);
    TightnessResult out;
    out.run = run;
    const long R = cfg.replicas;
    for (std::size_t ni = 0; ni < cfg.N_list.size(); ++ni) {
        ReplicaAccumulator acc;
        double tail = 0.0;
        for (long r = 0; r < R; ++r) {
            acc.push(run.sobolev[ni].norm_sq[static_cast<std::size_t>(r)]);
            tail += run.sobolev[ni].tail_bound[static_cast<std::size_t>(r)];
        }
        TightnessRow row;
        row.N = cfg.N_list[ni];
        row.mean = acc.mean();
        row.se = std::sqrt(acc.variance() / static_cast<double>(R));
        row.tail_bound = R > 0 ? tail / static_cast<double>(R) : 0.0;
        out.rows.push_back(row);
    }
    // weighted least squares trend across the N-list
    double sw = 0, swx = 0;
    for (const auto& row : out.rows) {
        const double w = 1.0 / (row.se * row.se);
        sw += w;
        swx += w * row.N;
    }
    const double xbar = swx / sw;
    double sxx = 0, sxy = 0;
    for (const auto& row : out.rows) {
        const double w = 1.0 / (row.se * row.se);
        sxx += w * (row.N - xbar) * (row.N - xbar);
        sxy += w * (row.N - xbar) * row.mean;
    }
    out.slope = sxy / sxx;
    out.slope_se = 1.0 / std::sqrt(sxx);
    Verdict trend;
    trend.name = "tightness_trend";
    trend.observed = out.slope;
    trend.predicted = 0.0;
    trend.rule = "k_se";
    trend.tolerance = 2.0;
    trend.se = out.slope_se;
    trend.pass = out.slope <= 2.0 * out.slope_se;
    out.verdicts.push_back(trend);

    // kernel bound stability under k_max doubling
    out.kernel_kmax = cfg.dimension == 1 ? 128 : (cfg.dimension == 2 ? 128 : 16);
    const int grid = cfg.dimension <= 2 ? 9 : 5;
    out.kernel_base = basis::kernel_bound(cfg.dimension, cfg.alpha, grid, out.kernel_kmax);
    out.kernel_doubled =
        basis::kernel_bound(cfg.dimension, cfg.alpha, grid, 2 * out.kernel_kmax);
    out.verdicts.push_back(verdict_rel("kernel_stability", out.kernel_base.value,
                                       out.kernel_doubled.value, 0.01));
    return out;
}

GffOddResult gff_odd_power_verdict(const experiment::ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.dimension < 3)
        throw validation_error("gff_odd_power_verdict: requires d >= 3");
    if (cfg.field.kind != "gff_box")
        throw validation_error("gff_odd_power_verdict: requires the gff_box field");
    if (cfg.observable.kind != "power" || cfg.observable.p % 2 == 0 ||
        cfg.observable.p < 3)
        throw validation_error(
            "gff_odd_power_verdict: observable must be an odd power x^{2p+1}, p >= 1");
    const int d = cfg.dimension;
    const int M = cfg.field.M;
    const int p = (cfg.observable.p - 1) / 2;
    const long R = cfg.replicas;

    GffOddResult out;
    out.green_diagonal = green::shared_green(d).diagonal();
    out.c1 = green::double_factorial_odd(p) * std::pow(out.green_diagonal, p);

    const auto f = cfg.build_test_function(0);
    const auto g = cfg.test_functions.size() > 1 ? cfg.build_test_function(1) : f;
    std::vector<int> N_list = cfg.N_list;
    std::sort(N_list.begin(), N_list.end());

    sampler::GffSampler gff(d, M);

    // predictions: c1^2 N^{-d} sum_{j,k} f(j/N) g(k/N) G_box(j,k) via one
    // Dirichlet solve per N
    const int interior = M - 1;
    std::vector<double> predicted(N_list.size(), 0.0);
    std::vector<std::vector<double>> f_tabs(N_list.size()), g_tabs(N_list.size());
    for (std::size_t ni = 0; ni < N_list.size(); ++ni) {
        const int N = N_list[ni];
        const int h = lat::window_halfwidth(N);
        const int n = lat::window_points(N);
        f_tabs[ni] = f.tabulate(d, N);
        g_tabs[ni] = g.tabulate(d, N);
        std::vector<double> v(lat::cube_size(d, interior), 0.0);
        std::vector<int> j(static_cast<std::size_t>(d), 0);
        std::size_t wi = 0;
        do {
            std::size_t idx = 0;
            for (int i = 0; i < d; ++i) {
                const int site = M / 2 - h + j[static_cast<std::size_t>(i)];  // 1..M-1
                idx = idx * static_cast<std::size_t>(interior) +
                      static_cast<std::size_t>(site - 1);
            }
            v[idx] = g_tabs[ni][wi];
            ++wi;
        } while (lat::advance(j, n));
        const auto w = gff.solve_dirichlet(v);
        double quad_form = 0.0;
        std::fill(j.begin(), j.end(), 0);
        wi = 0;
        do {
            std::size_t idx = 0;
            for (int i = 0; i < d; ++i) {
                const int site = M / 2 - h + j[static_cast<std::size_t>(i)];
                idx = idx * static_cast<std::size_t>(interior) +
                      static_cast<std::size_t>(site - 1);
            }
            quad_form += f_tabs[ni][wi] * w[idx];
            ++wi;
        } while (lat::advance(j, n));
        predicted[ni] =
            out.c1 * out.c1 * quad_form / std::pow(static_cast<double>(N), d);
    }

    // replica loop: Y = N^{-d/2} sum X^{2p+1} f, L = N^{-d/2} sum X f
    const int power = cfg.observable.p;
    std::vector<std::vector<double>> Yf(N_list.size()), Yg(N_list.size()),
        Rem(N_list.size());
    for (auto& v : Yf) v.assign(static_cast<std::size_t>(R), 0.0);
    for (auto& v : Yg) v.assign(static_cast<std::size_t>(R), 0.0);
    for (auto& v : Rem) v.assign(static_cast<std::size_t>(R), 0.0);
    par::parallel_for(static_cast<std::size_t>(R), [&](std::size_t r) {
        const auto field = gff.sample(cfg.seed, r);
        for (std::size_t ni = 0; ni < N_list.size(); ++ni) {
            const int N = N_list[ni];
            sampler::Window w;
            w.N = N;
            const auto window = sampler::extract_window(field, w);
            double yf = 0.0, yg = 0.0, lf = 0.0;
            for (std::size_t i = 0; i < window.size(); ++i) {
                const double x = window[i];
                double xp = x;
                for (int e = 1; e < power; ++e) xp *= x;
                yf += xp * f_tabs[ni][i];
                yg += xp * g_tabs[ni][i];
                lf += x * f_tabs[ni][i];
            }
            const double scale = std::pow(static_cast<double>(N), -0.5 * d);
            Yf[ni][r] = yf * scale;
            Yg[ni][r] = yg * scale;
            Rem[ni][r] = (yf - out.c1 * lf) * scale;
        }
    });

    for (std::size_t ni = 0; ni < N_list.size(); ++ni) {
        GffOddRow row;
        row.N = N_list[ni];
        row.predicted = predicted[ni];
        double sx = 0, sy = 0, sxy = 0;
        for (long r = 0; r < R; ++r) {
            sx += Yf[ni][static_cast<std::size_t>(r)];
            sy += Yg[ni][static_cast<std::size_t>(r)];
            sxy += Yf[ni][static_cast<std::size_t>(r)] * Yg[ni][static_cast<std::size_t>(r)];
        }
        const double nn = static_cast<double>(R);
        row.empirical = (sxy - sx * sy / nn) / (nn - 1.0);
        row.ratio = row.empirical / row.predicted;
        row.remainder_var = sample_variance(Rem[ni]);
        row.remainder_rel = row.remainder_var / sample_variance(Yf[ni]);
        out.rows.push_back(row);
    }

    const auto& last = out.rows.back();
    out.verdicts.push_back(verdict_rel(
        "gff_green_form_ratio[N=" + std::to_string(last.N) + "]", last.empirical,
        last.predicted, 0.15));
    int violations = 0;
    for (std::size_t i = 1; i < out.rows.size(); ++i)
        if (!(out.rows[i].remainder_rel < out.rows[i - 1].remainder_rel)) ++violations;
    out.verdicts.push_back(
        verdict_abs("gff_remainder_rel_decreasing", violations, 0.0, 0.5));
    return out;
}

}  // namespace bmlab::stats
