#include "ips/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>
#include <unordered_map>

namespace ips {

ExperimentPlan ExperimentPlan::make(JumpModel model, LocalFunctional H, std::vector<int> radii,
                                    double tau, std::vector<double> times,
                                    std::size_t replicates, std::uint64_t seed,
                                    InitialDistribution init, int workers) {
    if (radii.empty()) throw ConfigError("plan needs at least one window radius");
    if (!std::is_sorted(radii.begin(), radii.end()))
        throw ConfigError("window radii must be increasing");
    if (tau < 0.0) throw ConfigError("tau must be >= 0");
    if (replicates == 0) throw ConfigError("replicates must be >= 1");
    std::sort(times.begin(), times.end());
    for (double t : times)
        if (t < 0.0 || t > tau) throw ConfigError("observation times must lie in [0, tau]");
    ExperimentPlan plan{std::move(model), std::move(H), radii, {}, tau, std::move(times),
                        replicates, seed, std::move(init), std::max(1, workers)};
    for (int r : radii) plan.windows.push_back(Window::box(plan.model.tmpl.dim(), r));
    return plan;
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)> &fn) {
    workers = std::max(1, workers);
    if (workers == 1 || n <= 1) {
        for (std::size_t k = 0; k < n; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= n) return;
            try {
                fn(k);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto &t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

namespace {

/// S_H at each requested time, for every replicate: result[time][replicate].
std::vector<std::vector<double>> replicate_totals(const ExperimentPlan &plan,
                                                  const Window &window,
                                                  const std::vector<double> &times) {
    std::vector<std::vector<double>> totals(times.size(),
                                            std::vector<double>(plan.replicates, 0.0));
    SimulateOptions opts;
    opts.snapshot_times = times;
    parallel_for(plan.replicates, plan.workers, [&](std::size_t k) {
        const Trajectory traj = simulate_window(plan.model, window, plan.init, plan.tau,
                                                replicate_seed(plan.seed, k), opts);
        for (std::size_t ti = 0; ti < times.size(); ++ti)
            totals[ti][k] = eval_additive(plan.H, window, traj.snapshots[ti], plan.model.tmpl);
    });
    return totals;
}

struct FieldRun {
    std::vector<Site> sites;                    // window sites
    std::unordered_map<Site, std::size_t, SiteHash> index;
    std::vector<std::size_t> interior;          // indices with a margin ball inside A
    std::vector<std::vector<double>> ys, yt;    // [replicate][site]
    std::vector<double> mean_s, mean_t;         // per-site across-replicate means
};

FieldRun collect_fields(const ExperimentPlan &plan, const Window &window, double s, double t,
                        const SiteSet &offsets) {
    FieldRun run;
    run.sites = window.sites();
    for (std::size_t i = 0; i < run.sites.size(); ++i) run.index[run.sites[i]] = i;
    for (std::size_t i = 0; i < run.sites.size(); ++i) {
        bool inside = true;
        for (const Site &z : offsets) {
            if (!window.contains_site(add(run.sites[i], z))) {
                inside = false;
                break;
            }
        }
        if (inside) run.interior.push_back(i);
    }
    if (run.interior.empty())
        throw ConfigError("window too small for the requested dependence margin");

    run.ys.assign(plan.replicates, {});
    run.yt.assign(plan.replicates, {});
    SimulateOptions opts;
    opts.snapshot_times = {s, t};
    parallel_for(plan.replicates, plan.workers, [&](std::size_t k) {
        const Trajectory traj = simulate_window(plan.model, window, plan.init, plan.tau,
                                                replicate_seed(plan.seed, k), opts);
        std::vector<double> &vs = run.ys[k];
        std::vector<double> &vt = run.yt[k];
        vs.resize(run.sites.size());
        vt.resize(run.sites.size());
        for (std::size_t i = 0; i < run.sites.size(); ++i) {
            vs[i] = plan.H.eval(traj.snapshots[0].patch(run.sites[i], plan.model.tmpl));
            vt[i] = plan.H.eval(traj.snapshots[1].patch(run.sites[i], plan.model.tmpl));
        }
    });

    run.mean_s.assign(run.sites.size(), 0.0);
    run.mean_t.assign(run.sites.size(), 0.0);
    for (std::size_t k = 0; k < plan.replicates; ++k) {
        for (std::size_t i = 0; i < run.sites.size(); ++i) {
            run.mean_s[i] += run.ys[k][i];
            run.mean_t[i] += run.yt[k][i];
        }
    }
    for (std::size_t i = 0; i < run.sites.size(); ++i) {
        run.mean_s[i] /= double(plan.replicates);
        run.mean_t[i] /= double(plan.replicates);
    }
    return run;
}

/// Translation-averaged covariance estimates per replicate for one offset z.
std::vector<double> offset_products(const FieldRun &run, const Site &z) {
    std::vector<double> out(run.ys.size(), 0.0);
    std::vector<std::size_t> shifted;
    shifted.reserve(run.interior.size());
    for (std::size_t i : run.interior) {
        auto it = run.index.find(add(run.sites[i], z));
        if (it == run.index.end())
            throw ConfigError("offset leaves the window; increase the margin");
        shifted.push_back(it->second);
    }
    for (std::size_t k = 0; k < run.ys.size(); ++k) {
        double acc = 0.0;
        for (std::size_t a = 0; a < run.interior.size(); ++a) {
            const std::size_t i = run.interior[a], j = shifted[a];
            acc += (run.ys[k][i] - run.mean_s[i]) * (run.yt[k][j] - run.mean_t[j]);
        }
        out[k] = acc / double(run.interior.size());
    }
    return out;
}

}  // namespace

LlnReport run_lln(const ExperimentPlan &plan) {
    LlnReport report;
    report.window_check = check_window_sequence(plan.windows, plan.model.tmpl);
    for (std::size_t wi = 0; wi < plan.windows.size(); ++wi) {
        const Window &A = plan.windows[wi];
        auto totals = replicate_totals(plan, A, {plan.tau});
        std::vector<double> density = std::move(totals[0]);
        for (double &v : density) v /= double(A.size());
        const auto m = stats::moments(density);
        report.rows.push_back({plan.radii[wi], A.size(), m.mean, m.se_mean});
    }
    if (report.rows.size() >= 2) {
        const auto &a = report.rows[report.rows.size() - 2];
        const auto &b = report.rows.back();
        const double gap = std::abs(b.mean - a.mean);
        report.stabilized = gap <= 3.0 * std::sqrt(a.se * a.se + b.se * b.se);
    } else {
        report.stabilized = true;
    }
    return report;
}

CltReport run_clt(const ExperimentPlan &plan) {
    if (plan.times.empty()) throw ConfigError("clt experiment needs observation times");
    CltReport report;
    const std::size_t largest = plan.windows.size() - 1;
    for (std::size_t wi = 0; wi < plan.windows.size(); ++wi) {
        const Window &A = plan.windows[wi];
        const auto totals = replicate_totals(plan, A, plan.times);
        for (std::size_t si = 0; si < plan.times.size(); ++si) {
            for (std::size_t ti = si; ti < plan.times.size(); ++ti) {
                CltRow row;
                row.window_size = A.size();
                row.s = plan.times[si];
                row.t = plan.times[ti];
                row.replicates = plan.replicates;
                const auto cov = stats::covariance(totals[si], totals[ti]);
                row.cov_scaled = cov.value / double(A.size());
                row.cov_se = cov.se / double(A.size());
                if (wi == largest) {
                    const auto m = stats::moments(totals[ti]);
                    row.skew = m.skewness;
                    row.ex_kurtosis = m.excess_kurtosis;
                    row.gof_stat = stats::ks_normal_statistic(totals[ti]);
                    if (si == ti && cov.value <= 3.0 * cov.se) report.degenerate_variance = true;
                } else {
                    row.skew = std::numeric_limits<double>::quiet_NaN();
                    row.ex_kurtosis = std::numeric_limits<double>::quiet_NaN();
                    row.gof_stat = std::numeric_limits<double>::quiet_NaN();
                }
                report.rows.push_back(row);
            }
        }
    }
    return report;
}

SigmaReport estimate_sigma(const ExperimentPlan &plan, double s, double t,
                           int truncation_radius) {
    SigmaReport report;
    report.s = s;
    report.t = t;
    report.truncation_radius = truncation_radius;
    const Window &A = plan.windows.back();

    // method A: scaled covariance of the window totals
    {
        const auto totals = replicate_totals(plan, A, {s, t});
        const auto cov = stats::covariance(totals[0], totals[1]);
        report.sigma_scaling = cov.value / double(A.size());
        report.se_a = cov.se / double(A.size());
    }

    // method B: truncated lattice sum over the stationary interior field
    {
        const SiteSet offsets = Window::box(plan.model.tmpl.dim(), truncation_radius).sites();
        const FieldRun run = collect_fields(plan, A, s, t, offsets);
        const std::size_t n = plan.replicates;
        std::vector<double> sum_k(n, 0.0), shell_k(n, 0.0);
        for (const Site &z : offsets) {
            const auto prods = offset_products(run, z);
            int chebyshev = 0;
            for (int i = 0; i < plan.model.tmpl.dim(); ++i)
                chebyshev = std::max(chebyshev, std::abs(int(z[std::size_t(i)])));
            for (std::size_t k = 0; k < n; ++k) {
                sum_k[k] += prods[k];
                if (chebyshev == truncation_radius) shell_k[k] += prods[k];
            }
        }
        const double bessel = double(n) / double(n - 1);
        const auto m = stats::moments(sum_k);
        report.sigma_sum = bessel * m.mean;
        report.se_b = bessel * m.se_mean;
        const auto shell = stats::moments(shell_k);
        report.truncation_warning =
            std::abs(bessel * shell.mean) > 0.01 * std::max(1e-300, std::abs(report.sigma_sum));
    }

    const double combined = std::sqrt(report.se_a * report.se_a + report.se_b * report.se_b);
    report.agree = std::abs(report.sigma_scaling - report.sigma_sum) <= 3.0 * combined;
    return report;
}

DecayReport covariance_decay(const ExperimentPlan &plan, double s, double t,
                             const std::vector<int> &distances) {
    if (distances.empty()) throw ConfigError("decay experiment needs probe distances");
    DecayReport report;
    report.s = s;
    report.t = t;
    const Window &A = plan.windows.back();
    SiteSet probe_offsets;
    for (int r : distances) probe_offsets.push_back(make_site({std::int32_t(r)}));
    sort_unique(probe_offsets);
    const FieldRun run = collect_fields(plan, A, s, t, probe_offsets);
    const double bessel = double(plan.replicates) / double(plan.replicates - 1);

    for (int r : distances) {
        const Site z = make_site({std::int32_t(r)});
        const auto prods = offset_products(run, z);
        const auto m = stats::moments(prods);
        DecayRow row;
        row.distance = r;
        row.cov = bessel * m.mean;
        row.abs_cov = std::abs(row.cov);
        row.se = bessel * m.se_mean;
        row.significant = row.abs_cov > 3.0 * row.se;
        report.rows.push_back(row);
    }

    // envelope fit on the significant range
    std::vector<double> xs, ys;
    double peak = 0.0;
    for (const DecayRow &row : report.rows) {
        if (row.significant && row.abs_cov > 0.0) {
            xs.push_back(double(row.distance));
            ys.push_back(std::log(row.abs_cov));
            peak = std::max(peak, row.abs_cov);
        }
    }
    const auto fit = stats::fit_line(xs, ys);
    if (fit.ok && fit.slope < 0.0) {
        report.fit_ok = true;
        // K e^{-r/K} is increasing in K; anchoring K at the fitted amplitude,
        // the fitted decay length and the observed peak makes the envelope
        // dominate the fitted line without going vacuous in the tail
        report.envelope_k = std::max({std::exp(fit.intercept), -1.0 / fit.slope, peak});
        for (DecayRow &row : report.rows)
            row.envelope = report.envelope_k * std::exp(-double(row.distance) / report.envelope_k);
        report.below_envelope = true;
        for (const DecayRow &row : report.rows) {
            if (!row.significant) continue;
            if (row.abs_cov > row.envelope + 3.0 * row.se) report.below_envelope = false;
        }
        report.decreasing = true;
        const DecayRow *prev = nullptr;
        for (const DecayRow &row : report.rows) {
            if (!row.significant) continue;
            if (prev) {
                const double slack = 3.0 * std::sqrt(row.se * row.se + prev->se * prev->se);
                if (row.abs_cov > prev->abs_cov + slack) report.decreasing = false;
            }
            prev = &row;
        }
    }
    return report;
}

double cluster_delta(const JumpModel &model) {
    const int D = model.tmpl.degree();
    if (D < 1) throw ConfigError("cluster probe needs an interacting template (D >= 1)");
    const double theta = 1.01 * model.c_max * (4.0 * double(D) * double(D) - 1.0);
    return 0.99 * std::log(2.0) / theta;
}

ClusterReport cluster_tail_probe(const JumpModel &model, double delta,
                                 const std::vector<int> &n_values, std::size_t replicates,
                                 std::uint64_t seed, int workers) {
    if (!(delta > 0.0)) throw ConfigError("cluster probe needs delta > 0");
    ClusterReport report;
    report.delta = delta;
    const int D = model.tmpl.degree();
    report.theta = 1.01 * model.c_max * (4.0 * double(D) * double(D) - 1.0);
    const Site origin{0, 0, 0};
    report.all_within_bound = true;
    for (int n : n_values) {
        if (n < 1) throw ConfigError("cluster probe needs n >= 1");
        const double horizon = delta * double(n);
        const SiteSet region = graph_ball(origin, model.tmpl, 2 * n + 2);
        const SiteSet targets{origin};
        std::vector<char> hits(replicates, 0);
        parallel_for(replicates, workers, [&](std::size_t k) {
            const auto arrivals = materialize_arrivals(replicate_seed(seed, k), model.c_max,
                                                       region, horizon);
            const SiteSet affecting =
                affecting_sites_from_arrivals(arrivals, targets, horizon, model.tmpl);
            for (const Site &w : affecting) {
                if (graph_distance(origin, w, model.tmpl, 2 * n + 4) >= 2 * n) {
                    hits[k] = 1;
                    break;
                }
            }
        });
        ClusterRow row;
        row.n = n;
        row.time = horizon;
        row.replicates = replicates;
        std::size_t count = 0;
        for (char h : hits) count += std::size_t(h);
        row.empirical_p = double(count) / double(replicates);
        row.bound = std::pow(2.0, -double(n));
        row.se = stats::binomial_se(row.empirical_p, replicates);
        row.within_bound = row.empirical_p <= row.bound + 3.0 * row.se;
        report.all_within_bound &= row.within_bound;
        report.rows.push_back(row);
    }
    return report;
}

CoupleReport coupling_check(const JumpModel &model, const Window &A, const Window &B,
                            const InitialDistribution &init, double tau, const SiteSet &probes,
                            std::size_t replicates, std::uint64_t seed, int workers) {
    CoupleReport report;
    std::vector<std::vector<CoupleRow>> rows(replicates);
    parallel_for(replicates, workers, [&](std::size_t k) {
        const CoupledResult res =
            coupled_windows(model, A, B, init, tau, replicate_seed(seed, k), probes);
        for (const auto &pr : res.probes)
            rows[k].push_back({pr.probe, k, pr.cluster_contained, pr.agree});
    });
    for (auto &batch : rows) {
        for (const CoupleRow &row : batch) {
            if (row.hypothesis_met) {
                ++report.hypothesis_met;
                if (!row.agreement) ++report.violations;
            }
            report.rows.push_back(row);
        }
    }
    return report;
}

OracleReport oracle_compare(const ExperimentPlan &plan, std::int64_t cap) {
    OracleReport report;
    report.replicates = plan.replicates;
    const Window &A = plan.windows.back();

    const GeneratorMatrix gm(plan.model, A, plan.init, cap);
    auto f = [&](const Configuration &config) {
        return eval_additive(plan.H, A, config, plan.model.tmpl);
    };
    const auto [exact, sink] = gm.expectation(plan.tau, f);
    report.exact = exact;
    report.sink_mass = sink;

    const auto allowed = plan.model.enum_states(cap);
    std::vector<double> values(plan.replicates, 0.0);
    parallel_for(plan.replicates, plan.workers, [&](std::size_t k) {
        const Trajectory traj = simulate_window(plan.model, A, plan.init, plan.tau,
                                                replicate_seed(plan.seed, k));
        for (const Site &v : A.sites()) {
            const LocalState &s = traj.final_state.at(v);
            bool found = false;
            for (const LocalState &cand : allowed)
                if (cand == s) {
                    found = true;
                    break;
                }
            if (!found)
                throw TruncationError("simulation left the truncated state space (cap " +
                                      std::to_string(cap) + ")");
        }
        values[k] = f(traj.final_state);
    });
    const auto m = stats::moments(values);
    report.simulated = m.mean;
    report.se = m.se_mean;
    report.z = report.se > 0.0 ? (report.simulated - report.exact) / report.se : 0.0;
    report.pass = std::abs(report.z) <= 3.0;
    return report;
}

IncrementReport increment_moment_probe(const ExperimentPlan &plan) {
    if (plan.times.size() < 2)
        throw ConfigError("increments experiment needs a time grid of at least two points");
    IncrementReport report;
    const Window &A = plan.windows.back();
    const auto totals = replicate_totals(plan, A, plan.times);
    const double base = plan.times.front();
    const double scale = std::sqrt(double(A.size()));
    std::vector<double> log_gap, log_m4;
    for (std::size_t ti = 1; ti < plan.times.size(); ++ti) {
        std::vector<double> inc(plan.replicates);
        for (std::size_t k = 0; k < plan.replicates; ++k)
            inc[k] = (totals[ti][k] - totals[0][k]) / scale;
        const auto m = stats::moments(inc);
        IncrementRow row;
        row.gap = plan.times[ti] - base;
        row.fourth_moment = m.m4;
        // SE of the fourth central moment from the eighth sample moment
        double m8 = 0.0;
        for (std::size_t k = 0; k < plan.replicates; ++k) {
            const double d = inc[k] - m.mean;
            m8 += std::pow(d, 8.0);
        }
        m8 /= double(plan.replicates);
        row.se = std::sqrt(std::max(0.0, m8 - m.m4 * m.m4) / double(plan.replicates));
        report.rows.push_back(row);
        if (row.gap > 0.0 && row.fourth_moment > 0.0) {
            log_gap.push_back(std::log(row.gap));
            log_m4.push_back(std::log(row.fourth_moment));
        }
    }
    const auto fit = stats::fit_line(log_gap, log_m4);
    report.fit_ok = fit.ok;
    report.fitted_exponent = fit.slope;
    return report;
}

}  // namespace ips
