#include "nlspike/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

#include "nlspike/amp.hpp"
#include "nlspike/asymptotics.hpp"
#include "nlspike/ensemble.hpp"
#include "nlspike/quadrature.hpp"
#include "nlspike/spectral.hpp"
#include "nlspike/version.hpp"

namespace nlspike {

using nlohmann::json;

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t config_hash(const json& j) {
  std::string s = j.dump();  // object keys are sorted: canonical
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

const std::set<std::string> kExperiments = {"fisher-info", "se-curve",      "mmse-curve",
                                            "mse-sweep",   "eigengap-sweep", "amp-run"};

bool needs_instances(const std::string& experiment) {
  return experiment == "mse-sweep" || experiment == "eigengap-sweep" || experiment == "amp-run";
}

[[noreturn]] void bad_config(const std::string& msg) {
  throw std::runtime_error("config error: " + msg);
}

double require_number(const json& j, const std::string& key) {
  if (!j.at(key).is_number()) bad_config(key + " must be a number");
  return j.at(key).get<double>();
}

}  // namespace

SweepConfig parse_config(const json& j, const std::string& experiment) {
  if (!j.is_object()) bad_config("top level must be an object");
  if (kExperiments.find(experiment) == kExperiments.end())
    bad_config("unknown experiment " + experiment);

  const std::set<std::string> allowed = {"experiment", "channel", "prior",       "delta",
                                         "kf",         "nu",      "n",           "gamma0_grid",
                                         "seeds",      "master_seed", "amp",     "k_max",
                                         "mc_samples"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (allowed.find(it.key()) == allowed.end()) bad_config("unknown key '" + it.key() + "'");

  SweepConfig cfg;
  cfg.experiment = experiment;
  if (j.contains("experiment")) {
    std::string e = j.at("experiment").get<std::string>();
    if (e != experiment)
      bad_config("config experiment '" + e + "' does not match subcommand '" + experiment + "'");
  }

  if (!j.contains("channel")) bad_config("missing 'channel'");
  cfg.channel_name = j.at("channel").get<std::string>();
  if (cfg.channel_name != "abs_gaussian" && cfg.channel_name != "student_f0" &&
      cfg.channel_name != "gaussian_additive")
    bad_config("unknown channel '" + cfg.channel_name + "'");

  cfg.prior_name = cfg.channel_name == "abs_gaussian" ? "two_point_kf2" : "rademacher";
  if (j.contains("prior")) cfg.prior_name = j.at("prior").get<std::string>();
  if (cfg.prior_name != "rademacher" && cfg.prior_name != "two_point_kf2")
    bad_config("unknown prior '" + cfg.prior_name + "'");

  if (cfg.channel_name == "gaussian_additive") {
    if (j.contains("delta")) cfg.delta = require_number(j, "delta");
    if (j.contains("kf")) cfg.kf = static_cast<int>(require_number(j, "kf"));
    if (!(cfg.delta > 0.0)) bad_config("delta must be positive");
    if (cfg.kf < 1 || cfg.kf > 6) bad_config("kf must be in [1, 6]");
  }
  if (j.contains("nu")) cfg.nu = require_number(j, "nu");
  if (!(cfg.nu > 2.0)) bad_config("nu must exceed 2");

  if (!j.contains("gamma0_grid")) bad_config("missing 'gamma0_grid'");
  for (const auto& g : j.at("gamma0_grid")) {
    if (!g.is_number()) bad_config("gamma0_grid entries must be numbers");
    double v = g.get<double>();
    if (!(v > 0.0) || !std::isfinite(v)) bad_config("gamma0_grid entries must be positive finite");
    cfg.gamma0_grid.push_back(v);
  }
  if (cfg.gamma0_grid.empty()) bad_config("gamma0_grid must be nonempty");

  if (needs_instances(experiment)) {
    if (j.contains("n")) cfg.n = static_cast<int>(require_number(j, "n"));
    if (cfg.n < 50) bad_config("n must be at least 50");
    if (!j.contains("seeds")) bad_config("missing 'seeds'");
    std::set<std::uint64_t> seen;
    for (const auto& s : j.at("seeds")) {
      if (!s.is_number_unsigned() && !s.is_number_integer())
        bad_config("seeds entries must be non-negative integers");
      long long sv = s.get<long long>();
      if (sv < 0) bad_config("seeds entries must be non-negative");
      if (!seen.insert(static_cast<std::uint64_t>(sv)).second)
        bad_config("seeds must be distinct");
      cfg.seeds.push_back(static_cast<std::uint64_t>(sv));
    }
    if (cfg.seeds.empty()) bad_config("seeds must be nonempty");
  }

  if (j.contains("master_seed")) {
    long long ms = j.at("master_seed").get<long long>();
    if (ms < 0) bad_config("master_seed must be non-negative");
    cfg.master_seed = static_cast<std::uint64_t>(ms);
  }
  if (j.contains("amp")) {
    const json& a = j.at("amp");
    if (!a.is_object()) bad_config("'amp' must be an object");
    for (auto it = a.begin(); it != a.end(); ++it)
      if (it.key() != "t_max" && it.key() != "stop_tol")
        bad_config("unknown amp key '" + it.key() + "'");
    if (a.contains("t_max")) cfg.amp_t_max = a.at("t_max").get<int>();
    if (a.contains("stop_tol")) cfg.amp_stop_tol = a.at("stop_tol").get<double>();
    if (cfg.amp_t_max < 1 || cfg.amp_t_max > 100000) bad_config("amp.t_max out of range");
    if (!(cfg.amp_stop_tol > 0.0)) bad_config("amp.stop_tol must be positive");
  }
  if (j.contains("k_max")) cfg.k_max = static_cast<int>(require_number(j, "k_max"));
  if (cfg.k_max < 1 || cfg.k_max > 12) bad_config("k_max must be in [1, 12]");
  if (j.contains("mc_samples")) cfg.mc_samples = static_cast<long>(require_number(j, "mc_samples"));
  if (cfg.mc_samples < 1000) bad_config("mc_samples must be at least 1000");
  return cfg;
}

Channel channel_at(const SweepConfig& cfg, double gamma0) {
  if (cfg.channel_name == "abs_gaussian") return make_abs_gaussian(gamma0);
  if (cfg.channel_name == "student_f0") return make_student_f0(gamma0, cfg.nu);
  return make_gaussian_additive(cfg.delta, cfg.kf, gamma0);
}

DiscretePrior prior_for(const SweepConfig& cfg) {
  if (cfg.prior_name == "two_point_kf2") return make_two_point_kf2();
  return make_rademacher();
}

namespace {

struct CellResult {
  bool ok = false;
  std::string error;
  std::vector<std::vector<std::string>> rows;
};

void run_cells(int n_cells, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, n_cells));
  if (workers == 1) {
    for (int c = 0; c < n_cells; ++c) fn(c);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&]() {
      while (true) {
        int c = next.fetch_add(1);
        if (c >= n_cells) break;
        fn(c);
      }
    });
  for (auto& th : pool) th.join();
}

void write_csv_header(std::ostream& out, const SweepConfig& cfg, const json& original,
                      const std::string& columns) {
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(config_hash(original)));
  out << "# nlspike " << cfg.experiment << "\n";
  out << "# version=" << kVersion << "\n";
  out << "# config_hash=" << hash << "\n";
  out << "# channel=" << cfg.channel_name << " prior=" << cfg.prior_name << " n=" << cfg.n
      << "\n";
  out << "# rng=mt19937_64 cell_stream=splitmix64(master_seed,gamma0_index,seed_value)\n";
  out << "# columns=" << columns << "\n";
  out << columns << "\n";
}

/// Signal pushforward x^kf, the rank-one factor the estimators target.
Eigen::VectorXd target_vector(const PlantedInstance& inst, int kf) {
  Eigen::VectorXd t(inst.n);
  for (int i = 0; i < inst.n; ++i) t[i] = std::pow(inst.x[i], kf);
  return t;
}

}  // namespace

int run_experiment(const SweepConfig& cfg, const json& original, std::ostream& out,
                   std::ostream& err) {
  const GaussHermite gh = GaussHermite::std_normal(61);
  const DiscretePrior prior = prior_for(cfg);
  const bool empirical = needs_instances(cfg.experiment);
  const int n_gamma = static_cast<int>(cfg.gamma0_grid.size());
  const int n_seeds = empirical ? static_cast<int>(cfg.seeds.size()) : 1;
  const int n_cells = n_gamma * n_seeds;
  std::vector<CellResult> results(n_cells);

  auto cell_of = [&](int c) { return std::pair<int, int>{c / n_seeds, c % n_seeds}; };

  auto run_cell = [&](int c) {
    auto [gi, si] = cell_of(c);
    const double gamma0 = cfg.gamma0_grid[gi];
    CellResult& res = results[c];
    try {
      Channel ch = channel_at(cfg, gamma0);
      const int kf = ch.kf;
      const double delta = 1.0 / ch.inv_delta(kf);
      const DiscretePrior pkf = prior.pushforward(kf);
      const double m2 = pkf.moment(2);

      if (cfg.experiment == "fisher-info") {
        // handled by the JSON branch below; never reaches here
        throw std::logic_error("fisher-info has no CSV cells");
      } else if (cfg.experiment == "se-curve") {
        double q0 = q0_prediction(delta, m2);
        double q1 = se_map(pkf, m2 * q0 * q0, delta, gh);
        FixedPointResult spec_fp = se_fixed_point(pkf, delta, m2 * q0 * q0, gh);
        FixedPointResult info_fp = se_fixed_point(pkf, delta, m2, gh);
        res.rows.push_back({fmt_num(gamma0), fmt_num(delta), fmt_num(q0), fmt_num(q1),
                            fmt_num(spec_fp.q), std::to_string(spec_fp.iterations),
                            fmt_num(info_fp.q), std::to_string(info_fp.iterations)});
      } else if (cfg.experiment == "mmse-curve") {
        Prediction p = predict(pkf, delta, gh);
        res.rows.push_back({fmt_num(gamma0), fmt_num(delta), fmt_num(p.q0), fmt_num(p.q1),
                            fmt_num(p.q_inf), fmt_num(p.q_star), fmt_num(p.mmse),
                            fmt_num(p.pca_mse), fmt_num(p.denoised_mse),
                            std::to_string(p.n_local_maxima)});
      } else {
        const std::uint64_t seed = cell_seed(cfg.master_seed, gi, cfg.seeds[si]);
        PlantedInstance inst = make_instance(ch, prior, cfg.n, seed);
        const double sqrt_n = std::sqrt(static_cast<double>(cfg.n));
        const std::string seed_str = std::to_string(cfg.seeds[si]);

        if (cfg.experiment == "eigengap-sweep") {
          Eigen::MatrixXd s = score_matrix(inst, kf) / sqrt_n;
          TopEigs fisher = top_two(s, 1e-8, 400, seed ^ 0x51a3c0deULL);
          s = inst.y / sqrt_n;
          perron_shift(s);
          TopEigs raw = top_two(s, 1e-8, 400, seed ^ 0x0ddba11ULL);
          res.rows.push_back({fmt_num(gamma0), seed_str, fmt_num(fisher.first.value),
                              fmt_num(fisher.second.value),
                              fmt_num(fisher.first.value - fisher.second.value),
                              fmt_num(raw.first.value), fmt_num(raw.second.value),
                              fmt_num(raw.first.value - raw.second.value),
                              fmt_num(lambda1_prediction(delta, m2))});
        } else {
          Eigen::MatrixXd a = score_matrix(inst, kf) / sqrt_n;
          TopEigs top = top_two(a, 1e-8, 400, seed ^ 0x51a3c0deULL);
          Eigen::VectorXd target = target_vector(inst, kf);
          double q0 = q0_prediction(delta, m2);

          if (cfg.experiment == "mse-sweep") {
            Prediction p = predict(pkf, delta, gh);
            Eigen::VectorXd pca = pca_estimate(top.first.vector, m2);
            res.rows.push_back({fmt_num(gamma0), seed_str, "pca", fmt_num(matrix_mse(target, pca)),
                                fmt_num(normalized_overlap(target, pca)), fmt_num(p.pca_mse)});
            Eigen::VectorXd den = denoised_pca_estimate(pkf, top.first.vector, q0, m2);
            res.rows.push_back({fmt_num(gamma0), seed_str, "denoised",
                                fmt_num(matrix_mse(target, den)),
                                fmt_num(normalized_overlap(target, den)),
                                fmt_num(p.denoised_mse)});
            Eigen::VectorXd x0 = amp_spectral_init(top.first.vector, q0, m2);
            if (pkf.symmetric() && x0.dot(target) < 0.0) x0 = -x0;
            AmpOptions opts;
            opts.t_max = cfg.amp_t_max;
            opts.stop_tol = cfg.amp_stop_tol;
            AmpResult amp = run_amp(a, target, pkf, delta, x0, opts);
            double amp_pred = 1.0 - (p.q_inf / m2) * (p.q_inf / m2);
            res.rows.push_back({fmt_num(gamma0), seed_str, "amp",
                                fmt_num(amp.trajectory.back().mse),
                                fmt_num(amp.trajectory.back().overlap), fmt_num(amp_pred)});
          } else {  // amp-run
            Eigen::VectorXd x0 = amp_spectral_init(top.first.vector, q0, m2);
            if (pkf.symmetric() && x0.dot(target) < 0.0) x0 = -x0;
            AmpOptions opts;
            opts.t_max = cfg.amp_t_max;
            opts.stop_tol = cfg.amp_stop_tol;
            AmpResult amp = run_amp(a, target, pkf, delta, x0, opts);
            std::vector<double> se = se_trajectory(pkf, delta, m2 * q0 * q0,
                                                   static_cast<int>(amp.trajectory.size()), gh);
            for (std::size_t t = 0; t < amp.trajectory.size(); ++t) {
              const AmpRow& r = amp.trajectory[t];
              res.rows.push_back({fmt_num(gamma0), seed_str, std::to_string(r.t),
                                  fmt_num(r.overlap), fmt_num(r.mse), fmt_num(r.q_emp),
                                  fmt_num(se[t])});
            }
          }
        }
      }
      res.ok = true;
    } catch (const std::exception& e) {
      res.ok = false;
      res.error = e.what();
    }
  };

  if (cfg.experiment == "fisher-info") {
    // JSON output: one result object per grid point
    std::vector<json> objs(n_gamma);
    std::vector<std::string> errs(n_gamma);
    run_cells(n_gamma, cfg.n_workers, [&](int gi) {
      try {
        Channel ch = channel_at(cfg, cfg.gamma0_grid[gi]);
        FisherScan scan = scan_fisher_coefficients(ch, cfg.k_max, cfg.mc_samples,
                                                   cell_seed(cfg.master_seed, gi, 0));
        json closed = json::array();
        for (int k = 1; k <= cfg.k_max; ++k) {
          double v = ch.inv_delta(k);
          if (std::isnan(v))
            closed.push_back(nullptr);
          else
            closed.push_back(v);
        }
        objs[gi] = json{{"gamma0", cfg.gamma0_grid[gi]},
                        {"k_f", scan.k_f},
                        {"k_f_analytic", ch.kf},
                        {"max_score_order", ch.max_score_order},
                        {"inv_delta", scan.inv_delta},
                        {"stderr", scan.stderr_},
                        {"closed_form", closed}};
      } catch (const std::exception& e) {
        errs[gi] = e.what();
      }
    });
    int fails = 0;
    json results = json::array();
    for (int gi = 0; gi < n_gamma; ++gi) {
      if (!errs[gi].empty()) {
        ++fails;
        err << "# cell gamma0=" << fmt_num(cfg.gamma0_grid[gi]) << " failed: " << errs[gi]
            << "\n";
      } else {
        results.push_back(objs[gi]);
      }
    }
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(config_hash(original)));
    json doc{{"version", kVersion},
             {"experiment", cfg.experiment},
             {"config_hash", hash},
             {"channel", cfg.channel_name},
             {"mc_samples", cfg.mc_samples},
             {"results", results}};
    out << doc.dump(2) << "\n";
    if (fails == n_gamma) return 1;
    return fails > 0 ? 2 : 0;
  }

  run_cells(n_cells, cfg.n_workers, run_cell);

  std::string columns;
  if (cfg.experiment == "se-curve")
    columns = "gamma0,delta,q0,q1,q_from_spectral,iters_spectral,q_from_informed,iters_informed";
  else if (cfg.experiment == "mmse-curve")
    columns = "gamma0,delta,q0,q1,q_inf,q_star,mmse,pca_mse,denoised_mse,n_local_maxima";
  else if (cfg.experiment == "mse-sweep")
    columns = "gamma0,seed,estimator,mse,overlap,predicted_mse";
  else if (cfg.experiment == "eigengap-sweep")
    columns =
        "gamma0,seed,lambda1_fisher,lambda2_fisher,gap_fisher,lambda1_raw,lambda2_raw,gap_raw,"
        "lambda1_pred";
  else  // amp-run
    columns = "gamma0,seed,t,overlap,mse,q_emp,q_se";

  write_csv_header(out, cfg, original, columns);
  int fails = 0;
  for (int c = 0; c < n_cells; ++c) {
    const CellResult& res = results[c];
    if (!res.ok) {
      ++fails;
      auto [gi, si] = cell_of(c);
      err << "# cell gamma0=" << fmt_num(cfg.gamma0_grid[gi]);
      if (empirical) err << " seed=" << cfg.seeds[si];
      err << " failed: " << res.error << "\n";
      continue;
    }
    for (const auto& row : res.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ",";
        out << row[i];
      }
      out << "\n";
    }
  }
  if (fails == n_cells) return 1;
  return fails > 0 ? 2 : 0;
}

}  // namespace nlspike
