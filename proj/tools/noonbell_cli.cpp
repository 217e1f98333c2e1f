// Command-line front end: gain sweeps, violation boundaries, the
// loss-tolerance table and single-point evaluations, as CSV or JSON.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "noonbell/chsh.hpp"

using namespace noonbell;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

// Builds the whole output in memory first so a failed open never leaves a
// partial file behind.
int emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::fputs(content.c_str(), stdout);
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::fprintf(stderr, "error: cannot open output path '%s'\n", path.c_str());
    return 3;
  }
  out << content;
  if (!out.good()) {
    std::fprintf(stderr, "error: write to '%s' failed\n", path.c_str());
    return 3;
  }
  return 0;
}

struct CommonOpts {
  int cutoff = 40;
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  std::string out = "-";
  std::string format = "csv";
  std::string gain_mode = "optimized";
  double t = 1.0, eta_n = 1.0, eta_x = 1.0;
  double zeta_lo = 0.0, zeta_hi = 0.6, zeta_step = 0.02;
  double t_lo = 0.80, t_hi = 1.0, t_step = 0.02;
};

GainMode parse_gain_mode(const std::string& s) {
  if (s == "optimized") return GainMode::optimized;
  if (s == "fixed_zero") return GainMode::fixed_zero;
  throw CLI::ValidationError("--gain-mode must be 'optimized' or 'fixed_zero'");
}

// Pre-loads defaults from a JSON config file; explicit flags win because
// CLI11 only overwrites bound variables for flags actually given.
void load_config(const std::string& path, CommonOpts& o) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("config file not readable: " + path);
  ordered_json j = ordered_json::parse(in);
  auto get = [&](const char* key, auto& dst) {
    if (j.contains(key)) dst = j.at(key).template get<std::decay_t<decltype(dst)>>();
  };
  get("cutoff", o.cutoff);
  get("threads", o.threads);
  get("out", o.out);
  get("format", o.format);
  get("gain_mode", o.gain_mode);
  get("t", o.t);
  get("eta_n", o.eta_n);
  get("eta_x", o.eta_x);
  get("zeta_lo", o.zeta_lo);
  get("zeta_hi", o.zeta_hi);
  get("zeta_step", o.zeta_step);
  get("t_lo", o.t_lo);
  get("t_hi", o.t_hi);
  get("t_step", o.t_step);
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (step <= 0.0 || lo > hi) throw CLI::ValidationError("grid requires step > 0 and lo <= hi");
  std::vector<double> grid;
  const int n = static_cast<int>(std::round((hi - lo) / step));
  for (int i = 0; i <= n; ++i) grid.push_back(lo + i * step);
  return grid;
}

int run_sweep(const CommonOpts& o) {
  const SweepSeries series = sweep_gain(make_grid(o.zeta_lo, o.zeta_hi, o.zeta_step),
                                        LossParams{o.t, o.eta_n, o.eta_x}, FockCutoff(o.cutoff),
                                        o.threads);
  std::ostringstream body;
  if (o.format == "csv") {
    body << "zeta,n_tot_mean,b_opt,n0_opt,x0_opt,e_xx,e_xn,e_nn\n";
    for (const SweepPoint& p : series.points)
      body << fmt9(p.zeta) << ',' << fmt9(p.n_tot_mean) << ',' << fmt9(p.b_opt) << ','
           << p.n0_opt << ',' << fmt9(p.x0_opt) << ',' << fmt9(p.e_xx) << ',' << fmt9(p.e_xn)
           << ',' << fmt9(p.e_nn) << '\n';
  } else {
    ordered_json arr = ordered_json::array();
    for (const SweepPoint& p : series.points)
      arr.push_back({{"zeta", p.zeta},
                     {"n_tot_mean", p.n_tot_mean},
                     {"b_opt", p.b_opt},
                     {"n0_opt", p.n0_opt},
                     {"x0_opt", p.x0_opt},
                     {"e_xx", p.e_xx},
                     {"e_xn", p.e_xn},
                     {"e_nn", p.e_nn}});
    body << arr.dump(2) << '\n';
  }
  return emit(o.out, body.str());
}

int run_boundary(const CommonOpts& o) {
  const BoundaryCurve curve =
      violation_boundary(make_grid(o.t_lo, o.t_hi, o.t_step), o.eta_x,
                         parse_gain_mode(o.gain_mode), FockCutoff(o.cutoff), o.threads);
  std::ostringstream body;
  if (o.format == "csv") {
    body << "t,eta_n_min,eta_x,gain_mode\n";
    for (const BoundaryPoint& p : curve.points) {
      body << fmt9(p.t) << ',';
      if (p.eta_n_min) body << fmt9(*p.eta_n_min);
      body << ',' << fmt9(o.eta_x) << ',' << o.gain_mode << '\n';
    }
  } else {
    ordered_json arr = ordered_json::array();
    for (const BoundaryPoint& p : curve.points) {
      ordered_json row{{"t", p.t},
                       {"eta_n_min", nullptr},
                       {"eta_x", o.eta_x},
                       {"gain_mode", o.gain_mode}};
      if (p.eta_n_min) row["eta_n_min"] = *p.eta_n_min;
      arr.push_back(row);
    }
    body << arr.dump(2) << '\n';
  }
  return emit(o.out, body.str());
}

int run_table1(const CommonOpts& o) {
  const FockCutoff cut(o.cutoff);
  const double eta_opt = min_detector_efficiency(1.0, GainMode::optimized, cut);
  const double eta_z0 = min_detector_efficiency(1.0, GainMode::fixed_zero, cut);
  const double t_opt = min_transmittance(1.0, 1.0, GainMode::optimized, cut);
  const double t_z0 = min_transmittance(1.0, 1.0, GainMode::fixed_zero, cut);
  const double t_pre = min_transmittance(1.0, 1.0, GainMode::optimized, cut, true);

  std::ostringstream body;
  if (o.format == "json") {
    ordered_json j{
        {"computed",
         {{"Psi2", {{"eta_n_min", eta_opt}, {"t_min", t_opt}}},
          {"psi2", {{"eta_n_min", eta_z0}, {"t_min", t_z0}}},
          {"Psi2_amplified_after_transmission", {{"t_min", t_pre}}}}},
        {"literature_not_computed",
         {{"psi_E(lambda)", {{"eta_n_min", 0.648}, {"t_min", 0.805}}},
          {"P_H", {{"eta_n_min", nullptr}, {"t_min", 0.92}}}}}};
    body << j.dump(2) << '\n';
  } else if (o.format == "csv") {
    body << "state,eta_n_min,t_min,source\n";
    body << "|Psi2>," << fmt9(eta_opt) << ',' << fmt9(t_opt) << ",computed\n";
    body << "|psi2>," << fmt9(eta_z0) << ',' << fmt9(t_z0) << ",computed\n";
    body << "|Psi2> amplified after transmission,," << fmt9(t_pre) << ",computed\n";
    body << "|psi_E(lambda)>,0.648,0.805,literature (not computed)\n";
    body << "|P_H>,,0.92,literature (not computed)\n";
  } else {
    body << "state                                    eta_N_min   t_min      source\n";
    char line[160];
    std::snprintf(line, sizeof(line), "%-40s %-11.1f%% %-9.1f%% computed\n", "|Psi2> (optimized gain)",
                  100.0 * eta_opt, 100.0 * t_opt);
    body << line;
    std::snprintf(line, sizeof(line), "%-40s %-11.1f%% %-9.1f%% computed\n", "|psi2> (zeta=0)",
                  100.0 * eta_z0, 100.0 * t_z0);
    body << line;
    std::snprintf(line, sizeof(line), "%-40s %-12s %-9.1f%% computed\n",
                  "|Psi2>, amplified after transmission", "-", 100.0 * t_pre);
    body << line;
    body << "|psi_E(lambda)>                          64.8%       80.5%     literature (not computed)\n";
    body << "|P_H>                                    ---         92%       literature (not computed)\n";
  }
  return emit(o.out, body.str());
}

int run_point(const CommonOpts& o, double zeta, int n0, double x0) {
  const BellResult r = bell_value(Gain(zeta), Thresholds(n0, x0),
                                  LossParams{o.t, o.eta_n, o.eta_x}, FockCutoff(o.cutoff));
  ordered_json j{{"b_value", r.b_value}, {"e_xx", r.e_xx},   {"e_xn", r.e_xn},
                 {"e_nx", r.e_nx},       {"e_nn", r.e_nn},   {"zeta", r.zeta},
                 {"n0", r.n0},           {"x0", r.x0},       {"t", r.loss.t},
                 {"eta_n", r.loss.eta_n}, {"eta_x", r.loss.eta_x}};
  return emit(o.out, j.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CHSH Bell-test engine for weakly amplified two-photon N00N states"};
  app.require_subcommand(1);

  CommonOpts o;
  // --config is applied before regular parsing so flags can override it.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        load_config(argv[i + 1], o);
      } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
      }
    }
  }

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; flags override its values");

  auto add_common = [&](CLI::App* cmd, bool with_loss) {
    cmd->add_option("--config", config_path, "JSON config file; flags override its values");
    cmd->add_option("--cutoff", o.cutoff, "Fock cutoff per mode")->check(CLI::Range(2, 200));
    cmd->add_option("--threads", o.threads, "worker threads");
    cmd->add_option("--out", o.out, "output path ('-' for stdout)");
    cmd->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json", "text"}));
    if (with_loss) {
      cmd->add_option("--t", o.t, "channel transmittance")->check(CLI::Range(0.0, 1.0));
      cmd->add_option("--eta-n", o.eta_n, "photon-counting efficiency")->check(CLI::Range(0.0, 1.0));
      cmd->add_option("--eta-x", o.eta_x, "homodyne efficiency")->check(CLI::Range(0.0, 1.0));
    }
  };

  CLI::App* sweep = app.add_subcommand("sweep", "optimize B over thresholds along a zeta grid");
  add_common(sweep, true);
  sweep->add_option("--zeta-lo", o.zeta_lo);
  sweep->add_option("--zeta-hi", o.zeta_hi);
  sweep->add_option("--zeta-step", o.zeta_step)->check(CLI::PositiveNumber);

  CLI::App* boundary =
      app.add_subcommand("boundary", "minimal eta_N for violation along a transmittance grid");
  add_common(boundary, false);
  boundary->add_option("--eta-x", o.eta_x)->check(CLI::Range(0.0, 1.0));
  boundary->add_option("--gain-mode", o.gain_mode)->check(CLI::IsMember({"optimized", "fixed_zero"}));
  boundary->add_option("--t-lo", o.t_lo)->check(CLI::Range(0.0, 1.0));
  boundary->add_option("--t-hi", o.t_hi)->check(CLI::Range(0.0, 1.0));
  boundary->add_option("--t-step", o.t_step)->check(CLI::PositiveNumber);

  CLI::App* table1 = app.add_subcommand("table1", "loss-tolerance summary table");
  add_common(table1, false);

  double zeta = 0.0, x0 = 0.0;
  int n0 = 0;
  CLI::App* point = app.add_subcommand("point", "evaluate one Bell setting, JSON output");
  add_common(point, true);
  point->add_option("--zeta", zeta, "parametric gain")->required()->check(CLI::NonNegativeNumber);
  point->add_option("--n0", n0, "photon-count threshold")->check(CLI::NonNegativeNumber);
  point->add_option("--x0", x0, "quadrature threshold")->required()->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) return run_sweep(o);
    if (boundary->parsed()) return run_boundary(o);
    if (table1->parsed()) return run_table1(o);
    if (point->parsed()) return run_point(o, zeta, n0, x0);
  } catch (const NoViolation& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
