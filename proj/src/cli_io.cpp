#include "riswt/cli_io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "riswt/secrecy_rate.hpp"
#include "riswt/wiretap.hpp"

namespace riswt {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string command_stem(const std::string& command) {
  std::string stem = command;
  std::replace(stem.begin(), stem.end(), '-', '_');
  return stem;
}

std::string x_axis_label(const std::string& command) {
  if (command == "sweep-distance") return "Vertical distance of Eve d_v (m)";
  if (command == "sweep-power") return "Total transmit power P_t (dBm)";
  if (command == "sweep-eves") return "Number of eavesdroppers";
  return "Total transmit power P_t (dBm)";
}

Mat matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) {
    throw std::runtime_error(what + ": expected a non-empty matrix");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw std::runtime_error(what + ": ragged matrix rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
  }
  return m;
}

}  // namespace

SecuritySpec security_spec_from_json_text(const std::string& text) {
  json j = json::parse(text);
  static const char* known[] = {"bob",    "eves",   "input_dist", "rate",
                                "randomness_rate", "n_list", "trials"};
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw std::runtime_error("security spec: unknown key '" + key + "'");
  }
  SecuritySpec spec;
  spec.system.bob = make_channel(matrix_from_json(j.at("bob"), "bob"));
  for (const auto& e : j.at("eves")) {
    spec.system.eves.push_back(make_channel(matrix_from_json(e, "eves entry")));
  }
  const auto& q = j.at("input_dist");
  spec.system.input_dist.resize(static_cast<Eigen::Index>(q.size()));
  for (Eigen::Index i = 0; i < spec.system.input_dist.size(); ++i) {
    spec.system.input_dist[i] = q.at(static_cast<std::size_t>(i)).get<double>();
  }
  spec.rate = j.at("rate").get<double>();
  spec.randomness_rate = j.at("randomness_rate").get<double>();
  for (const auto& n : j.at("n_list")) spec.n_list.push_back(n.get<int>());
  if (j.contains("trials")) spec.trials = j.at("trials").get<int>();
  validate(spec.system);
  return spec;
}

SecuritySpec security_spec_from_json_file(const std::string& path) {
  return security_spec_from_json_text(read_file(path));
}

namespace {

int run_verify_security(const RunConfig& cfg) {
  const SecuritySpec spec = security_spec_from_json_file(cfg.scenario_path);
  const DecayResult decay =
      security_decay_experiment(spec.system, spec.rate, spec.randomness_rate,
                                spec.n_list, spec.trials, cfg.seed);
  if (!decay.rate_condition_ok) {
    std::cerr << "warning: rate pair violates R1 > max_j I[X;Z_j] or "
                 "R + R1 < I[X;Y]; decay is not guaranteed\n";
  }

  std::string csv = "n,trial,tv_max,p_err_joint,p_err_msg\n";
  for (const auto& row : decay.trials) {
    csv += std::to_string(row.n) + ',' + std::to_string(row.trial) + ',' +
           fmt17(row.tv_max) + ',' + fmt17(row.p_err_joint) + ',' +
           fmt17(row.p_err_msg) + '\n';
  }
  write_file(cfg.out_dir + "/decay.csv", csv);

  std::string summary = "n,mean_tv_max,mean_p_err_joint,mean_p_err_msg,skipped\n";
  std::vector<double> ns, tvs, errs;
  for (const auto& row : decay.summary) {
    summary += std::to_string(row.n) + ',' + fmt17(row.mean_tv_max) + ',' +
               fmt17(row.mean_p_err_joint) + ',' + fmt17(row.mean_p_err_msg) +
               ',' + (row.skipped ? "1" : "0") + '\n';
    if (!row.skipped && row.mean_tv_max > 0.0 && row.mean_p_err_joint > 0.0) {
      ns.push_back(row.n);
      tvs.push_back(row.mean_tv_max);
      errs.push_back(row.mean_p_err_joint);
    }
  }
  write_file(cfg.out_dir + "/decay_summary.csv", summary);

  json slopes;
  slopes["ln_tv_slope"] = nullptr;
  slopes["ln_joint_error_slope"] = nullptr;
  if (ns.size() >= 2) {
    slopes["ln_tv_slope"] = fit_log_slope(ns, tvs);
    slopes["ln_joint_error_slope"] = fit_log_slope(ns, errs);
  }
  write_file(cfg.out_dir + "/slopes.json", slopes.dump(2) + "\n");
  std::cout << "decay experiment: " << decay.trials.size() << " trials, slopes "
            << slopes.dump() << "\n";
  return 0;
}

SweepResultRow single_point_row(const Scenario& scen, const OptimizerConfig& ocfg) {
  const LinkGains gains = scenario_gains(scen);
  const double noise_w = dbm_to_watts(scen.noise_power_dbm);
  const double pt = dbm_to_watts(scen.total_power_dbm);
  const SnrCoefficients c = snr_coefficients(gains, noise_w);
  const auto [alloc, trace] = optimize(c, pt, ocfg);
  SweepResultRow row;
  row.sweep_value = scen.total_power_dbm;
  row.rate_ssoc = clamped_secrecy_rate(alloc, c);
  row.rate_no_ssoc = reference_rate_no_ssoc(pt, gains, noise_w);
  row.rate_no_ris = baseline_rate_no_ris(pt, gains, noise_w);
  row.p1 = alloc.p1;
  row.p2 = alloc.p2;
  row.iterations = static_cast<int>(trace.size());
  return row;
}

}  // namespace

std::string usage_text() {
  return
      "usage: riswt <command> --scenario <file.json> [options]\n"
      "\n"
      "commands:\n"
      "  optimize         power allocation for one scenario\n"
      "  sweep-distance   secrecy rate vs vertical distance of one Eve\n"
      "  sweep-power      secrecy rate vs total transmit power (two Eves)\n"
      "  sweep-eves       95%-rule secrecy rate vs number of Eves\n"
      "  verify-security  finite-channel decay experiment (channel-spec JSON)\n"
      "\n"
      "options:\n"
      "  --scenario FILE    scenario or channel-spec JSON (required)\n"
      "  --out DIR          output directory (default: $RISWT_OUT_DIR or ./out)\n"
      "  --seed N           random seed (default 1)\n"
      "  --max-iterations N optimizer iteration cap (default 500)\n"
      "  --tolerance X      optimizer stopping tolerance (default 1e-9)\n"
      "  --plot             also emit SVG line charts\n";
}

RunConfig parse_config(int argc, const char* const* argv) {
  RunConfig cfg;
  if (const char* env = std::getenv("RISWT_OUT_DIR")) cfg.out_dir = env;

  CLI::App app{"RIS-assisted wiretap channel security simulator", "riswt"};
  app.require_subcommand(1);

  static const char* commands[] = {"optimize", "sweep-distance", "sweep-power",
                                   "sweep-eves", "verify-security"};
  CLI::Option* max_it_opt = nullptr;
  CLI::Option* tol_opt = nullptr;
  for (const char* name : commands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--scenario", cfg.scenario_path)->required();
    sub->add_option("--out", cfg.out_dir);
    sub->add_option("--seed", cfg.seed);
    auto* mi = sub->add_option("--max-iterations", cfg.max_iterations);
    auto* tl = sub->add_option("--tolerance", cfg.tolerance);
    sub->add_flag("--plot", cfg.plot);
    sub->parse_complete_callback([&cfg, &max_it_opt, &tol_opt, sub, mi, tl] {
      cfg.command = sub->get_name();
      max_it_opt = mi;
      tol_opt = tl;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    throw usage_error(std::string(e.what()) + "\n\n" + usage_text());
  }

  if (!std::filesystem::exists(cfg.scenario_path)) {
    throw usage_error("scenario file not found: " + cfg.scenario_path);
  }

  // Validate the file now and merge optimizer settings, flags taking
  // precedence over file values over defaults.
  try {
    if (cfg.command == "verify-security") {
      (void)security_spec_from_json_file(cfg.scenario_path);
    } else {
      (void)scenario_from_json_text(read_file(cfg.scenario_path));
      const json j = json::parse(read_file(cfg.scenario_path));
      if (j.contains("optimizer")) {
        const json& opt = j.at("optimizer");
        if (opt.contains("max_iterations") && max_it_opt->count() == 0) {
          cfg.max_iterations = opt.at("max_iterations").get<int>();
        }
        if (opt.contains("tolerance") && tol_opt->count() == 0) {
          cfg.tolerance = opt.at("tolerance").get<double>();
        }
      }
    }
  } catch (const std::exception& e) {
    throw usage_error(std::string("invalid input file: ") + e.what());
  }
  return cfg;
}

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           std::span<const double> xs,
                           std::span<const double> ys) {
  const int width = 640, height = 480, margin = 60;
  double x_min = xs.empty() ? 0.0 : xs[0], x_max = x_min;
  double y_min = ys.empty() ? 0.0 : ys[0], y_max = y_min;
  for (double v : xs) { x_min = std::min(x_min, v); x_max = std::max(x_max, v); }
  for (double v : ys) { y_min = std::min(y_min, v); y_max = std::max(y_max, v); }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;

  auto px = [&](double x) {
    return margin + (x - x_min) / (x_max - x_min) * (width - 2 * margin);
  };
  auto py = [&](double y) {
    return height - margin - (y - y_min) / (y_max - y_min) * (height - 2 * margin);
  };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return std::string(buf);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-size=\"16\">" << title << "</text>\n";

  // axes
  svg << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
      << width - margin << "\" y2=\"" << height - margin
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
      << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x_min + (x_max - x_min) * i / 4.0;
    const double yv = y_min + (y_max - y_min) * i / 4.0;
    svg << "<text x=\"" << px(xv) << "\" y=\"" << height - margin + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << num(xv)
        << "</text>\n"
        << "<text x=\"" << margin - 8 << "\" y=\"" << py(yv) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << num(yv) << "</text>\n";
  }
  svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label
      << "</text>\n"
      << "<text x=\"16\" y=\"" << height / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
      << height / 2 << ")\">" << y_label << "</text>\n";

  svg << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    svg << px(xs[i]) << ',' << py(ys[i]) << ' ';
  }
  svg << "\"/>\n</svg>\n";
  return svg.str();
}

std::vector<std::string> write_outputs(std::span<const SweepResultRow> rows,
                                       const RunConfig& cfg) {
  if (rows.empty()) {
    throw std::invalid_argument("write_outputs: no rows to write");
  }
  std::filesystem::create_directories(cfg.out_dir);
  std::vector<std::string> written;

  const std::string stem = command_stem(cfg.command.empty() ? "sweep" : cfg.command);
  const std::string csv_path = cfg.out_dir + "/" + stem + ".csv";
  write_file(csv_path, sweep_csv(rows));
  written.push_back(csv_path);

  if (cfg.plot) {
    std::vector<double> xs;
    for (const auto& r : rows) xs.push_back(r.sweep_value);
    const struct {
      const char* name;
      double SweepResultRow::*field;
    } schemes[] = {{"ssoc", &SweepResultRow::rate_ssoc},
                   {"no_ssoc", &SweepResultRow::rate_no_ssoc},
                   {"no_ris", &SweepResultRow::rate_no_ris}};
    for (const auto& sch : schemes) {
      std::vector<double> ys;
      for (const auto& r : rows) ys.push_back(nats_to_bits(r.*(sch.field)));
      const std::string path = cfg.out_dir + "/" + stem + "_" + sch.name + ".svg";
      write_file(path, svg_line_chart("Secrecy rate (" + std::string(sch.name) + ")",
                                      x_axis_label(cfg.command),
                                      "Secrecy rate (bits per channel use)", xs, ys));
      written.push_back(path);
    }
  }
  return written;
}

int run(const RunConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  if (cfg.command == "verify-security") return run_verify_security(cfg);

  const Scenario base = scenario_from_json_file(cfg.scenario_path);
  OptimizerConfig ocfg;
  ocfg.max_iterations = cfg.max_iterations;
  ocfg.tolerance = cfg.tolerance;

  std::vector<SweepResultRow> rows;
  if (cfg.command == "optimize") {
    rows.push_back(single_point_row(base, ocfg));
    const auto& r = rows.front();
    std::cout << "P1 = " << r.p1 << " W, P2 = " << r.p2
              << " W, secrecy rate = " << r.rate_ssoc << " nats ("
              << nats_to_bits(r.rate_ssoc) << " bits) in " << r.iterations
              << " iterations\n";
  } else if (cfg.command == "sweep-distance") {
    std::vector<double> dv;
    for (int i = 0; i <= 50; ++i) dv.push_back(i);
    rows = sweep_eve_distance(base, dv, ocfg);
  } else if (cfg.command == "sweep-power") {
    std::vector<double> pt;
    for (int i = 0; i <= 50; i += 2) pt.push_back(i);
    rows = sweep_total_power(base, pt, ocfg);
  } else if (cfg.command == "sweep-eves") {
    const Rect region{40.0, 45.0, 30.0, 50.0};
    const int ks[] = {1, 2, 3, 4, 5, 6};
    rows = sweep_num_eves(base, region, ks, 500, cfg.seed, ocfg);
  } else {
    throw usage_error("unknown command: " + cfg.command + "\n\n" + usage_text());
  }

  const auto written = write_outputs(rows, cfg);
  for (const auto& path : written) std::cout << "wrote " << path << "\n";
  return 0;
}

}  // namespace riswt
