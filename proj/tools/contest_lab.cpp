// contest_lab — command-line front end for the contestlab library.
//
// Subcommands: prob, oracle, pool, dynamics, asymptotics. Inputs are flags or
// a JSON file ({"powers":[...], "n":...}); outputs are CSV (default), JSON,
// and optional SVG charts. Every output is a deterministic function of the
// full argument vector, including seeds: doubles print with 17 significant
// digits so runs diff cleanly across machines.
//
// Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 refused
// analysis (e.g. a log-log fit of all-zero gaps).

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "contestlab/contestlab.hpp"

namespace {

using nlohmann::ordered_json;

constexpr const char* kSchemaVersion = "contest-lab/1";

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt2(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt3g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

// ---------------------------------------------------------------------------
// Problem input: --powers takes either a comma-separated list of decimals or
// the path of a JSON file {"powers":[...], "n":...}. The decimal tokens are
// kept verbatim so the exact-rational path can honor "2.5" as 5/2 rather
// than as the nearest double.
// ---------------------------------------------------------------------------

struct ProblemInput {
  std::vector<double> powers;
  std::vector<std::string> tokens;
  std::optional<std::int64_t> n_from_file;
};

bool try_parse_number_list(const std::string& arg, ProblemInput& out) {
  for (const std::string& tok : split(arg, ',')) {
    if (tok.empty()) return false;
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) return false;
    out.powers.push_back(v);
    out.tokens.push_back(tok);
  }
  return true;
}

ProblemInput parse_powers_arg(const std::string& arg) {
  ProblemInput in;
  if (try_parse_number_list(arg, in)) return in;

  in = ProblemInput{};
  std::ifstream file(arg);
  if (!file) {
    throw contestlab::invalid_input_error(
        "--powers is neither a comma-separated number list nor a readable file: '" +
        arg + "'");
  }
  ordered_json j;
  try {
    j = ordered_json::parse(file);
  } catch (const std::exception& e) {
    throw contestlab::invalid_input_error("failed to parse JSON input '" + arg +
                                          "': " + e.what());
  }
  if (!j.is_object() || !j.contains("powers") || !j["powers"].is_array()) {
    throw contestlab::invalid_input_error(
        "JSON input must be an object with a \"powers\" array: '" + arg + "'");
  }
  for (const auto& el : j["powers"]) {
    if (!el.is_number()) {
      throw contestlab::invalid_input_error("\"powers\" entries must be numbers");
    }
    in.powers.push_back(el.get<double>());
    in.tokens.push_back(el.dump());  // shortest round-trip decimal
  }
  if (j.contains("n")) {
    if (!j["n"].is_number_integer()) {
      throw contestlab::invalid_input_error("\"n\" must be an integer");
    }
    in.n_from_file = j["n"].get<std::int64_t>();
  }
  return in;
}

// --n on the command line overrides the file value.
std::int64_t resolve_n(const ProblemInput& in, bool n_given, std::int64_t n_flag) {
  if (n_given) return n_flag;
  if (in.n_from_file) return *in.n_from_file;
  throw contestlab::invalid_input_error(
      "the solution count is required: pass --n or supply \"n\" in the JSON input");
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) {
    throw contestlab::invalid_input_error("cannot open output file '" + out_path + "'");
  }
  file << text;
}

// ---------------------------------------------------------------------------
// Minimal SVG line chart: axes, ticks, grid, legend, one polyline per series.
// The CSV remains the authoritative output; this is a convenience view.
// ---------------------------------------------------------------------------

struct ChartSeries {
  std::string label;
  std::vector<double> xs, ys;
};

std::string render_line_chart(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<ChartSeries>& series,
                              bool log_x, bool log_y) {
  constexpr double kW = 720, kH = 480, kL = 70, kR = 24, kT = 44, kB = 56;
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};
  constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

  const auto tx = [log_x](double v) { return log_x ? std::log10(v) : v; };
  const auto ty = [log_y](double v) { return log_y ? std::log10(v) : v; };

  double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
  bool first = true;
  for (const ChartSeries& s : series) {
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      const double x = tx(s.xs[i]), y = ty(s.ys[i]);
      if (first) {
        x_min = x_max = x;
        y_min = y_max = y;
        first = false;
      } else {
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
      }
    }
  }
  if (first) {
    x_min = y_min = 0;
    x_max = y_max = 1;
  }
  if (x_max - x_min < 1e-12) {
    x_min -= 1;
    x_max += 1;
  }
  if (y_max - y_min < 1e-12) {
    y_min -= 1;
    y_max += 1;
  }
  const double x_pad = 0.04 * (x_max - x_min), y_pad = 0.06 * (y_max - y_min);
  x_min -= x_pad;
  x_max += x_pad;
  y_min -= y_pad;
  y_max += y_pad;

  const auto px = [&](double v) {
    return kL + (tx(v) - x_min) / (x_max - x_min) * (kW - kL - kR);
  };
  const auto py = [&](double v) {
    return kH - kB - (ty(v) - y_min) / (y_max - y_min) * (kH - kT - kB);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << ' ' << kH
      << "\">\n";
  svg << "<rect width=\"" << kW << "\" height=\"" << kH
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">"
      << title << "</text>\n";

  // Ticks: 5 divisions of the transformed range, labeled in data units.
  for (int t = 0; t <= 5; ++t) {
    const double fx = x_min + (x_max - x_min) * t / 5.0;
    const double fy = y_min + (y_max - y_min) * t / 5.0;
    const double gx = kL + (kW - kL - kR) * t / 5.0;
    const double gy = kH - kB - (kH - kT - kB) * t / 5.0;
    svg << "<line x1=\"" << fmt2(kL) << "\" y1=\"" << fmt2(gy) << "\" x2=\""
        << fmt2(kW - kR) << "\" y2=\"" << fmt2(gy)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << fmt2(gx) << "\" y=\"" << fmt2(kH - kB + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << fmt3g(log_x ? std::pow(10.0, fx) : fx) << "</text>\n";
    svg << "<text x=\"" << fmt2(kL - 8) << "\" y=\"" << fmt2(gy + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << fmt3g(log_y ? std::pow(10.0, fy) : fy) << "</text>\n";
  }
  svg << "<line x1=\"" << fmt2(kL) << "\" y1=\"" << fmt2(kT) << "\" x2=\""
      << fmt2(kL) << "\" y2=\"" << fmt2(kH - kB)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg << "<line x1=\"" << fmt2(kL) << "\" y1=\"" << fmt2(kH - kB) << "\" x2=\""
      << fmt2(kW - kR) << "\" y2=\"" << fmt2(kH - kB)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg << "<text x=\"" << (kL + (kW - kL - kR) / 2) << "\" y=\"" << (kH - 14)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">"
      << x_label << "</text>\n";
  svg << "<text x=\"18\" y=\"" << (kT + (kH - kT - kB) / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 18 "
      << (kT + (kH - kT - kB) / 2) << ")\">" << y_label << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % kPaletteSize];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.6\" points=\"";
    for (std::size_t i = 0; i < series[s].xs.size(); ++i) {
      if (i) svg << ' ';
      svg << fmt2(px(series[s].xs[i])) << ',' << fmt2(py(series[s].ys[i]));
    }
    svg << "\"/>\n";
    const double ly = kT + 16 + 16 * static_cast<double>(s);
    svg << "<line x1=\"" << fmt2(kL + 10) << "\" y1=\"" << fmt2(ly - 4)
        << "\" x2=\"" << fmt2(kL + 34) << "\" y2=\"" << fmt2(ly - 4)
        << "\" stroke=\"" << color << "\" stroke-width=\"1.6\"/>\n";
    svg << "<text x=\"" << fmt2(kL + 40) << "\" y=\"" << fmt2(ly)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[s].label
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

// ---------------------------------------------------------------------------
// prob
// ---------------------------------------------------------------------------

int run_prob(const ProblemInput& in, std::int64_t n, bool exact,
             const std::string& format, const std::string& out_path) {
  const contestlab::ContestSpec spec(contestlab::PowerProfile(in.powers), n);
  contestlab::WinProbabilities wp;
  std::vector<std::string> exact_strings;
  if (exact) {
    std::vector<contestlab::Rational> xs;
    xs.reserve(in.tokens.size());
    for (const std::string& tok : in.tokens) {
      xs.push_back(contestlab::parse_decimal_rational(tok));
    }
    const auto ex = contestlab::win_probabilities_exact(xs, n);
    wp = ex.rounded();
    exact_strings.reserve(ex.p.size());
    for (const auto& q : ex.p) {
      exact_strings.push_back(contestlab::rational_to_string(q));
    }
  } else {
    wp = contestlab::win_probabilities(spec);
  }

  std::string text;
  if (format == "json") {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "prob";
    j["powers"] = in.powers;
    j["n"] = n;
    j["method"] = contestlab::to_string(wp.method);
    j["abs_error_bound"] = wp.abs_error_bound;
    j["p"] = wp.p;
    if (exact) j["p_exact"] = exact_strings;
    text = j.dump(2) + "\n";
  } else {
    std::ostringstream csv;
    csv << "player,power,p,method,abs_error_bound";
    if (exact) csv << ",p_exact";
    csv << '\n';
    for (std::size_t i = 0; i < wp.p.size(); ++i) {
      csv << (i + 1) << ',' << fmt17(in.powers[i]) << ',' << fmt17(wp.p[i])
          << ',' << contestlab::to_string(wp.method) << ','
          << fmt17(wp.abs_error_bound);
      if (exact) csv << ',' << exact_strings[i];
      csv << '\n';
    }
    text = csv.str();
  }
  write_output(text, out_path);
  return 0;
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

int run_oracle(const ProblemInput& in, std::int64_t n, std::int64_t trials,
               std::uint64_t seed, double z, bool discrete, std::int64_t big_n,
               const std::string& format, const std::string& out_path) {
  const contestlab::ContestSpec spec(contestlab::PowerProfile(in.powers), n);
  contestlab::McConfig mc;
  mc.trials = trials;
  mc.seed = seed;
  mc.confidence_z = z;
  contestlab::McEstimate est;
  if (discrete) {
    est = simulate_contest_discrete(contestlab::DiscreteContestSpec(spec, big_n), mc);
  } else {
    est = simulate_contest_continuous(spec, mc);
  }

  std::string text;
  if (format == "json") {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "oracle";
    j["model"] = discrete ? "discrete" : "continuous";
    j["powers"] = in.powers;
    j["n"] = n;
    if (discrete) j["candidate_count"] = big_n;
    j["trials"] = est.trials;
    j["seed"] = est.seed;
    j["confidence_z"] = z;
    j["p_hat"] = est.p_hat;
    j["half_width"] = est.half_width;
    j["win_count"] = est.win_count;
    text = j.dump(2) + "\n";
  } else {
    std::ostringstream csv;
    csv << "player,power,p_hat,half_width,win_count,trials,seed\n";
    for (std::size_t i = 0; i < est.p_hat.size(); ++i) {
      csv << (i + 1) << ',' << fmt17(in.powers[i]) << ',' << fmt17(est.p_hat[i])
          << ',' << fmt17(est.half_width[i]) << ',' << est.win_count[i] << ','
          << est.trials << ',' << est.seed << '\n';
    }
    text = csv.str();
  }
  write_output(text, out_path);
  return 0;
}

// ---------------------------------------------------------------------------
// pool
// ---------------------------------------------------------------------------

std::string action_to_string(const contestlab::PoolAction& a) {
  if (a.is_independent()) return "I";
  return "P" + std::to_string(*a.label + 1);
}

contestlab::ActionProfile parse_action_profile(const std::string& text,
                                               std::size_t m) {
  contestlab::ActionProfile ap;
  for (const std::string& tok : split(text, ',')) {
    if (tok == "I" || tok == "i") {
      ap.actions.push_back(contestlab::PoolAction::independent());
      continue;
    }
    char* end = nullptr;
    const long label = std::strtol(tok.c_str(), &end, 10);
    if (tok.empty() || end != tok.c_str() + tok.size() || label < 1 ||
        static_cast<std::size_t>(label) > m) {
      throw contestlab::invalid_input_error(
          "profile tokens must be pool labels 1.." + std::to_string(m) +
          " or I, got '" + tok + "'");
    }
    ap.actions.push_back(contestlab::PoolAction::pool(static_cast<std::size_t>(label - 1)));
  }
  if (ap.actions.size() != m) {
    throw contestlab::invalid_input_error("profile needs exactly one action per player");
  }
  return ap;
}

int run_pool(const ProblemInput& in, std::int64_t n, bool predict,
             const std::string& profile_text, double eps,
             const std::string& format, const std::string& out_path) {
  const contestlab::PowerProfile prof(in.powers);
  const contestlab::ContestSpec spec(prof, n);
  const std::size_t m = prof.size();
  if (predict == !profile_text.empty()) {
    throw contestlab::invalid_input_error(
        "pass exactly one of --predict and --check-profile");
  }
  const contestlab::ActionProfile ap =
      predict ? contestlab::predicted_equilibrium(prof)
              : parse_action_profile(profile_text, m);
  const contestlab::PoolPartition part = partition_from_actions(prof, ap);
  const contestlab::UtilityVector util = pool_utilities(spec, part);
  const contestlab::EquilibriumReport report = is_nash(spec, ap, eps);

  std::vector<std::size_t> group_of(m, 0);
  for (std::size_t g = 0; g < part.groups.size(); ++g) {
    for (const std::size_t i : part.groups[g]) group_of[i] = g;
  }

  std::string text;
  if (format == "json") {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "pool";
    j["powers"] = in.powers;
    j["n"] = n;
    ordered_json actions = ordered_json::array();
    for (const auto& a : ap.actions) actions.push_back(action_to_string(a));
    j["actions"] = actions;
    j["utilities"] = util.u;
    j["epsilon"] = report.epsilon;
    j["is_equilibrium"] = report.is_equilibrium;
    ordered_json violations = ordered_json::array();
    for (const auto& v : report.violations) {
      ordered_json vj;
      vj["player"] = v.player + 1;
      vj["better_action"] = action_to_string(v.better_action);
      vj["utility_gain"] = v.utility_gain;
      violations.push_back(vj);
    }
    j["violations"] = violations;
    text = j.dump(2) + "\n";
  } else {
    std::ostringstream csv;
    csv << "player,power,action,group,utility\n";
    for (std::size_t i = 0; i < m; ++i) {
      csv << (i + 1) << ',' << fmt17(in.powers[i]) << ','
          << action_to_string(ap.actions[i]) << ',' << (group_of[i] + 1) << ','
          << fmt17(util.u[i]) << '\n';
    }
    csv << "verdict," << (report.is_equilibrium ? "equilibrium" : "not-equilibrium")
        << '\n';
    for (const auto& v : report.violations) {
      csv << "violation," << (v.player + 1) << ','
          << action_to_string(v.better_action) << ',' << fmt17(v.utility_gain)
          << '\n';
    }
    text = csv.str();
  }
  write_output(text, out_path);
  return 0;
}

// ---------------------------------------------------------------------------
// dynamics
// ---------------------------------------------------------------------------

int run_dynamics(const ProblemInput& in, std::int64_t n, std::int64_t rounds,
                 double eta, const std::string& mode,
                 const std::string& pooling, std::uint64_t seed,
                 const std::string& out_path, const std::string& svg_path) {
  const contestlab::PowerProfile prof(in.powers);
  const contestlab::ContestSpec spec(prof, n);
  const std::size_t m = prof.size();

  contestlab::DynamicsConfig dcfg;
  dcfg.rounds = rounds;
  dcfg.eta = eta;
  dcfg.seed = seed;
  dcfg.mode = mode == "stochastic" ? contestlab::DynamicsMode::stochastic
                                   : contestlab::DynamicsMode::expected;
  if (pooling == "none") {
    dcfg.pooling = contestlab::PoolingPolicy::none;
  } else if (pooling == "requil") {
    dcfg.pooling = contestlab::PoolingPolicy::re_equilibrate;
  } else if (pooling.rfind("fixed:", 0) == 0) {
    dcfg.pooling = contestlab::PoolingPolicy::fixed;
    dcfg.fixed_actions = parse_action_profile(pooling.substr(6), m);
  } else {
    throw contestlab::invalid_input_error(
        "--pooling must be none, requil, or fixed:<profile>, got '" + pooling + "'");
  }

  const contestlab::DynamicsTrace trace = run(spec, dcfg);

  std::ostringstream csv;
  csv << "round";
  for (std::size_t i = 1; i <= m; ++i) csv << ",power_" << i;
  for (std::size_t i = 1; i <= m; ++i) csv << ",share_" << i;
  csv << ",max_share,herfindahl\n";
  for (const auto& rec : trace.records) {
    csv << rec.round;
    for (const double v : rec.powers) csv << ',' << fmt17(v);
    for (const double v : rec.share) csv << ',' << fmt17(v);
    csv << ',' << fmt17(rec.max_share) << ',' << fmt17(rec.herfindahl) << '\n';
  }
  write_output(csv.str(), out_path);

  if (!svg_path.empty()) {
    std::vector<ChartSeries> series(m);
    for (std::size_t i = 0; i < m; ++i) {
      series[i].label = "player " + std::to_string(i + 1);
      for (const auto& rec : trace.records) {
        series[i].xs.push_back(static_cast<double>(rec.round));
        series[i].ys.push_back(rec.share[i]);
      }
    }
    const std::string svg = render_line_chart(
        "Power shares under reinvestment", "round", "share of total power",
        series, false, false);
    std::ofstream file(svg_path, std::ios::binary);
    if (!file) {
      throw contestlab::invalid_input_error("cannot open SVG output '" + svg_path + "'");
    }
    file << svg;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// asymptotics
// ---------------------------------------------------------------------------

int run_asymptotics(const ProblemInput& in, const std::string& n_list,
                    bool fit, const std::string& out_path,
                    const std::string& svg_path) {
  const contestlab::PowerProfile prof(in.powers);
  std::vector<std::int64_t> ns;
  for (const std::string& tok : split(n_list, ',')) {
    char* end = nullptr;
    const long long v = std::strtoll(tok.c_str(), &end, 10);
    if (tok.empty() || end != tok.c_str() + tok.size()) {
      throw contestlab::invalid_input_error("--n-list must be comma-separated integers");
    }
    ns.push_back(v);
  }
  const contestlab::GapCurve curve = gap_curve(prof, ns);

  std::optional<contestlab::DecayFit> decay;
  if (fit) {
    for (const double g : curve.max_gap) {
      if (!(g > 0.0)) {
        std::cerr << "contest_lab: refusing --fit: a gap is zero (symmetric "
                     "profile), its logarithm is undefined\n";
        return 4;
      }
    }
    decay = fit_decay_slope(curve);
  }

  const std::size_t m = prof.size();
  std::ostringstream csv;
  csv << "n";
  for (std::size_t i = 1; i <= m; ++i) csv << ",gap_" << i;
  csv << ",max_gap\n";
  for (std::size_t k = 0; k < curve.n_values.size(); ++k) {
    csv << curve.n_values[k];
    for (const double g : curve.per_player_gap[k]) csv << ',' << fmt17(g);
    csv << ',' << fmt17(curve.max_gap[k]) << '\n';
  }
  if (decay) {
    csv << "fit_slope," << fmt17(decay->slope) << '\n';
    csv << "fit_intercept," << fmt17(decay->intercept) << '\n';
    csv << "fit_r_squared," << fmt17(decay->r_squared) << '\n';
  }
  write_output(csv.str(), out_path);

  if (!svg_path.empty()) {
    std::vector<ChartSeries> series(1);
    series[0].label = "max gap";
    for (std::size_t k = 0; k < curve.n_values.size(); ++k) {
      series[0].xs.push_back(static_cast<double>(curve.n_values[k]));
      series[0].ys.push_back(curve.max_gap[k]);
    }
    if (decay) {
      ChartSeries fit_line;
      fit_line.label = "fit n^" + fmt3g(decay->slope);
      for (const std::int64_t n : {curve.n_values.front(), curve.n_values.back()}) {
        fit_line.xs.push_back(static_cast<double>(n));
        fit_line.ys.push_back(std::exp(decay->intercept +
                                       decay->slope * std::log(static_cast<double>(n))));
      }
      series.push_back(std::move(fit_line));
    }
    const std::string svg =
        render_line_chart("Gap to proportional shares", "n (solutions)",
                          "max |p_i - x_i/sum x|", series, true, true);
    std::ofstream file(svg_path, std::ios::binary);
    if (!file) {
      throw contestlab::invalid_input_error("cannot open SVG output '" + svg_path + "'");
    }
    file << svg;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contest_lab — winning probabilities, pooling equilibria, and "
               "reinvestment dynamics of winner-take-all computation contests"};
  app.require_subcommand(1);

  std::string powers_arg, format = "csv", out_path;

  // prob
  auto* prob = app.add_subcommand("prob", "Winning probabilities (quadrature or exact)");
  std::int64_t prob_n = 1;
  bool prob_exact = false;
  prob->add_option("--powers", powers_arg, "comma-separated powers or JSON input file")->required();
  auto* prob_n_opt = prob->add_option("--n", prob_n, "number of solutions");
  prob->add_flag("--exact", prob_exact, "exact rational path (m*n <= 64)");
  prob->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
  prob->add_option("--out", out_path, "write output to file instead of stdout");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Seeded Monte Carlo estimate");
  std::int64_t oracle_n = 1, oracle_trials = 1000000, oracle_big_n = 0;
  std::uint64_t oracle_seed = 0;
  double oracle_z = 3.0;
  bool oracle_discrete = false;
  oracle->add_option("--powers", powers_arg, "comma-separated powers or JSON input file")->required();
  auto* oracle_n_opt = oracle->add_option("--n", oracle_n, "number of solutions");
  oracle->add_option("--trials", oracle_trials, "number of trials");
  oracle->add_option("--seed", oracle_seed, "random seed");
  oracle->add_option("--z", oracle_z, "confidence multiplier for half-widths");
  oracle->add_flag("--discrete", oracle_discrete, "finite candidate set model");
  auto* oracle_nn = oracle->add_option("--N", oracle_big_n, "candidate count (discrete model)");
  oracle->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
  oracle->add_option("--out", out_path, "write output to file instead of stdout");

  // pool
  auto* pool = app.add_subcommand("pool", "Pool-choosing game utilities and equilibria");
  std::int64_t pool_n = 1;
  std::string pool_profile;
  bool pool_predict = false;
  double pool_eps = 1e-9;
  pool->add_option("--powers", powers_arg, "comma-separated powers or JSON input file")->required();
  auto* pool_n_opt = pool->add_option("--n", pool_n, "number of solutions");
  pool->add_option("--check-profile", pool_profile, "action profile to certify, e.g. 1,1,I");
  pool->add_flag("--predict", pool_predict, "certify the theory's predicted profile");
  pool->add_option("--eps", pool_eps, "equilibrium tolerance");
  pool->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
  pool->add_option("--out", out_path, "write output to file instead of stdout");

  // dynamics
  auto* dynamics = app.add_subcommand("dynamics", "Repeated contest with reinvested rewards");
  std::int64_t dyn_n = 1, dyn_rounds = 1;
  double dyn_eta = 1.0;
  std::string dyn_mode = "expected", dyn_pooling = "none", dyn_svg;
  std::uint64_t dyn_seed = 0;
  dynamics->add_option("--powers", powers_arg, "comma-separated powers or JSON input file")->required();
  auto* dyn_n_opt = dynamics->add_option("--n", dyn_n, "number of solutions");
  dynamics->add_option("--rounds", dyn_rounds, "number of rounds")->required();
  dynamics->add_option("--eta", dyn_eta, "power gained per unit reward");
  dynamics->add_option("--mode", dyn_mode, "expected or stochastic")
      ->check(CLI::IsMember({"expected", "stochastic"}));
  dynamics->add_option("--pooling", dyn_pooling, "none, requil, or fixed:<profile>");
  dynamics->add_option("--seed", dyn_seed, "random seed (stochastic mode)");
  dynamics->add_option("--out", out_path, "write CSV trace to file instead of stdout");
  dynamics->add_option("--svg", dyn_svg, "write share chart to SVG file");

  // asymptotics
  auto* asym = app.add_subcommand("asymptotics", "Gap to proportional shares as n grows");
  std::string asym_n_list, asym_svg;
  bool asym_fit = false;
  asym->add_option("--powers", powers_arg, "comma-separated powers or JSON input file")->required();
  asym->add_option("--n-list", asym_n_list, "comma-separated solution counts")->required();
  asym->add_flag("--fit", asym_fit, "least-squares log-log decay fit");
  asym->add_option("--out", out_path, "write CSV to file instead of stdout");
  asym->add_option("--svg", asym_svg, "write log-log chart to SVG file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const ProblemInput in = parse_powers_arg(powers_arg);
    if (app.got_subcommand(prob)) {
      return run_prob(in, resolve_n(in, prob_n_opt->count() > 0, prob_n),
                      prob_exact, format, out_path);
    }
    if (app.got_subcommand(oracle)) {
      if (oracle_discrete && oracle_nn->count() == 0) {
        throw contestlab::invalid_input_error("--discrete requires --N");
      }
      if (!oracle_discrete && oracle_nn->count() > 0) {
        throw contestlab::invalid_input_error("--N only applies with --discrete");
      }
      return run_oracle(in, resolve_n(in, oracle_n_opt->count() > 0, oracle_n),
                        oracle_trials, oracle_seed, oracle_z, oracle_discrete,
                        oracle_big_n, format, out_path);
    }
    if (app.got_subcommand(pool)) {
      return run_pool(in, resolve_n(in, pool_n_opt->count() > 0, pool_n),
                      pool_predict, pool_profile, pool_eps, format, out_path);
    }
    if (app.got_subcommand(dynamics)) {
      return run_dynamics(in, resolve_n(in, dyn_n_opt->count() > 0, dyn_n),
                          dyn_rounds, dyn_eta, dyn_mode, dyn_pooling, dyn_seed,
                          out_path, dyn_svg);
    }
    if (app.got_subcommand(asym)) {
      return run_asymptotics(in, asym_n_list, asym_fit, out_path, asym_svg);
    }
    std::cerr << "contest_lab: no subcommand selected\n";
    return 2;
  } catch (const contestlab::numerical_failure_error& e) {
    std::cerr << "contest_lab: numerical failure: " << e.what()
              << " (residual " << fmt3g(e.residual()) << ")\n";
    return 3;
  } catch (const contestlab::invalid_input_error& e) {
    std::cerr << "contest_lab: invalid input: " << e.what() << '\n';
    return 2;
  } catch (const contestlab::unsupported_size_error& e) {
    std::cerr << "contest_lab: unsupported size: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "contest_lab: " << e.what() << '\n';
    return 2;
  }
}
