#include "qldp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include "qldp/errors.hpp"
#include "qldp/geometry.hpp"
#include "qldp/montecarlo.hpp"
#include "qldp/pgauss.hpp"
#include "qldp/rates.hpp"
#include "qldp/weingarten.hpp"

namespace qldp::cli {

#define QLDP_CONFIG_FIELDS(X)                                                                  \
  X(subcommand) X(kind) X(what) X(p) X(n) X(k) X(gamma) X(n_list) X(r) X(r_grid) X(s_grid)     \
  X(samples) X(method) X(target) X(tilt_mix) X(seed) X(frame_seed) X(has_frame_seed) X(threads) X(count)   \
  X(d) X(moment) X(rho) X(alpha) X(beta) X(j) X(u) X(D) X(c) X(directions) X(points)           \
  X(format) X(output)

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j;
#define QLDP_PUT(field) j[#field] = cfg.field;
  QLDP_CONFIG_FIELDS(QLDP_PUT)
#undef QLDP_PUT
  return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig cfg;
#define QLDP_GET(field) \
  if (j.contains(#field)) j.at(#field).get_to(cfg.field);
  QLDP_CONFIG_FIELDS(QLDP_GET)
#undef QLDP_GET
  return cfg;
}

RunConfig read_embedded_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open replay file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw InvalidParameter("replay file is empty");
  static const std::string prefix = "# config: ";
  try {
    if (line.rfind(prefix, 0) == 0) return config_from_json(nlohmann::json::parse(line.substr(prefix.size())));
    const auto obj = nlohmann::json::parse(line);
    if (!obj.contains("config")) throw InvalidParameter("replay file has no embedded config");
    return config_from_json(obj.at("config"));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("malformed embedded config: ") + e.what());
  }
}

namespace {

double snap(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

std::vector<double> parse_list(const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InvalidParameter("not a number: '" + item + "'");
    }
    if (used != item.size()) throw InvalidParameter("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  if (spec.find(':') == std::string::npos) {
    auto v = parse_list(spec);
    if (v.empty()) throw InvalidParameter("empty grid");
    return v;
  }
  std::string s = spec;
  for (char& ch : s)
    if (ch == ':') ch = ',';
  const auto parts = parse_list(s);
  if (parts.size() != 3) throw InvalidParameter("grid must look like start:stop:step");
  const double a = parts[0], b = parts[1], h = parts[2];
  if (!(h > 0.0) || b < a) throw InvalidParameter("grid needs step > 0 and stop >= start");
  const auto count = static_cast<long>(std::floor((b - a) / h + 1e-9)) + 1;
  if (count > 1000000) throw InvalidParameter("grid too large");
  std::vector<double> out;
  for (long i = 0; i < count; ++i) out.push_back(snap(a + static_cast<double>(i) * h));
  return out;
}

void parse_moment(const std::string& spec, std::vector<int>& rows, std::vector<int>& cols) {
  rows.clear();
  cols.clear();
  static const std::regex factor(
      R"(a(?:(\d)(\d)|\((\d+),(\d+)\)|_(\d+)_(\d+))(?:\^(\d+))?)");
  std::string s;
  for (char ch : spec)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  std::stringstream ss(s);
  std::string term;
  while (std::getline(ss, term, '*')) {
    std::smatch m;
    if (!std::regex_match(term, m, factor)) {
      throw InvalidParameter("cannot parse moment factor '" + term + "'");
    }
    int i = 0, j = 0;
    for (int g = 1; g <= 5; g += 2) {
      if (m[g].matched) {
        i = std::stoi(m[g]);
        j = std::stoi(m[g + 1]);
      }
    }
    const int e = m[7].matched ? std::stoi(m[7]) : 1;
    for (int t = 0; t < e; ++t) {
      rows.push_back(i);
      cols.push_back(j);
    }
  }
  if (rows.empty()) throw InvalidParameter("empty moment");
}

namespace {

// The destination path is not part of the run, so replays reproduce the file byte for byte.
nlohmann::json embedded(const RunConfig& cfg) {
  nlohmann::json j = to_json(cfg);
  j.erase("output");
  return j;
}

void write_config_header(std::ostream& out, const RunConfig& cfg) {
  out << "# config: " << embedded(cfg).dump() << '\n';
}

void emit_json(std::ostream& out, nlohmann::json obj, const RunConfig& cfg) {
  obj["config"] = embedded(cfg);
  out << obj.dump() << '\n';
}

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

std::vector<double> parse_u(const RunConfig& cfg, int k) {
  if (cfg.u.empty()) {
    std::vector<double> e(static_cast<std::size_t>(k), 0.0);
    if (k > 0) e[0] = 1.0;
    return e;
  }
  return parse_list(cfg.u);
}

void run_rate(const RunConfig& cfg, std::ostream& out) {
  const LogMGFOracle oracle(cfg.p);
  const std::vector<double> rs = cfg.r_grid.empty() ? std::vector<double>{cfg.r} : parse_grid(cfg.r_grid);
  std::vector<RateCurveRow> rows;
  if (cfg.kind == "J") {
    const std::vector<double> ss = cfg.s_grid.empty() ? std::vector<double>{1.0} : parse_grid(cfg.s_grid);
    for (double r : rs)
      for (double s : ss) rows.push_back({cfg.p, r, s, legendre_J(r, s, oracle)});
  } else {
    const std::vector<double> w = cfg.u.empty() ? std::vector<double>{} : parse_list(cfg.u);
    for (double r : rs) {
      RateResult res;
      if (cfg.kind == "norm2") res = rate_norm2(r, oracle);
      else if (cfg.kind == "max") res = rate_max(r, oracle);
      else if (cfg.kind == "ball") res = rate_ball(w, r, oracle);
      else if (cfg.kind == "iid") res = rate_iid_norm(r, oracle);
      else throw InvalidParameter("unknown rate kind '" + cfg.kind + "'");
      rows.push_back({cfg.p, r, std::numeric_limits<double>::quiet_NaN(), res});
    }
  }
  if (cfg.format == "csv") {
    write_config_header(out, cfg);
    write_rate_csv(out, rows);
    return;
  }
  for (const auto& row : rows) {
    nlohmann::json j;
    j["p"] = row.p;
    j["r"] = row.r;
    j["s"] = number_or_null(row.s);
    j["value"] = number_or_null(row.result.value);
    j["v_star"] = number_or_null(row.result.v_star);
    j["c_star"] = number_or_null(row.result.c_star);
    j["s_star"] = number_or_null(row.result.s_star);
    j["status"] = to_string(row.result.status);
    emit_json(out, j, cfg);
  }
}

void write_vector_row(std::ostream& out, const double* v, Eigen::Index len) {
  for (Eigen::Index i = 0; i < len; ++i) {
    if (i) out << ',';
    out << v[i];
  }
  out << '\n';
}

void run_sample(const RunConfig& cfg, std::ostream& out) {
  if (cfg.count < 1) throw InvalidParameter("count must be >= 1");
  const std::string what = cfg.what.empty() ? "sphere" : cfg.what;
  const bool csv = cfg.format == "csv";
  if (csv) write_config_header(out, cfg);
  const auto old = out.precision(17);
  if (what == "frame") {
    Rng rng = make_stream(cfg.seed, 0);
    const StiefelFrame frame = haar_frame(cfg.n, cfg.k, rng);
    if (csv) {
      write_frame_csv(out, frame);
    } else {
      nlohmann::json rows = nlohmann::json::array();
      for (int i = 0; i < frame.n(); ++i) {
        std::vector<double> row(frame.k());
        for (int j = 0; j < frame.k(); ++j) row[j] = frame.cols()(i, j);
        rows.push_back(row);
      }
      emit_json(out, {{"frame", rows}}, cfg);
    }
  } else if (what == "sphere" || what == "ball" || what == "pgauss") {
    Rng rng = make_stream(cfg.seed, 1);
    const int dim = what == "pgauss" ? 1 : cfg.n;
    if (csv) {
      for (int i = 0; i < dim; ++i) out << (i ? ",x" : "x") << i + 1;
      out << '\n';
    }
    for (int s = 0; s < cfg.count; ++s) {
      Eigen::VectorXd x = what == "sphere" ? sample_sphere(cfg.n, cfg.p, rng)
                          : what == "ball" ? sample_ball(cfg.n, cfg.p, rng)
                                           : Eigen::VectorXd::Constant(1, sample_pgauss(cfg.p, rng));
      if (csv) write_vector_row(out, x.data(), x.size());
      else emit_json(out, {{"point", std::vector<double>(x.data(), x.data() + x.size())}}, cfg);
    }
  } else if (what == "projection") {
    Rng frame_rng = make_stream(cfg.has_frame_seed ? cfg.frame_seed : cfg.seed, 0);
    const StiefelFrame frame = haar_frame(cfg.n, cfg.k, frame_rng);
    Rng rng = make_stream(cfg.seed, 1);
    if (csv) {
      out << 'r';
      for (int i = 0; i < cfg.k; ++i) out << ",w" << i + 1;
      out << '\n';
    }
    for (int s = 0; s < cfg.count; ++s) {
      const OrderedProjection x = pi_map(project(frame, sample_sphere(cfg.n, cfg.p, rng)));
      if (csv) {
        out << x.r;
        for (double v : x.w) out << ',' << v;
        out << '\n';
      } else {
        emit_json(out, {{"r", x.r}, {"w", x.w}}, cfg);
      }
    }
  } else {
    throw InvalidParameter("unknown sample kind '" + what + "'");
  }
  out.precision(old);
}

int k_for(const RunConfig& cfg, int n) {
  if (cfg.gamma > 0.0) {
    if (!(cfg.gamma < 1.0)) throw InvalidParameter("gamma must lie in (0, 1)");
    const double x = std::pow(static_cast<double>(n), cfg.gamma);
    const double rounded = std::round(x);
    return std::abs(x - rounded) < 1e-9 ? static_cast<int>(rounded) : static_cast<int>(std::ceil(x));
  }
  return cfg.k;
}

void run_tail(const RunConfig& cfg, std::ostream& out) {
  const LogMGFOracle oracle(cfg.p);
  if (!cfg.n_list.empty()) {
    std::vector<int> ns;
    for (double v : parse_list(cfg.n_list)) {
      if (v < 1 || v != std::floor(v)) throw InvalidParameter("n-list entries must be positive integers");
      ns.push_back(static_cast<int>(v));
    }
    const double gamma = cfg.gamma > 0.0 ? cfg.gamma : 0.5;
    const auto rows = ldp_slope_table(ns, gamma, cfg.p, cfg.r, cfg.samples, cfg.seed, oracle, cfg.threads);
    if (cfg.format == "csv") {
      write_config_header(out, cfg);
      write_slope_csv(out, rows);
    } else {
      for (const auto& r : rows) {
        emit_json(out,
                  {{"n", r.n}, {"k", r.k}, {"log_rate", r.log_rate}, {"stderr", r.std_error},
                   {"rate_prediction", r.rate_prediction}, {"p_hat", r.p_hat}},
                  cfg);
      }
    }
    return;
  }
  TailOptions o;
  o.n = cfg.n;
  o.k = k_for(cfg, cfg.n);
  o.p = cfg.p;
  o.r = cfg.r;
  o.samples = cfg.samples;
  o.method = parse_method(cfg.method);
  o.target = parse_target(cfg.target);
  if (!cfg.tilt_mix.empty()) o.mix = parse_mix(cfg.tilt_mix);
  o.seed = cfg.seed;
  if (cfg.has_frame_seed) o.frame_seed = cfg.frame_seed;
  o.threads = cfg.threads;
  const TailEstimate e = estimate_tail(o, oracle);
  const nlohmann::json j = e.to_json();
  if (cfg.format == "json") {
    emit_json(out, j, cfg);
    return;
  }
  write_config_header(out, cfg);
  const auto old = out.precision(17);
  out << "method,target,n,k,p,r,samples,p_hat,log_rate,stderr,ess,hits,seed,frame_seed\n";
  out << j["method"].get<std::string>() << ',' << j["target"].get<std::string>() << ',' << e.n
      << ',' << e.k << ',' << e.p << ',' << e.r << ',' << e.samples << ',' << e.p_hat << ','
      << e.log_rate << ',' << e.std_error << ',' << e.ess << ',' << e.hits << ',' << e.seed << ','
      << e.frame_seed << '\n';
  out.precision(old);
}

void emit_key_values(std::ostream& out, const nlohmann::json& obj, const RunConfig& cfg) {
  if (cfg.format == "json") {
    emit_json(out, obj, cfg);
    return;
  }
  write_config_header(out, cfg);
  out << "key,value\n";
  for (const auto& [key, value] : obj.items()) out << key << ',' << value.dump() << '\n';
}

Partition parse_partition(const std::string& s) {
  Partition rho;
  for (double v : parse_list(s)) {
    if (v < 1 || v != std::floor(v)) throw InvalidParameter("partition parts must be positive integers");
    rho.push_back(static_cast<int>(v));
  }
  std::sort(rho.begin(), rho.end(), std::greater<>());
  return rho;
}

void run_weingarten(const RunConfig& cfg, std::ostream& out) {
  std::string what = cfg.what;
  if (what.empty()) what = !cfg.moment.empty() ? "moment" : !cfg.rho.empty() ? "asymptotic" : "table";
  if (what == "moment") {
    std::vector<int> rows, cols;
    parse_moment(cfg.moment, rows, cols);
    emit_key_values(out, {{"moment", cfg.moment}, {"n", cfg.n}, {"value", haar_moment(rows, cols, cfg.n)}},
                    cfg);
  } else if (what == "asymptotic") {
    const Partition rho = parse_partition(cfg.rho);
    emit_key_values(out, {{"rho", rho}, {"n", cfg.n}, {"magnitude", weingarten_asymptotic(rho, cfg.n)}},
                    cfg);
  } else if (what == "table") {
    const WeingartenTable& t = weingarten_table(cfg.d, cfg.n);
    if (cfg.format == "json") {
      emit_json(out, t.to_json(), cfg);
      return;
    }
    write_config_header(out, cfg);
    const auto old = out.precision(17);
    out << "m,nn,gram,wg,coset\n";
    for (std::size_t a = 0; a < t.partitions.size(); ++a) {
      for (std::size_t b = 0; b < t.partitions.size(); ++b) {
        const Partition& rho = t.coset(static_cast<int>(a), static_cast<int>(b));
        out << '"' << t.partitions[a].to_string() << "\",\"" << t.partitions[b].to_string() << "\","
            << t.gram(a, b) << ',' << t.wg(a, b) << ",\"";
        for (std::size_t i = 0; i < rho.size(); ++i) out << (i ? " " : "") << rho[i];
        out << "\"\n";
      }
    }
    out.precision(old);
  } else {
    throw InvalidParameter("unknown weingarten query '" + what + "'");
  }
}

nlohmann::json duality_check(const RunConfig& cfg) {
  const LogMGFOracle oracle(cfg.p);
  Rng rng = make_stream(cfg.seed, 0);
  std::uniform_real_distribution<double> ud(0.05, 2.0);
  std::uniform_real_distribution<double> uc(-0.5, 0.8 * oracle.threshold());
  double arg_err = 0.0, value_err = 0.0;
  int failures = 0;
  for (int i = 0; i < cfg.points; ++i) {
    const double D = ud(rng), c = uc(rng);
    const LambdaDerivs l = lambda_D(D, c, oracle);
    const RateResult J = legendre_J(l.dD, l.dc, oracle);
    if (!J.finite()) {
      ++failures;
      continue;
    }
    arg_err = std::max({arg_err, std::abs(J.v_star - D), std::abs(J.c_star - c)});
    value_err = std::max(value_err, std::abs(J.value - (D * l.dD + c * l.dc - l.value)));
  }
  return {{"points", cfg.points}, {"max_argmax_error", arg_err}, {"max_value_error", value_err},
          {"failures", failures}};
}

void run_check(const RunConfig& cfg, std::ostream& out) {
  const std::string what = cfg.what.empty() ? "moment" : cfg.what;
  if (what == "gaussian") {
    const LogMGFOracle oracle(cfg.p);
    const double stat = gaussian_approx_stat(cfg.n, k_for(cfg, cfg.n), cfg.D, cfg.c, cfg.directions,
                                             oracle, cfg.seed);
    emit_key_values(out, {{"stat", stat}}, cfg);
  } else if (what == "tightness") {
    const LogMGFOracle oracle(cfg.p);
    emit_key_values(out, tightness_check(cfg.n, k_for(cfg, cfg.n), cfg.p, cfg.samples, cfg.seed, oracle,
                                         cfg.threads).to_json(),
                    cfg);
  } else if (what == "moment") {
    const auto u = parse_u(cfg, cfg.k);
    const MomentMatch m = moment_match_check(cfg.alpha, cfg.beta, cfg.j, u, cfg.n, cfg.k);
    emit_key_values(out, {{"exact", m.exact}, {"gaussian", m.gaussian}, {"ratio", m.ratio}}, cfg);
  } else if (what == "duality") {
    emit_key_values(out, duality_check(cfg), cfg);
  } else {
    throw InvalidParameter("unknown check '" + what + "'");
  }
}

std::filesystem::path resolve_output(const std::string& output) {
  std::filesystem::path path(output);
  if (path.is_relative()) {
    if (const char* dir = std::getenv("QLDP_OUTPUT_DIR"); dir && *dir) path = std::filesystem::path(dir) / path;
  }
  return path;
}

}  // namespace

void run(const RunConfig& cfg, std::ostream& out) {
  if (cfg.format != "csv" && cfg.format != "json") throw InvalidParameter("format must be csv or json");
  if (cfg.threads < 1) throw InvalidParameter("threads must be >= 1");
  if (cfg.subcommand == "rate") run_rate(cfg, out);
  else if (cfg.subcommand == "sample") run_sample(cfg, out);
  else if (cfg.subcommand == "tail") run_tail(cfg, out);
  else if (cfg.subcommand == "weingarten") run_weingarten(cfg, out);
  else if (cfg.subcommand == "check") run_check(cfg, out);
  else throw InvalidParameter("unknown subcommand '" + cfg.subcommand + "'");
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string replay;
  std::string replay_output;

  CLI::App app{"Large deviations of random projections of l_p balls: rates, sampling and checks", "qldp"};
  app.set_config("--config", "", "Read options from a TOML/INI file mirroring the flags");
  app.add_option("--replay", replay, "Regenerate a run from the config embedded in an output file");
  app.add_option("--replay-output", replay_output, "Output path for --replay (default stdout)");
  app.require_subcommand(0, 1);

  CLI::Option* frame_seed_opt = nullptr;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "Exponent p of the p-generalized normal law")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "Worker threads")->capture_default_str();
    sub->add_option("--format", cfg.format, "csv or json")->capture_default_str();
    sub->add_option("--output", cfg.output, "Output file (default stdout; relative paths use $QLDP_OUTPUT_DIR)");
  };

  CLI::App* rate = app.add_subcommand("rate", "Rate-function curves");
  common(rate);
  rate->add_option("--kind", cfg.kind, "norm2 | max | ball | J | iid")->capture_default_str();
  rate->add_option("--r", cfg.r, "Single radius")->capture_default_str();
  rate->add_option("--r-grid", cfg.r_grid, "start:stop:step or comma list");
  rate->add_option("--s-grid", cfg.s_grid, "s values for --kind J");
  rate->add_option("--u", cfg.u, "w vector for --kind ball (comma list)");

  CLI::App* sample = app.add_subcommand("sample", "Dump samples");
  common(sample);
  sample->add_option("--what", cfg.what, "sphere | ball | pgauss | frame | projection");
  sample->add_option("--n", cfg.n)->capture_default_str();
  sample->add_option("--k", cfg.k)->capture_default_str();
  sample->add_option("--count", cfg.count)->capture_default_str();
  CLI::Option* sample_frame_seed = sample->add_option("--frame-seed", cfg.frame_seed);

  CLI::App* tail = app.add_subcommand("tail", "Tail probabilities and LDP slope tables");
  common(tail);
  tail->add_option("--n", cfg.n)->capture_default_str();
  tail->add_option("--k", cfg.k)->capture_default_str();
  tail->add_option("--gamma", cfg.gamma, "Use k = ceil(n^gamma)");
  tail->add_option("--n-list", cfg.n_list, "Comma list of n for a slope table");
  tail->add_option("--r", cfg.r)->capture_default_str();
  tail->add_option("--samples", cfg.samples)->capture_default_str();
  tail->add_option("--method", cfg.method, "naive | tilted")->capture_default_str();
  tail->add_option("--target", cfg.target, "sphere | ball | iid")->capture_default_str();
  tail->add_option("--tilt-mix", cfg.tilt_mix, "axis | antipodal | sphere (default: sphere at p = 2, else antipodal)");
  frame_seed_opt = tail->add_option("--frame-seed", cfg.frame_seed, "Seed of the quenched frame (default --seed)");

  CLI::App* wg = app.add_subcommand("weingarten", "Haar moments and Weingarten tables");
  common(wg);
  wg->add_option("--what", cfg.what, "moment | table | asymptotic");
  wg->add_option("--moment", cfg.moment, "Monomial such as a11^4 or a11^2*a12^2");
  wg->add_option("--rho", cfg.rho, "Partition for the asymptotic, e.g. 2,1");
  wg->add_option("--n", cfg.n)->capture_default_str();
  wg->add_option("--d", cfg.d)->capture_default_str();

  CLI::App* check = app.add_subcommand("check", "Statistical and numerical checks");
  common(check);
  check->add_option("--what", cfg.what, "gaussian | tightness | moment | duality");
  check->add_option("--n", cfg.n)->capture_default_str();
  check->add_option("--k", cfg.k)->capture_default_str();
  check->add_option("--gamma", cfg.gamma, "Use k = ceil(n^gamma)");
  check->add_option("--samples", cfg.samples)->capture_default_str();
  check->add_option("--D", cfg.D)->capture_default_str();
  check->add_option("--c", cfg.c)->capture_default_str();
  check->add_option("--directions", cfg.directions)->capture_default_str();
  check->add_option("--points", cfg.points)->capture_default_str();
  check->add_option("--alpha", cfg.alpha)->capture_default_str();
  check->add_option("--beta", cfg.beta)->capture_default_str();
  check->add_option("--j", cfg.j)->capture_default_str();
  check->add_option("--u", cfg.u, "Comma list of length k (default e1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (!replay.empty()) {
      if (!app.get_subcommands().empty()) throw InvalidParameter("--replay takes no subcommand");
      cfg = read_embedded_config(replay);
      cfg.output = replay_output;
    } else {
      if (app.get_subcommands().empty()) {
        err << "error: a subcommand is required\n\n" << app.help();
        return 2;
      }
      cfg.subcommand = app.get_subcommands().front()->get_name();
      cfg.has_frame_seed = frame_seed_opt->count() > 0 || sample_frame_seed->count() > 0;
    }

    if (cfg.output.empty()) {
      run(cfg, out);
    } else {
      const auto path = resolve_output(cfg.output);
      std::ofstream file(path);
      if (!file) throw InvalidParameter("cannot open output file '" + path.string() + "'");
      run(cfg, file);
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    err << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    err << "domain violation: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace qldp::cli
