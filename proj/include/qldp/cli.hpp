#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace qldp::cli {

/// Every option of every subcommand. Unused fields keep their defaults; the
/// whole struct is embedded in each output so a run can be regenerated.
struct RunConfig {
  std::string subcommand;
  std::string kind = "norm2";  // rate: norm2 | max | ball | J | iid
  std::string what;            // sample / check / weingarten selector
  double p = 2.0;
  int n = 100;
  int k = 10;
  double gamma = 0.0;          // tail: k = ceil(n^gamma) when > 0
  std::string n_list;          // tail: slope table over these n
  double r = 0.3;
  std::string r_grid;
  std::string s_grid;
  std::int64_t samples = 100000;
  std::string method = "tilted";
  std::string target = "ball";
  std::string tilt_mix;         // tail: axis | antipodal | sphere; empty picks by p
  std::uint64_t seed = 1;
  std::uint64_t frame_seed = 0;
  bool has_frame_seed = false;
  int threads = 1;
  int count = 1;
  int d = 2;
  std::string moment;
  std::string rho;
  int alpha = 2;
  int beta = 0;
  int j = 1;
  std::string u;
  double D = 1.0;
  double c = 0.1;
  int directions = 100;
  int points = 200;
  std::string format = "csv";
  std::string output;
};

nlohmann::json to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);

/// Reads the embedded config block of a CSV or JSON-lines output file.
RunConfig read_embedded_config(const std::string& path);

/// Validates and executes one run, writing to `out`.
void run(const RunConfig& cfg, std::ostream& out);

/// Exit codes: 0 success, 2 configuration error (including unknown flags),
/// 3 domain violation (including a refused tilt), 1 anything else.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "a:b:h" (inclusive, step h) or "x1,x2,...".
std::vector<double> parse_grid(const std::string& spec);

/// Monomial such as "a11^4", "a11^2*a12^2" or "a(1,2)*a(3,4)", expanded into
/// row and column index lists.
void parse_moment(const std::string& spec, std::vector<int>& rows, std::vector<int>& cols);

}  // namespace qldp::cli
