#include "screwbif/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "screwbif/error.hpp"

namespace screwbif {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw Error(ErrorCode::InvalidArgument, "config: cannot parse " + key + " = '" + text + "'");
  return value;
}

}  // namespace

std::string format_exact(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

void RunConfig::set(const std::string& key_in, const std::string& value_in) {
  const std::string key = trim(key_in);
  const std::string v = trim(value_in);
  if (key == "k") k = parse_number<int>(key, v);
  else if (key == "R") R = parse_number<double>(key, v);
  else if (key == "N") N = parse_number<int>(key, v);
  else if (key == "sign") sign = parse_number<int>(key, v);
  else if (key == "lambda_max") lambda_max = parse_number<double>(key, v);
  else if (key == "n_points") n_points = parse_number<int>(key, v);
  else if (key == "lambda") lambda = parse_number<double>(key, v);
  else if (key == "t_end") t_end = parse_number<double>(key, v);
  else if (key == "dt") dt = parse_number<double>(key, v);
  else if (key == "output_interval") output_interval = parse_number<double>(key, v);
  else if (key == "snapshot_every") snapshot_every = parse_number<int>(key, v);
  else if (key == "tol_inner") tol_inner = parse_number<double>(key, v);
  else if (key == "tol_outer") tol_outer = parse_number<double>(key, v);
  else if (key == "defect_max") defect_max = parse_number<double>(key, v);
  else if (key == "output_dir") output_dir = v;
  else if (key == "seed") seed = parse_number<std::uint64_t>(key, v);
  else throw Error(ErrorCode::InvalidArgument, "config: unknown key '" + key + "'");
}

void RunConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidArgument, "config: " + m); };
  if (k < 2) fail("k must be >= 2");
  if (!(R > 0.0)) fail("R must be positive");
  if (N < 16 || N % 2 != 0) fail("N must be even and >= 16");
  if (sign != 1 && sign != -1) fail("sign must be 1 or -1");
  if (!(lambda_max > 0.0)) fail("lambda_max must be positive");
  if (n_points < 4) fail("n_points must be >= 4");
  if (!(t_end >= 0.0)) fail("t_end must be non-negative");
  if (!(dt >= 0.0)) fail("dt must be non-negative (0 = automatic)");
  if (!(output_interval > 0.0)) fail("output_interval must be positive");
  if (snapshot_every < 1) fail("snapshot_every must be >= 1");
  if (!(tol_inner > 0.0) || !(tol_outer > 0.0) || !(defect_max > 0.0))
    fail("tolerances must be positive");
  if (output_dir.empty()) fail("output_dir must not be empty");
}

std::vector<std::string> RunConfig::lines() const {
  std::vector<std::string> out;
  for (const auto& [key, value] : as_map()) out.push_back(key + " = " + value);
  return out;
}

std::map<std::string, std::string> RunConfig::as_map() const {
  return {{"k", std::to_string(k)},
          {"R", format_exact(R)},
          {"N", std::to_string(N)},
          {"sign", std::to_string(sign)},
          {"lambda_max", format_exact(lambda_max)},
          {"n_points", std::to_string(n_points)},
          {"lambda", format_exact(lambda)},
          {"t_end", format_exact(t_end)},
          {"dt", format_exact(dt)},
          {"output_interval", format_exact(output_interval)},
          {"snapshot_every", std::to_string(snapshot_every)},
          {"tol_inner", format_exact(tol_inner)},
          {"tol_outer", format_exact(tol_outer)},
          {"defect_max", format_exact(defect_max)},
          {"output_dir", output_dir},
          {"seed", std::to_string(seed)}};
}

RunConfig parse_config(const std::string& text, RunConfig base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::InvalidArgument,
                  "config line " + std::to_string(lineno) + ": expected key = value");
    base.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

}  // namespace screwbif
