#include "blpp/config.hpp"

#include <fstream>
#include <sstream>

namespace blpp {

void RunConfig::validate() const {
  field.validate();
  if (eta_factor <= 0.0) throw std::invalid_argument("config: eta must be > 0");
  if (!(gamma < delta_dir)) throw std::invalid_argument("config: gamma must be < delta_dir");
  if (gamma <= 0.0) throw std::invalid_argument("config: gamma must be > 0");
  if (tol <= 0.0) throw std::invalid_argument("config: tol must be > 0");
  if (match_radius < 0) throw std::invalid_argument("config: match_radius must be >= 0");
  if (seeds.empty()) throw std::invalid_argument("config: seed matrix is empty");
  for (int k : horizons) {
    if (k <= field.level_min || k > field.level_max)
      throw std::invalid_argument("config: horizon outside the field window");
    if (delta_high() * k > field.t_max)
      throw std::invalid_argument("config: target time outside the field window");
  }
  for (double theta : thetas)
    if (theta <= 0.0) throw std::invalid_argument("config: theta must be > 0");
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

template <typename T>
std::vector<T> parse_list(const std::string& value) {
  std::vector<T> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::stringstream conv(item);
    T v;
    conv >> v;
    if (conv.fail()) throw std::invalid_argument("config: bad list entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

void apply_config_line(RunConfig& c, const std::string& section, const std::string& key,
                       const std::string& value) {
  const std::string k = section.empty() ? key : section + "." + key;
  auto as_d = [&] { return std::stod(value); };
  auto as_i = [&] { return std::stoi(value); };

  if (k == "field.level_min") c.field.level_min = as_i();
  else if (k == "field.level_max") c.field.level_max = as_i();
  else if (k == "field.t_min") c.field.t_min = as_d();
  else if (k == "field.t_max") c.field.t_max = as_d();
  else if (k == "field.delta") c.field.delta = as_d();
  else if (k == "field.seed") c.field.seed = std::stoull(value);
  else if (k == "directions.thetas") c.thetas = parse_list<double>(value);
  else if (k == "directions.gamma") c.gamma = as_d();
  else if (k == "directions.delta_dir") c.delta_dir = as_d();
  else if (k == "directions.eta") c.eta_factor = as_d();
  else if (k == "tolerances.tol") c.tol = as_d();
  else if (k == "tolerances.eps_factor") c.eps_factor = as_d();
  else if (k == "tolerances.match_radius") c.match_radius = as_i();
  else if (k == "tolerances.band_factor") c.band_factor = as_d();
  else if (k == "tolerances.iso_gap") c.iso_gap = as_i();
  else if (k == "probes.horizons") c.horizons = parse_list<int>(value);
  else if (k == "probes.time_frac") c.probe_time_frac = as_d();
  else if (k == "probes.level_frac") c.probe_level_frac = as_d();
  else if (k == "verify.seeds") c.seeds = parse_list<std::uint64_t>(value);
  else if (k == "verify.out_dir") c.out_dir = value;
  else if (k == "verify.smoke") c.smoke = value == "true" || value == "1";
  else throw std::invalid_argument("config: unknown key '" + k + "'");
}

RunConfig parse_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key = value");
    apply_config_line(base, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

std::string dump_config(const RunConfig& c) {
  std::ostringstream out;
  out.precision(17);
  auto list_d = [](const std::vector<double>& xs) {
    std::ostringstream s;
    for (std::size_t i = 0; i < xs.size(); ++i) s << (i ? ", " : "") << xs[i];
    return s.str();
  };
  auto list_i = [](const auto& xs) {
    std::ostringstream s;
    for (std::size_t i = 0; i < xs.size(); ++i) s << (i ? ", " : "") << xs[i];
    return s.str();
  };
  out << "[field]\n";
  out << "level_min = " << c.field.level_min << "\n";
  out << "level_max = " << c.field.level_max << "\n";
  out << "t_min = " << c.field.t_min << "\n";
  out << "t_max = " << c.field.t_max << "\n";
  out << "delta = " << c.field.delta << "\n";
  out << "seed = " << c.field.seed << "\n\n";
  out << "[directions]\n";
  out << "thetas = " << list_d(c.thetas) << "\n";
  out << "gamma = " << c.gamma << "\n";
  out << "delta_dir = " << c.delta_dir << "\n";
  out << "eta = " << c.eta_factor << "\n\n";
  out << "[tolerances]\n";
  out << "tol = " << c.tol << "\n";
  out << "eps_factor = " << c.eps_factor << "\n";
  out << "match_radius = " << c.match_radius << "\n";
  out << "band_factor = " << c.band_factor << "\n";
  out << "iso_gap = " << c.iso_gap << "\n\n";
  out << "[probes]\n";
  out << "horizons = " << list_i(c.horizons) << "\n";
  out << "time_frac = " << c.probe_time_frac << "\n";
  out << "level_frac = " << c.probe_level_frac << "\n\n";
  out << "[verify]\n";
  out << "seeds = " << list_i(c.seeds) << "\n";
  out << "out_dir = " << c.out_dir << "\n";
  out << "smoke = " << (c.smoke ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace blpp
