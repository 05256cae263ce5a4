#include "ksg/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace ksg::cli {

namespace {

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  std::string where;      ///< "file:line:col" of the value, or "--set ..."
  std::string key_where;  ///< same, pointing at the key
};

constexpr const char* kSections[] = {"grid", "kernel", "ic", "time", "output", "sweep"};

bool known_section(const std::string& s) {
  for (const char* name : kSections)
    if (s == name) return true;
  return false;
}

std::size_t skip_space(const std::string& s, std::size_t i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  return i;
}

std::string trim(const std::string& s) {
  const std::size_t b = skip_space(s, 0);
  std::size_t e = s.size();
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

std::string location(const std::string& source, int line, std::size_t col) {
  return source + ":" + std::to_string(line) + ":" + std::to_string(col + 1);
}

std::vector<Entry> tokenize(const std::string& text, const std::string& source) {
  std::vector<Entry> out;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::size_t cut = raw.find_first_of("#;");
    const std::string body = cut == std::string::npos ? raw : raw.substr(0, cut);
    const std::size_t start = skip_space(body, 0);
    if (trim(body).empty()) continue;
    if (body[start] == '[') {
      const std::size_t close = body.find(']', start);
      if (close == std::string::npos)
        throw ConfigError(location(source, line, start) + ": unterminated section header");
      if (!trim(body.substr(close + 1)).empty())
        throw ConfigError(location(source, line, close + 1) + ": unexpected text after section header");
      section = trim(body.substr(start + 1, close - start - 1));
      if (!known_section(section))
        throw ConfigError(location(source, line, start + 1) + ": unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(location(source, line, start) + ": expected key = value");
    if (section.empty()) throw ConfigError(location(source, line, start) + ": key outside of any section");
    const std::string key = trim(body.substr(0, eq));
    if (key.empty()) throw ConfigError(location(source, line, start) + ": missing key before '='");
    const std::size_t vcol = skip_space(body, eq + 1);
    const std::string value = trim(body.substr(eq + 1));
    if (value.empty()) throw ConfigError(location(source, line, vcol) + ": missing value for " + section + "." + key);
    for (const auto& e : out)
      if (e.section == section && e.key == key)
        throw ConfigError(location(source, line, start) + ": duplicate key " + section + "." + key);
    out.push_back({section, key, value, location(source, line, vcol), location(source, line, start)});
  }
  return out;
}

void apply_override(std::vector<Entry>& entries, const std::string& ov) {
  const std::string where = "--set " + ov;
  const std::size_t eq = ov.find('=');
  if (eq == std::string::npos) throw ConfigError(where + ": expected section.key=value");
  const std::string path = trim(ov.substr(0, eq));
  const std::string value = trim(ov.substr(eq + 1));
  const std::size_t dot = path.find('.');
  if (dot == std::string::npos) throw ConfigError(where + ": key must be written as section.key");
  const std::string section = path.substr(0, dot), key = path.substr(dot + 1);
  if (!known_section(section)) throw ConfigError(where + ": unknown section [" + section + "]");
  if (value.empty()) throw ConfigError(where + ": missing value");
  for (auto& e : entries)
    if (e.section == section && e.key == key) {
      e.value = value;
      e.where = where;
      return;
    }
  entries.push_back({section, key, value, where, where});
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

double to_double(const Entry& e, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty())
    throw ConfigError(e.where + ": " + e.section + "." + e.key + ": expected a number, got '" + text + "'");
  return v;
}

int to_int(const Entry& e, const std::string& text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ConfigError(e.where + ": " + e.section + "." + e.key + ": expected an integer, got '" + text + "'");
  return v;
}

std::vector<double> to_doubles(const Entry& e) {
  std::vector<double> out;
  for (const auto& item : split_list(e.value)) out.push_back(to_double(e, item));
  return out;
}

std::vector<int> to_ints(const Entry& e) {
  std::vector<int> out;
  for (const auto& item : split_list(e.value)) out.push_back(to_int(e, item));
  return out;
}

initial::Affine to_affine(const Entry& e) {
  const auto v = to_doubles(e);
  if (v.empty() || v.size() > 2)
    throw ConfigError(e.where + ": " + e.section + "." + e.key + ": expected 'c0' or 'c0, c1'");
  return {v[0], v.size() == 2 ? v[1] : 0.0};
}

struct Pending {
  std::optional<int> radial, angular_q, angular_sigma;
};

using Handler = std::function<void(Config&, Pending&, const Entry&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"grid.S", [](Config& c, Pending&, const Entry& e) { c.run.S = to_double(e, e.value); }},
      {"grid.N", [](Config& c, Pending&, const Entry& e) { c.run.N = to_int(e, e.value); }},
      {"grid.K", [](Config& c, Pending&, const Entry& e) { c.run.K = to_int(e, e.value); }},
      {"grid.z_quad_order", [](Config& c, Pending&, const Entry& e) { c.run.z_quad_order = to_int(e, e.value); }},
      {"kernel.gamma", [](Config& c, Pending&, const Entry& e) { c.run.kernel.gamma = to_double(e, e.value); }},
      {"kernel.b", [](Config& c, Pending&, const Entry& e) { c.run.kernel.b = to_doubles(e); }},
      {"kernel.angular_constant",
       [](Config& c, Pending&, const Entry& e) { c.run.kernel.angular_constant = to_double(e, e.value); }},
      {"kernel.radial_order", [](Config&, Pending& p, const Entry& e) { p.radial = to_int(e, e.value); }},
      {"kernel.angular_order_q", [](Config&, Pending& p, const Entry& e) { p.angular_q = to_int(e, e.value); }},
      {"kernel.angular_order_sigma",
       [](Config&, Pending& p, const Entry& e) { p.angular_sigma = to_int(e, e.value); }},
      {"ic.family",
       [](Config& c, Pending&, const Entry& e) {
         if (e.value == "bkw")
           c.run.ic.family = initial::Family::Bkw;
         else if (e.value == "bigaussian")
           c.run.ic.family = initial::Family::BiGaussian;
         else
           throw ConfigError(e.where + ": ic.family: expected bkw or bigaussian, got '" + e.value + "'");
       }},
      {"ic.t0", [](Config& c, Pending&, const Entry& e) { c.run.ic.t0 = to_double(e, e.value); }},
      {"ic.density", [](Config& c, Pending&, const Entry& e) { c.run.ic.density = to_affine(e); }},
      {"ic.temperature", [](Config& c, Pending&, const Entry& e) { c.run.ic.temperature = to_affine(e); }},
      {"ic.shift",
       [](Config& c, Pending&, const Entry& e) {
         const auto v = to_doubles(e);
         if (v.size() != 2) throw ConfigError(e.where + ": ic.shift: expected two components");
         c.run.ic.shift1 = v[0];
         c.run.ic.shift2 = v[1];
       }},
      {"ic.support_tol", [](Config& c, Pending&, const Entry& e) { c.run.ic.support_tol = to_double(e, e.value); }},
      {"time.integrator",
       [](Config& c, Pending&, const Entry& e) {
         if (e.value == "rk4")
           c.run.integrator = solver::Integrator::RK4;
         else if (e.value == "euler")
           c.run.integrator = solver::Integrator::Euler;
         else
           throw ConfigError(e.where + ": time.integrator: expected rk4 or euler, got '" + e.value + "'");
       }},
      {"time.dt", [](Config& c, Pending&, const Entry& e) { c.run.dt = to_double(e, e.value); }},
      {"time.t_end", [](Config& c, Pending&, const Entry& e) { c.run.t_end = to_double(e, e.value); }},
      {"output.cadence", [](Config& c, Pending&, const Entry& e) { c.run.output.cadence = to_int(e, e.value); }},
      {"output.snapshot_times",
       [](Config& c, Pending&, const Entry& e) { c.run.output.snapshot_times = to_doubles(e); }},
      {"output.weight_cache", [](Config& c, Pending&, const Entry& e) { c.run.output.weight_cache = e.value; }},
      {"sweep.n_list", [](Config& c, Pending&, const Entry& e) { c.sweep.n_list = to_ints(e); }},
      {"sweep.k_list", [](Config& c, Pending&, const Entry& e) { c.sweep.k_list = to_ints(e); }},
      {"sweep.reference",
       [](Config& c, Pending&, const Entry& e) {
         if (e.value == "exact")
           c.sweep.reference = SweepReference::Exact;
         else if (e.value == "self")
           c.sweep.reference = SweepReference::Self;
         else
           throw ConfigError(e.where + ": sweep.reference: expected exact or self, got '" + e.value + "'");
       }},
  };
  return table;
}

}  // namespace

Config parse_config_text(const std::string& text, const std::vector<std::string>& overrides,
                         const std::string& source) {
  auto entries = tokenize(text, source);
  for (const auto& ov : overrides) apply_override(entries, ov);

  Config config;
  Pending pending;
  for (const auto& e : entries) {
    const auto it = handlers().find(e.section + "." + e.key);
    if (it == handlers().end())
      throw ConfigError(e.key_where + ": unknown key '" + e.key + "' in [" + e.section + "]");
    it->second(config, pending, e);
  }
  if (pending.radial || pending.angular_q || pending.angular_sigma) {
    auto q = weights::QuadratureSpec::defaults(config.run.N);
    q.radial = pending.radial.value_or(q.radial);
    q.angular_q = pending.angular_q.value_or(q.angular_q);
    q.angular_sigma = pending.angular_sigma.value_or(q.angular_sigma);
    config.run.weight_quad = q;
  }

  try {
    solver::validate_config(config.run);
  } catch (const PreconditionError& err) {
    throw ConfigError(std::string("invalid configuration: ") + err.what());
  }
  for (int n : config.sweep.n_list)
    if (n < 1) throw ConfigError("invalid configuration: sweep.n_list entries must be at least 1");
  for (int k : config.sweep.k_list)
    if (k < 0) throw ConfigError("invalid configuration: sweep.k_list entries must be non-negative");
  return config;
}

Config parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), overrides, path.string());
}

std::string describe(const solver::RunConfig& c) {
  const auto tr = c.truncation();
  std::ostringstream out;
  out.precision(10);
  out << "S = " << c.S << ", R = " << tr.R << ", L = " << tr.L << ", N = " << c.N << ", K = " << c.K
      << ", z nodes = " << c.quad_order() << ", gamma = " << c.kernel.gamma << ", b = [";
  for (std::size_t i = 0; i < c.kernel.b.size(); ++i) out << (i ? ", " : "") << c.kernel.b[i];
  out << "], dt = " << c.dt << ", t_end = " << c.t_end
      << ", integrator = " << (c.integrator == solver::Integrator::RK4 ? "rk4" : "euler");
  return out.str();
}

}  // namespace ksg::cli
