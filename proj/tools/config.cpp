#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/evp.h>

namespace catlgt::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Inline comments start at ';' or '#' preceded by whitespace.
std::string strip_comment(const std::string& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if ((v[i] == ';' || v[i] == '#') && (v[i - 1] == ' ' || v[i - 1] == '\t')) return trim(v.substr(0, i));
  return v;
}

const std::set<std::string> kKnownKeys = {
    "system.U",        "system.G",         "system.beta0",    "system.g3",        "system.g3_over_gap",
    "system.omega_matter", "system.matter_dim", "system.gauge_dim", "system.N",     "system.M",
    "run.t_max",       "run.periods",      "run.samples",     "run.tolerance",    "run.method",
    "sweep.beta0",     "sweep.g3",         "sweep.quantity", "sweep.workers",
    "output.directory", "output.formats",  "wigner.resolution", "wigner.half_width", "run.g3_ratios",
    "plaquette.g_triangle", "plaquette.beta",
};

}  // namespace

double parse_number(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
    throw Error(ErrorKind::Validation, "'" + what + "' is not a number: '" + text + "'");
  return v;
}

std::vector<double> parse_grid(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw Error(ErrorKind::Validation, "empty grid");
  std::vector<std::string> parts;
  if (t.find(':') != std::string::npos) {
    std::stringstream ss(t);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(trim(part));
    if (parts.size() != 3 && !(parts.size() == 4 && parts[3] == "log"))
      throw Error(ErrorKind::Validation, "grid must be start:stop:count[:log], got '" + t + "'");
    const double a = parse_number(parts[0], "grid start");
    const double b = parse_number(parts[1], "grid stop");
    const double n = parse_number(parts[2], "grid count");
    if (n < 1 || n != std::floor(n)) throw Error(ErrorKind::Validation, "grid count must be a positive integer");
    const bool log = parts.size() == 4;
    if (log && (a <= 0.0 || b <= 0.0)) throw Error(ErrorKind::Validation, "log grid needs positive bounds");
    const auto count = static_cast<std::size_t>(n);
    std::vector<double> out;
    for (std::size_t k = 0; k < count; ++k) {
      const double f = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
      out.push_back(log ? a * std::pow(b / a, f) : a + (b - a) * f);
    }
    return out;
  }
  std::vector<double> out;
  std::stringstream ss(t);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(parse_number(part, "grid value"));
  return out;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error(ErrorKind::Numerical, "sha256 failed");
  }
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorKind::Validation, std::string("config parse error: ") + e.what());
  }
  ExperimentConfig c;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw Error(ErrorKind::Validation, "config key '" + section + "' must live in a section");
    for (const auto& [key, value] : body) c.set(section + "." + key, strip_comment(value.get_value<std::string>()));
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Validation, "cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (!kKnownKeys.count(key)) throw Error(ErrorKind::Validation, "unknown config key '" + key + "'");
  values_[key] = trim(value);
}

void ExperimentConfig::merge(const ExperimentConfig& other) {
  for (const auto& [k, v] : other.values_) values_[k] = v;
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream os;
  std::string current;
  for (const auto& [key, value] : values_) {
    const auto dot = key.find('.');
    const std::string section = key.substr(0, dot);
    if (section != current) {
      if (!current.empty()) os << '\n';
      os << '[' << section << "]\n";
      current = section;
    }
    os << key.substr(dot + 1) << " = " << value << '\n';
  }
  return os.str();
}

std::string ExperimentConfig::hash() const { return sha256_hex(serialize()); }

std::string ExperimentConfig::get(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double ExperimentConfig::number(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_number(it->second, key);
}

std::size_t ExperimentConfig::count(const std::string& key, std::size_t fallback) const {
  const double v = number(key, static_cast<double>(fallback));
  if (v < 0 || v != std::floor(v)) throw Error(ErrorKind::Validation, "'" + key + "' must be a non-negative integer");
  return static_cast<std::size_t>(v);
}

std::vector<double> ExperimentConfig::grid(const std::string& key, const std::vector<double>& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_grid(it->second);
}

LinkParams ExperimentConfig::link() const {
  LinkParams p;
  p.U = number("system.U", p.U);
  p.G = number("system.G", p.G);
  if (has("system.beta0")) {
    const double b = number("system.beta0", 2.0);
    if (b < 0.0) throw Error(ErrorKind::Validation, "beta0 must be non-negative");
    p.G = 2.0 * p.U * b * b;
  }
  if (has("system.g3") && has("system.g3_over_gap"))
    throw Error(ErrorKind::Validation, "set either system.g3 or system.g3_over_gap, not both");
  p.g3 = has("system.g3") ? number("system.g3", 0.0) : number("system.g3_over_gap", 0.0) * p.omega_gap();
  if (has("system.omega_matter")) {
    p.omega_matter = parse_grid(get("system.omega_matter", ""));
  }
  p.matter_dim = count("system.matter_dim", p.matter_dim);
  p.gauge_dim = count("system.gauge_dim", p.gauge_dim);
  return p;
}

ChainParams ExperimentConfig::chain() const {
  ChainParams c;
  c.link = link();
  c.N = count("system.N", c.N);
  c.M = count("system.M", c.M);
  return c;
}

void ExperimentConfig::validate() const {
  const ChainParams c = chain();
  if (has("system.N") || has("system.M")) c.validate();
  c.link.validate();
  for (const char* key : {"sweep.beta0", "sweep.g3", "run.g3_ratios"})
    if (has(key)) (void)grid(key, {});
  for (const char* key : {"run.t_max", "run.periods", "run.tolerance", "wigner.half_width"})
    if (has(key) && !(number(key, 0.0) > 0.0)) throw Error(ErrorKind::Validation, std::string(key) + " must be positive");
  if (has("run.samples") && count("run.samples", 0) < 2) throw Error(ErrorKind::Validation, "run.samples must be >= 2");
  if (has("wigner.resolution") && count("wigner.resolution", 0) < 32)
    throw Error(ErrorKind::Validation, "wigner.resolution must be >= 32");
  const std::string method = get("run.method", "auto");
  if (method != "auto" && method != "eigen" && method != "krylov")
    throw Error(ErrorKind::Validation, "run.method must be auto, eigen or krylov");
  const std::string quantity = get("sweep.quantity", "ipr");
  if (quantity != "ipr" && quantity != "baseline")
    throw Error(ErrorKind::Validation, "sweep.quantity must be ipr or baseline");
}

}  // namespace catlgt::cli
