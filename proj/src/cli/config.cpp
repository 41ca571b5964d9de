#include "mfq/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace mfq::cli {

ConfigError::ConfigError(const std::string& msg, int line, std::string key)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + (key.empty() ? "" : key + ": ") + msg),
      line_(line),
      key_(std::move(key)) {}

int ExperimentConfig::line_of(const std::string& key) const {
  auto it = lines.find(key);
  return it == lines.end() ? 0 : it->second;
}

std::string format_real(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string format_csv(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

template <class T>
T parse_number(const std::string& s, const char* what) {
  T v{};
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (!s.empty() && *b == '+') ++b;
  auto r = std::from_chars(b, e, v);
  if (s.empty() || r.ec != std::errc() || r.ptr != e) throw std::invalid_argument(std::string("expected ") + what + ", got '" + s + "'");
  return v;
}

double parse_real(const std::string& s) {
  const double v = parse_number<double>(s, "a real number");
  if (!std::isfinite(v)) throw std::invalid_argument("expected a finite real number, got '" + s + "'");
  return v;
}

cplx parse_complex(const std::string& s) {
  const auto c = s.find(':');
  if (c == std::string::npos) return {parse_real(s), 0.0};
  return {parse_real(trim(s.substr(0, c))), parse_real(trim(s.substr(c + 1)))};
}

template <class T, class F>
std::vector<T> parse_list(const std::string& s, F f) {
  std::vector<T> out;
  for (const auto& item : split(s, ',')) out.push_back(f(item));
  return out;
}

template <class T, class F>
std::string join(const std::vector<T>& v, F f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + f(v[i]);
  return out;
}

std::string format_complex(cplx z) { return z.imag() == 0.0 && !std::signbit(z.imag()) ? format_real(z.real()) : format_real(z.real()) + ":" + format_real(z.imag()); }

struct Field {
  std::string section;
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <class T>
Field real_field(std::string sec, std::string key, T ExperimentConfig::*part, double T::*m) {
  return {sec, key, [=](ExperimentConfig& c, const std::string& v) { (c.*part).*m = parse_real(v); },
          [=](const ExperimentConfig& c) { return format_real((c.*part).*m); }};
}
template <class T>
Field int_field(std::string sec, std::string key, T ExperimentConfig::*part, int T::*m) {
  return {sec, key, [=](ExperimentConfig& c, const std::string& v) { (c.*part).*m = parse_number<int>(v, "an integer"); },
          [=](const ExperimentConfig& c) { return std::to_string((c.*part).*m); }};
}
template <class T>
Field u64_field(std::string sec, std::string key, T ExperimentConfig::*part, std::uint64_t T::*m) {
  return {sec, key, [=](ExperimentConfig& c, const std::string& v) { (c.*part).*m = parse_number<std::uint64_t>(v, "an unsigned integer"); },
          [=](const ExperimentConfig& c) { return std::to_string((c.*part).*m); }};
}
template <class T>
Field string_field(std::string sec, std::string key, T ExperimentConfig::*part, std::string T::*m, std::vector<std::string> allowed = {}) {
  return {sec, key,
          [=](ExperimentConfig& c, const std::string& v) {
            if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), v) == allowed.end())
              throw std::invalid_argument("'" + v + "' is not one of " + join(allowed, [](const std::string& s) { return s; }));
            (c.*part).*m = v;
          },
          [=](const ExperimentConfig& c) { return (c.*part).*m; }};
}
template <class T>
Field reals_field(std::string sec, std::string key, T ExperimentConfig::*part, std::vector<double> T::*m) {
  return {sec, key, [=](ExperimentConfig& c, const std::string& v) { (c.*part).*m = parse_list<double>(v, parse_real); },
          [=](const ExperimentConfig& c) { return join((c.*part).*m, format_real); }};
}
template <class T>
Field ints_field(std::string sec, std::string key, T ExperimentConfig::*part, std::vector<int> T::*m) {
  return {sec, key,
          [=](ExperimentConfig& c, const std::string& v) {
            (c.*part).*m = parse_list<int>(v, [](const std::string& s) { return parse_number<int>(s, "an integer"); });
          },
          [=](const ExperimentConfig& c) { return join((c.*part).*m, [](int i) { return std::to_string(i); }); }};
}
template <class T>
Field complex_field(std::string sec, std::string key, T ExperimentConfig::*part, std::vector<cplx> T::*m) {
  return {sec, key, [=](ExperimentConfig& c, const std::string& v) { (c.*part).*m = parse_list<cplx>(v, parse_complex); },
          [=](const ExperimentConfig& c) { return join((c.*part).*m, format_complex); }};
}
template <class T>
Field strings_field(std::string sec, std::string key, T ExperimentConfig::*part, std::vector<std::string> T::*m) {
  return {sec, key,
          [=](ExperimentConfig& c, const std::string& v) {
            auto items = split(v, ',');
            for (const auto& s : items)
              if (s.empty()) throw std::invalid_argument("empty list item");
            (c.*part).*m = items;
          },
          [=](const ExperimentConfig& c) { return join((c.*part).*m, [](const std::string& s) { return s; }); }};
}

const std::vector<Field>& schema() {
  using E = ExperimentConfig;
  static const std::vector<Field> fields = {
      string_field("model", "kind", &E::model, &ModelConfig::kind, {"twobody", "lll", "hvn"}),
      int_field("model", "d", &E::model, &ModelConfig::d),
      real_field("model", "q_norm", &E::model, &ModelConfig::q_norm),
      u64_field("model", "seed", &E::model, &ModelConfig::seed),
      real_field("model", "h", &E::model, &ModelConfig::h),
      int_field("model", "M", &E::model, &ModelConfig::M),
      reals_field("model", "alphas", &E::model, &ModelConfig::alphas),
      int_field("model", "m", &E::model, &ModelConfig::m),
      real_field("model", "v_scale", &E::model, &ModelConfig::v_scale),
      real_field("model", "dx", &E::model, &ModelConfig::dx),
      string_field("state", "kind", &E::state, &StateConfig::kind, {"hermite", "coherent", "tensor", "gibbs"}),
      complex_field("state", "phi", &E::state, &StateConfig::phi),
      complex_field("state", "xi", &E::state, &StateConfig::xi),
      reals_field("state", "lambda", &E::state, &StateConfig::lambda),
      reals_field("state", "nu", &E::state, &StateConfig::nu),
      real_field("state", "localize_R", &E::state, &StateConfig::localize_R),
      reals_field("run", "eps", &E::run, &RunConfig::eps),
      reals_field("run", "times", &E::run, &RunConfig::times),
      strings_field("run", "observables", &E::run, &RunConfig::observables),
      ints_field("run", "orders", &E::run, &RunConfig::orders),
      string_field("run", "n_max", &E::run, &RunConfig::n_max),
      real_field("run", "tail_budget", &E::run, &RunConfig::tail_budget),
      u64_field("run", "seed", &E::run, &RunConfig::seed),
      int_field("run", "workers", &E::run, &RunConfig::workers),
      ints_field("approx", "K", &E::approx, &ApproxSection::K),
      real_field("approx", "R", &E::approx, &ApproxSection::R),
      real_field("approx", "t_fraction", &E::approx, &ApproxSection::t_fraction),
      int_field("approx", "samples", &E::approx, &ApproxSection::samples),
      int_field("approx", "quadrature_order", &E::approx, &ApproxSection::quadrature_order),
      reals_field("gibbs", "x", &E::gibbs, &GibbsSection::x),
      int_field("gibbs", "k_max", &E::gibbs, &GibbsSection::k_max),
      string_field("output", "path", &E::output, &OutputConfig::path),
  };
  return fields;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("malformed section header", line);
      section = trim(s.substr(1, s.size() - 2));
      bool known = false;
      for (const auto& f : schema()) known = known || f.section == section;
      if (!known) throw ConfigError("unknown section [" + section + "]", line, section);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", line);
    const std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
    if (section.empty()) throw ConfigError("key outside of a section", line, key);
    const std::string full = section + "." + key;
    const Field* field = nullptr;
    for (const auto& f : schema())
      if (f.section == section && f.key == key) field = &f;
    if (!field) throw ConfigError("unknown key", line, full);
    if (c.lines.count(full)) throw ConfigError("duplicate key", line, full);
    try {
      field->set(c, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), line, full);
    }
    c.lines[full] = line;
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string print_config(const ExperimentConfig& c) {
  std::string out, section;
  for (const auto& f : schema()) {
    if (f.section != section) {
      out += (section.empty() ? "" : "\n") + ("[" + f.section + "]\n");
      section = f.section;
    }
    out += f.key + " = " + f.get(c) + "\n";
  }
  return out;
}

void validate(const ExperimentConfig& c) {
  auto fail = [&](const std::string& key, const std::string& msg) { throw ConfigError(msg, c.line_of(key), key); };
  if (c.model.d < 1) fail("model.d", "must be positive");
  if (c.model.M < 1) fail("model.M", "must be positive");
  if (c.model.m < 1) fail("model.m", "must be positive");
  if (!(c.model.h > 0.0)) fail("model.h", "must be positive");
  if (!(c.model.dx > 0.0)) fail("model.dx", "must be positive");
  if (c.model.q_norm < 0.0) fail("model.q_norm", "must be non-negative");
  for (double a : c.model.alphas)
    if (a < 0.0) fail("model.alphas", "coefficients must be non-negative");
  for (std::size_t i = 0; i < c.run.eps.size(); ++i) {
    if (!(c.run.eps[i] > 0.0)) fail("run.eps", "values must be positive");
    if (i > 0 && !(c.run.eps[i] < c.run.eps[i - 1])) fail("run.eps", "schedule must be strictly decreasing");
  }
  if (!(c.run.tail_budget > 0.0)) fail("run.tail_budget", "must be positive");
  if (c.run.workers < 1) fail("run.workers", "must be at least 1");
  if (c.run.n_max != "adaptive") {
    try {
      if (parse_number<int>(c.run.n_max, "an integer") < 0) fail("run.n_max", "must be non-negative");
    } catch (const std::invalid_argument&) {
      fail("run.n_max", "expected 'adaptive' or an integer");
    }
  }
  for (int p : c.run.orders)
    if (p < 0) fail("run.orders", "orders must be non-negative");
  for (int k : c.approx.K)
    if (k < 1) fail("approx.K", "orders must be positive");
  if (!(c.approx.R > 0.0)) fail("approx.R", "must be positive");
  if (!(c.approx.t_fraction >= 0.0)) fail("approx.t_fraction", "must be non-negative");
  if (c.approx.samples < 1) fail("approx.samples", "must be positive");
  if (c.approx.quadrature_order < 1) fail("approx.quadrature_order", "must be positive");
  if (c.gibbs.k_max < 0) fail("gibbs.k_max", "must be non-negative");
  if (c.state.localize_R < 0.0) fail("state.localize_R", "must be non-negative");
}

}  // namespace mfq::cli
