#include "netmorph/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "netmorph/error.hpp"
#include "netmorph/format.hpp"

namespace netmorph {

std::string_view to_string(LinearSolverKind kind) noexcept {
  switch (kind) {
    case LinearSolverKind::Auto: return "auto";
    case LinearSolverKind::Direct: return "direct";
    case LinearSolverKind::Iterative: return "iterative";
  }
  return "auto";
}

std::string_view to_string(AdiVariant variant) noexcept {
  return variant == AdiVariant::Plain ? "plain" : "symmetric";
}

std::string_view to_string(SweepOrder order) noexcept {
  return order == SweepOrder::YthenX ? "y_then_x" : "x_then_y";
}

void RunConfig::validate() const {
  if (n < 3) throw ConfigError("n", 0, "must be >= 3");
  params.validate();
  source.validate();
  scheme.validate();
  if (snapshot_every < 0) throw ConfigError("snapshot_every", 0, "must be >= 0");
  if (diagnostics_every < 0) throw ConfigError("diagnostics_every", 0, "must be >= 0");
  if (cond_every < 0) throw ConfigError("cond_every", 0, "must be >= 0");
  if (output_dir.empty()) throw ConfigError("output_dir", 0, "must not be empty");
}

namespace {

constexpr std::array<std::pair<std::string_view, std::string_view>, 22> kKeys{{
    {"model", "r"},
    {"model", "d_coef"},
    {"model", "c_act"},
    {"model", "alpha"},
    {"model", "gamma"},
    {"model", "eps"},
    {"model", "dt"},
    {"model", "t_fin"},
    {"grid", "n"},
    {"grid", "ic"},
    {"source", "x0"},
    {"source", "y0"},
    {"source", "sigma"},
    {"scheme", "variant"},
    {"scheme", "extrapolation"},
    {"scheme", "store_history"},
    {"scheme", "plain_order"},
    {"scheme", "solver"},
    {"output", "snapshot_every"},
    {"output", "diagnostics_every"},
    {"output", "cond_every"},
    {"output", "output_dir"},
}};

std::optional<std::string_view> section_of(std::string_view key) {
  for (const auto& [section, name] : kKeys) {
    if (name == key) return section;
  }
  return std::nullopt;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  int line;
};

double as_double(const std::string& key, const Entry& e) {
  double v = 0.0;
  if (!parse_double(e.value, v)) throw ConfigError(key, e.line, "expected a number, got '" + e.value + "'");
  return v;
}

std::int64_t as_int(const std::string& key, const Entry& e) {
  std::int64_t v = 0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ConfigError(key, e.line, "expected an integer, got '" + e.value + "'");
  }
  return v;
}

bool as_bool(const std::string& key, const Entry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "yes" || e.value == "on") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no" || e.value == "off") return false;
  throw ConfigError(key, e.line, "expected true or false, got '" + e.value + "'");
}

std::string unquote(std::string_view v) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) {
    return std::string(v.substr(1, v.size() - 2));
  }
  return std::string(v);
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  std::map<std::string, Entry> entries;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    // Comments: '#' outside quotes.
    bool quoted = false;
    char quote = 0;
    for (std::size_t k = 0; k < line.size(); ++k) {
      const char ch = line[k];
      if (quoted) {
        if (ch == quote) quoted = false;
      } else if (ch == '"' || ch == '\'') {
        quoted = true;
        quote = ch;
      } else if (ch == '#') {
        line = line.substr(0, k);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("[", line_no, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      const bool known = std::any_of(kKeys.begin(), kKeys.end(),
                                     [&](const auto& kv) { return kv.first == section; });
      if (!known) throw ConfigError(section, line_no, "unknown section");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(line), line_no, "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value = unquote(trim(line.substr(eq + 1)));
    const auto owner = section_of(key);
    if (key.empty() || !owner) throw ConfigError(key, line_no, "unknown key");
    if (!section.empty() && *owner != section) {
      throw ConfigError(key, line_no, "key belongs to section [" + std::string(*owner) + "]");
    }
    if (value.empty()) throw ConfigError(key, line_no, "missing value");
    if (entries.count(key)) throw ConfigError(key, line_no, "duplicate key");
    entries[key] = Entry{value, line_no};
    if (end == text.size()) break;
  }

  RunConfig c;
  auto get = [&](const char* key) -> const Entry* {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto line_of = [&](const char* key) { return get(key) ? get(key)->line : 0; };

  try {
    if (auto e = get("n")) c.n = static_cast<int>(as_int("n", *e));
    if (c.n < 3) throw ConfigError("n", line_of("n"), "must be >= 3");
    c.params.dt = 1.0 / c.n;
    struct DoubleKey {
      const char* key;
      double* target;
    };
    for (const DoubleKey& k : {DoubleKey{"r", &c.params.r}, DoubleKey{"d_coef", &c.params.d_coef},
                               DoubleKey{"c_act", &c.params.c_act}, DoubleKey{"alpha", &c.params.alpha},
                               DoubleKey{"gamma", &c.params.gamma}, DoubleKey{"eps", &c.params.eps},
                               DoubleKey{"dt", &c.params.dt}, DoubleKey{"t_fin", &c.params.t_fin},
                               DoubleKey{"x0", &c.source.x0}, DoubleKey{"y0", &c.source.y0},
                               DoubleKey{"sigma", &c.source.sigma}}) {
      if (auto e = get(k.key)) *k.target = as_double(k.key, *e);
    }
    if (auto e = get("ic")) {
      try {
        c.ic = initial_condition_from_string(e->value);
      } catch (const ConfigError& err) {
        throw ConfigError("ic", e->line, "unknown initial condition '" + e->value + "'");
      }
    }
    if (auto e = get("variant")) {
      if (e->value == "plain") c.scheme.variant = AdiVariant::Plain;
      else if (e->value == "symmetric") c.scheme.variant = AdiVariant::Symmetric;
      else throw ConfigError("variant", e->line, "expected plain or symmetric");
    }
    if (auto e = get("plain_order")) {
      if (e->value == "y_then_x") c.scheme.plain_order = SweepOrder::YthenX;
      else if (e->value == "x_then_y") c.scheme.plain_order = SweepOrder::XthenY;
      else throw ConfigError("plain_order", e->line, "expected y_then_x or x_then_y");
    }
    if (auto e = get("extrapolation")) c.scheme.use_extrapolation = as_bool("extrapolation", *e);
    if (auto e = get("store_history")) c.scheme.store_history = as_bool("store_history", *e);
    if (auto e = get("solver")) {
      if (e->value == "auto") c.solver = LinearSolverKind::Auto;
      else if (e->value == "direct") c.solver = LinearSolverKind::Direct;
      else if (e->value == "iterative") c.solver = LinearSolverKind::Iterative;
      else throw ConfigError("solver", e->line, "expected auto, direct or iterative");
    }
    if (auto e = get("snapshot_every")) c.snapshot_every = as_int("snapshot_every", *e);
    if (auto e = get("diagnostics_every")) c.diagnostics_every = as_int("diagnostics_every", *e);
    if (auto e = get("cond_every")) c.cond_every = as_int("cond_every", *e);
    if (auto e = get("output_dir")) c.output_dir = e->value;
    c.validate();
  } catch (const ConfigError& err) {
    if (err.line() > 0) throw;
    // Constraint checks do not know where the key was written; add it.
    const std::size_t line = static_cast<std::size_t>(line_of(err.key().c_str()));
    if (line == 0) throw;
    throw ConfigError(err.key(), line, err.reason());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string to_config_text(const RunConfig& c) {
  std::ostringstream os;
  const auto b = [](bool v) { return v ? "true" : "false"; };
  os << "[model]\n"
     << "r = " << format_double(c.params.r) << '\n'
     << "d_coef = " << format_double(c.params.d_coef) << '\n'
     << "c_act = " << format_double(c.params.c_act) << '\n'
     << "alpha = " << format_double(c.params.alpha) << '\n'
     << "gamma = " << format_double(c.params.gamma) << '\n'
     << "eps = " << format_double(c.params.eps) << '\n'
     << "dt = " << format_double(c.params.dt) << '\n'
     << "t_fin = " << format_double(c.params.t_fin) << '\n'
     << "\n[grid]\n"
     << "n = " << c.n << '\n'
     << "ic = " << to_string(c.ic) << '\n'
     << "\n[source]\n"
     << "x0 = " << format_double(c.source.x0) << '\n'
     << "y0 = " << format_double(c.source.y0) << '\n'
     << "sigma = " << format_double(c.source.sigma) << '\n'
     << "\n[scheme]\n"
     << "variant = " << to_string(c.scheme.variant) << '\n'
     << "extrapolation = " << b(c.scheme.use_extrapolation) << '\n'
     << "store_history = " << b(c.scheme.store_history) << '\n'
     << "plain_order = " << to_string(c.scheme.plain_order) << '\n'
     << "solver = " << to_string(c.solver) << '\n'
     << "\n[output]\n"
     << "snapshot_every = " << c.snapshot_every << '\n'
     << "diagnostics_every = " << c.diagnostics_every << '\n'
     << "cond_every = " << c.cond_every << '\n'
     << "output_dir = \"" << c.output_dir << "\"\n";
  return os.str();
}

}  // namespace netmorph
