#include "chernflow/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include "chernflow/error.hpp"

namespace chernflow {

namespace {

using Value = std::variant<double, std::string, std::vector<double>>;

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorCode::BadConfig, message); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Drops a trailing comment, ignoring '#' inside strings.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

Value parse_value(std::string_view raw, const std::string& key) {
  const std::string_view s = trim(raw);
  if (s.empty()) fail(key + ": missing value");
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') fail(key + ": unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      if (s[i] == '\\' && i + 2 < s.size()) {
        out.push_back(s[++i]);
      } else {
        out.push_back(s[i]);
      }
    }
    return out;
  }
  if (s.front() == '[') {
    if (s.back() != ']') fail(key + ": unterminated array");
    std::vector<double> items;
    std::string_view body = trim(s.substr(1, s.size() - 2));
    while (!body.empty()) {
      const std::size_t comma = body.find(',');
      const std::string_view item = body.substr(0, comma);
      const auto v = parse_number(item);
      if (!v) fail(key + ": array entry '" + std::string(trim(item)) + "' is not a number");
      items.push_back(*v);
      if (comma == std::string_view::npos) break;
      body = trim(body.substr(comma + 1));
      if (body.empty()) break;  // trailing comma
    }
    return items;
  }
  const auto v = parse_number(s);
  if (!v) fail(key + ": '" + std::string(s) + "' is not a number, string or array");
  return *v;
}

enum class Kind { Number, Integer, String, Array, IntegerOrArray };

const std::map<std::string, Kind>& schema() {
  static const std::map<std::string, Kind> keys = {
      {"grid.n", Kind::Integer},
      {"grid.points", Kind::IntegerOrArray},
      {"grid.periods", Kind::Array},
      {"background.preset", Kind::String},
      {"background.s0_expr", Kind::String},
      {"background.f_expr", Kind::String},
      {"background.u0_expr", Kind::String},
      {"background.seed", Kind::Integer},
      {"flow.method", Kind::String},
      {"flow.dt_init", Kind::Number},
      {"flow.dt_safety", Kind::Number},
      {"flow.residual_tol", Kind::Number},
      {"flow.t_max", Kind::Number},
      {"flow.record_every", Kind::Integer},
      {"supersolution.case", Kind::String},
      {"supersolution.lambda", Kind::Number},
      {"supersolution.a_search_points", Kind::Integer},
      {"supersolution.C_M", Kind::Number},
      {"supersolution.euler_char", Kind::Integer},
      {"sweep.param", Kind::String},
      {"sweep.values", Kind::Array},
  };
  return keys;
}

long long as_integer(double v, const std::string& key) {
  if (v != std::floor(v) || std::fabs(v) > 9.0e15) fail(key + ": expected an integer, got " + std::to_string(v));
  return static_cast<long long>(v);
}

int as_int(double v, const std::string& key) {
  const long long i = as_integer(v, key);
  if (i < -1000000000LL || i > 1000000000LL) fail(key + ": integer out of range");
  return static_cast<int>(i);
}

void check_kind(const Value& v, Kind kind, const std::string& key) {
  const bool ok = [&] {
    switch (kind) {
      case Kind::Number:
      case Kind::Integer: return std::holds_alternative<double>(v);
      case Kind::String: return std::holds_alternative<std::string>(v);
      case Kind::Array: return std::holds_alternative<std::vector<double>>(v);
      case Kind::IntegerOrArray:
        return std::holds_alternative<double>(v) || std::holds_alternative<std::vector<double>>(v);
    }
    return false;
  }();
  if (!ok) fail(key + ": wrong value type");
  if (kind == Kind::Integer) as_integer(std::get<double>(v), key);
}

std::vector<int> int_list(const Value& v, const std::string& key) {
  std::vector<int> out;
  if (const double* d = std::get_if<double>(&v)) {
    out.push_back(as_int(*d, key));
  } else {
    for (double x : std::get<std::vector<double>>(v)) out.push_back(as_int(x, key));
  }
  return out;
}

void assign(Config& c, const std::string& key, const Value& v) {
  ScenarioSpec& s = c.scenario;
  StepperOptions& o = s.stepper;
  auto num = [&] { return std::get<double>(v); };
  auto str = [&] { return std::get<std::string>(v); };
  if (key == "grid.n") s.complex_dim = as_int(num(), key);
  else if (key == "grid.points") s.points = int_list(v, key);
  else if (key == "grid.periods") s.periods = std::get<std::vector<double>>(v);
  else if (key == "background.preset") s.preset = str();
  else if (key == "background.s0_expr") s.s0_expr = str();
  else if (key == "background.f_expr") s.f_expr = str();
  else if (key == "background.u0_expr") s.u0_expr = str();
  else if (key == "background.seed") {
    const long long seed = as_integer(num(), key);
    if (seed < 0) fail(key + ": must be non-negative");
    s.seed = static_cast<std::uint64_t>(seed);
  } else if (key == "flow.method") {
    try {
      o.method = parse_step_method(str());
    } catch (const Error&) {
      fail(key + ": must be \"explicit-rk4\" or \"imex-lagged\", got \"" + str() + "\"");
    }
  } else if (key == "flow.dt_init") o.dt_init = num();
  else if (key == "flow.dt_safety") o.dt_safety = num();
  else if (key == "flow.residual_tol") o.residual_tol = num();
  else if (key == "flow.t_max") o.t_max = num();
  else if (key == "flow.record_every") o.record_every = as_int(num(), key);
  else if (key == "supersolution.case") {
    std::string name = str();
    if (name == "case3-predicate") name = "case3";
    if (name != "case1" && name != "case2" && name != "case3") {
      fail(key + ": must be \"case1\", \"case2\" or \"case3\", got \"" + str() + "\"");
    }
    c.supersolution.case_name = name;
  } else if (key == "supersolution.lambda") s.lambda = num();
  else if (key == "supersolution.a_search_points") s.a_search_points = as_int(num(), key);
  else if (key == "supersolution.C_M") c.supersolution.c_m = num();
  else if (key == "supersolution.euler_char") c.supersolution.euler_char = as_int(num(), key);
  else if (key == "sweep.param") {
    if (!c.sweep) c.sweep.emplace();
    c.sweep->param = str();
  } else if (key == "sweep.values") {
    if (!c.sweep) c.sweep.emplace();
    c.sweep->values = std::get<std::vector<double>>(v);
  }
}

void validate(const Config& c) {
  const StepperOptions& o = c.scenario.stepper;
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0)) fail(std::string(key) + ": must be positive");
  };
  positive(o.dt_init, "flow.dt_init");
  positive(o.dt_safety, "flow.dt_safety");
  positive(o.residual_tol, "flow.residual_tol");
  if (!(o.residual_tol < 1.0)) fail("flow.residual_tol: must be < 1");
  if (!(o.t_max >= 0.0)) fail("flow.t_max: must be non-negative");
  if (o.record_every < 1) fail("flow.record_every: must be >= 1");
  if (c.scenario.complex_dim < 1) fail("grid.n: must be >= 1");
  if (c.scenario.a_search_points < 1) fail("supersolution.a_search_points: must be >= 1");
  if (!(c.supersolution.c_m > 0.0)) fail("supersolution.C_M: must be positive");
  if (c.sweep) {
    if (c.sweep->param.empty()) fail("sweep.param: missing");
    if (!is_known_sweep_param(c.sweep->param)) fail("sweep.param: unknown parameter '" + c.sweep->param + "'");
    if (c.sweep->values.empty()) fail("sweep.values: empty sweep list");
  }
}

}  // namespace

bool is_known_sweep_param(std::string_view param) noexcept {
  return param == "grid.points" || param == "background.seed" || param == "supersolution.lambda" ||
         param == "lambda_fraction" || param == "flow.dt_init" || param == "flow.residual_tol" ||
         param == "flow.t_max";
}

Config parse_config(std::string_view text) {
  Config c;
  std::set<std::string> seen;
  std::string section;
  const std::set<std::string> sections = {"grid", "background", "flow", "supersolution", "sweep"};
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(where + "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!sections.count(section)) fail(where + "unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) fail(where + "expected key = value");
    const std::string name(trim(line.substr(0, eq)));
    if (section.empty()) fail(where + "key '" + name + "' outside any section");
    const std::string key = section + "." + name;
    const auto it = schema().find(key);
    if (it == schema().end()) fail(where + "unknown key '" + key + "'");
    if (!seen.insert(key).second) fail(where + "duplicate key '" + key + "'");
    const Value v = parse_value(line.substr(eq + 1), key);
    check_kind(v, it->second, key);
    assign(c, key, v);
  }
  validate(c);
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

Config apply_sweep_value(const Config& base, const std::string& param, double value,
                         std::optional<double> lambda_max) {
  Config c = base;
  c.sweep.reset();
  ScenarioSpec& s = c.scenario;
  if (param == "grid.points") {
    s.points = {as_int(value, param)};
  } else if (param == "background.seed") {
    const long long seed = as_integer(value, param);
    if (seed < 0) fail(param + ": must be non-negative");
    s.seed = static_cast<std::uint64_t>(seed);
  } else if (param == "supersolution.lambda") {
    s.lambda = value;
  } else if (param == "lambda_fraction") {
    if (!lambda_max) fail("lambda_fraction sweeps need the case2 preset");
    s.lambda = value * *lambda_max;
  } else if (param == "flow.dt_init") {
    s.stepper.dt_init = value;
  } else if (param == "flow.residual_tol") {
    s.stepper.residual_tol = value;
  } else if (param == "flow.t_max") {
    s.stepper.t_max = value;
  } else {
    fail("sweep.param: unknown parameter '" + param + "'");
  }
  validate(c);
  return c;
}

}  // namespace chernflow
