#include "pklab/report.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

namespace pklab {

using nlohmann::json;

bool SuiteReport::passed() const { return failures() == 0; }

int SuiteReport::failures() const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const CheckRecord& c) {
    return c.status == Status::fail;
  }));
}

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inconclusive: return "inconclusive";
  }
  return "fail";
}

namespace {

Status status_from(const std::string& s) {
  if (s == "pass") return Status::pass;
  if (s == "fail") return Status::fail;
  if (s == "inconclusive") return Status::inconclusive;
  throw ConfigError("unknown status '" + s + "'");
}

const char* relation_name(Relation r) { return r == Relation::at_most ? "<=" : ">="; }

Relation relation_from(const std::string& s) {
  if (s == "<=") return Relation::at_most;
  if (s == ">=") return Relation::at_least;
  throw ConfigError("unknown relation '" + s + "'");
}

// JSON has no inf or nan; they travel as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from(const json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  throw ConfigError("not a number: " + s);
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + '"';
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

CheckRecord& Recorder::check(const std::string& name, const std::string& anchor, double value, Relation rel,
                             double threshold, json witness) {
  CheckRecord c{name, anchor, Status::pass, value, threshold, rel, false, {}};
  if (auto it = config_.tolerances.find(name); it != config_.tolerances.end()) {
    consulted_.insert(name);
    const bool looser = rel == Relation::at_most ? it->second >= threshold : it->second <= threshold;
    if (!looser) throw ConfigError("tolerance override for '" + name + "' would tighten the default");
    c.threshold = it->second;
    c.override = true;
  }
  const bool ok = std::isfinite(value) && (rel == Relation::at_most ? value <= c.threshold : value >= c.threshold);
  c.status = ok ? Status::pass : Status::fail;
  if (!ok) c.witness = std::move(witness);
  checks_.push_back(std::move(c));
  return checks_.back();
}

CheckRecord& Recorder::require(const std::string& name, const std::string& anchor, bool ok, json witness) {
  return check(name, anchor, ok ? 0.0 : 1.0, Relation::at_most, 0.0, std::move(witness));
}

void Recorder::measure(const std::string& name, double value, const std::string& note) {
  measurements_.push_back({name, value, note});
}

void Recorder::profile(Profile p) { profiles_.push_back(std::move(p)); }

std::vector<std::string> Recorder::unused_overrides() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : config_.tolerances)
    if (!consulted_.count(k)) out.push_back(k);
  return out;
}

SuiteReport Recorder::finish(const std::string& suite) && {
  return SuiteReport{suite, config_, std::move(checks_), std::move(measurements_), std::move(profiles_)};
}

json to_json(const SuiteConfig& c) {
  json j;
  j["suite"] = c.suite;
  j["seed"] = c.seed;
  j["n"] = c.n ? json(*c.n) : json(nullptr);
  j["samples"] = c.samples ? json(*c.samples) : json(nullptr);
  j["tolerances"] = json::object();
  for (const auto& [k, v] : c.tolerances) j["tolerances"][k] = v;
  j["grid"] = c.grid;
  j["model"] = c.model;
  j["model_params"] = json::object();
  for (const auto& [k, v] : c.model_params) j["model_params"][k] = v;
  return j;
}

SuiteConfig config_from_json(const json& j) {
  SuiteConfig c;
  c.suite = j.at("suite").get<std::string>();
  c.seed = j.at("seed").get<std::uint64_t>();
  if (!j.at("n").is_null()) c.n = j.at("n").get<int>();
  if (!j.at("samples").is_null()) c.samples = j.at("samples").get<int>();
  for (const auto& [k, v] : j.at("tolerances").items()) c.tolerances[k] = v.get<double>();
  c.grid = j.at("grid").get<int>();
  c.model = j.value("model", std::string());
  if (j.contains("model_params"))
    for (const auto& [k, v] : j.at("model_params").items()) c.model_params[k] = v.get<double>();
  return c;
}

json to_json(const SuiteReport& r) {
  json j;
  j["suite"] = r.suite;
  j["config"] = to_json(r.config);
  j["passed"] = r.passed();
  j["checks"] = json::array();
  for (const auto& c : r.checks) {
    json e;
    e["name"] = c.name;
    e["anchor"] = c.anchor;
    e["status"] = to_string(c.status);
    e["value"] = number(c.value);
    e["relation"] = relation_name(c.relation);
    e["threshold"] = number(c.threshold);
    e["override"] = c.override;
    if (!c.witness.is_null()) e["witness"] = c.witness;
    j["checks"].push_back(e);
  }
  j["measurements"] = json::array();
  for (const auto& m : r.measurements) j["measurements"].push_back({{"name", m.name}, {"value", number(m.value)}, {"note", m.note}});
  j["profiles"] = json::array();
  for (const auto& p : r.profiles) {
    json rows = json::array();
    for (const auto& row : p.rows) {
      json jr = json::array();
      for (double v : row) jr.push_back(number(v));
      rows.push_back(jr);
    }
    j["profiles"].push_back({{"name", p.name}, {"columns", p.columns}, {"rows", rows}});
  }
  return j;
}

SuiteReport report_from_json(const json& j) {
  SuiteReport r;
  r.suite = j.at("suite").get<std::string>();
  r.config = config_from_json(j.at("config"));
  for (const auto& e : j.at("checks")) {
    CheckRecord c;
    c.name = e.at("name").get<std::string>();
    c.anchor = e.at("anchor").get<std::string>();
    c.status = status_from(e.at("status").get<std::string>());
    c.value = number_from(e.at("value"));
    c.relation = relation_from(e.at("relation").get<std::string>());
    c.threshold = number_from(e.at("threshold"));
    c.override = e.at("override").get<bool>();
    if (e.contains("witness")) c.witness = e.at("witness");
    r.checks.push_back(std::move(c));
  }
  for (const auto& m : j.at("measurements"))
    r.measurements.push_back({m.at("name").get<std::string>(), number_from(m.at("value")), m.at("note").get<std::string>()});
  for (const auto& p : j.at("profiles")) {
    Profile pr{p.at("name").get<std::string>(), p.at("columns").get<std::vector<std::string>>(), {}};
    for (const auto& row : p.at("rows")) {
      std::vector<double> vals;
      for (const auto& v : row) vals.push_back(number_from(v));
      pr.rows.push_back(std::move(vals));
    }
    r.profiles.push_back(std::move(pr));
  }
  return r;
}

std::string emit_json(const SuiteReport& r) { return to_json(r).dump(2) + "\n"; }

std::string emit_csv(const SuiteReport& r) {
  std::string out = "suite,name,anchor,status,value,relation,threshold,override\n";
  for (const auto& c : r.checks) {
    out += csv_cell(r.suite) + ',' + csv_cell(c.name) + ',' + csv_cell(c.anchor) + ',' + to_string(c.status) + ',' +
           format_double(c.value) + ',' + relation_name(c.relation) + ',' + format_double(c.threshold) + ',' +
           (c.override ? "true" : "false") + '\n';
  }
  return out;
}

std::string emit_profile_csv(const Profile& p) {
  std::string out;
  for (std::size_t i = 0; i < p.columns.size(); ++i) out += (i ? "," : "") + csv_cell(p.columns[i]);
  out += '\n';
  for (const auto& row : p.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_double(row[i]);
    out += '\n';
  }
  return out;
}

SuiteConfig parse_config(std::istream& in) {
  SuiteConfig c;
  std::string line, section;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  };
  auto fail = [&](const std::string& what) {
    throw ConfigError("config line " + std::to_string(lineno) + ": " + what);
  };
  auto integer = [&](const std::string& v) {
    std::size_t pos = 0;
    long long x = 0;
    try {
      x = std::stoll(v, &pos);
    } catch (const std::exception&) {
      fail("expected an integer, got '" + v + "'");
    }
    if (pos != v.size()) fail("expected an integer, got '" + v + "'");
    return x;
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "suite" && section != "tolerances" && section != "model") fail("unknown section '" + section + "'");
      continue;
    }
    const auto eq = line.rfind('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (section == "model") {
      if (key == "family") {
        c.model = value;
      } else {
        std::size_t pos = 0;
        try {
          c.model_params[key] = std::stod(value, &pos);
        } catch (const std::exception&) {
          pos = 0;
        }
        if (pos == 0 || pos != value.size()) fail("bad model parameter '" + value + "'");
      }
    } else if (section == "tolerances") {
      try {
        std::size_t pos = 0;
        c.tolerances[key] = std::stod(value, &pos);
        if (pos != value.size()) fail("bad tolerance '" + value + "'");
      } catch (const std::invalid_argument&) {
        fail("bad tolerance '" + value + "'");
      }
    } else if (section == "suite") {
      if (key == "name") {
        c.suite = value;
      } else if (key == "seed") {
        std::size_t pos = 0;
        if (value.empty() || value.front() == '-') fail("seed must be a nonnegative integer");
        try {
          c.seed = std::stoull(value, &pos);
        } catch (const std::exception&) {
          fail("seed must be a nonnegative integer");
        }
        if (pos != value.size()) fail("seed must be a nonnegative integer");
      } else if (key == "n") {
        c.n = static_cast<int>(integer(value));
      } else if (key == "samples") {
        c.samples = static_cast<int>(integer(value));
      } else if (key == "grid") {
        c.grid = static_cast<int>(integer(value));
      } else {
        fail("unknown key '" + key + "'");
      }
    } else {
      fail("key outside a section");
    }
  }
  return c;
}

json matrix_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json matrix_json(const CMat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back({number(m(i, j).real()), number(m(i, j).imag())});
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pklab
