#pragma once

// Config files, result files and the report round trip.
//
// Output directory layout:
//   conditions.csv    nu,condition_id,sup_value,fitted_rate,verdict
//   sheet.csv         nu,t,amplitude_estimate,target_amplitude
//   summary.json      structured verdict
//   fields_<nu>.csv   r,u_theta,omega at t = T
//   <condition>.dat   log10(nu) log10(value)
//   manifest.json     config echo, files, wall-clock (the only run-dependent file)

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "vsl/errors.hpp"
#include "vsl/limit_diagnostics.hpp"
#include "vsl/sweep_harness.hpp"

namespace vsl {

inline constexpr const char* tool_version = "1.0.0";

/// %.17g; non-finite values as nan / inf / -inf.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Shortest round-trip decimal, used in file names: fixed notation for
/// 1e-6 ≤ |v| < 1e15 (0.0001, not 1e-04), otherwise scientific.
inline std::string short_double(double v) {
  char buf[64];
  const double a = std::abs(v);
  const auto fmt = (a == 0.0 || (a >= 1e-6 && a < 1e15)) ? std::chars_format::fixed : std::chars_format::scientific;
  const auto r = std::to_chars(buf, buf + sizeof buf, v, fmt);
  return std::string(buf, r.ptr);
}

inline double parse_double(std::string_view s, std::string_view what) {
  std::string t(s);
  if (t == "nan") return std::nan("");
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) throw InvalidArgument("bad number for " + std::string(what) + ": '" + t + "'");
  return v;
}

namespace detail {
inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<double> parse_list(std::string_view s, std::string_view what) {
  std::vector<double> out;
  std::string item;
  std::istringstream is{std::string(s)};
  while (std::getline(is, item, ',')) {
    const auto t = trim(item);
    if (!t.empty()) out.push_back(parse_double(t, what));
  }
  return out;
}

inline std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + short_double(v[i]);
  return s;
}

inline std::size_t parse_count(std::string_view s, std::string_view what) {
  const double v = parse_double(s, what);
  if (!(v >= 0.0) || v != std::floor(v)) throw InvalidArgument(std::string(what) + " must be a nonnegative integer");
  return static_cast<std::size_t>(v);
}

inline const char* forcing_name(ForcingKind k) {
  switch (k) {
    case ForcingKind::constant: return "constant";
    case ForcingKind::cosine: return "cosine";
    case ForcingKind::table: return "table";
  }
  return "?";
}
}  // namespace detail

/// Flat `key = value` text; '#' starts a comment.
inline SweepConfig parse_config(std::string_view text) {
  SweepConfig c;
  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key = value");
    const auto key = detail::trim(std::string_view(t).substr(0, eq));
    const auto val = detail::trim(std::string_view(t).substr(eq + 1));
    if (key == "name") c.name = val;
    else if (key == "u0") c.u0 = val;
    else if (key == "alpha") {
      if (val == "constant") c.forcing = ForcingKind::constant;
      else if (val == "cosine") c.forcing = ForcingKind::cosine;
      else if (val == "table") c.forcing = ForcingKind::table;
      else throw InvalidArgument("config: alpha must be constant, cosine or table");
    } else if (key == "alpha_value") c.alpha = parse_double(val, key);
    else if (key == "alpha_times") c.alpha_times = detail::parse_list(val, key);
    else if (key == "alpha_values") c.alpha_values = detail::parse_list(val, key);
    else if (key == "T") c.T = parse_double(val, key);
    else if (key == "nus") c.nus = detail::parse_list(val, key);
    else if (key == "N") c.N = detail::parse_count(val, key);
    else if (key == "grading") {
      if (val == "sine") c.grading = Grading::sine_clustered;
      else if (val == "uniform") c.grading = Grading::uniform;
      else throw InvalidArgument("config: grading must be sine or uniform");
    } else if (key == "dt") c.dt = parse_double(val, key);
    else if (key == "dt_kappa") c.dt_kappa = parse_double(val, key);
    else if (key == "outputs") c.outputs = detail::parse_count(val, key);
    else if (key == "first_output") c.first_output = parse_double(val, key);
    else if (key == "verdict_ratio") c.rule.ratio = parse_double(val, key);
    else if (key == "zero_tol") c.rule.zero_tol = parse_double(val, key);
    else if (key == "kato_c") c.kato_c = parse_double(val, key);
    else throw InvalidArgument("config: unknown key '" + key + "'");
  }
  return c;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline SweepConfig load_config(const std::filesystem::path& p) { return parse_config(read_file(p)); }

/// Canonical text form; parse_config(config_echo(c)) reproduces c.
inline std::string config_echo(const SweepConfig& c) {
  std::ostringstream os;
  os << "name = " << c.name << '\n'
     << "u0 = " << c.u0 << '\n'
     << "alpha = " << detail::forcing_name(c.forcing) << '\n'
     << "alpha_value = " << short_double(c.alpha) << '\n';
  if (c.forcing == ForcingKind::table)
    os << "alpha_times = " << detail::join(c.alpha_times) << '\n'
       << "alpha_values = " << detail::join(c.alpha_values) << '\n';
  os << "T = " << short_double(c.T) << '\n'
     << "nus = " << detail::join(c.nus) << '\n'
     << "N = " << c.N << '\n'
     << "grading = " << to_string(c.grading) << '\n'
     << "dt = " << short_double(c.dt) << '\n'
     << "dt_kappa = " << short_double(c.dt_kappa) << '\n'
     << "outputs = " << c.outputs << '\n'
     << "first_output = " << short_double(c.first_output) << '\n'
     << "verdict_ratio = " << short_double(c.rule.ratio) << '\n'
     << "zero_tol = " << short_double(c.rule.zero_tol) << '\n'
     << "kato_c = " << short_double(c.kato_c) << '\n';
  return os.str();
}

/// FNV-1a 64 of the canonical echo, as 16 hex digits.
inline std::string config_hash(const SweepConfig& c) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : config_echo(c)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct RunManifest {
  std::string config_echo;
  std::string config_hash;
  std::string version = tool_version;
  std::vector<std::string> files;                    // relative to the output directory
  std::vector<std::pair<std::string, double>> stages;  // wall-clock seconds
  std::filesystem::path dir;
};

namespace detail {
class TextFile {
public:
  explicit TextFile(const std::filesystem::path& p) : path_(p), out_(p, std::ios::binary | std::ios::trunc) {
    if (!out_) throw IoError("cannot write " + p.string());
  }
  template <class T>
  TextFile& operator<<(const T& v) {
    out_ << v;
    return *this;
  }
  void close() {
    out_.close();
    if (!out_) throw IoError("write failed for " + path_.string());
  }

private:
  std::filesystem::path path_;
  std::ofstream out_;
};

inline nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

inline std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}
}  // namespace detail

inline nlohmann::json summary_json(const SweepResult& res) {
  const auto rep = equivalence_report(res);
  nlohmann::json j;
  j["name"] = res.config.name;
  j["config_hash"] = config_hash(res.config);
  j["version"] = tool_version;
  j["nus"] = res.config.nus;
  j["verdict_ratio"] = res.config.rule.ratio;
  j["zero_tol"] = res.config.rule.zero_tol;
  j["B"] = res.B;
  j["equivalent"] = rep.equivalent;
  j["majority_verdict"] = std::string(to_string(rep.majority));
  std::vector<std::string> dis;
  for (auto id : rep.disagreeing) dis.emplace_back(to_string(id));
  j["disagreeing"] = dis;
  std::vector<std::string> eq;
  for (auto id : equivalence_set) eq.emplace_back(to_string(id));
  j["equivalence_set"] = eq;
  j["sheet_amplitude_limit"] = rep.sheet_amplitude_limit;
  j["sheet_amplitude_target"] = rep.sheet_amplitude_target;
  j["h1dual_final"] = rep.h1dual_final;
  j["h1dual_oracle"] = rep.h1dual_oracle;
  nlohmann::json conds = nlohmann::json::object();
  for (const auto& c : res.conditions) {
    nlohmann::json cj;
    cj["verdict"] = std::string(to_string(*c.verdict));
    cj["fitted_rate"] = c.fitted_rate ? nlohmann::json(*c.fitted_rate) : nlohmann::json(nullptr);
    cj["values"] = c.values;
    conds[std::string(to_string(c.id))] = cj;
  }
  j["conditions"] = conds;
  j["text"] = rep.text;
  return j;
}

/// Write every result file into dir (created if needed).
inline RunManifest emit_outputs(const SweepResult& res, const std::filesystem::path& dir) {
  if (res.per_nu.empty()) throw InvalidArgument("emit_outputs: empty result");
  const auto t0 = std::chrono::steady_clock::now();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());

  RunManifest man;
  man.dir = dir;
  man.config_echo = config_echo(res.config);
  man.config_hash = config_hash(res.config);
  for (const auto& o : res.per_nu) man.stages.emplace_back("solve nu=" + short_double(o.nu), o.seconds);

  {
    detail::TextFile f(dir / "conditions.csv");
    f << "nu,condition_id,sup_value,fitted_rate,verdict\n";
    for (const auto& c : res.conditions)
      for (std::size_t i = 0; i < res.per_nu.size(); ++i) {
        f << format_double(res.per_nu[i].nu) << ',' << to_string(c.id) << ',' << format_double(c.values[i]) << ','
          << format_double(c.fitted_rate ? *c.fitted_rate : std::nan("")) << ','
          << (c.verdict ? to_string(*c.verdict) : "undefined") << '\n';
      }
    f.close();
    man.files.push_back("conditions.csv");
  }
  {
    detail::TextFile f(dir / "sheet.csv");
    f << "nu,t,amplitude_estimate,target_amplitude\n";
    for (const auto& o : res.per_nu) {
      if (!o.ok) continue;
      for (std::size_t k = 0; k < o.diag.times.size(); ++k)
        f << format_double(o.nu) << ',' << format_double(o.diag.times[k]) << ','
          << format_double(o.diag.amplitude_estimate[k]) << ',' << format_double(o.diag.amplitude_target[k]) << '\n';
    }
    f.close();
    man.files.push_back("sheet.csv");
  }
  for (const auto& o : res.per_nu) {
    if (!o.ok) continue;
    const std::string name = "fields_" + short_double(o.nu) + ".csv";
    detail::TextFile f(dir / name);
    f << "r,u_theta,omega\n";
    for (std::size_t i = 0; i < o.r.size(); ++i)
      f << format_double(o.r[i]) << ',' << format_double(o.u_final[i]) << ',' << format_double(o.omega_final[i]) << '\n';
    f.close();
    man.files.push_back(name);
  }
  for (const auto& c : res.conditions) {
    const std::string name = std::string(to_string(c.id)) + ".dat";
    detail::TextFile f(dir / name);
    f << "# log10_nu log10_" << to_string(c.id) << " (nonpositive values omitted)\n";
    for (std::size_t i = 0; i < res.per_nu.size(); ++i)
      if (c.values[i] > 0.0)
        f << format_double(std::log10(res.per_nu[i].nu)) << ' ' << format_double(std::log10(c.values[i])) << '\n';
    f.close();
    man.files.push_back(name);
  }
  {
    nlohmann::json j;
    if (res.complete()) {
      j = summary_json(res);
    } else {
      j["name"] = res.config.name;
      j["config_hash"] = man.config_hash;
      j["complete"] = false;
    }
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& o : res.per_nu)
      if (!o.ok) failures.push_back({{"nu", o.nu}, {"error", o.error}});
    j["failures"] = failures;
    nlohmann::json warnings = nlohmann::json::array();
    for (const auto& o : res.per_nu)
      for (const auto& w : o.warnings) warnings.push_back({{"nu", o.nu}, {"warning", w}});
    j["warnings"] = warnings;
    detail::TextFile f(dir / "summary.json");
    f << j.dump(2) << "\n";
    f.close();
    man.files.push_back("summary.json");
  }
  man.stages.emplace_back("emit", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

  nlohmann::json mj;
  mj["version"] = man.version;
  mj["config"] = man.config_echo;
  mj["config_hash"] = man.config_hash;
  mj["files"] = man.files;
  mj["written_utc"] = detail::utc_now();
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& [name, sec] : man.stages) stages.push_back({{"stage", name}, {"seconds", sec}});
  mj["wall_clock"] = stages;
  detail::TextFile f(dir / "manifest.json");
  f << mj.dump(2) << "\n";
  f.close();
  return man;
}

struct ConditionRow {
  double nu;
  ConditionId id;
  double sup_value;
  double fitted_rate;
  Verdict verdict;
};

inline std::vector<ConditionRow> read_conditions_csv(const std::filesystem::path& p) {
  std::istringstream is(read_file(p));
  std::string line;
  if (!std::getline(is, line) || line != "nu,condition_id,sup_value,fitted_rate,verdict")
    throw IoError("conditions.csv: unexpected header");
  std::vector<ConditionRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5) throw IoError("conditions.csv: expected 5 columns");
    rows.push_back({parse_double(cells[0], "nu"), parse_condition(cells[1]), parse_double(cells[2], "sup_value"),
                    parse_double(cells[3], "fitted_rate"), parse_verdict(cells[4])});
  }
  return rows;
}

struct ReportCheck {
  bool reproduced = false;
  std::string text;                         // stored equivalence text
  std::vector<std::string> mismatches;
};

/// Rebuild verdicts from conditions.csv with the stored rule and compare with summary.json.
inline ReportCheck report_from_dir(const std::filesystem::path& dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(dir / "summary.json"));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("summary.json: ") + e.what());
  }
  if (j.contains("complete") && j["complete"] == false)
    throw InvalidArgument("report: stored sweep is incomplete");
  const auto rows = read_conditions_csv(dir / "conditions.csv");

  VerdictRule rule{j.at("verdict_ratio").get<double>(), j.at("zero_tol").get<double>()};
  std::map<ConditionId, std::vector<std::pair<double, double>>> series;
  std::map<ConditionId, std::vector<Verdict>> stored_row_verdicts;
  for (const auto& r : rows) {
    series[r.id].emplace_back(r.nu, r.sup_value);
    stored_row_verdicts[r.id].push_back(r.verdict);
  }

  ReportCheck chk;
  std::array<int, 3> count{};
  std::map<ConditionId, Verdict> verdicts;
  for (auto& [id, pts] : series) {
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<double> v;
    for (const auto& p : pts) v.push_back(p.second);
    verdicts[id] = classify_verdict(v, rule);
    const auto name = std::string(to_string(id));
    const auto& stored = stored_row_verdicts[id];
    if (std::any_of(stored.begin(), stored.end(), [&](Verdict v) { return v != verdicts[id]; }))
      chk.mismatches.push_back(name + ": csv verdict");
    if (!j.at("conditions").contains(name) || j["conditions"][name]["verdict"] != std::string(to_string(verdicts[id])))
      chk.mismatches.push_back(name + ": summary verdict");
  }
  for (auto id : equivalence_set) {
    if (!verdicts.count(id)) {
      chk.mismatches.push_back(std::string(to_string(id)) + ": missing");
      continue;
    }
    ++count[static_cast<std::size_t>(verdicts[id])];
  }
  const auto majority = static_cast<Verdict>(std::max_element(count.begin(), count.end()) - count.begin());
  std::vector<std::string> dis;
  for (auto id : equivalence_set)
    if (verdicts.count(id) && verdicts[id] != majority) dis.emplace_back(to_string(id));
  if (j.at("equivalent").get<bool>() != dis.empty()) chk.mismatches.push_back("equivalent flag");
  if (j.at("disagreeing").get<std::vector<std::string>>() != dis) chk.mismatches.push_back("disagreeing set");
  if (j.at("majority_verdict").get<std::string>() != to_string(majority)) chk.mismatches.push_back("majority verdict");
  chk.text = j.at("text").get<std::string>();
  chk.reproduced = chk.mismatches.empty();
  return chk;
}

}  // namespace vsl
