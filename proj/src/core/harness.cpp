#include "core/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "core/error.hpp"
#include "core/simulator.hpp"

namespace rachload {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto pos = s.find(sep);
    parts.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return parts;
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw_invalid("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

std::vector<int> parse_int_list(std::string_view text, std::string_view what) {
  std::vector<int> out;
  for (auto part : split(text, ',')) out.push_back(parse_number<int>(part, what));
  return out;
}

std::string normalize_key(std::string_view key) {
  std::string k(trim(key));
  while (!k.empty() && k.front() == '-') k.erase(k.begin());
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void uniform_profile(ExperimentConfig& c) {
  c.p_high.assign(static_cast<std::size_t>(c.m), 1.0 / c.m);
  c.p_low = c.p_high;
}

std::uint64_t point_key(int n_high, int n_low, int t, int trial) {
  std::uint64_t k = splitmix64(static_cast<std::uint64_t>(n_high));
  k = splitmix64(k ^ static_cast<std::uint64_t>(n_low));
  k = splitmix64(k ^ static_cast<std::uint64_t>(t));
  return k ^ static_cast<std::uint64_t>(trial);
}

auto record_order(const ExperimentRecord& r) {
  return std::tie(r.setup_id, r.estimator, r.n_high_true, r.n_low_true, r.t, r.trial);
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  return f;
}

void finish_write(std::ofstream& f, const std::string& path) {
  f.flush();
  if (!f) throw Error(ErrorCode::kIo, "write to '" + path + "' failed");
}

}  // namespace

std::vector<double> parse_probability_list(std::string_view text) {
  std::vector<double> out;
  for (auto part : split(text, ',')) {
    if (part.empty()) throw_invalid("empty entry in probability list '" + std::string(text) + "'");
    const auto slash = part.find('/');
    if (slash == std::string_view::npos) {
      out.push_back(parse_number<double>(part, "probability"));
    } else {
      const double num = parse_number<double>(part.substr(0, slash), "probability numerator");
      const double den = parse_number<double>(part.substr(slash + 1), "probability denominator");
      if (den == 0.0) throw_invalid("zero denominator in '" + std::string(part) + "'");
      out.push_back(num / den);
    }
  }
  return out;
}

ExperimentConfig ExperimentConfig::preset(int setup) {
  ExperimentConfig c;
  c.m = 6;
  c.t_values = {1, 3, 10};
  c.n_low_min = 0;
  c.n_low_max = 7;
  c.trials = 50;
  switch (setup) {
    case 1:
      c.setup_id = "1";
      c.n_high_values = {2};
      uniform_profile(c);
      break;
    case 2:
      c.setup_id = "2";
      c.n_high_values = {1, 2};
      c.p_high.assign(6, 1.0 / 6.0);
      c.p_low = {1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0, 0.0, 0.0};
      break;
    case 3:
      c.setup_id = "3";
      c.n_high_values = {1, 2};
      c.p_high = {1.0 / 12, 1.0 / 12, 2.0 / 12, 2.0 / 12, 3.0 / 12, 3.0 / 12};
      c.p_low = {4.0 / 12, 3.0 / 12, 2.0 / 12, 1.0 / 12, 1.0 / 12, 1.0 / 12};
      break;
    default:
      throw_invalid("unknown setup " + std::to_string(setup) + " (expected 1, 2 or 3)");
  }
  return c;
}

SelectionProfile ExperimentConfig::profile() const {
  if (p_high.size() != static_cast<std::size_t>(m) || p_low.size() != static_cast<std::size_t>(m)) {
    std::ostringstream os;
    os << "profile dimensions (" << p_high.size() << ", " << p_low.size()
       << ") do not match m = " << m;
    throw_invalid(os.str());
  }
  return SelectionProfile(p_high, p_low);
}

void ExperimentConfig::validate() const {
  if (m < 1) throw_invalid("m must be at least 1");
  (void)profile();
  if (trials < 1) throw_invalid("trials must be at least 1");
  if (t_values.empty()) throw_invalid("at least one T value is required");
  for (int t : t_values) {
    if (t < 1) throw_invalid("T values must be at least 1");
  }
  if (n_high_values.empty()) throw_invalid("at least one n_high value is required");
  for (int n : n_high_values) {
    if (n < 0) throw_invalid("n_high values must be nonnegative");
  }
  if (n_low_min < 0 || n_low_max < n_low_min) throw_invalid("n_low range must satisfy 0 <= min <= max");
  if (estimators.empty()) throw_invalid("at least one estimator is required");
  if (grid && (grid->n_high_max < 0 || grid->n_low_max < 0)) {
    throw_invalid("grid bounds must be nonnegative");
  }
}

void apply_setting(ExperimentConfig& c, std::string_view raw_key, std::string_view raw_value) {
  const std::string key = normalize_key(raw_key);
  const std::string_view value = trim(raw_value);
  if (key == "setup") {
    if (value == "custom") {
      c.setup_id = "custom";
    } else {
      c = ExperimentConfig::preset(parse_number<int>(value, "setup"));
    }
  } else if (key == "m") {
    c.m = parse_number<int>(value, "m");
    if (c.m < 1) throw_invalid("m must be at least 1");
    if (c.p_high.size() != static_cast<std::size_t>(c.m) ||
        c.p_low.size() != static_cast<std::size_t>(c.m)) {
      uniform_profile(c);
    }
    c.setup_id = "custom";
  } else if (key == "t") {
    c.t_values = parse_int_list(value, "T");
  } else if (key == "n_high") {
    c.n_high_values = parse_int_list(value, "n_high");
  } else if (key == "n_low_range" || key == "n_low") {
    std::string_view lo = value;
    std::string_view hi = value;
    for (std::string_view sep : {"..", ",", "-", ":"}) {
      if (const auto pos = value.find(sep); pos != std::string_view::npos && pos > 0) {
        lo = value.substr(0, pos);
        hi = value.substr(pos + sep.size());
        break;
      }
    }
    c.n_low_min = parse_number<int>(lo, "n_low range");
    c.n_low_max = parse_number<int>(hi, "n_low range");
  } else if (key == "p_high") {
    c.p_high = parse_probability_list(value);
    c.m = static_cast<int>(c.p_high.size());
    c.setup_id = "custom";
  } else if (key == "p_low") {
    c.p_low = parse_probability_list(value);
    c.m = static_cast<int>(c.p_low.size());
    c.setup_id = "custom";
  } else if (key == "trials") {
    c.trials = parse_number<int>(value, "trials");
  } else if (key == "seed") {
    c.seed = parse_number<std::uint64_t>(value, "seed");
  } else if (key == "estimator" || key == "estimators") {
    c.estimators.clear();
    for (auto part : split(value, ',')) {
      if (part == "ml") {
        c.estimators.push_back(LikelihoodMode::kFull);
      } else if (part == "rcml") {
        c.estimators.push_back(LikelihoodMode::kReduced);
      } else if (part == "both" || part == "all") {
        c.estimators = {LikelihoodMode::kFull, LikelihoodMode::kReduced};
      } else {
        throw_invalid("unknown estimator '" + std::string(part) + "' (expected ml, rcml or both)");
      }
    }
  } else if (key == "grid_max_high") {
    HypothesisGrid g = c.effective_grid();
    g.n_high_max = parse_number<int>(value, "grid_max_high");
    c.grid = g;
  } else if (key == "grid_max_low") {
    HypothesisGrid g = c.effective_grid();
    g.n_low_max = parse_number<int>(value, "grid_max_low");
    c.grid = g;
  } else if (key == "out") {
    c.out = std::string(value);
  } else if (key == "threads") {
    c.threads = parse_number<unsigned>(value, "threads");
  } else {
    throw_invalid("unknown configuration key '" + std::string(raw_key) + "'");
  }
}

ExperimentConfig parse_config(std::string_view text) {
  std::vector<std::tuple<std::size_t, std::string, std::string>> settings;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw_invalid("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    settings.emplace_back(line_no, normalize_key(line.substr(0, eq)),
                          std::string(trim(line.substr(eq + 1))));
  }
  std::stable_partition(settings.begin(), settings.end(),
                        [](const auto& s) { return std::get<1>(s) == "setup"; });
  ExperimentConfig c;
  for (const auto& [line, key, value] : settings) {
    try {
      apply_setting(c, key, value);
    } catch (const Error& e) {
      throw Error(e.code(), "config line " + std::to_string(line) + ": " + e.what());
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

ExperimentResult run_setup(const ExperimentConfig& config) {
  config.validate();
  const SelectionProfile profile = config.profile();
  const HypothesisGrid grid = config.effective_grid();
  const SimulationSeed seed{config.seed};

  struct Point {
    int n_high;
    int n_low;
    int t;
    int trial;
  };
  std::vector<Point> points;
  for (int nh : config.n_high_values) {
    for (int nl = config.n_low_min; nl <= config.n_low_max; ++nl) {
      for (int t : config.t_values) {
        for (int trial = 0; trial < config.trials; ++trial) points.push_back({nh, nl, t, trial});
      }
    }
  }

  const std::size_t per_point = config.estimators.size();
  std::vector<ExperimentRecord> records(points.size() * per_point);

  auto run_point = [&](std::size_t idx) {
    const Point& p = points[idx];
    const ObservationSet obs =
        sample_observations({p.n_high, p.n_low}, profile, p.t, seed, point_key(p.n_high, p.n_low, p.t, p.trial));
    for (std::size_t e = 0; e < per_point; ++e) {
      const LikelihoodMode mode = config.estimators[e];
      const auto start = std::chrono::steady_clock::now();
      const LoadHypothesis est = estimate(obs, profile, grid, mode);
      const auto stop = std::chrono::steady_clock::now();

      ExperimentRecord& r = records[idx * per_point + e];
      r.setup_id = config.setup_id;
      r.estimator = to_string(mode);
      r.m = config.m;
      r.t = p.t;
      r.trial = p.trial;
      r.n_high_true = p.n_high;
      r.n_low_true = p.n_low;
      r.n_high_est = est.n_high;
      r.n_low_est = est.n_low;
      r.abs_err_high = std::abs(est.n_high - p.n_high);
      r.abs_err_low = std::abs(est.n_low - p.n_low);
      r.abs_err_total = r.abs_err_high + r.abs_err_low;
      r.overloading_factor = static_cast<double>(p.n_high + p.n_low) / config.m;
      r.runtime_us = std::chrono::duration<double, std::micro>(stop - start).count();
    }
  };

  unsigned threads = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, points.size())));
  if (threads <= 1) {
    for (std::size_t i = 0; i < points.size(); ++i) run_point(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
          try {
            run_point(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = points.size();
          }
        }
      });
    }
    workers.clear();
    if (failure) std::rethrow_exception(failure);
  }

  std::sort(records.begin(), records.end(),
            [](const ExperimentRecord& a, const ExperimentRecord& b) { return record_order(a) < record_order(b); });
  ExperimentResult result;
  result.mae = compute_mae(records);
  result.records = std::move(records);
  return result;
}

std::vector<MaeRow> compute_mae(const std::vector<ExperimentRecord>& records, MaeGrouping grouping) {
  if (records.empty()) throw_invalid("cannot compute MAE of an empty record set");
  struct Acc {
    int count = 0;
    long total = 0;
    long high = 0;
    long low = 0;
  };
  std::map<std::tuple<std::string, int, int, int>, Acc> groups;
  for (const auto& r : records) {
    auto key = std::make_tuple(grouping.estimator ? r.estimator : std::string("*"),
                               grouping.n_high ? r.n_high_true : -1,
                               grouping.n_low ? r.n_low_true : -1, grouping.t ? r.t : -1);
    Acc& a = groups[key];
    ++a.count;
    a.total += r.abs_err_total;
    a.high += r.abs_err_high;
    a.low += r.abs_err_low;
  }
  std::vector<MaeRow> rows;
  rows.reserve(groups.size());
  for (const auto& [key, a] : groups) {
    MaeRow row;
    std::tie(row.estimator, row.n_high, row.n_low, row.t) = key;
    row.count = a.count;
    row.mae_total = static_cast<double>(a.total) / a.count;
    row.mae_high = static_cast<double>(a.high) / a.count;
    row.mae_low = static_cast<double>(a.low) / a.count;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_records_csv(const std::vector<ExperimentRecord>& records, std::ostream& out) {
  out << kRecordCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.setup_id << ',' << r.estimator << ',' << r.m << ',' << r.t << ',' << r.trial << ','
        << r.n_high_true << ',' << r.n_low_true << ',' << r.n_high_est << ',' << r.n_low_est << ','
        << r.abs_err_high << ',' << r.abs_err_low << ',' << r.abs_err_total << ','
        << format_double(r.overloading_factor) << ',' << format_double(r.runtime_us) << '\n';
  }
}

void write_records_csv(const std::vector<ExperimentRecord>& records, const std::string& path) {
  auto f = open_for_write(path);
  write_records_csv(records, f);
  finish_write(f, path);
}

std::vector<ExperimentRecord> parse_records_csv(std::string_view text) {
  auto lines = split(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != kRecordCsvHeader) {
    throw_invalid("record CSV does not start with the expected header");
  }
  std::vector<ExperimentRecord> records;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 14) {
      throw_invalid("record CSV line " + std::to_string(i + 1) + " has " + std::to_string(f.size()) +
                    " fields, expected 14");
    }
    ExperimentRecord r;
    r.setup_id = std::string(f[0]);
    r.estimator = std::string(f[1]);
    r.m = parse_number<int>(f[2], "m");
    r.t = parse_number<int>(f[3], "t");
    r.trial = parse_number<int>(f[4], "trial");
    r.n_high_true = parse_number<int>(f[5], "n_high_true");
    r.n_low_true = parse_number<int>(f[6], "n_low_true");
    r.n_high_est = parse_number<int>(f[7], "n_high_est");
    r.n_low_est = parse_number<int>(f[8], "n_low_est");
    r.abs_err_high = parse_number<int>(f[9], "abs_err_high");
    r.abs_err_low = parse_number<int>(f[10], "abs_err_low");
    r.abs_err_total = parse_number<int>(f[11], "abs_err_total");
    r.overloading_factor = parse_number<double>(f[12], "overloading_factor");
    r.runtime_us = parse_number<double>(f[13], "runtime_us");
    records.push_back(std::move(r));
  }
  return records;
}

namespace {

std::string key_or_star(int v) { return v < 0 ? std::string("*") : std::to_string(v); }

}  // namespace

void write_mae_csv(const std::vector<MaeRow>& rows, std::ostream& out) {
  out << "estimator,n_high,n_low,t,count,mae_total,mae_high,mae_low\n";
  for (const auto& r : rows) {
    out << r.estimator << ',' << key_or_star(r.n_high) << ',' << key_or_star(r.n_low) << ','
        << key_or_star(r.t) << ',' << r.count << ',' << format_double(r.mae_total) << ','
        << format_double(r.mae_high) << ',' << format_double(r.mae_low) << '\n';
  }
}

void write_mae_csv(const std::vector<MaeRow>& rows, const std::string& path) {
  auto f = open_for_write(path);
  write_mae_csv(rows, f);
  finish_write(f, path);
}

void write_plot_csv(const std::vector<MaeRow>& rows, std::ostream& out) {
  std::vector<MaeRow> sorted = rows;
  std::sort(sorted.begin(), sorted.end(), [](const MaeRow& a, const MaeRow& b) {
    return std::tie(a.estimator, a.t, a.n_high, a.n_low) < std::tie(b.estimator, b.t, b.n_high, b.n_low);
  });
  out << "series,estimator,t,n_high,x,y\n";
  for (const auto& r : sorted) {
    out << r.estimator << "_T" << key_or_star(r.t) << "_nh" << key_or_star(r.n_high) << ','
        << r.estimator << ',' << key_or_star(r.t) << ',' << key_or_star(r.n_high) << ','
        << key_or_star(r.n_low) << ',' << format_double(r.mae_total) << '\n';
  }
}

void write_plot_csv(const std::vector<MaeRow>& rows, const std::string& path) {
  auto f = open_for_write(path);
  write_plot_csv(rows, f);
  finish_write(f, path);
}

}  // namespace rachload
