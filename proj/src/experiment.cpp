#include "alsim/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "alsim/json_io.hpp"
#include "alsim/punctuated.hpp"

namespace alsim {

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

namespace {

void append_row(std::string& out, const std::string& mode, std::uint64_t seed,
                const EpisodeRecord& rec, double success_value,
                std::optional<double> estimate) {
  out += mode;
  out += ',';
  out += std::to_string(seed);
  out += ',';
  out += std::to_string(rec.episode);
  out += ',';
  out += std::to_string(rec.phase);
  out += ',';
  out += fmt_double(success_value);
  out += ',';
  out += fmt_double(rec.published_fitness);
  out += ',';
  out += std::to_string(rec.model_epoch);
  out += ',';
  out += rec.trigger_fired ? '1' : '0';
  out += ',';
  if (estimate) out += fmt_double(*estimate);
  out += ',';
  if (rec.case_hit) out += *rec.case_hit ? '1' : '0';
  out += '\n';
}

// One (mode, seed) job rendered to CSV lines.
std::string run_job(const ExperimentConfig& cfg, RunMode mode, std::uint64_t seed,
                    const RunOptions& opts, const CaseBase* preloaded,
                    CaseBase* final_base) {
  std::string out;
  const std::string name = mode_name(mode);
  switch (mode) {
    case RunMode::Baseline: {
      const RunLog log = run_baseline(cfg, seed, opts.parallel);
      for (const EpisodeRecord& rec : log.records)
        append_row(out, name, seed, rec, rec.success ? 1.0 : 0.0, std::nullopt);
      break;
    }
    case RunMode::Anytime: {
      const RunLog log = run_anytime(cfg, seed, opts.parallel);
      for (const EpisodeRecord& rec : log.records)
        append_row(out, name, seed, rec, rec.success ? 1.0 : 0.0, rec.monitor_estimate);
      break;
    }
    case RunMode::CaseBased: {
      CaseBase base = preloaded ? *preloaded : make_case_base(cfg);
      const RunLog log = run_case_based(cfg, seed, base, opts.parallel);
      for (const EpisodeRecord& rec : log.records)
        append_row(out, name, seed, rec, rec.success ? 1.0 : 0.0, rec.monitor_estimate);
      if (final_base) *final_base = std::move(base);
      break;
    }
    case RunMode::Punctuated: {
      if (!cfg.fleet) throw ConfigError("fleet", "required for punctuated mode");
      const std::vector<RunLog> logs =
          run_punctuated(cfg, *cfg.fleet, seed, opts.parallel);
      const std::size_t episodes = logs.front().records.size();
      for (std::size_t e = 0; e < episodes; ++e) {
        double success_sum = 0.0;
        double est_sum = 0.0;
        int est_n = 0;
        for (const RunLog& log : logs) {
          const EpisodeRecord& rec = log.records[e];
          success_sum += rec.success ? 1.0 : 0.0;
          if (rec.monitor_estimate) {
            est_sum += *rec.monitor_estimate;
            ++est_n;
          }
        }
        std::optional<double> estimate;
        if (est_n > 0) estimate = est_sum / est_n;
        append_row(out, name, seed, logs.front().records[e],
                   success_sum / static_cast<double>(logs.size()), estimate);
      }
      break;
    }
  }
  return out;
}

}  // namespace

std::string experiment_csv(const ExperimentConfig& cfg, const std::vector<RunMode>& modes,
                           const RunOptions& opts) {
  cfg.validate();
  if (modes.empty()) throw ConfigError("modes", "no modes selected");

  std::optional<CaseBase> preloaded;
  if (opts.load_cases) preloaded = load_case_base(*opts.load_cases);

  struct Job {
    RunMode mode;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (RunMode mode : modes)
    for (std::uint64_t seed : cfg.seeds) jobs.push_back({mode, seed});

  std::vector<std::string> chunks(jobs.size());
  std::vector<CaseBase> bases(jobs.size());
  std::exception_ptr failure;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (opts.parallel)
#endif
  for (long i = 0; i < static_cast<long>(jobs.size()); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      chunks[idx] = run_job(cfg, jobs[idx].mode, jobs[idx].seed, opts,
                            preloaded ? &*preloaded : nullptr, &bases[idx]);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  if (opts.save_cases) {
    // Union of the per-seed bases, merged in job order.
    CaseBase merged = preloaded ? *preloaded : make_case_base(cfg);
    for (std::size_t i = 0; i < jobs.size(); ++i)
      if (jobs[i].mode == RunMode::CaseBased)
        for (const Case& c : bases[i].cases) store_case(merged, c);
    save_case_base(merged, *opts.save_cases);
  }

  std::string csv = std::string(kCsvHeader) + "\n";
  for (const std::string& chunk : chunks) csv += chunk;
  return csv;
}

void run_experiment_to_file(const ExperimentConfig& cfg, const std::vector<RunMode>& modes,
                            const std::string& out_path, const RunOptions& opts) {
  const std::string csv = experiment_csv(cfg, modes, opts);
  try {
    jsonio::write_file(out_path, csv);
  } catch (...) {
    std::remove(out_path.c_str());
    throw;
  }
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double_field(const std::string& s, long line) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw FormatError(line, "bad number '" + s + "'");
  return v;
}

long parse_long_field(const std::string& s, long line) {
  long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw FormatError(line, "bad integer '" + s + "'");
  return v;
}

std::uint64_t parse_u64_field(const std::string& s, long line) {
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw FormatError(line, "bad integer '" + s + "'");
  return v;
}

}  // namespace

std::vector<CsvRow> parse_csv(const std::string& text) {
  std::vector<CsvRow> rows;
  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != kCsvHeader) throw FormatError(1, "unexpected header");
      continue;
    }
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 10) throw FormatError(line_no, "expected 10 fields");
    CsvRow row;
    row.mode = fields[0];
    row.seed = parse_u64_field(fields[1], line_no);
    row.episode = parse_long_field(fields[2], line_no);
    row.phase = static_cast<int>(parse_long_field(fields[3], line_no));
    row.success = parse_double_field(fields[4], line_no);
    row.published_fitness = parse_double_field(fields[5], line_no);
    row.model_epoch = parse_long_field(fields[6], line_no);
    row.change_flag = parse_long_field(fields[7], line_no) != 0;
    if (!fields[8].empty()) row.monitor_estimate = parse_double_field(fields[8], line_no);
    if (!fields[9].empty()) row.case_hit = parse_long_field(fields[9], line_no) != 0;
    rows.push_back(std::move(row));
  }
  if (line_no == 0) throw FormatError(1, "empty file");
  return rows;
}

namespace {

struct SeriesKey {
  std::string mode;
  std::uint64_t seed;
  bool operator<(const SeriesKey& o) const {
    return mode != o.mode ? mode < o.mode : seed < o.seed;
  }
};

// success values indexed by episode for one (mode, seed).
using Series = std::vector<double>;

std::map<SeriesKey, Series> group_series(const std::vector<CsvRow>& rows) {
  std::map<SeriesKey, Series> out;
  for (const CsvRow& r : rows) {
    Series& s = out[{r.mode, r.seed}];
    if (s.size() <= static_cast<std::size_t>(r.episode))
      s.resize(static_cast<std::size_t>(r.episode) + 1, 0.0);
    s[static_cast<std::size_t>(r.episode)] = r.success;
  }
  return out;
}

// Phase start indices (episode of first record of each phase), shared
// across all series.
std::vector<long> phase_starts(const std::vector<CsvRow>& rows) {
  std::map<int, long> first;
  for (const CsvRow& r : rows) {
    auto it = first.find(r.phase);
    if (it == first.end() || r.episode < it->second) first[r.phase] = r.episode;
  }
  std::vector<long> starts;
  for (const auto& [phase, episode] : first) starts.push_back(episode);
  std::sort(starts.begin(), starts.end());
  return starts;
}

std::vector<double> moving_average(const Series& s, int window) {
  std::vector<double> ma(s.size(), 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    sum += s[i];
    if (i >= static_cast<std::size_t>(window)) sum -= s[i - static_cast<std::size_t>(window)];
    const std::size_t n = std::min<std::size_t>(i + 1, static_cast<std::size_t>(window));
    ma[i] = sum / static_cast<double>(n);
  }
  return ma;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

}  // namespace

SummaryStats summarize(const std::string& csv_text, int window) {
  if (window < 1) throw ConfigError("window", "must be >= 1");
  const std::vector<CsvRow> rows = parse_csv(csv_text);
  if (rows.empty()) throw FormatError(2, "no data rows");

  const auto series = group_series(rows);
  const auto starts = phase_starts(rows);
  const long total = static_cast<long>(series.begin()->second.size());

  // Phase extents [start, end).
  std::vector<std::pair<long, long>> extents;
  for (std::size_t p = 0; p < starts.size(); ++p) {
    const long end = p + 1 < starts.size() ? starts[p + 1] : total;
    extents.emplace_back(starts[p], end);
  }

  // Preserve first-appearance mode order.
  std::vector<std::string> modes;
  for (const CsvRow& r : rows)
    if (std::find(modes.begin(), modes.end(), r.mode) == modes.end())
      modes.push_back(r.mode);

  SummaryStats stats;
  stats.window = window;
  for (const std::string& mode : modes) {
    // Per-seed series for this mode, in seed order.
    std::vector<const Series*> mode_series;
    for (const auto& [key, s] : series)
      if (key.mode == mode) mode_series.push_back(&s);

    for (std::size_t p = 0; p < extents.size(); ++p) {
      const auto [start, end] = extents[p];
      const long len = end - start;
      PhaseSummary ps;
      ps.mode = mode;
      ps.phase = static_cast<int>(p);

      std::vector<double> firsts, lasts;
      for (const Series* s : mode_series) {
        const long tenth = std::max<long>(1, len / 10);
        const long quarter = std::max<long>(1, len / 4);
        double f = 0.0;
        for (long e = start; e < start + tenth; ++e)
          f += (*s)[static_cast<std::size_t>(e)];
        firsts.push_back(f / static_cast<double>(tenth));
        double l = 0.0;
        for (long e = end - quarter; e < end; ++e)
          l += (*s)[static_cast<std::size_t>(e)];
        lasts.push_back(l / static_cast<double>(quarter));

        if (p > 0) {
          const auto ma = moving_average(*s, window);
          const double pre_level = ma[static_cast<std::size_t>(start - 1)];
          long k = len;  // never recovered
          for (long e = start; e < end; ++e) {
            if (ma[static_cast<std::size_t>(e)] >= pre_level) {
              k = e - start;
              break;
            }
          }
          ps.recovery_per_seed.push_back(k);
        }
      }
      ps.first_tenth_mean = mean_of(firsts);
      ps.last_quarter_mean = mean_of(lasts);
      if (!ps.recovery_per_seed.empty()) {
        double sum = 0.0;
        for (long k : ps.recovery_per_seed) sum += static_cast<double>(k);
        ps.recovery_mean = sum / static_cast<double>(ps.recovery_per_seed.size());
      }
      stats.phases.push_back(std::move(ps));
    }
  }
  return stats;
}

std::string format_summary(const SummaryStats& stats) {
  std::string out;
  out += "mode        phase  first10%   last25%    recovery\n";
  char buf[160];
  for (const PhaseSummary& ps : stats.phases) {
    if (ps.recovery_per_seed.empty())
      std::snprintf(buf, sizeof(buf), "%-11s %-6d %-10.4f %-10.4f -\n", ps.mode.c_str(),
                    ps.phase, ps.first_tenth_mean, ps.last_quarter_mean);
    else
      std::snprintf(buf, sizeof(buf), "%-11s %-6d %-10.4f %-10.4f %.1f\n",
                    ps.mode.c_str(), ps.phase, ps.first_tenth_mean,
                    ps.last_quarter_mean, ps.recovery_mean);
    out += buf;
  }
  return out;
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b"};

}  // namespace

std::string render_plot_svg(const std::string& csv_text, int window) {
  const std::vector<CsvRow> rows = parse_csv(csv_text);
  if (rows.empty()) throw FormatError(2, "no data rows");

  const auto series = group_series(rows);
  const auto starts = phase_starts(rows);
  const long total = static_cast<long>(series.begin()->second.size());

  std::vector<std::string> modes;
  for (const CsvRow& r : rows)
    if (std::find(modes.begin(), modes.end(), r.mode) == modes.end())
      modes.push_back(r.mode);

  // Across-seed mean success per episode, then moving-averaged.
  std::map<std::string, std::vector<double>> curves;
  for (const std::string& mode : modes) {
    Series mean(static_cast<std::size_t>(total), 0.0);
    int n = 0;
    for (const auto& [key, s] : series) {
      if (key.mode != mode) continue;
      for (std::size_t e = 0; e < mean.size(); ++e) mean[e] += s[e];
      ++n;
    }
    for (double& v : mean) v /= static_cast<double>(n);
    curves[mode] = moving_average(mean, window);
  }

  const double width = 860.0, height = 440.0;
  const double ml = 70.0, mr = 160.0, mt = 30.0, mb = 55.0;
  const double pw = width - ml - mr, ph = height - mt - mb;
  const auto x_of = [&](long e) {
    return ml + (total <= 1 ? 0.0
                            : pw * static_cast<double>(e) / static_cast<double>(total - 1));
  };
  const auto y_of = [&](double v) { return mt + ph * (1.0 - v); };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"860\" height=\"440\" "
         "viewBox=\"0 0 860 440\">\n";
  svg += "  <rect x=\"0\" y=\"0\" width=\"860\" height=\"440\" fill=\"white\"/>\n";

  // Axes.
  svg += "  <line x1=\"" + fmt_double(ml) + "\" y1=\"" + fmt_double(mt + ph) +
         "\" x2=\"" + fmt_double(ml + pw) + "\" y2=\"" + fmt_double(mt + ph) +
         "\" stroke=\"black\"/>\n";
  svg += "  <line x1=\"" + fmt_double(ml) + "\" y1=\"" + fmt_double(mt) + "\" x2=\"" +
         fmt_double(ml) + "\" y2=\"" + fmt_double(mt + ph) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double v = static_cast<double>(i) / 5.0;
    svg += "  <text x=\"" + fmt_double(ml - 10.0) + "\" y=\"" + fmt_double(y_of(v) + 4.0) +
           "\" font-size=\"12\" text-anchor=\"end\">" + fmt_double(v) + "</text>\n";
  }
  svg += "  <text x=\"" + fmt_double(ml + pw / 2.0) + "\" y=\"" +
         fmt_double(height - 12.0) + "\" font-size=\"14\" text-anchor=\"middle\">episode"
         "</text>\n";
  svg += "  <text x=\"18\" y=\"" + fmt_double(mt + ph / 2.0) +
         "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         fmt_double(mt + ph / 2.0) + ")\">success rate</text>\n";

  // Environment change markers.
  for (std::size_t p = 1; p < starts.size(); ++p) {
    const double x = x_of(starts[p]);
    svg += "  <line x1=\"" + fmt_double(x) + "\" y1=\"" + fmt_double(mt) + "\" x2=\"" +
           fmt_double(x) + "\" y2=\"" + fmt_double(mt + ph) +
           "\" stroke=\"#555555\" stroke-dasharray=\"6 4\"/>\n";
  }

  int color = 0;
  double legend_y = mt + 14.0;
  for (const std::string& mode : modes) {
    const auto& curve = curves[mode];
    std::string points;
    for (long e = 0; e < total; ++e) {
      points += fmt_double(x_of(e));
      points += ',';
      points += fmt_double(y_of(curve[static_cast<std::size_t>(e)]));
      if (e + 1 < total) points += ' ';
    }
    const char* c = kPalette[color % 6];
    svg += "  <polyline fill=\"none\" stroke=\"";
    svg += c;
    svg += "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    svg += "  <line x1=\"" + fmt_double(ml + pw + 12.0) + "\" y1=\"" +
           fmt_double(legend_y - 4.0) + "\" x2=\"" + fmt_double(ml + pw + 40.0) +
           "\" y2=\"" + fmt_double(legend_y - 4.0) + "\" stroke=\"";
    svg += c;
    svg += "\" stroke-width=\"1.5\"/>\n";
    svg += "  <text x=\"" + fmt_double(ml + pw + 46.0) + "\" y=\"" + fmt_double(legend_y) +
           "\" font-size=\"13\">" + mode + "</text>\n";
    legend_y += 20.0;
    ++color;
  }
  svg += "</svg>\n";
  return svg;
}

void emit_plot(const std::string& csv_text, const std::string& out_path, int window) {
  const std::string svg = render_plot_svg(csv_text, window);
  try {
    jsonio::write_file(out_path, svg);
  } catch (...) {
    std::remove(out_path.c_str());
    throw;
  }
}

}  // namespace alsim
