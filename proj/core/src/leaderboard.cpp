#include "stackbench/leaderboard.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace stackbench {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string general(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

json metric_obj(const MetricVector& m) {
  json j = json::object();
  for (Metric k : all_metrics()) {
    if (auto v = m.get(k)) j[std::string(metric_key(k))] = *v;
  }
  return j;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::vector<LeaderboardTable> leaderboard_tables(const MatrixResult& result) {
  std::vector<LeaderboardTable> tables;
  for (const CellResult& cell : result.cells) {
    auto it = std::find_if(tables.begin(), tables.end(),
                           [&](const LeaderboardTable& t) { return t.setting == cell.setting; });
    if (it == tables.end()) {
      tables.push_back({cell.setting, {}, {}});
      it = tables.end() - 1;
    }
    LeaderboardTable& t = *it;
    std::size_t col = static_cast<std::size_t>(
        std::find(t.datasets.begin(), t.datasets.end(), cell.dataset) - t.datasets.begin());
    if (col == t.datasets.size()) {
      t.datasets.push_back(cell.dataset);
      for (LeaderboardRow& r : t.rows) r.scores.emplace_back();
    }
    auto ensure_row = [&](const std::string& name) -> LeaderboardRow& {
      for (LeaderboardRow& r : t.rows) {
        if (r.solver == name) return r;
      }
      t.rows.push_back({name, std::vector<std::optional<double>>(t.datasets.size()), 0.0});
      return t.rows.back();
    };
    for (const CohortEntry& e : cell.report.entries) ensure_row(e.name).scores[col] = e.score;
    for (const auto& [name, n] : cell.failures) (void)ensure_row(name);
  }
  for (LeaderboardTable& t : tables) {
    for (LeaderboardRow& r : t.rows) {
      double sum = 0.0;
      int n = 0;
      for (const auto& s : r.scores) {
        if (s) {
          sum += *s;
          ++n;
        }
      }
      r.mean = n > 0 ? sum / n : 0.0;
    }
    std::stable_sort(t.rows.begin(), t.rows.end(), [](const LeaderboardRow& a, const LeaderboardRow& b) {
      if (a.mean != b.mean) return a.mean > b.mean;
      return a.solver < b.solver;
    });
  }
  return tables;
}

std::string leaderboard_csv(const MatrixResult& result) {
  std::ostringstream out;
  for (const LeaderboardTable& t : leaderboard_tables(result)) {
    out << "setting,rank,solver";
    for (const std::string& d : t.datasets) out << ',' << d;
    out << ",mean\n";
    int rank = 0;
    for (const LeaderboardRow& r : t.rows) {
      out << setting_key(t.setting) << ',' << ++rank << ',' << r.solver;
      for (const auto& s : r.scores) out << ',' << (s ? fixed3(*s) : "");
      out << ',' << fixed3(r.mean) << '\n';
    }
  }
  return out.str();
}

std::string leaderboard_md(const MatrixResult& result) {
  std::ostringstream out;
  bool first = true;
  for (const LeaderboardTable& t : leaderboard_tables(result)) {
    if (!first) out << '\n';
    first = false;
    out << "## " << setting_key(t.setting) << "\n\n| Rank | Solver |";
    for (const std::string& d : t.datasets) out << ' ' << d << " |";
    out << " Mean |\n|---:|:---|";
    for (std::size_t i = 0; i < t.datasets.size(); ++i) out << "---:|";
    out << "---:|\n";
    int rank = 0;
    for (const LeaderboardRow& r : t.rows) {
      out << "| " << ++rank << " | " << r.solver << " |";
      for (const auto& s : r.scores) out << ' ' << (s ? fixed3(*s) : "n/a") << " |";
      out << ' ' << fixed3(r.mean) << " |\n";
    }
  }
  return out.str();
}

std::string leaderboard_json(const MatrixResult& result) {
  json root;
  json tables = json::array();
  for (const LeaderboardTable& t : leaderboard_tables(result)) {
    json jt;
    jt["setting"] = setting_key(t.setting);
    jt["datasets"] = t.datasets;
    json rows = json::array();
    int rank = 0;
    for (const LeaderboardRow& r : t.rows) {
      json jr;
      jr["rank"] = ++rank;
      jr["solver"] = r.solver;
      json scores = json::object();
      for (std::size_t i = 0; i < t.datasets.size(); ++i) {
        scores[t.datasets[i]] = r.scores[i] ? json(*r.scores[i]) : json(nullptr);
      }
      jr["scores"] = std::move(scores);
      jr["mean"] = r.mean;
      rows.push_back(std::move(jr));
    }
    jt["rows"] = std::move(rows);
    tables.push_back(std::move(jt));
  }
  root["leaderboards"] = std::move(tables);

  json cells = json::array();
  for (const CellResult& c : result.cells) {
    json jc;
    jc["dataset"] = c.dataset;
    jc["setting"] = setting_key(c.setting);
    json w = json::object();
    for (const auto& [m, v] : c.report.weights.weights) w[std::string(metric_key(m))] = v;
    jc["weights"] = std::move(w);
    json entries = json::array();
    for (const CohortEntry& e : c.report.entries) {
      json je;
      je["solver"] = e.name;
      je["score"] = e.score;
      je["raw"] = metric_obj(e.raw);
      je["normalized"] = metric_obj(e.normalized);
      if (!e.missing.empty()) {
        json miss = json::array();
        for (Metric m : e.missing) miss.push_back(metric_key(m));
        je["missing"] = std::move(miss);
      }
      entries.push_back(std::move(je));
    }
    jc["entries"] = std::move(entries);
    if (!c.failures.empty()) {
      json f = json::object();
      for (const auto& [name, n] : c.failures) f[name] = n;
      jc["failed_episodes"] = std::move(f);
    }
    cells.push_back(std::move(jc));
  }
  root["cells"] = std::move(cells);
  return root.dump(2) + "\n";
}

std::string cells_csv(const MatrixResult& result) {
  std::ostringstream out;
  out << "dataset,setting,solver,score";
  for (Metric m : all_metrics()) out << ',' << metric_key(m);
  out << ",failed_episodes\n";
  for (const CellResult& c : result.cells) {
    for (const CohortEntry& e : c.report.entries) {
      out << c.dataset << ',' << setting_key(c.setting) << ',' << e.name << ',' << general(e.score);
      for (Metric m : all_metrics()) {
        out << ',';
        if (auto v = e.raw.get(m)) out << general(*v);
      }
      auto f = c.failures.find(e.name);
      out << ',' << (f == c.failures.end() ? 0 : f->second) << '\n';
    }
  }
  return out.str();
}

std::string summary_svg(const MatrixResult& result) {
  const auto tables = leaderboard_tables(result);
  constexpr int kBar = 18;
  constexpr int kLabel = 110;
  constexpr int kWidth = 520;
  constexpr int kPlot = kWidth - kLabel - 60;
  int height = 10;
  for (const LeaderboardTable& t : tables) height += 30 + kBar * static_cast<int>(t.rows.size()) + 10;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  int y = 10;
  for (const LeaderboardTable& t : tables) {
    out << "  <text x=\"4\" y=\"" << y + 16 << "\" font-weight=\"bold\">" << setting_key(t.setting)
        << " (mean Score)</text>\n";
    y += 30;
    for (const LeaderboardRow& r : t.rows) {
      const int w = static_cast<int>(r.mean * kPlot + 0.5);
      out << "  <text x=\"4\" y=\"" << y + 13 << "\">" << xml_escape(r.solver) << "</text>\n";
      out << "  <rect x=\"" << kLabel << "\" y=\"" << y + 2 << "\" width=\"" << w << "\" height=\""
          << kBar - 4 << "\" fill=\"#4a7ab5\"/>\n";
      out << "  <text x=\"" << kLabel + w + 4 << "\" y=\"" << y + 13 << "\">" << fixed3(r.mean)
          << "</text>\n";
      y += kBar;
    }
    y += 10;
  }
  out << "</svg>\n";
  return out.str();
}

std::vector<fs::path> emit_leaderboard(const MatrixResult& result, const fs::path& dir,
                                       const OutputOptions& formats) {
  if (result.cells.empty()) throw ContractViolation("no results to emit");
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::vector<fs::path> written;
  auto write = [&](const char* name, const std::string& text) {
    const fs::path p = dir / name;
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out) throw InputError("cannot write " + p.string());
    written.push_back(p);
  };
  if (formats.csv) {
    write("leaderboard.csv", leaderboard_csv(result));
    write("cells.csv", cells_csv(result));
  }
  if (formats.md) write("leaderboard.md", leaderboard_md(result));
  if (formats.json) write("leaderboard.json", leaderboard_json(result));
  if (formats.svg) write("summary.svg", summary_svg(result));
  return written;
}

}  // namespace stackbench
