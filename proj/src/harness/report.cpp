// Copyright 2026 The revexp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "revexp/harness/report.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "revexp/error.hpp"

namespace revexp::harness {

using nlohmann::json;

const metrics::MetricResult* ReportRow::find(std::string_view metric) const {
  for (const auto& m : metrics) {
    if (m.name == metric) return &m;
  }
  return nullptr;
}

const std::vector<std::string>& column_order() {
  static const std::vector<std::string> cols{"AIR",    "AIR (generated)", "MRR-AE",
                                             "TLAE",   "TLAE (gold rating)", "Entail",
                                             "GreedyF1", "CondNLL",         "RMSE"};
  return cols;
}

namespace {

json metric_json(const metrics::MetricResult& m) {
  return json{{"name", m.name},
              {"value", m.value},
              {"samples", m.samples},
              {"excluded", m.excluded},
              {"direction", m.direction == metrics::Direction::kHigherBetter ? "higher" : "lower"},
              {"config", m.config}};
}

metrics::MetricResult metric_parse(const json& j) {
  metrics::MetricResult m;
  m.name = j.at("name").get<std::string>();
  m.value = j.at("value").get<double>();
  m.samples = j.at("samples").get<std::size_t>();
  m.excluded = j.at("excluded").get<std::size_t>();
  const std::string dir = j.at("direction").get<std::string>();
  if (dir != "higher" && dir != "lower") throw Error("bad metric direction '" + dir + "'");
  m.direction = dir == "higher" ? metrics::Direction::kHigherBetter
                                : metrics::Direction::kLowerBetter;
  m.config = j.at("config").get<std::string>();
  return m;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string metric_to_json(const metrics::MetricResult& m) { return metric_json(m).dump(2); }

metrics::MetricResult metric_from_json(std::string_view text) {
  try {
    return metric_parse(parse_json(text));
  } catch (const json::exception& e) {
    throw Error(std::string("bad metric record: ") + e.what());
  }
}

std::string report_to_json(const EvaluationReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json ms = json::array();
    for (const auto& m : row.metrics) ms.push_back(metric_json(m));
    rows.push_back(json{{"model", row.model},
                        {"type", row.type},
                        {"privileged", row.privileged},
                        {"metrics", ms}});
  }
  const json j{{"config_hash", r.config_hash},
               {"corpus_hash", r.corpus_hash},
               {"corpus_fingerprint", r.corpus_fingerprint},
               {"seeds", {{"corpus", r.seeds.corpus}, {"model", r.seeds.model}, {"eval", r.seeds.eval}}},
               {"k", r.k},
               {"n_explanations", r.n_explanations},
               {"calibration_mse", r.calibration_mse},
               {"notes", r.notes},
               {"rows", rows}};
  return j.dump(2) + "\n";
}

EvaluationReport report_from_json(std::string_view text) {
  const json j = parse_json(text);
  EvaluationReport r;
  try {
    r.config_hash = j.at("config_hash").get<std::string>();
    r.corpus_hash = j.at("corpus_hash").get<std::string>();
    r.corpus_fingerprint = j.at("corpus_fingerprint").get<std::string>();
    r.seeds.corpus = j.at("seeds").at("corpus").get<std::uint64_t>();
    r.seeds.model = j.at("seeds").at("model").get<std::uint64_t>();
    r.seeds.eval = j.at("seeds").at("eval").get<std::uint64_t>();
    r.k = j.at("k").get<std::size_t>();
    r.n_explanations = j.at("n_explanations").get<std::size_t>();
    r.calibration_mse = j.at("calibration_mse").get<double>();
    r.notes = j.at("notes").get<std::vector<std::string>>();
    for (const auto& row : j.at("rows")) {
      ReportRow rr;
      rr.model = row.at("model").get<std::string>();
      rr.type = row.at("type").get<std::string>();
      rr.privileged = row.at("privileged").get<bool>();
      for (const auto& m : row.at("metrics")) rr.metrics.push_back(metric_parse(m));
      r.rows.push_back(std::move(rr));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("bad report: ") + e.what());
  }
  return r;
}

namespace {

std::string format_value(const metrics::MetricResult& m) {
  const bool percent = m.name.rfind("AIR", 0) == 0 || m.name == "MRR-AE" || m.name == "Entail";
  char buf[48];
  std::snprintf(buf, sizeof buf, percent ? "%.2f" : "%.3f", m.value);
  return buf;
}

}  // namespace

std::string report_to_table(const EvaluationReport& r) {
  std::vector<std::string> cols;
  for (const auto& c : column_order()) {
    for (const auto& row : r.rows) {
      if (row.find(c)) {
        cols.push_back(c);
        break;
      }
    }
  }

  // Best displayed value per column among non-privileged rows.
  std::map<std::string, std::string> best;
  for (const auto& c : cols) {
    const metrics::MetricResult* win = nullptr;
    for (const auto& row : r.rows) {
      const auto* m = row.find(c);
      if (!m || row.privileged) continue;
      const bool better = !win || (m->direction == metrics::Direction::kHigherBetter
                                       ? m->value > win->value
                                       : m->value < win->value);
      if (better) win = m;
    }
    if (win) best[c] = format_value(*win);
  }

  std::ostringstream os;
  char cal[32];
  std::snprintf(cal, sizeof cal, "%.4f", r.calibration_mse);
  os << "# Evaluation report\n\n"
     << "config " << r.config_hash << ", corpus " << r.corpus_fingerprint << ", seeds corpus="
     << r.seeds.corpus << " model=" << r.seeds.model << " eval=" << r.seeds.eval << "\n"
     << "k=" << r.k << ", N=" << r.n_explanations << ", regressor calibration MSE " << cal
     << "\n\n| Model |";
  for (const auto& c : cols) {
    const metrics::MetricResult* any = nullptr;
    for (const auto& row : r.rows) {
      if ((any = row.find(c))) break;
    }
    os << ' ' << c << ' ' << metrics::direction_arrow(any->direction) << " |";
  }
  os << "\n|---|";
  for (std::size_t i = 0; i < cols.size(); ++i) os << "---:|";
  os << "\n";

  std::vector<std::string> footnotes;
  bool any_privileged = false;
  for (const auto& row : r.rows) {
    os << "| " << row.model << (row.privileged ? " †" : "") << " |";
    any_privileged = any_privileged || row.privileged;
    for (const auto& c : cols) {
      const auto* m = row.find(c);
      if (!m) {
        os << " - |";
        continue;
      }
      std::string v = format_value(*m);
      if (!row.privileged && best.count(c) && best[c] == v) v = "**" + v + "**";
      if (m->excluded > 0) {
        footnotes.push_back(row.model + ", " + c + ": " + std::to_string(m->excluded) +
                            " of " + std::to_string(m->excluded + m->samples) +
                            " instances excluded");
        v += " [" + std::to_string(footnotes.size()) + "]";
      }
      os << ' ' << v << " |";
    }
    os << "\n";
  }
  if (any_privileged || !footnotes.empty() || !r.notes.empty()) os << "\n";
  if (any_privileged) {
    os << "† privileged: uses information a deployed model does not have; not ranked.\n";
  }
  for (std::size_t i = 0; i < footnotes.size(); ++i) {
    os << "[" << i + 1 << "] " << footnotes[i] << "\n";
  }
  for (const auto& n : r.notes) os << "- " << n << "\n";
  return os.str();
}

void emit_report(const EvaluationReport& report, ReportFormat format,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << (format == ReportFormat::kMachine ? report_to_json(report) : report_to_table(report));
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace revexp::harness
