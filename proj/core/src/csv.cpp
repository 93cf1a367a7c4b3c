#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "tensorrank/error.hpp"
#include "tensorrank/ingest.hpp"

namespace tensorrank {

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> fields;
};

std::vector<std::string> split_csv(std::string_view line, std::size_t row) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t p = 0; p < line.size(); ++p) {
    const char c = line[p];
    if (quoted) {
      if (c == '"') {
        if (p + 1 < line.size() && line[p + 1] == '"') {
          cur += '"';
          ++p;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ParseError("unterminated quote on line " + std::to_string(row), row);
  fields.push_back(std::move(cur));
  return fields;
}

std::string quote_csv(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

/// Non-empty lines with their 1-based numbers; strips CR and a UTF-8 BOM.
std::vector<Line> read_lines(std::istream& in) {
  std::vector<Line> lines;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (number == 1 && raw.starts_with("\xEF\xBB\xBF")) raw.erase(0, 3);
    if (raw.empty()) continue;
    lines.push_back({number, split_csv(raw, number)});
  }
  return lines;
}

std::string where(std::string_view source, std::size_t row) {
  return std::string(source) + ":" + std::to_string(row);
}

double parse_value(const std::string& text, std::string_view source, std::size_t row,
                   bool allow_sentinel = false) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw ParseError(where(source, row) + ": non-numeric value '" + text + "'", row);
  }
  if (!std::isfinite(v) && !(allow_sentinel && v > 0)) {
    throw ParseError(where(source, row) + ": non-finite value '" + text + "'", row);
  }
  return v;
}

int parse_time(const std::string& text, std::string_view source, std::size_t row) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(where(source, row) + ": time label '" + text + "' is not an integer", row);
  }
  return v;
}

/// Shared reader for long CSVs. Third-axis labels are returned in
/// first-appearance order; the caller may reorder them.
struct LongRecords {
  Labels alternatives;
  Labels criteria;
  Labels axis;
  std::vector<std::size_t> axis_rows;  // line of first appearance
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, double> cells;
};

std::size_t intern(Labels& labels, std::unordered_map<std::string, std::size_t>& index,
                   const std::string& id) {
  auto [it, inserted] = index.emplace(id, labels.size());
  if (inserted) labels.push_back(id);
  return it->second;
}

LongRecords read_long(std::istream& in, std::string_view source, std::string_view axis_name,
                      bool exact_header, bool allow_sentinel) {
  const auto lines = read_lines(in);
  if (lines.empty()) throw ParseError(std::string(source) + ": empty input", 0);

  const auto& header = lines.front();
  const bool header_ok =
      header.fields.size() == 4 && header.fields[0] == "alternative" &&
      header.fields[1] == "criterion" && header.fields[3] == "value" &&
      (!exact_header || header.fields[2] == axis_name) && !header.fields[2].empty();
  if (!header_ok) {
    throw ParseError(where(source, header.number) + ": header must be 'alternative,criterion," +
                         std::string(axis_name) + ",value'",
                     header.number);
  }

  LongRecords rec;
  std::unordered_map<std::string, std::size_t> alt_index, crit_index, axis_index;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> first_row;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto& line = lines[r];
    if (line.fields.size() != 4) {
      throw ParseError(where(source, line.number) + ": expected 4 fields, got " +
                           std::to_string(line.fields.size()),
                       line.number);
    }
    const auto& [a, c, t, v] =
        std::tie(line.fields[0], line.fields[1], line.fields[2], line.fields[3]);
    if (a.empty() || c.empty() || t.empty()) {
      throw ParseError(where(source, line.number) + ": empty label", line.number);
    }
    const double value = parse_value(v, source, line.number, allow_sentinel);
    const auto key = std::make_tuple(intern(rec.alternatives, alt_index, a),
                                     intern(rec.criteria, crit_index, c),
                                     intern(rec.axis, axis_index, t));
    if (rec.axis_rows.size() < rec.axis.size()) rec.axis_rows.push_back(line.number);
    auto [it, inserted] = first_row.emplace(key, line.number);
    if (!inserted) {
      throw DuplicateError(where(source, line.number) + ": duplicate cell (" + a + ", " + c +
                               ", " + t + "), first seen on line " + std::to_string(it->second),
                           line.number);
    }
    rec.cells.emplace(key, value);
  }
  if (rec.cells.empty()) throw ParseError(std::string(source) + ": no data rows", 0);
  return rec;
}

Tensor3 densify(const LongRecords& rec, const std::vector<std::size_t>& axis_order,
                std::string_view source) {
  const std::size_t n = rec.alternatives.size();
  const std::size_t m = rec.criteria.size();
  const std::size_t k = axis_order.size();
  if (rec.cells.size() != n * m * k) {
    std::vector<std::string> missing;
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t t = 0; t < k; ++t) {
          if (rec.cells.count({i, j, t}) == 0) {
            ++total;
            if (missing.size() < 20) {
              missing.push_back("(" + rec.alternatives[i] + ", " + rec.criteria[j] + ", " +
                                rec.axis[t] + ")");
            }
          }
        }
      }
    }
    std::string msg = std::string(source) + ": " + std::to_string(total) + " missing cell(s):";
    for (const auto& cell : missing) msg += " " + cell;
    if (total > missing.size()) msg += " ...";
    throw CompletenessError(msg);
  }
  std::vector<std::size_t> slot(k);
  for (std::size_t p = 0; p < k; ++p) slot[axis_order[p]] = p;
  Tensor3 values(n, m, k);
  for (const auto& [key, v] : rec.cells) {
    const auto [i, j, t] = key;
    values(i, j, slot[t]) = v;
  }
  return values;
}

std::string fixed3(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << v;
  return os.str();
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

std::string render_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& r : rows) {
    widths.resize(std::max(widths.size(), r.size()), 0);
    for (std::size_t c = 0; c < r.size(); ++c) widths[c] = std::max(widths[c], r[c].size());
  }
  std::string out;
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c > 0) out += "  ";
      out += c == 0 ? r[c] + std::string(widths[c] - r[c].size(), ' ') : pad(r[c], widths[c]);
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  }
  return out;
}

std::string json_string(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

/// JSON has no infinity; the CV sentinel is written as null.
std::string json_number(double v) { return std::isfinite(v) ? format_exact(v) : "null"; }

template <typename Cell>
std::string emit_long(const Labels& alts, const Labels& crits, const Labels& axis,
                      std::string_view axis_name, Format format, Cell cell) {
  std::string out;
  if (format == Format::Csv) {
    out += "alternative,criterion,";
    out += axis_name;
    out += ",value\n";
  }
  for (std::size_t i = 0; i < alts.size(); ++i) {
    for (std::size_t j = 0; j < crits.size(); ++j) {
      for (std::size_t k = 0; k < axis.size(); ++k) {
        const double v = cell(i, j, k);
        if (format == Format::Csv) {
          out += quote_csv(alts[i]) + "," + quote_csv(crits[j]) + "," + quote_csv(axis[k]) + "," +
                 format_exact(v) + "\n";
        } else {
          out += "{\"alternative\":" + json_string(alts[i]) +
                 ",\"criterion\":" + json_string(crits[j]) +
                 ",\"axis_label\":" + json_string(axis[k]) + ",\"value\":" + json_number(v) +
                 "}\n";
        }
      }
    }
  }
  return out;
}

}  // namespace

std::string format_exact(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

DecisionTensor parse_timeseries_csv(std::istream& in, std::string_view source) {
  auto rec = read_long(in, source, "time", true, false);
  std::vector<int> times;
  times.reserve(rec.axis.size());
  for (std::size_t p = 0; p < rec.axis.size(); ++p) {
    times.push_back(parse_time(rec.axis[p], source, rec.axis_rows[p]));
  }
  std::vector<std::size_t> order(times.size());
  for (std::size_t p = 0; p < order.size(); ++p) order[p] = p;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return times[a] < times[b]; });
  for (std::size_t p = 1; p < order.size(); ++p) {
    if (times[order[p]] == times[order[p - 1]]) {
      throw ParseError(std::string(source) + ": time labels '" + rec.axis[order[p - 1]] +
                           "' and '" + rec.axis[order[p]] + "' denote the same time",
                       rec.axis_rows[order[p]]);
    }
  }
  Tensor3 values = densify(rec, order, source);
  std::vector<int> sorted;
  for (auto p : order) sorted.push_back(times[p]);
  return DecisionTensor(std::move(rec.alternatives), std::move(rec.criteria), std::move(sorted),
                        std::move(values));
}

DecisionTensor parse_timeseries_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open data file '" + path.string() + "'");
  return parse_timeseries_csv(in, path.string());
}

FeatureTensor parse_feature_csv(std::istream& in, std::string_view source) {
  auto rec = read_long(in, source, "feature", false, true);
  std::vector<std::size_t> order(rec.axis.size());
  for (std::size_t p = 0; p < order.size(); ++p) order[p] = p;
  Tensor3 values = densify(rec, order, source);
  return FeatureTensor(std::move(rec.alternatives), std::move(rec.criteria), std::move(rec.axis),
                       std::move(values));
}

std::string convert_wide_csv(std::istream& in, std::string_view source) {
  const auto lines = read_lines(in);
  if (lines.empty()) throw ParseError(std::string(source) + ": empty input", 0);
  const auto& header = lines.front().fields;
  if (header.size() < 3 || header[0] != "alternative" || header[1] != "criterion") {
    throw ParseError(std::string(source) +
                         ": wide header must be 'alternative,criterion,<time>,...'",
                     lines.front().number);
  }
  for (std::size_t c = 2; c < header.size(); ++c) parse_time(header[c], source, 1);
  std::string out(kTimeSeriesHeader);
  out += '\n';
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto& f = lines[r].fields;
    if (f.size() != header.size()) {
      throw ParseError(where(source, lines[r].number) + ": expected " +
                           std::to_string(header.size()) + " fields, got " +
                           std::to_string(f.size()),
                       lines[r].number);
    }
    for (std::size_t c = 2; c < f.size(); ++c) {
      const double v = parse_value(f[c], source, lines[r].number);
      out += quote_csv(f[0]) + "," + quote_csv(f[1]) + "," + header[c] + "," + format_exact(v) +
             "\n";
    }
  }
  return out;
}

std::string_view to_string(Format f) noexcept {
  switch (f) {
    case Format::Table: return "table";
    case Format::Csv: return "csv";
    case Format::JsonLines: return "json-lines";
  }
  return "table";
}

Format parse_format(std::string_view text) {
  if (text == "table") return Format::Table;
  if (text == "csv") return Format::Csv;
  if (text == "json-lines" || text == "jsonl") return Format::JsonLines;
  throw ValidationError("unknown format '" + std::string(text) +
                        "' (expected table, csv or json-lines)");
}

std::string emit_tensor(const TimeSeriesTensor& tensor, Format format) {
  Labels axis;
  for (int t : tensor.times()) axis.push_back(std::to_string(t));
  if (format == Format::Table) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> head{"alternative", "criterion"};
    head.insert(head.end(), axis.begin(), axis.end());
    rows.push_back(std::move(head));
    for (std::size_t i = 0; i < tensor.n(); ++i) {
      for (std::size_t j = 0; j < tensor.m(); ++j) {
        std::vector<std::string> row{tensor.alternatives()[i], tensor.criteria()[j]};
        for (double v : tensor.fiber(i, j)) row.push_back(fixed3(v));
        rows.push_back(std::move(row));
      }
    }
    return render_table(rows);
  }
  return emit_long(tensor.alternatives(), tensor.criteria(), axis, "time", format,
                   [&](std::size_t i, std::size_t j, std::size_t k) {
                     return tensor.values()(i, j, k);
                   });
}

std::string emit_features(const FeatureTensor& s, Format format) {
  if (format == Format::Table) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> head{"feature"};
    std::vector<std::string> crit{"criterion"};
    for (std::size_t l = 0; l < s.w(); ++l) {
      for (std::size_t j = 0; j < s.m(); ++j) {
        head.push_back(j == 0 ? s.features()[l] : "");
        crit.push_back(s.criteria()[j]);
      }
    }
    rows.push_back(std::move(head));
    rows.push_back(std::move(crit));
    for (std::size_t i = 0; i < s.n(); ++i) {
      std::vector<std::string> row{s.alternatives()[i]};
      for (std::size_t l = 0; l < s.w(); ++l) {
        for (std::size_t j = 0; j < s.m(); ++j) row.push_back(fixed3(s(i, j, l)));
      }
      rows.push_back(std::move(row));
    }
    return render_table(rows);
  }
  return emit_long(s.alternatives(), s.criteria(), s.features(), "feature", format,
                   [&](std::size_t i, std::size_t j, std::size_t l) { return s(i, j, l); });
}

std::string emit_rank(const RankResult& rank, Format format) {
  std::string out;
  switch (format) {
    case Format::Table: {
      std::vector<std::vector<std::string>> rows{{"rank", "alternative", "score"}};
      for (std::size_t p = 0; p < rank.ordering.size(); ++p) {
        const auto i = rank.ordering[p];
        rows.push_back({std::to_string(p + 1), rank.alternatives[i], fixed3(rank.scores[i])});
      }
      out = render_table(rows);
      for (const auto& group : rank.tie_groups) {
        out += "tie:";
        for (auto i : group) out += " " + rank.alternatives[i];
        out += '\n';
      }
      break;
    }
    case Format::Csv:
      out = "rank,index,alternative,score\n";
      for (std::size_t p = 0; p < rank.ordering.size(); ++p) {
        const auto i = rank.ordering[p];
        out += std::to_string(p + 1) + "," + std::to_string(i) + "," +
               quote_csv(rank.alternatives[i]) + "," + format_exact(rank.scores[i]) + "\n";
      }
      break;
    case Format::JsonLines:
      for (std::size_t p = 0; p < rank.ordering.size(); ++p) {
        const auto i = rank.ordering[p];
        std::size_t group = 0;
        for (std::size_t g = 0; g < rank.tie_groups.size(); ++g) {
          const auto& tg = rank.tie_groups[g];
          if (std::find(tg.begin(), tg.end(), i) != tg.end()) group = g + 1;
        }
        out += "{\"rank\":" + std::to_string(p + 1) +
               ",\"alternative\":" + json_string(rank.alternatives[i]) +
               ",\"score\":" + json_number(rank.scores[i]) +
               ",\"tie_group\":" + std::to_string(group) + "}\n";
      }
      break;
  }
  return out;
}

RankResult parse_rank_csv(std::istream& in, std::string_view source) {
  const auto lines = read_lines(in);
  if (lines.empty() || lines.front().fields !=
                           std::vector<std::string>{"rank", "index", "alternative", "score"}) {
    throw ParseError(std::string(source) + ": header must be 'rank,index,alternative,score'", 1);
  }
  const std::size_t n = lines.size() - 1;
  Labels alts(n);
  std::vector<double> scores(n);
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> listed;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto& f = lines[r].fields;
    const auto row = lines[r].number;
    if (f.size() != 4) throw ParseError(where(source, row) + ": expected 4 fields", row);
    std::size_t index = 0;
    auto [ptr, ec] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), index);
    if (ec != std::errc() || ptr != f[1].data() + f[1].size() || index >= n || seen[index]) {
      throw ParseError(where(source, row) + ": bad alternative index '" + f[1] + "'", row);
    }
    seen[index] = true;
    alts[index] = f[2];
    scores[index] = parse_value(f[3], source, row);
    listed.push_back(index);
  }
  auto result = RankResult::from_scores(std::move(alts), std::move(scores));
  if (result.ordering != listed) {
    throw ValidationError(std::string(source) + ": listed order is inconsistent with the scores");
  }
  return result;
}

std::string emit_preference(const Matrix& pi, const Labels& alts, Format format) {
  std::string out;
  if (format == Format::Table) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> head{"pi"};
    head.insert(head.end(), alts.begin(), alts.end());
    rows.push_back(std::move(head));
    for (std::size_t i = 0; i < alts.size(); ++i) {
      std::vector<std::string> row{alts[i]};
      for (std::size_t k = 0; k < alts.size(); ++k) row.push_back(fixed3(pi(i, k)));
      rows.push_back(std::move(row));
    }
    return render_table(rows);
  }
  if (format == Format::Csv) out = "alternative,other,value\n";
  for (std::size_t i = 0; i < alts.size(); ++i) {
    for (std::size_t k = 0; k < alts.size(); ++k) {
      if (format == Format::Csv) {
        out += quote_csv(alts[i]) + "," + quote_csv(alts[k]) + "," + format_exact(pi(i, k)) + "\n";
      } else {
        out += "{\"alternative\":" + json_string(alts[i]) + ",\"other\":" + json_string(alts[k]) +
               ",\"value\":" + json_number(pi(i, k)) + "}\n";
      }
    }
  }
  return out;
}

std::string emit_diagnostics(const PredictionReport& report, Format format) {
  const auto& p = report.predictions;
  std::string out;
  if (format == Format::Table) {
    std::vector<std::vector<std::string>> rows{
        {"alternative", "criterion", "step", "steps", "rms_error", "weights"}};
    for (const auto& d : report.diagnostics) {
      double ss = 0.0;
      for (double e : d.errors) ss += e * e;
      const double rms = d.errors.empty() ? 0.0 : std::sqrt(ss / d.errors.size());
      std::string w;
      for (double v : d.weights) w += (w.empty() ? "" : " ") + fixed3(v);
      rows.push_back({p.alternatives()[d.alternative], p.criteria()[d.criterion],
                      std::to_string(d.step), std::to_string(d.errors.size()), fixed3(rms), w});
    }
    return render_table(rows);
  }
  if (format == Format::Csv) out = "alternative,criterion,step,kind,index,value\n";
  for (const auto& d : report.diagnostics) {
    const auto& a = p.alternatives()[d.alternative];
    const auto& c = p.criteria()[d.criterion];
    if (format == Format::Csv) {
      const std::string prefix = quote_csv(a) + "," + quote_csv(c) + "," + std::to_string(d.step);
      for (std::size_t k = 0; k < d.errors.size(); ++k) {
        out += prefix + ",error," + std::to_string(k) + "," + format_exact(d.errors[k]) + "\n";
      }
      for (std::size_t k = 0; k < d.weights.size(); ++k) {
        out += prefix + ",weight," + std::to_string(k) + "," + format_exact(d.weights[k]) + "\n";
      }
    } else {
      out += "{\"alternative\":" + json_string(a) + ",\"criterion\":" + json_string(c) +
             ",\"step\":" + std::to_string(d.step) + ",\"errors\":[";
      for (std::size_t k = 0; k < d.errors.size(); ++k) {
        out += (k ? "," : "") + json_number(d.errors[k]);
      }
      out += "],\"weights\":[";
      for (std::size_t k = 0; k < d.weights.size(); ++k) {
        out += (k ? "," : "") + json_number(d.weights[k]);
      }
      out += "]}\n";
    }
  }
  return out;
}

}  // namespace tensorrank
