#include "ideageo/report.hpp"

#include <charconv>
#include <sstream>

#include <json.hpp>

#include "ideageo/error.hpp"
#include "ideageo/session.hpp"

namespace ideageo {

namespace {

using json = nlohmann::ordered_json;

constexpr int report_version = 1;

json design_json(const ScoredDesign& d) {
  return json{{"id", d.design_id},     {"participant", d.participant_id},
              {"group", d.group},      {"x", d.point.x},
              {"y", d.point.y},        {"mean_score", d.mean_score},
              {"scores", d.scores}};
}

json optional_design(const std::optional<ScoredDesign>& d) {
  return d ? design_json(*d) : json(nullptr);
}

json series_json(const DailySeries& series) {
  json out = json::array();
  for (const auto& v : series) out.push_back(v ? json(*v) : json(nullptr));
  return out;
}

void check_csv_field(const std::string& s) {
  if (s.find_first_of(",\n\r;") != std::string::npos) {
    throw Error(ErrorCode::validation, "identifier '" + s + "' cannot be written to CSV");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw Error(ErrorCode::parse, where + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, ec == std::errc() ? end : buffer);
}

std::string format_report(const AnalysisResults& r) {
  json root;
  root["report_version"] = report_version;
  root["session"] = r.session;
  root["task"] = r.task;
  root["days"] = r.days;
  root["embedding_dim"] = r.dim;

  root["groups"] = json::array();
  for (const auto& g : r.groups) {
    root["groups"].push_back({{"id", g.id},
                              {"condition", g.condition},
                              {"members", g.members},
                              {"daily_counts", g.daily_counts},
                              {"daily_average_distance", series_json(g.daily_average_distance)},
                              {"final_designs", g.final_designs},
                              {"best_design", optional_design(g.best_design)}});
  }

  root["comparisons"] = json::array();
  for (const auto& c : r.comparisons) {
    root["comparisons"].push_back({{"group_a", c.group_a},
                                   {"group_b", c.group_b},
                                   {"measure", c.measure},
                                   {"method", c.result.method},
                                   {"statistic", c.result.statistic},
                                   {"p_value", c.result.p_value}});
  }

  json projection;
  projection["eigenvalues"] = r.eigenvalues;
  projection["posts"] = json::array();
  for (const auto& p : r.projected_posts) {
    projection["posts"].push_back({{"id", p.id},
                                   {"participant", p.participant_id},
                                   {"group", p.group},
                                   {"day", p.day},
                                   {"x", p.point.x},
                                   {"y", p.point.y}});
  }
  projection["final_designs"] = json::array();
  for (const auto& d : r.designs) projection["final_designs"].push_back(design_json(d));
  root["projection"] = std::move(projection);

  root["best_design"] = optional_design(r.best_design);
  root["terrain_files"] = r.terrain_files;
  return root.dump(2) + "\n";
}

void write_report(const AnalysisResults& results, const std::filesystem::path& path) {
  write_file(path, format_report(results));
}

std::vector<ScoredDesign> parse_report_designs(const std::string& report_text) {
  json root;
  try {
    root = json::parse(report_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse, std::string("malformed report: ") + e.what());
  }
  std::vector<ScoredDesign> out;
  try {
    for (const auto& d : root.at("projection").at("final_designs")) {
      out.push_back(make_scored_design(d.at("id").get<std::string>(),
                                       d.at("participant").get<std::string>(),
                                       d.at("group").get<int>(),
                                       Point2{d.at("x").get<double>(), d.at("y").get<double>()},
                                       d.at("scores").get<std::vector<double>>()));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("report is missing design fields: ") + e.what());
  }
  return out;
}

std::string format_design_points(const std::vector<ScoredDesign>& designs) {
  std::string out = "design_id,participant_id,group,x,y,mean_score,scores\n";
  for (const auto& d : designs) {
    check_csv_field(d.design_id);
    check_csv_field(d.participant_id);
    out += d.design_id + "," + d.participant_id + "," + std::to_string(d.group) + "," +
           format_double(d.point.x) + "," + format_double(d.point.y) + "," +
           format_double(d.mean_score) + ",";
    for (std::size_t i = 0; i < d.scores.size(); ++i) {
      if (i > 0) out += ';';
      out += format_double(d.scores[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<ScoredDesign> parse_design_points(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("design_id,", 0) != 0) {
    throw Error(ErrorCode::parse, "design points: missing header");
  }
  std::vector<ScoredDesign> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = "design points line " + std::to_string(line_no);
    const auto fields = split(line, ',');
    if (fields.size() != 7) throw Error(ErrorCode::parse, where + ": expected 7 fields");
    std::vector<double> scores;
    for (const auto& s : split(fields[6], ';')) scores.push_back(parse_double(s, where));
    out.push_back(make_scored_design(fields[0], fields[1],
                                     static_cast<int>(parse_double(fields[2], where)),
                                     Point2{parse_double(fields[3], where), parse_double(fields[4], where)},
                                     std::move(scores)));
  }
  return out;
}

std::string format_idea_points(const std::vector<ProjectedIdea>& ideas) {
  std::string out = "id,participant_id,group,day,x,y\n";
  for (const auto& p : ideas) {
    check_csv_field(p.id);
    check_csv_field(p.participant_id);
    out += p.id + "," + p.participant_id + "," + std::to_string(p.group) + "," +
           std::to_string(p.day) + "," + format_double(p.point.x) + "," +
           format_double(p.point.y) + "\n";
  }
  return out;
}

std::vector<ScoredDesign> load_designs(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  try {
    if (first != std::string::npos && text[first] == '{') return parse_report_designs(text);
    return parse_design_points(text);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace ideageo
