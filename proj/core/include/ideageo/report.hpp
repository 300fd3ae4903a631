#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ideageo/analytics.hpp"
#include "ideageo/geography.hpp"

namespace ideageo {

struct GroupSummary {
  int id = 0;
  std::string condition;
  std::size_t members = 0;
  std::vector<std::size_t> daily_counts;
  DailySeries daily_average_distance;
  std::size_t final_designs = 0;
  std::optional<ScoredDesign> best_design;
};

struct GroupComparison {
  int group_a = 0;
  int group_b = 0;
  std::string measure;
  TestResult result;
};

struct ProjectedIdea {
  std::string id;
  std::string participant_id;
  int group = 0;
  int day = 0;  // 0 for final designs
  Point2 point;
};

// Everything the analysis stage produces for one session.
struct AnalysisResults {
  std::string session;
  std::string task;
  int days = 0;
  std::size_t dim = 0;
  std::vector<GroupSummary> groups;
  std::vector<GroupComparison> comparisons;
  Vector eigenvalues;
  std::vector<ProjectedIdea> projected_posts;
  std::vector<ScoredDesign> designs;
  std::optional<ScoredDesign> best_design;
  std::vector<std::string> terrain_files;
};

std::string format_report(const AnalysisResults& results);
void write_report(const AnalysisResults& results, const std::filesystem::path& path);

// Scored design points, as read back by the terrain stage.
std::vector<ScoredDesign> parse_report_designs(const std::string& report_text);

// CSV: design_id,participant_id,group,x,y,mean_score,scores (scores ';'-joined).
std::string format_design_points(const std::vector<ScoredDesign>& designs);
std::vector<ScoredDesign> parse_design_points(const std::string& csv_text);
std::string format_idea_points(const std::vector<ProjectedIdea>& ideas);

// Reads either a report (JSON) or a design points CSV.
std::vector<ScoredDesign> load_designs(const std::filesystem::path& path);

// Shortest decimal that reads back as the same double.
std::string format_double(double value);

}  // namespace ideageo
