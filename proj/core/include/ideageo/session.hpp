#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ideageo/allocation.hpp"
#include "ideageo/analytics.hpp"
#include "ideageo/embedding.hpp"

namespace ideageo {

inline constexpr int session_schema_version = 1;
inline constexpr int default_session_days = 10;

struct GroupDescriptor {
  int id = 0;
  Condition condition = Condition::random;
  std::vector<std::string> members;
  std::size_t degree = 4;
  // Node -> participant id; empty when the placement was not recorded.
  std::vector<std::string> placement;

  friend bool operator==(const GroupDescriptor&, const GroupDescriptor&) = default;
};

struct Post {
  std::string id;
  std::string participant_id;
  int day = 1;
  std::string text;
  // Carried through unchanged; not used by the analyses.
  std::uint32_t likes = 0;
  std::uint32_t comments = 0;

  friend bool operator==(const Post&, const Post&) = default;
};

struct FinalDesign {
  std::string id;
  std::string participant_id;
  std::string text;
  std::vector<double> scores;  // one per evaluator

  friend bool operator==(const FinalDesign&, const FinalDesign&) = default;
};

struct Participant {
  std::string id;
  std::string major;
  std::string background;

  friend bool operator==(const Participant&, const Participant&) = default;
};

struct Session {
  std::string name;
  std::string task;
  int days = default_session_days;
  std::vector<GroupDescriptor> groups;
  std::vector<Participant> participants;
  std::vector<Post> posts;
  std::vector<FinalDesign> final_designs;

  // Group id of a participant, 0 when unassigned.
  int group_of(std::string_view participant_id) const;

  friend bool operator==(const Session&, const Session&) = default;
};

// Every violation found, one locator-prefixed line each. Empty when valid.
std::vector<std::string> validate(const Session& session);

Session parse_session(std::string_view json_text);
std::string serialize_session(const Session& session);

// Throws Error{io}, Error{parse} or Error{validation}.
Session load_session(const std::filesystem::path& path);
void save_session(const Session& session, const std::filesystem::path& path);

// Registration list alone (participants array); accepts a full session file too.
std::vector<Participant> load_registrations(const std::filesystem::path& path);

// Binary model file, little-endian:
//   "IDGM" | u32 version | u32 dim | u32 vocab | u32 docs
//   vocab x (u32 byte length, UTF-8 term, u64 count)
//   word, output, doc matrices row-major as f64
//   docs x (u32 byte length, UTF-8 id)
//   config block (see model_io.cpp)
inline constexpr std::uint32_t model_format_version = 1;

std::string serialize_model(const EmbeddingModel& model);
EmbeddingModel parse_model(std::string_view bytes);
void save_model(const EmbeddingModel& model, const std::filesystem::path& path);
EmbeddingModel load_model(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace ideageo
