#include "ideageo/session.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ideageo/error.hpp"

namespace ideageo {

namespace {

using json = nlohmann::ordered_json;

std::string locator(std::string_view array, std::size_t index, std::string_view id) {
  std::string out = std::string(array) + "[" + std::to_string(index) + "]";
  if (!id.empty()) out += " (id '" + std::string(id) + "')";
  return out;
}

template <typename T>
T field(const json& object, const char* key, const std::string& where) {
  const auto it = object.find(key);
  if (it == object.end()) throw Error(ErrorCode::parse, where + ": missing field '" + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::parse, where + ": field '" + key + "' has the wrong type");
  }
}

template <typename T>
T optional_field(const json& object, const char* key, T fallback, const std::string& where) {
  if (!object.contains(key) || object.at(key).is_null()) return fallback;
  return field<T>(object, key, where);
}

const json& array_field(const json& object, const char* key, const std::string& where,
                        bool required) {
  static const json empty = json::array();
  const auto it = object.find(key);
  if (it == object.end()) {
    if (required) throw Error(ErrorCode::parse, where + ": missing array '" + key + "'");
    return empty;
  }
  if (!it->is_array()) throw Error(ErrorCode::parse, where + ": '" + key + "' must be an array");
  return *it;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse, std::string("malformed JSON: ") + e.what());
  }
}

std::vector<Participant> parse_participants(const json& root) {
  std::vector<Participant> out;
  const auto& items = array_field(root, "participants", "session", true);
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string where = locator("participants", i, "");
    if (!items[i].is_object()) throw Error(ErrorCode::parse, where + ": expected an object");
    out.push_back(Participant{field<std::string>(items[i], "id", where),
                              optional_field<std::string>(items[i], "major", "", where),
                              optional_field<std::string>(items[i], "background", "", where)});
  }
  return out;
}

}  // namespace

int Session::group_of(std::string_view participant_id) const {
  for (const auto& g : groups) {
    for (const auto& m : g.members) {
      if (m == participant_id) return g.id;
    }
  }
  return 0;
}

std::vector<std::string> validate(const Session& session) {
  std::vector<std::string> problems;
  if (session.days < 1) problems.push_back("days: session length must be at least 1");

  std::set<std::string> ids;
  for (std::size_t i = 0; i < session.participants.size(); ++i) {
    const auto& p = session.participants[i];
    if (!ids.insert(p.id).second) {
      problems.push_back(locator("participants", i, p.id) + ": duplicate participant id");
    }
  }
  auto known = [&](const std::string& id) { return ids.count(id) > 0; };

  for (std::size_t g = 0; g < session.groups.size(); ++g) {
    const auto& group = session.groups[g];
    for (std::size_t m = 0; m < group.members.size(); ++m) {
      if (!known(group.members[m])) {
        problems.push_back(locator("groups", g, "") + ".members[" + std::to_string(m) +
                           "]: unknown participant '" + group.members[m] + "'");
      }
    }
  }
  for (std::size_t i = 0; i < session.posts.size(); ++i) {
    const auto& post = session.posts[i];
    if (!known(post.participant_id)) {
      problems.push_back(locator("posts", i, post.id) + ": unknown participant '" +
                         post.participant_id + "'");
    }
    if (post.day < 1 || post.day > session.days) {
      problems.push_back(locator("posts", i, post.id) + ": day " + std::to_string(post.day) +
                         " outside 1.." + std::to_string(session.days));
    }
  }
  for (std::size_t i = 0; i < session.final_designs.size(); ++i) {
    const auto& design = session.final_designs[i];
    if (!known(design.participant_id)) {
      problems.push_back(locator("final_designs", i, design.id) + ": unknown participant '" +
                         design.participant_id + "'");
    }
    if (design.scores.empty()) {
      problems.push_back(locator("final_designs", i, design.id) + ": no evaluation scores");
    }
    for (std::size_t s = 0; s < design.scores.size(); ++s) {
      const double v = design.scores[s];
      if (!(v >= 1.0 && v <= 5.0)) {
        std::ostringstream msg;
        msg << locator("final_designs", i, design.id) << ".scores[" << s << "]: " << v
            << " outside the 1..5 Likert range";
        problems.push_back(msg.str());
      }
    }
  }
  return problems;
}

Session parse_session(std::string_view json_text) {
  const json root = parse_json(json_text);
  if (!root.is_object()) throw Error(ErrorCode::parse, "session: top level must be an object");
  const int version = field<int>(root, "schema_version", "session");
  if (version != session_schema_version) {
    throw Error(ErrorCode::version_mismatch,
                "session: schema_version " + std::to_string(version) + " is not supported");
  }

  Session s;
  s.name = field<std::string>(root, "name", "session");
  s.task = optional_field<std::string>(root, "task", "", "session");
  s.days = optional_field<int>(root, "days", default_session_days, "session");
  s.participants = parse_participants(root);

  const auto& groups = array_field(root, "groups", "session", false);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const std::string where = locator("groups", i, "");
    GroupDescriptor g;
    g.id = field<int>(groups[i], "id", where);
    try {
      g.condition = parse_condition(field<std::string>(groups[i], "condition", where));
    } catch (const Error& e) {
      throw Error(ErrorCode::parse, where + ": " + e.what());
    }
    g.members = field<std::vector<std::string>>(groups[i], "members", where);
    g.degree = optional_field<std::size_t>(groups[i], "degree", 4, where);
    g.placement = optional_field<std::vector<std::string>>(groups[i], "placement", {}, where);
    s.groups.push_back(std::move(g));
  }

  const auto& posts = array_field(root, "posts", "session", false);
  for (std::size_t i = 0; i < posts.size(); ++i) {
    const std::string where = locator("posts", i, "");
    Post p;
    p.id = field<std::string>(posts[i], "id", where);
    p.participant_id = field<std::string>(posts[i], "participant", where);
    p.day = field<int>(posts[i], "day", where);
    p.text = field<std::string>(posts[i], "text", where);
    p.likes = optional_field<std::uint32_t>(posts[i], "likes", 0, where);
    p.comments = optional_field<std::uint32_t>(posts[i], "comments", 0, where);
    s.posts.push_back(std::move(p));
  }

  const auto& designs = array_field(root, "final_designs", "session", false);
  for (std::size_t i = 0; i < designs.size(); ++i) {
    const std::string where = locator("final_designs", i, "");
    FinalDesign d;
    d.id = field<std::string>(designs[i], "id", where);
    d.participant_id = field<std::string>(designs[i], "participant", where);
    d.text = field<std::string>(designs[i], "text", where);
    d.scores = field<std::vector<double>>(designs[i], "scores", where);
    s.final_designs.push_back(std::move(d));
  }
  return s;
}

std::string serialize_session(const Session& session) {
  json root;
  root["schema_version"] = session_schema_version;
  root["name"] = session.name;
  root["task"] = session.task;
  root["days"] = session.days;
  root["participants"] = json::array();
  for (const auto& p : session.participants) {
    root["participants"].push_back({{"id", p.id}, {"major", p.major}, {"background", p.background}});
  }
  root["groups"] = json::array();
  for (const auto& g : session.groups) {
    json item{{"id", g.id},
              {"condition", std::string(to_string(g.condition))},
              {"degree", g.degree},
              {"members", g.members}};
    if (!g.placement.empty()) item["placement"] = g.placement;
    root["groups"].push_back(std::move(item));
  }
  root["posts"] = json::array();
  for (const auto& p : session.posts) {
    root["posts"].push_back({{"id", p.id},
                             {"participant", p.participant_id},
                             {"day", p.day},
                             {"text", p.text},
                             {"likes", p.likes},
                             {"comments", p.comments}});
  }
  root["final_designs"] = json::array();
  for (const auto& d : session.final_designs) {
    root["final_designs"].push_back(
        {{"id", d.id}, {"participant", d.participant_id}, {"text", d.text}, {"scores", d.scores}});
  }
  return root.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::io, "failed reading '" + path.string() + "'");
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::io, "failed writing '" + path.string() + "'");
}

Session load_session(const std::filesystem::path& path) {
  Session s;
  try {
    s = parse_session(read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::io) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
  const auto problems = validate(s);
  if (!problems.empty()) {
    std::string message = path.string() + ": " + std::to_string(problems.size()) + " invalid record(s)";
    for (const auto& p : problems) message += "\n  " + p;
    throw Error(ErrorCode::validation, message);
  }
  return s;
}

void save_session(const Session& session, const std::filesystem::path& path) {
  write_file(path, serialize_session(session));
}

std::vector<Participant> load_registrations(const std::filesystem::path& path) {
  const json root = parse_json(read_file(path));
  if (!root.is_object()) throw Error(ErrorCode::parse, path.string() + ": expected an object");
  auto participants = parse_participants(root);
  std::set<std::string> ids;
  for (std::size_t i = 0; i < participants.size(); ++i) {
    if (!ids.insert(participants[i].id).second) {
      throw Error(ErrorCode::validation, path.string() + ": " +
                                             locator("participants", i, participants[i].id) +
                                             ": duplicate participant id");
    }
  }
  return participants;
}

}  // namespace ideageo
