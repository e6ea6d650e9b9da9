#include "mfirl/demo_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mfirl {

namespace {

int parse_int(std::string_view sv, const char* what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), value);
  if (ec != std::errc{} || ptr != sv.data() + sv.size())
    throw std::runtime_error(std::string("demo file: bad ") + what + " '" +
                             std::string(sv) + "'");
  return value;
}

}  // namespace

std::string serialize_demonstrations(const DemonstrationSet& demos) {
  std::ostringstream out;
  out << "env=" << demos.env_tag << " episodes=" << demos.trajectories.size()
      << "\n";
  for (const auto& traj : demos.trajectories) {
    bool first = true;
    for (const auto& [s, a] : traj.steps) {
      if (!first) out << ' ';
      out << s << ':' << a;
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

DemonstrationSet parse_demonstrations(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header))
    throw std::runtime_error("demo file: missing header");

  DemonstrationSet demos;
  std::size_t expected = 0;
  {
    std::istringstream hs(header);
    std::string field;
    bool have_env = false, have_count = false;
    while (hs >> field) {
      if (field.rfind("env=", 0) == 0) {
        demos.env_tag = field.substr(4);
        have_env = true;
      } else if (field.rfind("episodes=", 0) == 0) {
        expected = static_cast<std::size_t>(
            parse_int(std::string_view(field).substr(9), "episode count"));
        have_count = true;
      } else {
        throw std::runtime_error("demo file: unknown header field '" + field +
                                 "'");
      }
    }
    if (!have_env || !have_count)
      throw std::runtime_error("demo file: header must name env and episodes");
  }

  std::string line;
  while (std::getline(in, line)) {
    Trajectory traj;
    std::istringstream ls(line);
    std::string pair;
    while (ls >> pair) {
      const auto colon = pair.find(':');
      if (colon == std::string::npos)
        throw std::runtime_error("demo file: malformed step '" + pair + "'");
      const StateId s = parse_int(std::string_view(pair).substr(0, colon), "state id");
      const ActionId a = parse_int(std::string_view(pair).substr(colon + 1), "action id");
      if (s < 0 || a < 0)
        throw std::runtime_error("demo file: negative id in '" + pair + "'");
      traj.steps.emplace_back(s, a);
    }
    if (traj.empty())
      throw std::runtime_error("demo file: empty episode line");
    demos.trajectories.push_back(std::move(traj));
  }
  if (demos.trajectories.size() != expected)
    throw std::runtime_error("demo file: header announces " +
                             std::to_string(expected) + " episodes, found " +
                             std::to_string(demos.trajectories.size()));
  return demos;
}

void save_demonstrations(const std::string& path,
                         const DemonstrationSet& demos) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << serialize_demonstrations(demos);
}

DemonstrationSet load_demonstrations(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open demo file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_demonstrations(buf.str());
}

}  // namespace mfirl
