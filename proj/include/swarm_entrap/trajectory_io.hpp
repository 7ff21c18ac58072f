#pragma once

// Trajectory CSV: one row per agent and per target per recorded step.
//
//   step,kind,id,x,y,vx,vy,assignment
//
// Numbers are printed with 17 significant digits through std::to_chars so the
// text is identical on every platform and parses back to the same doubles.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "swarm_entrap/errors.hpp"
#include "swarm_entrap/simulator.hpp"

namespace swarm_entrap {

inline constexpr std::string_view kTrajectoryHeader = "step,kind,id,x,y,vx,vy,assignment";

/// Fixed 17-significant-digit rendering.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << kTrajectoryHeader << '\n';
  for (const auto& f : traj.frames) {
    for (const auto& a : f.agents)
      out << f.step << ",agent," << a.id << ',' << format_double(a.pos.x) << ',' << format_double(a.pos.y) << ','
          << format_double(a.vel.x) << ',' << format_double(a.vel.y) << ',' << a.assigned_target << '\n';
    for (const auto& t : f.targets)
      out << f.step << ",target," << t.id << ',' << format_double(t.pos.x) << ',' << format_double(t.pos.y) << ','
          << format_double(t.vel.x) << ',' << format_double(t.vel.y) << ",\n";
  }
}

inline std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  write_trajectory_csv(os, traj);
  return os.str();
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

template <class T>
T parse_field(std::string_view text, std::size_t line_no, const char* column) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ArgumentError("trajectory line " + std::to_string(line_no) + ": bad " + column + " '" + std::string(text) +
                        "'");
  return value;
}

}  // namespace detail

/// Parses a trajectory CSV. Rows must be grouped by step, agents before targets,
/// ids ascending from 0 within each group.
inline Trajectory read_trajectory_csv(std::istream& in) {
  Trajectory traj;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) return traj;
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTrajectoryHeader) throw ArgumentError("trajectory: unexpected header '" + line + "'");

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = detail::split_fields(line);
    if (fields.size() != 8)
      throw ArgumentError("trajectory line " + std::to_string(line_no) + ": expected 8 fields");
    const auto step = detail::parse_field<std::int64_t>(fields[0], line_no, "step");
    const auto id = detail::parse_field<std::size_t>(fields[2], line_no, "id");
    const Vec2 pos{detail::parse_field<double>(fields[3], line_no, "x"),
                   detail::parse_field<double>(fields[4], line_no, "y")};
    const Vec2 vel{detail::parse_field<double>(fields[5], line_no, "vx"),
                   detail::parse_field<double>(fields[6], line_no, "vy")};

    if (traj.frames.empty() || traj.frames.back().step != step) {
      if (!traj.frames.empty() && step <= traj.frames.back().step)
        throw ArgumentError("trajectory line " + std::to_string(line_no) + ": steps must increase");
      traj.frames.push_back(Frame{step, {}, {}});
    }
    auto& frame = traj.frames.back();
    if (fields[1] == "agent") {
      if (!frame.targets.empty() || id != frame.agents.size())
        throw ArgumentError("trajectory line " + std::to_string(line_no) + ": agent rows out of order");
      frame.agents.push_back({id, pos, vel, detail::parse_field<std::size_t>(fields[7], line_no, "assignment")});
    } else if (fields[1] == "target") {
      if (id != frame.targets.size() || !fields[7].empty())
        throw ArgumentError("trajectory line " + std::to_string(line_no) + ": malformed target row");
      TargetState t;
      t.id = id;
      t.pos = pos;
      t.vel = vel;
      frame.targets.push_back(t);
    } else {
      throw ArgumentError("trajectory line " + std::to_string(line_no) + ": unknown kind '" +
                          std::string(fields[1]) + "'");
    }
  }
  for (const auto& f : traj.frames)
    if (f.agents.size() != traj.frames.front().agents.size() || f.targets.size() != traj.frames.front().targets.size())
      throw ArgumentError("trajectory: step " + std::to_string(f.step) + " has a different population");
  return traj;
}

inline Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot read trajectory file " + path.string());
  return read_trajectory_csv(in);
}

}  // namespace swarm_entrap
