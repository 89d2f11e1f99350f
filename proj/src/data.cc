// Copyright 2026 The fishsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fishsim/data.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fishsim {
namespace {

constexpr char kMagic[] = "# fishsim-markers";
constexpr char kColumns[] = "t,marker_id,role,x,y";

std::string Row(size_t line, const std::string& field) {
  return "line " + std::to_string(line) + ", field '" + field + "'";
}

double ParseNumber(const std::string& s, size_t line, const std::string& field) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw TrajectoryFormatError(Row(line, field) + ": not a finite number: '" + s + "'");
  }
  return v;
}

std::string Trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

const char* RoleName(MarkerRole role) {
  switch (role) {
    case MarkerRole::kHead:
      return "head";
    case MarkerRole::kSpine:
      return "spine";
    case MarkerRole::kFin:
      return "fin";
  }
  return "?";
}

MarkerRole CanonicalRole(int marker_id) {
  if (marker_id < kHeadMarkers) return MarkerRole::kHead;
  if (marker_id < kHeadMarkers + kSpineMarkers) return MarkerRole::kSpine;
  return MarkerRole::kFin;
}

void MarkerTrajectory::Validate() const {
  if (!(sample_rate > 0.0)) throw TrajectoryFormatError("sample rate must be positive");
  for (size_t f = 0; f < frames.size(); ++f) {
    if (frames[f].markers.size() != kMarkerCount) {
      throw TrajectoryFormatError("frame " + std::to_string(f) + ": expected 11 markers, got " +
                                  std::to_string(frames[f].markers.size()));
    }
    if (f > 0 && !(frames[f].time > frames[f - 1].time)) {
      throw TrajectoryFormatError("frame " + std::to_string(f) + ": time is not strictly increasing");
    }
  }
}

std::string FormatTrajectory(const MarkerTrajectory& traj) {
  traj.Validate();
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s sample_rate=%.17g markers=%d\n", kMagic, traj.sample_rate,
                kMarkerCount);
  out += buf;
  out += kColumns;
  out += '\n';
  for (const MarkerFrame& frame : traj.frames) {
    for (int i = 0; i < kMarkerCount; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g,%d,%s,%.17g,%.17g\n", frame.time, i,
                    RoleName(CanonicalRole(i)), frame.markers[i].x(), frame.markers[i].y());
      out += buf;
    }
  }
  return out;
}

MarkerTrajectory ParseTrajectory(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;

  MarkerTrajectory traj;
  int declared_markers = -1;
  if (!std::getline(in, line)) throw TrajectoryFormatError("empty trajectory file");
  ++line_no;
  line = Trim(line);
  if (line.rfind(kMagic, 0) != 0) throw TrajectoryFormatError("line 1: missing '# fishsim-markers' header");
  {
    std::istringstream hs(line.substr(sizeof(kMagic) - 1));
    std::string kv;
    bool have_rate = false;
    while (hs >> kv) {
      const size_t eq = kv.find('=');
      if (eq == std::string::npos) throw TrajectoryFormatError(Row(1, kv) + ": expected key=value");
      const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
      if (key == "sample_rate") {
        traj.sample_rate = ParseNumber(value, 1, key);
        have_rate = true;
      } else if (key == "markers") {
        declared_markers = static_cast<int>(ParseNumber(value, 1, key));
      } else {
        throw TrajectoryFormatError(Row(1, key) + ": unknown header key");
      }
    }
    if (!have_rate || !(traj.sample_rate > 0.0)) {
      throw TrajectoryFormatError(Row(1, "sample_rate") + ": missing or non-positive");
    }
    if (declared_markers != kMarkerCount) {
      throw TrajectoryFormatError(Row(1, "markers") + ": expected 11 markers, header declares " +
                                  std::to_string(declared_markers));
    }
  }
  if (!std::getline(in, line) || Trim(line) != kColumns) {
    throw TrajectoryFormatError("line 2: expected column header '" + std::string(kColumns) + "'");
  }
  ++line_no;

  MarkerFrame current;
  auto flush = [&](size_t at_line) {
    if (current.markers.empty()) return;
    if (current.markers.size() != kMarkerCount) {
      throw TrajectoryFormatError("line " + std::to_string(at_line) + ": expected 11 markers in frame at t=" +
                                  std::to_string(current.time) + ", got " +
                                  std::to_string(current.markers.size()));
    }
    if (!traj.frames.empty() && !(current.time > traj.frames.back().time)) {
      throw TrajectoryFormatError(Row(at_line, "t") + ": time is not strictly increasing");
    }
    traj.frames.push_back(current);
    current = MarkerFrame{};
  };

  while (std::getline(in, line)) {
    ++line_no;
    line = Trim(line);
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ls(line);
    std::string col;
    while (std::getline(ls, col, ',')) cols.push_back(Trim(col));
    if (cols.size() != 5) {
      throw TrajectoryFormatError("line " + std::to_string(line_no) + ": expected 5 columns, got " +
                                  std::to_string(cols.size()));
    }
    const double t = ParseNumber(cols[0], line_no, "t");
    const double id_value = ParseNumber(cols[1], line_no, "marker_id");
    const int id = static_cast<int>(id_value);
    if (id != id_value || id < 0 || id >= kMarkerCount) {
      throw TrajectoryFormatError(Row(line_no, "marker_id") + ": expected 11 markers (ids 0-10), got id " +
                                  cols[1]);
    }
    if (cols[2] != RoleName(CanonicalRole(id))) {
      throw TrajectoryFormatError(Row(line_no, "role") + ": marker " + cols[1] + " must have role '" +
                                  RoleName(CanonicalRole(id)) + "'");
    }
    const double x = ParseNumber(cols[3], line_no, "x");
    const double y = ParseNumber(cols[4], line_no, "y");
    if (id == 0) flush(line_no);
    if (static_cast<int>(current.markers.size()) != id) {
      throw TrajectoryFormatError(Row(line_no, "marker_id") + ": markers out of order in frame");
    }
    if (id == 0) {
      current.time = t;
    } else if (t != current.time) {
      throw TrajectoryFormatError(Row(line_no, "t") + ": time differs within a frame");
    }
    current.markers.emplace_back(x, y);
  }
  flush(line_no);
  if (traj.frames.empty()) throw TrajectoryFormatError("trajectory has no frames");
  return traj;
}

MarkerTrajectory load_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open trajectory file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseTrajectory(ss.str());
}

void save_trajectory(const MarkerTrajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write trajectory file " + path);
  out << FormatTrajectory(traj);
}

LocalFrameTrajectory to_local_frame(const MarkerTrajectory& traj, LocalFrameMode mode) {
  LocalFrameTrajectory out;
  out.mode = mode;
  out.markers.sample_rate = traj.sample_rate;
  out.markers.frames.reserve(traj.frames.size());
  double advance = 0.0;
  Point2 prev_origin = Point2::Zero();
  Point2 prev_heading = Point2::UnitX();
  for (size_t f = 0; f < traj.frames.size(); ++f) {
    const MarkerFrame& in = traj.frames[f];
    if (in.markers.size() < 2) throw DegenerateFrameError("frame lacks head markers");
    const Point2 origin = in.markers[0];
    const Point2 d = in.markers[1] - origin;
    const double len = d.norm();
    if (!(len > 1e-12)) {
      throw DegenerateFrameError("head markers 0 and 1 coincide at t=" + std::to_string(in.time));
    }
    const Point2 ex = d / len;
    const Point2 ey(-ex.y(), ex.x());
    if (f > 0 && mode != LocalFrameMode::kPerFrame) {
      const Point2 step = origin - prev_origin;
      advance += step.dot(mode == LocalFrameMode::kAdvanceNewHeading ? ex : prev_heading);
    }
    MarkerFrame local;
    local.time = in.time;
    local.markers.reserve(in.markers.size());
    for (const Point2& p : in.markers) {
      const Point2 r = p - origin;
      local.markers.emplace_back(ex.dot(r) + advance, ey.dot(r));
    }
    // Pin the frame-defining markers against rounding.
    local.markers[0] = Point2(advance, 0.0);
    local.markers[1].y() = 0.0;
    out.markers.frames.push_back(std::move(local));
    prev_origin = origin;
    prev_heading = ex;
  }
  return out;
}

MarkerTrajectory resample(const MarkerTrajectory& traj, double rate) {
  if (!(rate > 0.0)) throw Error("resample rate must be positive");
  MarkerTrajectory out;
  out.sample_rate = rate;
  if (traj.frames.empty()) return out;
  const double t0 = traj.frames.front().time;
  const double t1 = traj.frames.back().time;
  const long count = static_cast<long>(std::floor((t1 - t0) * rate + 1e-9)) + 1;
  size_t seg = 0;
  for (long k = 0; k < count; ++k) {
    const double t = (k == count - 1 && std::abs(t0 + k / rate - t1) < 1e-9) ? t1 : t0 + k / rate;
    while (seg + 1 < traj.frames.size() - 1 && traj.frames[seg + 1].time <= t) ++seg;
    MarkerFrame f;
    f.time = t;
    if (traj.frames.size() == 1) {
      f.markers = traj.frames[0].markers;
    } else {
      const MarkerFrame& a = traj.frames[seg];
      const MarkerFrame& b = traj.frames[seg + 1];
      const double w = std::clamp((t - a.time) / (b.time - a.time), 0.0, 1.0);
      f.markers.resize(a.markers.size());
      for (size_t i = 0; i < a.markers.size(); ++i) {
        f.markers[i] = w == 0.0 ? a.markers[i] : w == 1.0 ? b.markers[i] : (1.0 - w) * a.markers[i] + w * b.markers[i];
      }
    }
    out.frames.push_back(std::move(f));
  }
  return out;
}

MarkerTrajectory TrimWarmup(const MarkerTrajectory& traj, double warmup) {
  MarkerTrajectory out;
  out.sample_rate = traj.sample_rate;
  if (traj.frames.empty()) return out;
  const double start = traj.frames.front().time + warmup - 1e-9;
  for (const MarkerFrame& f : traj.frames) {
    if (f.time >= start) out.frames.push_back(f);
  }
  return out;
}

double MeasuredCruiseSpeed(const MarkerTrajectory& traj, double warmup) {
  const MarkerTrajectory window = TrimWarmup(traj, warmup);
  if (window.size() < 2) throw Error("cruise speed needs at least two frames after warmup");
  const LocalFrameTrajectory local = to_local_frame(window, LocalFrameMode::kAdvanceNewHeading);
  const double distance = local.markers.frames.back().markers[0].x();
  return distance / window.duration();
}

}  // namespace fishsim
