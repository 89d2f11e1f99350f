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

// Planar marker trajectories, real or simulated.
//
// File format (plain text, one row per frame and marker):
//
//   # fishsim-markers sample_rate=60 markers=11
//   t,marker_id,role,x,y
//   0,0,head,0.1,0.2
//   ...
//
// Markers 0-4 are on the head, 5-9 on the spine segments (head to tail) and
// 10 on the caudal fin. Numbers are written with 17 significant digits so a
// save/load cycle is exact.

#ifndef FISHSIM_DATA_H_
#define FISHSIM_DATA_H_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "fishsim/core.h"

namespace fishsim {

using Point2 = Eigen::Vector2d;

enum class MarkerRole { kHead, kSpine, kFin };

inline constexpr int kHeadMarkers = 5;
inline constexpr int kSpineMarkers = 5;
inline constexpr int kMarkerCount = 11;

const char* RoleName(MarkerRole role);
MarkerRole CanonicalRole(int marker_id);

struct MarkerFrame {
  double time = 0.0;  // s
  std::vector<Point2> markers;
};

struct MarkerTrajectory {
  double sample_rate = 60.0;  // Hz
  std::vector<MarkerFrame> frames;

  size_t size() const { return frames.size(); }
  double duration() const { return frames.empty() ? 0.0 : frames.back().time - frames.front().time; }
  // Throws SchemaError-like Error on a wrong marker count or non-monotone time.
  void Validate() const;
};

class TrajectoryFormatError : public Error {
 public:
  using Error::Error;
};

class DegenerateFrameError : public Error {
 public:
  using Error::Error;
};

std::string FormatTrajectory(const MarkerTrajectory& traj);
MarkerTrajectory ParseTrajectory(const std::string& text);
MarkerTrajectory load_trajectory(const std::string& path);
void save_trajectory(const MarkerTrajectory& traj, const std::string& path);

enum class LocalFrameMode {
  kPerFrame,           // head marker 0 at the origin, marker 1 on +x, every frame
  kAdvanceNewHeading,  // plus the head's cumulative advance along the current heading
  kAdvanceOldHeading,  // plus the cumulative advance along the previous heading
};

// Markers expressed in the head frame. In the advance modes the x axis
// additionally carries the distance swum along the heading since frame 0.
struct LocalFrameTrajectory {
  MarkerTrajectory markers;
  LocalFrameMode mode = LocalFrameMode::kPerFrame;

  size_t size() const { return markers.size(); }
};

// Throws DegenerateFrameError when head markers 0 and 1 coincide.
LocalFrameTrajectory to_local_frame(const MarkerTrajectory& traj,
                                    LocalFrameMode mode = LocalFrameMode::kPerFrame);

// Linear interpolation onto t0 + k / rate.
MarkerTrajectory resample(const MarkerTrajectory& traj, double rate);

// Drops frames earlier than t_start (relative to the first frame).
MarkerTrajectory TrimWarmup(const MarkerTrajectory& traj, double warmup);

// Mean forward speed of the head frame after the warmup window, m/s.
double MeasuredCruiseSpeed(const MarkerTrajectory& traj, double warmup);

}  // namespace fishsim

#endif  // FISHSIM_DATA_H_
