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

#include "fishsim/config.h"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace fishsim {
namespace {

using nlohmann::json;

json Vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

// Reads fields out of one JSON object and rejects anything it did not touch.
class Reader {
 public:
  Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw SchemaError(path_ + ": expected an object");
  }
  ~Reader() = default;

  double Number(const std::string& key) {
    const json& v = Get(key);
    if (!v.is_number()) throw SchemaError(Name(key) + ": expected a number");
    return v.get<double>();
  }
  int Integer(const std::string& key) {
    const json& v = Get(key);
    if (!v.is_number_integer()) throw SchemaError(Name(key) + ": expected an integer");
    return v.get<int>();
  }
  Vec3 Vector(const std::string& key) {
    const json& v = Get(key);
    if (!v.is_array() || v.size() != 3) throw SchemaError(Name(key) + ": expected 3 numbers");
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
      if (!v[i].is_number()) throw SchemaError(Name(key) + ": expected 3 numbers");
      out[i] = v[i].get<double>();
    }
    return out;
  }
  Reader Object(const std::string& key) { return Reader(Get(key), Name(key)); }
  void Finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) throw SchemaError(Name(it.key()) + ": unknown field");
    }
  }

 private:
  const json& Get(const std::string& key) {
    if (!obj_.contains(key)) throw SchemaError(Name(key) + ": missing field");
    seen_.insert(key);
    return obj_.at(key);
  }
  std::string Name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

void RequirePositive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) throw SchemaError(std::string(field) + ": must be positive");
}

void RequirePositive(const Vec3& v, const char* field) {
  for (int i = 0; i < 3; ++i) RequirePositive(v[i], field);
}

json ToJson(const SwimmerConfig& c) {
  json j;
  j["geometry"] = {{"bulk_dims", Vec(c.geometry.bulk_dims)},
                   {"head_semi_axes", Vec(c.geometry.head_semi_axes)},
                   {"segment_count", c.geometry.segment_count},
                   {"segment_semi_axes", Vec(c.geometry.segment_semi_axes)},
                   {"fin_semi_axes", Vec(c.geometry.fin_semi_axes)}};
  j["total_mass"] = c.total_mass;
  j["joints"] = {{"stiffness", c.joints.stiffness},
                 {"damping", c.joints.damping},
                 {"limit_deg", c.joints.limit_deg}};
  j["tendon"] = {{"stiffness", c.tendon.stiffness},
                 {"lateral_offset", c.tendon.lateral_offset},
                 {"head_via_x", c.tendon.head_via_x},
                 {"crossover_index", c.tendon.crossover_index}};
  j["motor"] = {{"crank_arm", c.motor.crank_arm},
                {"rod_length", c.motor.rod_length},
                {"max_rate", c.motor.max_rate}};
  j["fluid"] = {{"density", c.fluid.density},
                {"viscosity", c.fluid.viscosity},
                {"coefficients",
                 {{"blunt", c.fluid.blunt},
                  {"slender", c.fluid.slender},
                  {"angular", c.fluid.angular},
                  {"kutta", c.fluid.kutta},
                  {"magnus", c.fluid.magnus}}}};
  j["dt"] = c.dt;
  j["surface"] = {{"z0", c.surface.z0},
                  {"frequency_hz", c.surface.frequency_hz},
                  {"damping_ratio", c.surface.damping_ratio}};
  j["sample_rate"] = c.sample_rate;
  return j;
}

}  // namespace

void SwimmerConfig::Validate() const {
  RequirePositive(geometry.bulk_dims, "geometry.bulk_dims");
  RequirePositive(geometry.head_semi_axes, "geometry.head_semi_axes");
  RequirePositive(geometry.segment_semi_axes, "geometry.segment_semi_axes");
  RequirePositive(geometry.fin_semi_axes, "geometry.fin_semi_axes");
  if (geometry.segment_count < 1) throw SchemaError("geometry.segment_count: must be >= 1");
  const double length = 2.0 * (geometry.head_semi_axes.x() +
                               geometry.segment_count * geometry.segment_semi_axes.x() +
                               geometry.fin_semi_axes.x());
  if (length > 1.1 * geometry.bulk_dims.x()) {
    throw SchemaError("geometry: chain length exceeds geometry.bulk_dims length");
  }
  RequirePositive(total_mass, "total_mass");
  RequirePositive(joints.stiffness, "joints.stiffness");
  if (!(joints.damping >= 0.0)) throw SchemaError("joints.damping: must be non-negative");
  if (!(joints.limit_deg > 0.0 && joints.limit_deg <= 180.0)) {
    throw SchemaError("joints.limit_deg: must be in (0, 180]");
  }
  RequirePositive(tendon.stiffness, "tendon.stiffness");
  RequirePositive(tendon.lateral_offset, "tendon.lateral_offset");
  if (tendon.crossover_index < 0 || tendon.crossover_index > geometry.segment_count + 1) {
    throw SchemaError("tendon.crossover_index: out of range");
  }
  RequirePositive(motor.crank_arm, "motor.crank_arm");
  RequirePositive(motor.max_rate, "motor.max_rate");
  if (motor.rod_length != 0.0 && !(motor.rod_length > motor.crank_arm)) {
    throw SchemaError("motor.rod_length: must be 0 or longer than the crank arm");
  }
  try {
    fluid.Validate();
  } catch (const Error& e) {
    throw SchemaError(std::string("fluid: ") + e.what());
  }
  if (!(dt > 0.0 && dt <= 2e-3)) throw SchemaError("dt: must be in (0, 2e-3]");
  RequirePositive(surface.frequency_hz, "surface.frequency_hz");
  RequirePositive(surface.damping_ratio, "surface.damping_ratio");
  RequirePositive(sample_rate, "sample_rate");
}

std::string ConfigToJson(const SwimmerConfig& config) { return ToJson(config).dump(2) + "\n"; }

SwimmerConfig ConfigFromJson(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("config is not valid JSON: ") + e.what());
  }
  SwimmerConfig c;
  Reader root(doc, "");
  {
    Reader g = root.Object("geometry");
    c.geometry.bulk_dims = g.Vector("bulk_dims");
    c.geometry.head_semi_axes = g.Vector("head_semi_axes");
    c.geometry.segment_count = g.Integer("segment_count");
    c.geometry.segment_semi_axes = g.Vector("segment_semi_axes");
    c.geometry.fin_semi_axes = g.Vector("fin_semi_axes");
    g.Finish();
  }
  c.total_mass = root.Number("total_mass");
  {
    Reader j = root.Object("joints");
    c.joints.stiffness = j.Number("stiffness");
    c.joints.damping = j.Number("damping");
    c.joints.limit_deg = j.Number("limit_deg");
    j.Finish();
  }
  {
    Reader t = root.Object("tendon");
    c.tendon.stiffness = t.Number("stiffness");
    c.tendon.lateral_offset = t.Number("lateral_offset");
    c.tendon.head_via_x = t.Number("head_via_x");
    c.tendon.crossover_index = t.Integer("crossover_index");
    t.Finish();
  }
  {
    Reader m = root.Object("motor");
    c.motor.crank_arm = m.Number("crank_arm");
    c.motor.rod_length = m.Number("rod_length");
    c.motor.max_rate = m.Number("max_rate");
    m.Finish();
  }
  {
    Reader f = root.Object("fluid");
    c.fluid.density = f.Number("density");
    c.fluid.viscosity = f.Number("viscosity");
    Reader k = f.Object("coefficients");
    c.fluid.blunt = k.Number("blunt");
    c.fluid.slender = k.Number("slender");
    c.fluid.angular = k.Number("angular");
    c.fluid.kutta = k.Number("kutta");
    c.fluid.magnus = k.Number("magnus");
    k.Finish();
    f.Finish();
  }
  c.dt = root.Number("dt");
  {
    Reader s = root.Object("surface");
    c.surface.z0 = s.Number("z0");
    c.surface.frequency_hz = s.Number("frequency_hz");
    c.surface.damping_ratio = s.Number("damping_ratio");
    s.Finish();
  }
  c.sample_rate = root.Number("sample_rate");
  root.Finish();
  c.Validate();
  return c;
}

SwimmerConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ConfigFromJson(ss.str());
}

void SaveConfig(const SwimmerConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write config file " + path);
  out << ConfigToJson(config);
}

std::string ConfigHash(const SwimmerConfig& config) {
  const std::string canonical = ToJson(config).dump();
  uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fishsim
