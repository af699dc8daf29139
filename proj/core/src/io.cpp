// Copyright 2026 The Softlimb Authors
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

#include "softlimb/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace softlimb::io {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    throw IoError("parse_double: bad number '" + s + "'");
  return v;
}

Eigen::VectorXd Table::col(const std::string& name) const {
  for (size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return data.col(static_cast<Eigen::Index>(i));
  throw IoError("Table: no column named '" + name + "'");
}

bool Table::has(const std::string& name) const {
  for (const auto& c : columns)
    if (c == name) return true;
  return false;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write file: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV: " + path);
  t.columns = split_csv_line(line);
  const size_t ncol = t.columns.size();

  std::vector<double> values;
  Eigen::Index nrow = 0;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != ncol)
      throw IoError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(ncol) +
                    " cells, got " + std::to_string(cells.size()));
    for (const auto& c : cells) {
      try {
        values.push_back(parse_double(c));
      } catch (const IoError&) {
        throw IoError(path + ":" + std::to_string(lineno) + ": bad number '" + c + "'");
      }
    }
    ++nrow;
  }
  t.data.resize(nrow, static_cast<Eigen::Index>(ncol));
  for (Eigen::Index r = 0; r < nrow; ++r)
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(ncol); ++c)
      t.data(r, c) = values[static_cast<size_t>(r * static_cast<Eigen::Index>(ncol) + c)];
  return t;
}

void write_table(const std::string& path, const std::vector<std::string>& columns,
                 const Eigen::MatrixXd& data) {
  if (data.cols() != static_cast<Eigen::Index>(columns.size()))
    throw IoError("write_table: header/data column mismatch");
  std::ostringstream out;
  for (size_t i = 0; i < columns.size(); ++i) {
    if (i) out << ',';
    out << columns[i];
  }
  out << '\n';
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
      if (c) out << ',';
      out << format_double(data(r, c));
    }
    out << '\n';
  }
  write_file(path, out.str());
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string hash_file(const std::string& path) { return fnv1a_hex(read_file(path)); }

std::string params_to_json(const ModelParams& params, const std::string& provenance_json) {
  const auto& m = params.manip;
  json j;
  j["schema_version"] = 1;
  j["manipulator"] = {
      {"n", m.n},
      {"link_length", m.link_length},
      {"link_mass", m.link_mass},
      {"link_com_offset", m.link_com_offset},
      {"link_inertia", m.link_inertia},
      {"k", m.k},
      {"sigma", m.sigma},
      {"gravity_on", m.gravity_on},
      {"g", m.g},
      {"gravity_dir", {m.gravity_dir(0), m.gravity_dir(1)}},
  };
  const auto therm = [](const ThermalParams& t) {
    return json{{"a1", t.a1}, {"a2", t.a2}, {"a3", t.a3}, {"beta", t.beta}, {"T0", t.T0}};
  };
  j["thermal_left"] = therm(params.left);
  j["thermal_right"] = therm(params.right);
  if (!provenance_json.empty()) j["provenance"] = json::parse(provenance_json);
  return j.dump(2) + "\n";
}

namespace {

ThermalParams thermal_from_json(const json& j) {
  ThermalParams t;
  t.a1 = j.at("a1").get<double>();
  t.a2 = j.at("a2").get<double>();
  t.a3 = j.at("a3").get<double>();
  t.beta = j.at("beta").get<double>();
  t.T0 = j.at("T0").get<double>();
  return t;
}

}  // namespace

ModelParams params_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("params JSON parse error: ") + e.what());
  }
  try {
    if (j.at("schema_version").get<int>() != 1)
      throw IoError("params JSON: unsupported schema_version");
    ModelParams p;
    const json& m = j.at("manipulator");
    p.manip.n = m.at("n").get<int>();
    p.manip.link_length = m.at("link_length").get<double>();
    p.manip.link_mass = m.at("link_mass").get<double>();
    p.manip.link_com_offset = m.at("link_com_offset").get<double>();
    p.manip.link_inertia = m.at("link_inertia").get<double>();
    p.manip.k = m.at("k").get<double>();
    p.manip.sigma = m.at("sigma").get<double>();
    p.manip.gravity_on = m.at("gravity_on").get<bool>();
    p.manip.g = m.at("g").get<double>();
    p.manip.gravity_dir =
        Eigen::Vector2d(m.at("gravity_dir").at(0).get<double>(), m.at("gravity_dir").at(1).get<double>());
    p.left = thermal_from_json(j.at("thermal_left"));
    p.right = thermal_from_json(j.at("thermal_right"));
    p.validate();
    return p;
  } catch (const json::exception& e) {
    throw IoError(std::string("params JSON: ") + e.what());
  }
}

ModelParams read_params(const std::string& path) { return params_from_json(read_file(path)); }

void write_params(const std::string& path, const ModelParams& params,
                  const std::string& provenance_json) {
  write_file(path, params_to_json(params, provenance_json));
}

}  // namespace softlimb::io
