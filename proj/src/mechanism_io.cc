//
// Copyright 2026 The dpquant Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
#include "dpq/mechanism_io.h"

#include <fstream>
#include <sstream>

#include "dpq/errors.h"

namespace dpq {
namespace {

using nlohmann::json;

json TableToJson(const TriangularTable& table) {
  json rows = json::array();
  for (int n = 1; n <= table.rows(); ++n) {
    json row = json::array();
    for (int i = 1; i <= n; ++i) row.push_back(table.at(n, i));
    rows.push_back(std::move(row));
  }
  return rows;
}

const json& Field(const json& doc, const char* name) {
  if (!doc.contains(name)) {
    throw ParseError(std::string("mechanism: missing field '") + name + "'");
  }
  return doc.at(name);
}

double Number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError("mechanism: " + where + " is not a number");
  return v.get<double>();
}

TriangularTable TableFromJson(const json& rows, int m, const char* name) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != m - 1) {
    throw ParseError(std::string("mechanism: '") + name + "' must have " +
                     std::to_string(m - 1) + " rows");
  }
  TriangularTable table(m - 1);
  for (int n = 1; n <= m - 1; ++n) {
    const json& row = rows[n - 1];
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw ParseError(std::string("mechanism: '") + name + "' row " +
                       std::to_string(n) + " must have " + std::to_string(n) +
                       " entries");
    }
    for (int i = 1; i <= n; ++i) {
      table.at(n, i) = Number(row[i - 1], std::string(name) + "[" +
                                              std::to_string(n) + "][" +
                                              std::to_string(i) + "]");
    }
  }
  return table;
}

}  // namespace

json MechanismToJson(const Mechanism& mech) {
  const BinLayout& layout = mech.layout();
  json doc;
  doc["c"] = layout.c();
  doc["delta"] = layout.delta();
  doc["bins"] = layout.bins();
  doc["symmetric_mode"] = mech.selection().symmetric_mode();
  doc["left_table"] = TableToJson(mech.selection().left_table());
  if (!mech.selection().symmetric_mode()) {
    doc["right_table"] = TableToJson(mech.selection().right_table());
  }
  doc["metadata"] = mech.metadata();
  return doc;
}

std::string SerializeMechanism(const Mechanism& mech) {
  return MechanismToJson(mech).dump(2) + "\n";
}

Mechanism MechanismFromJson(const json& doc) {
  if (!doc.is_object()) throw ParseError("mechanism: document is not an object");
  try {
    const double c = Number(Field(doc, "c"), "c");
    const double delta = Number(Field(doc, "delta"), "delta");
    const json& bins_json = Field(doc, "bins");
    if (!bins_json.is_array()) throw ParseError("mechanism: 'bins' is not a list");
    std::vector<double> bins;
    for (size_t k = 0; k < bins_json.size(); ++k) {
      bins.push_back(Number(bins_json[k], "bins[" + std::to_string(k + 1) + "]"));
    }
    BinLayout layout(c, delta, bins);
    const int m = layout.m();
    const bool symmetric = doc.value("symmetric_mode", !doc.contains("right_table"));
    TriangularTable left = TableFromJson(Field(doc, "left_table"), m, "left_table");
    json metadata = doc.value("metadata", json::object());
    if (symmetric) {
      return Mechanism(layout, SelectionDistribution::Symmetric(std::move(left)),
                       std::move(metadata));
    }
    TriangularTable right =
        TableFromJson(Field(doc, "right_table"), m, "right_table");
    return Mechanism(layout,
                     SelectionDistribution::TwoFamily(std::move(left),
                                                      std::move(right)),
                     std::move(metadata));
  } catch (const DomainError& e) {
    throw ParseError(std::string("mechanism: ") + e.what());
  } catch (const json::exception& e) {
    throw ParseError(std::string("mechanism: ") + e.what());
  }
}

Mechanism ParseMechanism(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("mechanism: invalid JSON at byte " +
                     std::to_string(e.byte) + ": " + e.what());
  }
  return MechanismFromJson(doc);
}

Mechanism LoadMechanismFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mechanism file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseMechanism(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace dpq
