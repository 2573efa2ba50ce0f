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
#ifndef DPQ_MECHANISM_IO_H_
#define DPQ_MECHANISM_IO_H_

#include <string>

#include <nlohmann/json.hpp>

#include "dpq/mechanism.h"

namespace dpq {

// JSON document {c, delta, bins, left_table, right_table?, symmetric_mode,
// metadata}. Floats use a shortest round-trip encoding, so
// ParseMechanism(SerializeMechanism(m)) reproduces every value bit for bit.
nlohmann::json MechanismToJson(const Mechanism& mech);
std::string SerializeMechanism(const Mechanism& mech);

// Throws ParseError naming the offending field or byte offset.
Mechanism MechanismFromJson(const nlohmann::json& doc);
Mechanism ParseMechanism(const std::string& text);

Mechanism LoadMechanismFile(const std::string& path);

}  // namespace dpq

#endif  // DPQ_MECHANISM_IO_H_
