// Copyright 2026 The ucpdlp Authors.
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

// Reader and writer for a subset of the fixed MPS format:
//
//   NAME, [OBJSENSE], ROWS (N/L/G/E), COLUMNS (with 'MARKER' INTORG/INTEND),
//   [RHS], [BOUNDS] (LO/UP/BV/FR, plus MI/FX), ENDATA
//
// Names are case-sensitive and may not contain blanks; lines are at most 255
// characters. The writer lays fields out on the fixed-format columns
// (2, 5, 15, 25, 40, 50) and prints numbers in shortest round-trip form, so a
// field only runs past its column when a value needs more than 12 characters.
// The reader splits fields on blanks and therefore accepts both layouts.
//
// Columns inside an INTORG/INTEND block are binary with default bounds
// [0, 1]. An RHS entry on the objective row stores the negated objective
// constant.

#ifndef UCPDLP_MPS_HPP_
#define UCPDLP_MPS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

#include "ucpdlp/model.hpp"

namespace ucpdlp::model {

class MpsParseError : public std::runtime_error {
 public:
  MpsParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

GeneralLp read_mps(std::string_view text);
std::string write_mps(const GeneralLp& lp);

GeneralLp read_mps_file(const std::string& path);
void write_mps_file(const GeneralLp& lp, const std::string& path);

}  // namespace ucpdlp::model

#endif  // UCPDLP_MPS_HPP_
