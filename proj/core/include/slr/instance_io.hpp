// Copyright 2026 The SLR Engine Authors
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

#ifndef SLR_INSTANCE_IO_HPP_
#define SLR_INSTANCE_IO_HPP_

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "slr/model.hpp"

// JSON instance documents:
//
//   {
//     "position_weights": [0.6, 0.4],
//     "items": [
//       {"id": "i1", "ptr": 0.3, "price": 12.5, "take_rate": 0.1,
//        "ad_rate": 0.05},
//       {"id": "i2", "r": 0.9, "v": 2.5}
//     ],
//     "lambda": 0.9,
//     "epsilon": 1e-4            // optional, defaults to 1e-4
//   }
//
// Items carry either the full rate decomposition or a direct
// (relevance, value) pair for synthetic instances.
namespace slr {

// Structural problems with a document: bad JSON, missing or mistyped fields.
// what() names the offending field (and byte position for syntax errors).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses and validates an instance document. Throws ParseError for
// structural problems and std::invalid_argument for semantic violations
// (m > n, lambda outside [0,1], ...) surfaced by build_impression.
Impression parse_impression(const std::string& text);
Impression load_impression(const std::string& path);

// Serializes an impression back to the document format, reporting weights in
// caller slot order.
std::string impression_to_json(const Impression& imp);

} // namespace slr

#endif // SLR_INSTANCE_IO_HPP_
