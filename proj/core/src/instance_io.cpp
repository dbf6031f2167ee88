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

#include "slr/instance_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace slr {

using nlohmann::json;

namespace io_detail {

json parse_document(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    // Re-parse with exceptions to surface the byte position.
    try {
      const json probe = json::parse(text);
      (void)probe;
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    throw ParseError("malformed JSON");
  }
  return doc;
}

double require_number(const json& node, const std::string& field) {
  if (!node.contains(field) || !node[field].is_number()) {
    throw ParseError("field '" + field + "' missing or not a number");
  }
  return node[field].get<double>();
}

} // namespace io_detail

namespace {

using io_detail::parse_document;
using io_detail::require_number;

Item parse_item(const json& node, std::size_t index) {
  const std::string where = "items[" + std::to_string(index) + "]";
  if (!node.is_object()) {
    throw ParseError(where + " must be an object");
  }
  std::string id;
  if (node.contains("id")) {
    if (!node["id"].is_string()) {
      throw ParseError(where + ".id must be a string");
    }
    id = node["id"].get<std::string>();
  } else {
    id = "item" + std::to_string(index);
  }
  const bool has_rates = node.contains("ptr") || node.contains("price") ||
                         node.contains("take_rate") || node.contains("ad_rate");
  const bool has_direct = node.contains("r") || node.contains("v");
  if (has_rates && has_direct) {
    throw ParseError(where + " mixes rate fields with direct (r, v) fields");
  }
  if (has_rates) {
    return Item::from_rates(std::move(id), require_number(node, "ptr"),
                            require_number(node, "price"),
                            require_number(node, "take_rate"),
                            require_number(node, "ad_rate"));
  }
  if (has_direct) {
    return Item::synthetic(std::move(id), require_number(node, "r"),
                           require_number(node, "v"));
  }
  throw ParseError(where + " needs either {ptr, price, take_rate, ad_rate} "
                           "or {r, v}");
}

Impression impression_from_json(const json& doc) {
  if (!doc.is_object()) {
    throw ParseError("instance document must be a JSON object");
  }
  if (!doc.contains("position_weights") || !doc["position_weights"].is_array()) {
    throw ParseError("field 'position_weights' missing or not an array");
  }
  std::vector<double> weights;
  for (std::size_t i = 0; i < doc["position_weights"].size(); ++i) {
    const json& w = doc["position_weights"][i];
    if (!w.is_number()) {
      throw ParseError("position_weights[" + std::to_string(i) +
                       "] is not a number");
    }
    weights.push_back(w.get<double>());
  }
  if (!doc.contains("items") || !doc["items"].is_array()) {
    throw ParseError("field 'items' missing or not an array");
  }
  std::vector<Item> items;
  for (std::size_t j = 0; j < doc["items"].size(); ++j) {
    items.push_back(parse_item(doc["items"][j], j));
  }
  const double lambda = require_number(doc, "lambda");
  double epsilon = kDefaultEpsilon;
  if (doc.contains("epsilon")) {
    if (!doc["epsilon"].is_number()) {
      throw ParseError("field 'epsilon' is not a number");
    }
    epsilon = doc["epsilon"].get<double>();
  }
  return build_impression(std::move(weights), std::move(items), lambda,
                          epsilon);
}

} // namespace

Impression parse_impression(const std::string& text) {
  return impression_from_json(parse_document(text));
}

Impression load_impression(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open instance file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_impression(buffer.str());
}

std::string impression_to_json(const Impression& imp) {
  json doc;
  std::vector<double> caller_weights(imp.slot_count());
  for (std::size_t i = 0; i < imp.slot_count(); ++i) {
    caller_weights[imp.slot_order[i]] = imp.position_weights[i];
  }
  doc["position_weights"] = caller_weights;
  json items = json::array();
  for (const Item& item : imp.items) {
    json node;
    node["id"] = item.id;
    if (item.has_rates) {
      node["ptr"] = item.ptr;
      node["price"] = item.price;
      node["take_rate"] = item.take_rate;
      node["ad_rate"] = item.ad_rate;
    } else {
      node["r"] = item.ptr;
      node["v"] = item.value;
    }
    items.push_back(std::move(node));
  }
  doc["items"] = std::move(items);
  doc["lambda"] = imp.lambda;
  doc["epsilon"] = imp.epsilon;
  return doc.dump(2);
}

} // namespace slr
