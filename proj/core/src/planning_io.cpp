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

#include "slr/planning_io.hpp"

#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "json.hpp"

#include "slr/instance_io.hpp"

namespace slr {

using nlohmann::json;

namespace io_detail {
json parse_document(const std::string& text);
double require_number(const json& node, const std::string& field);
} // namespace io_detail

namespace {

std::string require_string(const json& node, const std::string& field,
                           const std::string& where) {
  if (!node.contains(field) || !node[field].is_string()) {
    throw ParseError(where + "." + field + " missing or not a string");
  }
  return node[field].get<std::string>();
}

double optional_number(const json& node, const std::string& field,
                       double fallback) {
  if (!node.contains(field) || node[field].is_null()) return fallback;
  if (!node[field].is_number()) {
    throw ParseError("field '" + field + "' is not a number");
  }
  return node[field].get<double>();
}

std::vector<double> optional_vector(const json& node, const std::string& field) {
  std::vector<double> out;
  if (!node.contains(field)) return out;
  if (!node[field].is_array()) {
    throw ParseError("duals." + field + " is not an array");
  }
  for (const json& x : node[field]) {
    if (!x.is_number()) throw ParseError("duals." + field + " entry not a number");
    out.push_back(x.get<double>());
  }
  return out;
}

} // namespace

GlobalPlanModel parse_plan_model(const std::string& text) {
  const json doc = io_detail::parse_document(text);
  if (!doc.is_object()) throw ParseError("plan document must be a JSON object");

  GlobalPlanModel model;
  std::map<std::string, std::size_t> seller_index;
  std::map<std::string, std::size_t> consumer_index;

  if (!doc.contains("sellers") || !doc["sellers"].is_array()) {
    throw ParseError("field 'sellers' missing or not an array");
  }
  for (std::size_t k = 0; k < doc["sellers"].size(); ++k) {
    const json& node = doc["sellers"][k];
    const std::string where = "sellers[" + std::to_string(k) + "]";
    SellerSpec seller;
    seller.id = require_string(node, "id", where);
    seller.inventory_limit = optional_number(
        node, "inventory_limit", std::numeric_limits<double>::infinity());
    seller.revenue_target = optional_number(node, "revenue_target", 0.0);
    seller.min_consumers = optional_number(node, "min_consumers", 0.0);
    if (!seller_index.emplace(seller.id, k).second) {
      throw ParseError(where + " repeats seller id '" + seller.id + "'");
    }
    model.sellers.push_back(std::move(seller));
  }

  if (!doc.contains("consumers") || !doc["consumers"].is_array()) {
    throw ParseError("field 'consumers' missing or not an array");
  }
  for (std::size_t g = 0; g < doc["consumers"].size(); ++g) {
    const json& node = doc["consumers"][g];
    const std::string where = "consumers[" + std::to_string(g) + "]";
    ConsumerSpec consumer;
    consumer.id = require_string(node, "id", where);
    consumer.min_sellers = optional_number(node, "min_sellers", 0.0);
    if (!consumer_index.emplace(consumer.id, g).second) {
      throw ParseError(where + " repeats consumer id '" + consumer.id + "'");
    }
    model.consumers.push_back(std::move(consumer));
  }

  if (!doc.contains("impressions") || !doc["impressions"].is_array()) {
    throw ParseError("field 'impressions' missing or not an array");
  }
  for (std::size_t t = 0; t < doc["impressions"].size(); ++t) {
    const json& node = doc["impressions"][t];
    const std::string where = "impressions[" + std::to_string(t) + "]";
    if (!node.is_object()) throw ParseError(where + " must be an object");

    PlanImpression pimp;
    const std::string consumer_id = require_string(node, "consumer", where);
    const auto consumer_it = consumer_index.find(consumer_id);
    if (consumer_it == consumer_index.end()) {
      throw ParseError(where + " references unknown consumer '" + consumer_id +
                       "'");
    }
    pimp.consumer = consumer_it->second;

    if (!node.contains("items") || !node["items"].is_array()) {
      throw ParseError(where + ".items missing or not an array");
    }
    for (std::size_t j = 0; j < node["items"].size(); ++j) {
      const json& item = node["items"][j];
      const std::string item_where = where + ".items[" + std::to_string(j) + "]";
      const std::string seller_id = require_string(item, "seller", item_where);
      const auto seller_it = seller_index.find(seller_id);
      if (seller_it == seller_index.end()) {
        throw ParseError(item_where + " references unknown seller '" +
                         seller_id + "'");
      }
      pimp.item_seller.push_back(seller_it->second);
    }

    // The embedded impression reuses the instance parser; the seller field
    // rides alongside and is stripped here.
    json instance = node;
    instance.erase("consumer");
    for (json& item : instance["items"]) item.erase("seller");
    pimp.impression = parse_impression(instance.dump());
    model.impressions.push_back(std::move(pimp));
  }

  if (doc.contains("duals")) {
    if (!doc["duals"].is_object()) throw ParseError("'duals' must be an object");
    model.duals.xi = optional_vector(doc["duals"], "xi");
    model.duals.nu = optional_vector(doc["duals"], "nu");
    model.duals.eta = optional_vector(doc["duals"], "eta");
    model.duals.theta = optional_vector(doc["duals"], "theta");
  }

  validate_model(model);
  return model;
}

GlobalPlanModel load_plan_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open plan model file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_plan_model(buffer.str());
}

std::string plan_model_to_json(const GlobalPlanModel& model) {
  json doc;
  doc["sellers"] = json::array();
  for (const SellerSpec& s : model.sellers) {
    json node;
    node["id"] = s.id;
    if (std::isfinite(s.inventory_limit)) {
      node["inventory_limit"] = s.inventory_limit;
    } else {
      node["inventory_limit"] = nullptr;
    }
    node["revenue_target"] = s.revenue_target;
    node["min_consumers"] = s.min_consumers;
    doc["sellers"].push_back(std::move(node));
  }
  doc["consumers"] = json::array();
  for (const ConsumerSpec& c : model.consumers) {
    doc["consumers"].push_back({{"id", c.id}, {"min_sellers", c.min_sellers}});
  }
  doc["impressions"] = json::array();
  for (const PlanImpression& pimp : model.impressions) {
    json node = json::parse(impression_to_json(pimp.impression));
    node["consumer"] = model.consumers[pimp.consumer].id;
    for (std::size_t j = 0; j < pimp.item_seller.size(); ++j) {
      node["items"][j]["seller"] = model.sellers[pimp.item_seller[j]].id;
    }
    doc["impressions"].push_back(std::move(node));
  }
  doc["duals"] = {{"xi", model.duals.xi},
                  {"nu", model.duals.nu},
                  {"eta", model.duals.eta},
                  {"theta", model.duals.theta}};
  return doc.dump(2);
}

} // namespace slr
