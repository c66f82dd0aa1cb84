#pragma once

#include <string>

#include <json.hpp>

#include "sirup/cactus.hpp"
#include "sirup/classify.hpp"
#include "sirup/datalog.hpp"
#include "sirup/gadget.hpp"
#include "sirup/graph.hpp"
#include "sirup/lambda.hpp"

namespace sirup {

using Json = nlohmann::ordered_json;

// 64-bit FNV-1a, lower-case hex.
std::string fnv1a_hex(const std::string& bytes);

struct Report {
    std::string command;
    Json inputs = Json::object();    // file name -> {path, fnv1a, bytes}
    Json verdict = Json::object();
    Json witnesses = Json::array();  // file references or inline witnesses
    Json caps_hit = Json::object();
    double seconds = 0.0;

    void add_input(const std::string& role, const std::string& path, const std::string& content);
    bool any_cap_hit() const;
    // Keys in fixed order; `timing` last.
    Json to_json(bool with_timing = true) const;
};

Json names_json(const LabelledGraph& g, const std::vector<int>& nodes);
Json graph_summary(const LabelledGraph& g);
Json shape_json(const LabelledGraph& g, const ShapeReport& s);
Json classification_json(const Classification& c);
Json certain_json(const CertainResult& r);
Json lambda_json(const LambdaVerdict& v, const TypeGraph& tg);
Json trigger_json(const TriggerReport& r);

} // namespace sirup
