#pragma once

#include <initializer_list>
#include <string>

#include <json.hpp>

#include "alsim/strategy.hpp"
#include "alsim/world.hpp"

// Strict JSON helpers shared by the config loader and the case-base store.
// Unknown keys are rejected so experiment files stay auditable.
namespace alsim::jsonio {

using json = nlohmann::ordered_json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed);

const json& require(const json& obj, const char* key);
double get_double(const json& obj, const char* key);
long get_long(const json& obj, const char* key);
std::uint64_t get_u64(const json& obj, const char* key);
std::string get_string(const json& obj, const char* key);

json env_to_json(const EnvironmentParams& env);
EnvironmentParams env_from_json(const json& j);

json action_to_json(const Action& a);
Action action_from_json(const json& j);

json strategy_to_json(const Strategy& s);
Strategy strategy_from_json(const json& j);

std::string read_file(const std::string& path);   // IoError on failure
void write_file(const std::string& path, const std::string& text);

}  // namespace alsim::jsonio
