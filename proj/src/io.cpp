#include "lamellar/io.hpp"

#include <json.hpp>

#include "lamellar/error.hpp"

namespace lamellar {

std::string profile_to_json(const StepProfile& p) {
  nlohmann::json j;
  j["N"] = p.n_interfaces();
  j["m"] = p.mass();
  j["interfaces"] = p.interfaces();
  return j.dump();
}

StepProfile profile_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kIo, std::string("profile json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("N") || !j.contains("m") || !j.contains("interfaces") ||
      !j["N"].is_number_integer() || !j["m"].is_number() || !j["interfaces"].is_array()) {
    fail(ErrorCode::kIo, "profile json: expected {\"N\", \"m\", \"interfaces\"}");
  }
  std::vector<double> x;
  for (const auto& v : j["interfaces"]) {
    if (!v.is_number()) fail(ErrorCode::kIo, "profile json: interfaces must be numbers");
    x.push_back(v.get<double>());
  }
  if (j["N"].get<long long>() != static_cast<long long>(x.size())) {
    fail(ErrorCode::kIo, "profile json: N does not match the interface count");
  }
  return StepProfile(std::move(x), j["m"].get<double>());
}

std::string energy_to_json(const EnergyBreakdown& e) {
  nlohmann::json j;
  j["h"] = e.h;
  j["w"] = e.w;
  j["k"] = e.k;
  j["total"] = e.total;
  return j.dump();
}

}  // namespace lamellar
