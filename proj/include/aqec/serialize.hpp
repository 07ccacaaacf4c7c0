#pragma once

#include <json.hpp>

#include "aqec/channel.hpp"
#include "aqec/codes.hpp"

namespace aqec {

// {dim_in, dim_out, kraus: [[[re, im], ...], ...]} — one row-major matrix per Kraus operator.
void to_json(nlohmann::json& j, const QuantumChannel& c);
void from_json(const nlohmann::json& j, QuantumChannel& c);

// {phys_dim, codewords: [[[re, im], ...], ...]}
void to_json(nlohmann::json& j, const Codespace& c);
void from_json(const nlohmann::json& j, Codespace& c);

}  // namespace aqec
