// JSON file formats.
//
// Chain:   { "n": int, "h": float, "lo": [int], "hi": [int], "dim": int,
//            "cells": [ { "base": [int], "axes": [int], "coeff": float } ] }
// Density: same envelope with "dim" = n and all-axes cells.
// Field:   { "lo": [int], "hi": [int], "values": [row-major floats] }
// Reports: [ { "member", "lhs", "rhs", "margin", "pass" } ]
//
// Round-trips are exact: doubles serialize with shortest-exact formatting.

#pragma once

#include <string>

#include "cch/cochain.hpp"
#include "cch/density.hpp"
#include "cch/forms.hpp"
#include "cch/scalar_field.hpp"

#include <json.hpp>

namespace cch {

nlohmann::json chain_to_json(const Chain& T);
Chain chain_from_json(const nlohmann::json& j);

nlohmann::json density_to_json(const Density& f);
Density density_from_json(const nlohmann::json& j);

nlohmann::json form_to_json(const DiscreteForm& w);
DiscreteForm form_from_json(const nlohmann::json& j);

nlohmann::json field_to_json(const ScalarField& f);
ScalarField field_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const CheckReport& rep);

void save_json(const nlohmann::json& j, const std::string& path);
nlohmann::json load_json(const std::string& path);

Chain load_chain(const std::string& path);
void save_chain(const Chain& T, const std::string& path);
Density load_density(const std::string& path);
void save_density(const Density& f, const std::string& path);

}  // namespace cch
