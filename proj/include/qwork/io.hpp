#pragma once

#include <string>

#include <json.hpp>

#include "qwork/qcore.hpp"
#include "qwork/workops.hpp"

namespace qwork::io {

// Full double precision (17 significant digits), scientific notation.
std::string format_full(double value);

// {dim, re: [[...]], im: [[...]]}
nlohmann::json operator_to_json(const qcore::Operator& op);
qcore::Operator operator_from_json(const nlohmann::json& j);

nlohmann::json ngt_report_to_json(const workops::NgtReport& report);

// "value,prob" rows with a header.
std::string distribution_csv(const workops::WorkDistribution& dist);

}  // namespace qwork::io
