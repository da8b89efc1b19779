#include "qwork/io.hpp"

#include <cstdio>
#include <stdexcept>

namespace qwork::io {

std::string format_full(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", value);
  return buf;
}

nlohmann::json operator_to_json(const qcore::Operator& op) {
  const std::size_t d = op.dim();
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (std::size_t i = 0; i < d; ++i) {
    nlohmann::json row_re = nlohmann::json::array();
    nlohmann::json row_im = nlohmann::json::array();
    for (std::size_t j = 0; j < d; ++j) {
      row_re.push_back(op.at(i, j).real());
      row_im.push_back(op.at(i, j).imag());
    }
    re.push_back(std::move(row_re));
    im.push_back(std::move(row_im));
  }
  return {{"dim", d}, {"re", std::move(re)}, {"im", std::move(im)}};
}

qcore::Operator operator_from_json(const nlohmann::json& j) {
  const auto d = j.at("dim").get<std::size_t>();
  qcore::Operator op(d);
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (re.size() != d || im.size() != d)
    throw std::invalid_argument("operator_from_json: shape mismatch");
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      op.at(i, k) = {re.at(i).at(k).get<double>(),
                     im.at(i).at(k).get<double>()};
  return op;
}

nlohmann::json ngt_report_to_json(const workops::NgtReport& report) {
  return {{"eps", report.eps},
          {"eps_prime", report.eps_prime},
          {"w_unitary", operator_to_json(report.w_unitary)},
          {"w_tpm", operator_to_json(report.w_tpm)},
          {"difference", operator_to_json(report.difference)},
          {"offdiag_magnitude", report.offdiag_magnitude},
          {"operators_agree", report.operators_agree}};
}

std::string distribution_csv(const workops::WorkDistribution& dist) {
  std::string out = "value,prob\n";
  for (std::size_t i = 0; i < dist.values.size(); ++i) {
    out += format_full(dist.values[i]);
    out += ',';
    out += format_full(dist.probs[i]);
    out += '\n';
  }
  return out;
}

}  // namespace qwork::io
