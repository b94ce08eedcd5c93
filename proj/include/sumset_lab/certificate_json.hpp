#pragma once

#include <string>

#include <json.hpp>

#include "sumset_lab/set_io.hpp"
#include "sumset_lab/structure.hpp"

namespace sumset_lab {

using Json = nlohmann::ordered_json;

/// {I, primes, error_masses, avoidance_on_I, sparse_branch, params}; I is 1-based,
/// primes are set-file texts and rationals are "num/den" strings.
inline Json certificate_to_json(const StructureCertificate& cert) {
  Json j;
  j["I"] = cert.coords.elements();
  j["primes"] = Json::array();
  for (const auto& p : cert.primes) j["primes"].push_back(write_set(p));
  j["error_masses"] = Json::array();
  for (const auto& m : cert.error_masses) j["error_masses"].push_back(format_rational(m));
  j["avoidance_on_I"] = cert.avoidance_on_I;
  j["sparse_branch"] = cert.sparse_branch;
  j["params"] = {{"epsilon", format_rational(cert.params.epsilon)},
                 {"r", cert.params.r},
                 {"beta", format_rational(cert.params.beta)},
                 {"alpha", format_rational(cert.params.effective_alpha())}};
  return j;
}

inline StructureCertificate certificate_from_json(const Json& j) {
  try {
    StructureCertificate cert;
    cert.coords = CoordinateSet(j.at("I").get<std::vector<std::size_t>>());
    for (const auto& p : j.at("primes")) cert.primes.push_back(read_set(p.get<std::string>()));
    for (const auto& m : j.at("error_masses")) cert.error_masses.push_back(parse_rational(m.get<std::string>()));
    cert.avoidance_on_I = j.at("avoidance_on_I").get<bool>();
    cert.sparse_branch = j.at("sparse_branch").get<bool>();
    const auto& params = j.at("params");
    cert.params.epsilon = parse_rational(params.at("epsilon").get<std::string>());
    cert.params.r = params.at("r").get<std::size_t>();
    cert.params.beta = parse_rational(params.at("beta").get<std::string>());
    cert.params.alpha = parse_rational(params.at("alpha").get<std::string>());
    return cert;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::invalid_input, std::string("certificate JSON: ") + e.what());
  }
}

}  // namespace sumset_lab
