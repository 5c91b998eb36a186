#pragma once

#include "credrel/model.hpp"

namespace fixture {

// GPT-4o-mini benchmark counts with the published profile weights.
inline credrel::SystemSpec table1_system() {
  credrel::SystemSpec s;
  credrel::DomainSpec code;
  code.label = "Code";
  code.subdomains = {{"MBPP", 113, 257}, {"DS-1000", 490, 1000}};
  code.op_weights = {0.204, 0.796};
  credrel::DomainSpec reading;
  reading.label = "Reading";
  reading.subdomains = {{"BoolQ", 3086, 3468}, {"RACE-H", 3044, 3712}};
  reading.op_weights = {0.483, 0.517};
  s.domains = {code, reading};
  s.domain_weights = {0.149, 0.851};
  return s;
}

inline credrel::DomainSpec single_subdomain(std::int64_t correct, std::int64_t total,
                                            const credrel::HyperBox& box = {}) {
  credrel::DomainSpec d;
  d.label = "D";
  d.subdomains = {{"S", correct, total}};
  d.op_weights = {1.0};
  d.box = box;
  return d;
}

/// Small, fast settings for engine tests.
inline credrel::Settings small_settings(credrel::SystemSpec system) {
  credrel::Settings s;
  s.system = std::move(system);
  s.grid = {10, 8, 0.05, 150.0};
  s.mc.samples_per_config = 400;
  s.mc.configs_per_domain = 20;
  s.mc.pairing_cap = 64;
  s.mc.t_grid_size = 51;
  return credrel::validate(s);
}

}  // namespace fixture
