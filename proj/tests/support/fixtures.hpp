#pragma once

#include <string>

#include "sosmc/model_io.hpp"

namespace testsupport {

inline std::string fixturePath(const std::string& name) {
  return std::string(SOSMC_FIXTURES) + "/" + name;
}

inline std::string fixtureText(const std::string& name) {
  return sosmc::readFile(fixturePath(name));
}

inline sosmc::SosModel fireModel() {
  return sosmc::loadModelFile(fixturePath("fire.sosm"));
}

inline sosmc::SosModel coinModel() {
  return sosmc::loadModelFile(fixturePath("coin.sosm"));
}

}  // namespace testsupport
