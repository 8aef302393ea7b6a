// core/include/lpopt/instances.hpp
//
// Instance file IO plus the shipped reference instances (toy4 and the five
// PWR reload scenarios). The builtin generator is the source of truth; the
// files under instances/ are its serialized output.

#pragma once

#include <string>
#include <vector>

#include "lpopt/problem.hpp"

namespace lpopt {

ProblemInstance load_instance(const std::string& path);
void save_instance(const ProblemInstance& inst, const std::string& path);

// toy4, 89-eighth, 81-eighth, 89-quarter, 85-quarter, 81-quarter
std::vector<std::string> builtin_instance_names();
ProblemInstance builtin_instance(const std::string& name);

}  // namespace lpopt
