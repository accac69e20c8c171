#pragma once

#include "depreg/design.hpp"
#include "depreg/inference.hpp"
#include "depreg/montecarlo.hpp"
#include "depreg/ols.hpp"

#include <string>

namespace depreg {

std::string fit_to_json(const FitResult& fit);
std::string regularity_to_json(const RegularityReport& report);
std::string nested_test_to_json(const NestedTest& test);

/// Shortest representation that reads back to the same double.
std::string format_double(double v);

}  // namespace depreg
