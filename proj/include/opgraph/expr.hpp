#pragma once

#include <string>

#include "opgraph/fpalg.hpp"

namespace opgraph::cli {

// Parses a signed sum of terms into a normal-form element.  Each term is an
// optional scalar coefficient (rational, decimal on the float backend, or a
// multiple of i) times a product of generator symbols from {x, y, z, g},
// each optionally raised to an integer power; '*' between factors is
// optional and whitespace is ignored.  Throws std::invalid_argument with a
// column position on malformed input.
fp::FPElement parse_element(const std::string& text,
                            const fp::FPPresentation& pres);

}  // namespace opgraph::cli
