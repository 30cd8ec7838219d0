#pragma once

#include "craic/extract.hpp"
#include "craic/rng.hpp"

#include <set>
#include <string>

namespace craic::testing {

struct FuzzMethod {
  std::string source;  // a class wrapping one commented method
  RawMethod method;
  std::set<std::string> fileMethods;
};

/// Random syntactically plausible method: modifiers, generic or array
/// types, up to four formals, a throws clause, and a body of nested blocks,
/// declarations, calls, casts, `new` expressions and literals.
FuzzMethod fuzzMethod(Rng& rng);

/// Words that only ever appear inside generated bodies, never in a signature.
const std::set<std::string>& bodyOnlyWords();

}  // namespace craic::testing
