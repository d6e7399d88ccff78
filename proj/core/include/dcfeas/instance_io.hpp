#pragma once

// Plain-text instance container. Layout (one record per line, numbers in
// %.17g so values round-trip exactly):
//
//   dcfeas-instance 1
//   kind <e3|e4|custom> seed <u64> p <count> n <count> k <count>
//   constraint <convex_ball|lorentzian>
//   mu <real> sigma <real> radius <real>
//   phi <log|rational> <parameter>          (lorentzian only)
//   matrix <rows> <cols>
//   <rows lines of cols entries>
//   b <len> <entries...>
//   slater <len> <entries...>
//   truth <0|1> [<len> <entries...>]
//   groups <count>
//   <size> <indices...>                     (one line per group)

#include <iosfwd>
#include <string>

#include "dcfeas/problem.hpp"

namespace dcfeas {

void write_instance(std::ostream& os, const ProblemInstance& inst);
ProblemInstance read_instance(std::istream& is);

/// File wrappers; errors carry ErrorCode::kIo.
void save_instance(const std::string& path, const ProblemInstance& inst);
ProblemInstance load_instance(const std::string& path);

}  // namespace dcfeas
