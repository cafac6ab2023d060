#pragma once

#include <string>
#include <vector>

#include "ast.hpp"

namespace chtest {

// Parses one source file into class declarations.
// Throws Error(ParseFailed) with file:line:col diagnostics.
std::vector<ClassDecl> parseUnit(const std::string &source,
                                 const std::string &file);

} // namespace chtest
