#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace statute {

// Exit statuses: 0 success, 1 an analysis finding (a property falsified
// under --expect-hold, a surviving mutant, no example found), 2 a usage or
// data error.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
// `args` excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace statute
