#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "oversmooth/graph.hpp"

namespace oversmooth {

// Bad flag values detected after parsing; reported with exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// grid:HxW, ring:N, path:N, complete:N, star:N, barbell:K.
Graph synthetic_graph(const std::string& kind);
bool is_synthetic_spec(const std::string& spec);

// args excludes the program name. Returns 0 on success, 1 on runtime
// failure, 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oversmooth
