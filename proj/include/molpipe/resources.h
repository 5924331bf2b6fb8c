#pragma once

#include <string_view>

// Default data tables compiled into the library. The same files live under
// data/ in the source tree and can be replaced at run time.
namespace molpipe::resources {

std::string_view brics_rules();
std::string_view functional_groups();
std::string_view structural_keys();
std::string_view templates();

}  // namespace molpipe::resources
