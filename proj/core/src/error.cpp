#include "skinspec/error.hpp"

namespace skinspec {

void fail_validation(const std::string& what) { throw ValidationError(what); }

void fail_io(const std::string& what) { throw IoError(what); }

}  // namespace skinspec
