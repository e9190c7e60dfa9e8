#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fism {

using Vector = std::vector<double>;

enum class Method { Fism, Irig };

std::string_view to_string(Method method);
Method parse_method(std::string_view text);

/// Malformed input file (IDX, CSV) or a dataset that violates its invariants.
class FormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An operation was called on an object that is not ready for it.
class PreconditionError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

void require(bool condition, const std::string &message);

} // namespace fism
