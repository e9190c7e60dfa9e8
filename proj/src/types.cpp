#include <fism/types.hpp>

namespace fism {

std::string_view to_string(Method method) {
    switch (method) {
    case Method::Fism: return "fism";
    case Method::Irig: return "irig";
    }
    return "unknown";
}

Method parse_method(std::string_view text) {
    if (text == "fism" || text == "FISM")
        return Method::Fism;
    if (text == "irig" || text == "IRIG" || text == "ir-ig" || text == "IR-IG")
        return Method::Irig;
    throw std::invalid_argument("unknown method '" + std::string(text) + "'");
}

void require(bool condition, const std::string &message) {
    if (!condition)
        throw std::invalid_argument(message);
}

} // namespace fism
