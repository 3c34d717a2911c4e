#pragma once

#include <stdexcept>
#include <string>

namespace topiclear {

// Single exception type for every contract violation, malformed input and
// numerical failure raised by the library. Messages are meant for end users.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace topiclear
