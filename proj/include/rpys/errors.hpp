#ifndef RPYS_ERRORS_HPP
#define RPYS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rpys {

// Exit statuses of the command-line driver map one-to-one onto these.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rpys

#endif
