#ifndef SIMRUN_CONFIG_ERROR_H_
#define SIMRUN_CONFIG_ERROR_H_

#include <stdexcept>

namespace simrun {

// Invalid scenario, topology or traffic configuration. The message names
// the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace simrun

#endif  // SIMRUN_CONFIG_ERROR_H_
