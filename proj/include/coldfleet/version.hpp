#ifndef COLDFLEET_VERSION_HPP
#define COLDFLEET_VERSION_HPP

namespace coldfleet {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace coldfleet

#endif  // COLDFLEET_VERSION_HPP
