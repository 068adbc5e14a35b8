#ifndef UWOC_VERSION_HPP
#define UWOC_VERSION_HPP

namespace uwoc {

inline constexpr const char* kVersion = "0.1.0";

}

#endif
