#pragma once

namespace tapscope {

inline constexpr const char* artifact_version = "0.1.0";

}
