#pragma once

#include <stdexcept>
#include <string>

namespace npt {

// categories map 1:1 onto cli exit codes
enum class errc { usage = 2, numerical = 3, tamper = 4 };

struct error : std::runtime_error {
	errc code;
	error(errc c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

[[noreturn]] inline void fail_usage(const std::string& msg) { throw error(errc::usage, msg); }
[[noreturn]] inline void fail_numerical(const std::string& msg) { throw error(errc::numerical, msg); }
[[noreturn]] inline void fail_tamper(const std::string& msg) { throw error(errc::tamper, msg); }

} // namespace npt
