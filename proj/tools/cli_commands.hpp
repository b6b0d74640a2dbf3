#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace geomctl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitAbort = 2;
inline constexpr int kExitCertificateFail = 3;

int simulate(const std::string& config_path, const std::vector<std::string>& overrides,
             const std::optional<std::string>& out_path, std::ostream& out, std::ostream& err);

int certify(const std::string& config_path, const std::vector<std::string>& overrides,
            bool strict, std::ostream& out, std::ostream& err);

/// Names: flip, flip-no-integral, euler-attitude.
int builtin(const std::string& name, const std::optional<std::string>& out_path,
            std::ostream& out, std::ostream& err);

}  // namespace geomctl::cli
