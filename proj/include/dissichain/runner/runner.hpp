// runner.hpp: Executes a validated experiment and writes its artifacts

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "dissichain/runner/config.hpp"

namespace dissichain::runner {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitGuard = 3;
inline constexpr int kExitIo = 4;

// Thrown by run() when validate() rejects the configuration.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(std::vector<Diagnostic> d);
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

struct RunOptions {
    std::filesystem::path out_root{"."};
    int threads{0};  // 0 keeps the OpenMP default
    bool strict{false};
};

struct RunResult {
    std::filesystem::path directory;
    std::vector<std::string> files;  // relative to directory, manifest last
    nlohmann::json summary;
};

// Output root: explicit value if non-empty, else $DISSICHAIN_OUT, else ".".
std::filesystem::path resolve_out_root(const std::string& explicit_root);

// Validates, then runs. Nothing is written if validation fails.
RunResult run(const ExperimentConfig& config, const RunOptions& options, std::ostream& log);

// run() with the exception-to-exit-code mapping used by the CLI.
int execute(const ExperimentConfig& config, const RunOptions& options, std::ostream& log, std::ostream& err);

} // namespace dissichain::runner
