#ifndef GFADAPT_TOOLS_CLI_H_
#define GFADAPT_TOOLS_CLI_H_

#include <ostream>

namespace gfadapt::cli {

enum ExitCode {
  kExitOk = 0,
  kExitUsage = 1,
  kExitIo = 2,
  kExitValidation = 3,
};

// Entry point of the gfadapt tool. Machine-readable output goes to the
// --output file or `out`; diagnostics and summaries go to `err`.
int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace gfadapt::cli

#endif  // GFADAPT_TOOLS_CLI_H_
