#ifndef COUNTQA_CLI_H_
#define COUNTQA_CLI_H_

#include <ostream>

namespace countqa {

// Exit codes of the countqa command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitProvider = 3;

// Entry point of the countqa command (answer, evaluate, serve,
// validate-dataset). Writes results to out and messages to err.
int RunCli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace countqa

#endif  // COUNTQA_CLI_H_
