// hanjoint/cli_commands.h
//
// The hanjoint command-line tool. Every subcommand is reachable through
// Dispatch(), which is what the executable and `hanjoint replay` call.
//
// Exit codes: 0 success, 1 at least one utterance failed, 2 configuration
// or format error.

#ifndef HANJOINT_CLI_COMMANDS_H_
#define HANJOINT_CLI_COMMANDS_H_

#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "hanjoint/lattice.h"

namespace hanjoint::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUtteranceError = 1;
inline constexpr int kExitConfigError = 2;

// Explicit positive value wins, then HANJOINT_THREADS, then the number of
// hardware threads.
int ResolveThreads(int requested);

// Runs fn(i) for i in [0, n) on `threads` workers. fn must only write to
// per-index state.
void ParallelFor(std::size_t n, int threads,
                 const std::function<void(std::size_t)> &fn);

struct DecodeOptions {
  std::string corpus;
  std::string mode = "joint";  // greedy | beam | joint
  std::string level = "syllable";
  std::string syllable_vocab;
  std::string grapheme_vocab;
  int beam = 100;
  int nbest = 5;
  int token_cutoff = 0;
  double gamma = 0.5;
  std::string format = "auto";
  int threads = 0;
  std::string out;
};

struct DecodeOutput {
  // One JSON line per utterance, in corpus order.
  std::vector<std::string> records;
  std::size_t failures = 0;
  double seconds = 0.0;
};

// Throws Error for configuration problems (bad mode, unreadable vocab or
// manifest). Per-utterance problems become error records.
DecodeOutput DecodeCorpus(const DecodeOptions &options);

// Parses and runs one command line (without the program name). Output
// records go to --out or `out`; human summaries go to `log`.
int Dispatch(const std::vector<std::string> &args, std::ostream &out,
             std::ostream &log);

}  // namespace hanjoint::cli

#endif  // HANJOINT_CLI_COMMANDS_H_
