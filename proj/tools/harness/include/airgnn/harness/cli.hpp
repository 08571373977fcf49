// SPDX-License-Identifier: Apache-2.0
//
// Command-line entry point. Subcommands: gen-layouts, train, infer, signaling,
// tradeoff, wmmse, experiment <id>. Every run writes run_manifest.json next to
// its results; passing that manifest back through --config repeats the run.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace airgnn::harness {

/// `args` excludes the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

int run_cli(int argc, char **argv);

} // namespace airgnn::harness
