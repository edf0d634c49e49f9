// Copyright 2026 The quicktap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace quicktap::cli {

/// Runs one CLI invocation. `args` excludes the program name. Returns the
/// process exit status: 0 when every requested artifact was written and
/// read back successfully, 1 on a library error (reported on `err` as a
/// single `error code=<name> message="..."` line), 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace quicktap::cli
