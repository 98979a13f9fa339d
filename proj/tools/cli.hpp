// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "itprove/eii.hpp"

namespace itp::cli {

enum ExitCode : int { kProved = 0, kNotProved = 1, kInputError = 2, kBudget = 3 };

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// copy:<n>,<l> | frl | frl-gap:<g> | double-markov | infinite-divisibility:<n> | file:<path>
Eii premise_from_spec(const std::string& spec);

}  // namespace itp::cli
