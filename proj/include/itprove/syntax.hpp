// Copyright (c) itprove contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "itprove/eii.hpp"

namespace itp {

/// Text syntax.
///
///   statement   := [prefix] constraints [">>" ["exists" decls ":"] constraints]
///   region      := [prefix] ["exists" decls ":"] constraints
///   prefix      := "forall" decls ":"
///   decls       := names [";" names]          random variables ; reals
///   constraints := "true" | constraint ("," constraint)*
///   constraint  := expr (("<=" | ">=" | "==") expr)+
///   expr        := ["-"] term (("+" | "-") term)*
///   term        := [number ["*"]] atom | number
///   atom        := "H(" names ["|" names] ")" | "I(" names ";" names ["|" names] ")"
///                | name | "(" expr ")"
///
/// Names inside H() and I() are random variables, bare names are reals.
/// Without ";" a declared name is classified by its use (unused: random
/// variable). Without a prefix every free name is declared in order of
/// first appearance. '#' starts a comment that runs to the end of the line.
/// A statement without ">>" has an empty premise.
class ParseError : public std::invalid_argument {
  public:
    ParseError(std::size_t offset, const std::string& what)
        : std::invalid_argument("column " + std::to_string(offset + 1) + ": " + what), offset_(offset) {}
    std::size_t offset() const { return offset_; }

  private:
    std::size_t offset_;
};

Eii parse_statement(std::string_view text);

/// With `base`, free names must belong to it and the result uses it as is.
Eip parse_region(std::string_view text, const VarContext* base = nullptr);

/// Parses both regions over the union of their free names, first region first.
std::pair<Eip, Eip> parse_region_pair(std::string_view a, std::string_view b);

/// Canonical text; parse_statement(print_statement(e)) has the same rows.
std::string print_statement(const Eii& e);
std::string print_region(const Eip& p);

/// Rows of `s` over `ctx`, consecutive (e, -e) pairs as one equality.
std::string print_constraints(const IneqSystem& s, const VarContext& ctx);

}  // namespace itp
