#pragma once

#include <string>
#include <string_view>

#include "mwb/thread.hpp"

namespace mwb {

// Textual thread specifications, one equation per line:
//
//   X1 = init ; X2
//   X2 = preload ? X3 : X5        # perform preload, branch on the reply
//   X5 = S
//
// Grammar (one declaration per line, '#' starts a comment):
//   decl   := NAME "=" term
//   term   := "S" | "D" | NAME
//           | action "?" term ":" term
//           | action ";" term
//           | "(" term ")"
//   action := IDENT [":" NAT]
//
// "S", "D" and "tau" are reserved: usable as constants / the silent action,
// never as variable names. The first declaration is the root. Actions bind
// tighter than "?"; "a ; x" abbreviates "x <| a |> x".
//
// Throws ParseError (with 1-based line:column) on malformed input, SpecError
// on undeclared variables or duplicate equations.
RecSpec parse_threads(std::string_view text);

// Inverse of parse_threads: stable, locale-free layout with the root
// equation first. parse_threads(print_threads(s)) == s for every valid spec
// whose root is its first equation (print_threads moves the root to the
// front otherwise).
std::string print_threads(const RecSpec& spec);

std::string print_term(const TermPtr& term);

}  // namespace mwb
