#pragma once

// Text formats:
//
//   spec   := (factor | free)+
//   factor := "factor" NAME "{" "abelian" ";" "gens" namelist [";" "torsion" intlist] "}"
//   free   := "free" namelist
//   aut    := "aut" NAME "{" (NAME "->" word ";")* "inverse" "{" (NAME "->" word ";")* "}" "}"
//   word   := token*   with token := NAME ["^" INT] | FACTOR "[" intlist "]" | "1"
//
// A group file is a spec followed by any number of aut blocks. '#' starts a
// comment that runs to the end of the line.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relfix/group.hpp"

namespace relfix {

struct AutomorphismDefinition {
  std::string name;
  // Generator name -> image word, in source order.
  std::vector<std::pair<std::string, Word>> forward;
  std::vector<std::pair<std::string, Word>> backward;
};

struct GroupFile {
  GroupSpec spec;
  std::vector<AutomorphismDefinition> automorphisms;

  // nullptr when absent.
  AutomorphismDefinition const* find(std::string_view name) const;
};

GroupSpec parse_group_spec(std::string_view text);
GroupFile parse_group_file(std::string_view text);
Word parse_word(std::string_view text, GroupSpec const& spec);
AutomorphismDefinition parse_automorphism_definition(std::string_view text,
                                                     GroupSpec const& spec);

}  // namespace relfix
