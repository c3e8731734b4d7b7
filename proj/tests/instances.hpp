#pragma once

#include <string>

#include "oracles.hpp"
#include "relfix/parse.hpp"

namespace fixture {

inline relfix::GroupFile const& g1() {
  static relfix::GroupFile const file = relfix::parse_group_file(oracle::read_data("g1.grp"));
  return file;
}

inline relfix::GroupFile const& g2() {
  static relfix::GroupFile const file = relfix::parse_group_file(oracle::read_data("g2.grp"));
  return file;
}

inline relfix::NormalForm nf(relfix::GroupSpec const& spec, std::string const& word) {
  return spec.normal_form(relfix::parse_word(word, spec));
}

}  // namespace fixture
