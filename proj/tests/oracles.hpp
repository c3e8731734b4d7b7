#pragma once

// Reference implementations kept independent of the library's arithmetic:
// letters are merged by naive one-step rewriting and distances come from
// plain breadth-first search.

#include <map>
#include <string>
#include <vector>

#include "relfix/group.hpp"

namespace oracle {

using relfix::Coord;

struct Letter {
  relfix::FactorId factor = 0;
  std::vector<Coord> v;
};
using Word = std::vector<Letter>;

/// Applies single rewriting steps (drop a trivial letter, merge two adjacent
/// letters of one factor) until none applies.
Word rewrite(relfix::GroupSpec const& spec, Word w);

relfix::NormalForm to_normal_form(relfix::GroupSpec const& spec, Word const& w);
Word from_normal_form(relfix::NormalForm const& g);
Word concat(Word a, Word const& b);

/// Key identifying a reduced word.
std::vector<Coord> key(relfix::GroupSpec const& spec, Word const& reduced);
std::vector<Coord> key(relfix::NormalForm const& g);

/// Distances from 1 to every vertex of the window, walking only inside it.
/// `relative` adds H-letters of max-norm <= window.max_factor_length.
std::map<std::vector<Coord>, int> restricted_bfs(relfix::GroupSpec const& spec,
                                                 relfix::DomainWindow const& window,
                                                 bool relative);

/// Distances from 1 to everything within `radius`, with no window. Letters
/// are the generators, the group's extra X-elements and their inverses, and,
/// when h_box > 0, H-letters of max-norm <= h_box.
std::map<std::vector<Coord>, int> ball_bfs(relfix::GroupSpec const& spec, int radius,
                                           Coord h_box);

/// Window size by explicit recursion over syllable sequences.
std::uint64_t count_window(relfix::GroupSpec const& spec, relfix::DomainWindow const& window);

/// phi(g) by substituting generator images letter by letter and rewriting.
/// images[i] is the image word of generator i.
relfix::NormalForm apply_images(relfix::GroupSpec const& spec,
                                std::vector<relfix::Word> const& images,
                                relfix::NormalForm const& g);

/// Generator images of a parsed definition, indexed by generator.
std::vector<relfix::Word> forward_images(relfix::GroupSpec const& spec,
                                         std::vector<std::pair<std::string, relfix::Word>> const& block);

/// Reads a file from the repository's data directory.
std::string read_data(std::string const& name);

}  // namespace oracle
