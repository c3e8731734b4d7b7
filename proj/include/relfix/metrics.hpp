#pragma once

// Word metrics d_X and d_{X u H}.
//
// Without adjoined extra elements both metrics have closed forms: a geodesic
// spells the normal form syllable by syllable, a peripheral syllable costing
// one H-edge. Once conjugators are adjoined to X the closed forms only give
// upper bounds, and the metrics are computed by capped searches that throw
// CapExceeded instead of approximating.

#include <cstddef>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "relfix/alphabet.hpp"
#include "relfix/group.hpp"

namespace relfix {

struct MetricOptions {
  // Largest d_X the Cayley-graph search may certify.
  int bfs_radius_cap = 10;
  // Vertex budget of one relative-metric search.
  std::size_t search_state_cap = 4'000'000;
};

class Metrics {
 public:
  explicit Metrics(GroupSpec spec, MetricOptions options = {});
  ~Metrics();

  GroupSpec const& spec() const { return spec_; }
  MetricOptions const& options() const { return options_; }
  bool closed_form() const { return spec_.extra_x_elements().empty(); }

  /// The X-alphabet in letter order.
  std::vector<EdgeLabel> const& x_alphabet() const { return x_alphabet_; }
  NormalForm letter_element(EdgeLabel const& label) const;
  NormalForm word_element(LabelWord const& word) const;
  LabelWord invert_word(LabelWord const& word) const;

  /// |g|_X.
  Coord x_length(NormalForm const& g) const;
  /// |g|_{X u H}.
  Coord rel_length(NormalForm const& g) const;
  Coord x_distance(NormalForm const& a, NormalForm const& b) const {
    return x_length(spec_.multiply(spec_.invert(a), b));
  }
  Coord rel_distance(NormalForm const& a, NormalForm const& b) const {
    return rel_length(spec_.multiply(spec_.invert(a), b));
  }

  /// Lexicographically least shortest word over X.
  LabelWord shortest_x_word(NormalForm const& g) const;

  /// One geodesic word over X u H. Closed-form case: peripheral syllables
  /// become single H-letters, the rest is spelled lexicographically least.
  LabelWord rel_geodesic_word(NormalForm const& g) const;

  /// Every geodesic word over X u H for g; throws CapExceeded past `cap`.
  std::vector<LabelWord> rel_geodesic_words(NormalForm const& g, std::size_t cap) const;

  /// Upper bound used by the searches; exact when closed_form().
  Coord closed_form_rel_length(NormalForm const& g) const;
  Coord closed_form_x_length(NormalForm const& g) const;

 private:
  struct Ball;
  struct RelSearch;

  Ball const& ball() const;
  Coord search_x_length(NormalForm const& g) const;
  RelSearch search_rel(NormalForm const& g) const;
  // All minimal X-spellings of one syllable.
  std::vector<LabelWord> syllable_spellings(Syllable const& s) const;

  GroupSpec spec_;
  MetricOptions options_;
  std::vector<EdgeLabel> x_alphabet_;
  std::vector<NormalForm> x_letter_elements_;

  mutable std::once_flag ball_once_;
  mutable std::unique_ptr<Ball> ball_;
  mutable std::shared_mutex memo_mutex_;
  mutable std::unordered_map<NormalForm, Coord, NormalFormHash> x_memo_;
  mutable std::unordered_map<NormalForm, Coord, NormalFormHash> rel_memo_;
};

using MetricsPtr = std::shared_ptr<Metrics const>;

}  // namespace relfix
