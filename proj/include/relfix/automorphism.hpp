#pragma once

// Automorphisms given by generator images plus an explicit inverse, their
// action on peripheral subgroups, and images of paths.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "relfix/metrics.hpp"
#include "relfix/parse.hpp"
#include "relfix/relcayley.hpp"

namespace relfix {

/// phi(H_lambda) = conjugator^-1 H_target conjugator.
struct PeripheralImage {
  FactorId target = 0;
  NormalForm conjugator;
};

struct ImagePath {
  Path path;
  // offsets[i] is where the image of edge i starts; offsets.back() = length.
  std::vector<std::size_t> offsets;
  // For each H-edge of the source, the index of its companion edge.
  std::vector<std::optional<std::size_t>> companion_index;
};

class Automorphism {
 public:
  /// Validates homomorphism, inverse and peripheral structure, adjoins the
  /// conjugators to X and computes S.
  static Automorphism from_definition(GroupSpec const& spec, AutomorphismDefinition const& def,
                                      MetricOptions options = {});
  /// Same checks from image lists indexed by generator. S is computed on
  /// first use.
  static Automorphism from_images(GroupSpec const& spec, std::string name,
                                  std::vector<NormalForm> forward,
                                  std::vector<NormalForm> backward, MetricOptions options = {});
  /// x -> g x g^-1.
  static Automorphism inner(GroupSpec const& spec, NormalForm const& g, MetricOptions options = {});
  static Automorphism identity(GroupSpec const& spec, MetricOptions options = {});

  std::string const& name() const;
  /// The declared group, without adjoined elements.
  GroupSpec const& base_spec() const;
  /// X extended by the conjugators f_lambda not already in X u {1}.
  GroupSpec const& spec() const;
  Metrics const& metrics() const;
  MetricsPtr metrics_ptr() const;

  NormalForm apply(NormalForm const& g) const;
  NormalForm apply_inverse(NormalForm const& g) const;
  Automorphism inverse() const;

  std::vector<NormalForm> const& forward_images() const;
  std::vector<NormalForm> const& backward_images() const;

  /// Indexed by factor id; set for peripheral factors only.
  std::optional<PeripheralImage> const& peripheral_map(FactorId factor) const;

  /// max over x in X of |phi(x)|_X and |phi^-1(x)|_X.
  Coord S() const;

  /// Fixed shortest X-word for phi(letter) (lexicographically least).
  LabelWord const& image_word(EdgeLabel const& x_letter) const;

 private:
  struct State;
  explicit Automorphism(std::shared_ptr<State> state) : state_(std::move(state)) {}
  static Automorphism build(GroupSpec const& spec, std::string name,
                            std::vector<NormalForm> forward, std::vector<NormalForm> backward,
                            MetricOptions options);

  std::shared_ptr<State> state_;
};

Automorphism parse_automorphism(std::string_view text, GroupSpec const& spec,
                                MetricOptions options = {});

/// (lambda', f_lambda) read off the normal forms of phi on H_lambda's
/// generators. ValidationError when no common conjugator exists.
PeripheralImage peripheral_correspondence(GroupSpec const& spec,
                                          std::vector<NormalForm> const& forward,
                                          std::vector<NormalForm> const& backward,
                                          FactorId factor);

Coord compute_S(Automorphism const& phi);

/// Path image: X-edges become W_x, an H-edge with label h becomes
/// f^-1 . h' . f where phi(h) = f^-1 h' f (just h' when f = 1).
ImagePath image_path(Automorphism const& phi, Path const& p);

/// Index in image_path(phi, p) of the companion of H-edge `edge`.
std::size_t companion(Automorphism const& phi, Path const& p, std::size_t edge);

/// max{S,3} kappa (2S+1)(2S+2) + max{S,3} c.
Rational quasigeodesic_constant_A(Rational kappa, Rational c, Coord s);

}  // namespace relfix
