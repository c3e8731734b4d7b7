#include "relfix/automorphism.hpp"

#include <algorithm>

namespace relfix {

struct Automorphism::State {
  std::string name;
  GroupSpec base;
  std::vector<NormalForm> forward;
  std::vector<NormalForm> backward;
  std::vector<std::optional<PeripheralImage>> peripheral;
  MetricsPtr metrics;
  MetricOptions options;

  std::once_flag s_once;
  Coord s = 0;
  std::mutex words_mutex;
  std::map<EdgeLabel, LabelWord> words;
};

namespace {

std::size_t first_generator(GroupSpec const& spec, FactorId factor) {
  std::size_t i = 0;
  while (spec.generator(i).factor != factor) ++i;
  return i;
}

NormalForm apply_images(GroupSpec const& spec, std::vector<NormalForm> const& images,
                        NormalForm const& g) {
  NormalForm out;
  for (auto const& s : g.syllables()) {
    std::size_t first = first_generator(spec, s.factor);
    for (std::size_t j = 0; j < s.coords.size(); ++j) {
      if (s.coords[j] != 0) out = spec.multiply(out, spec.power(images[first + j], s.coords[j]));
    }
  }
  return out;
}

void check_homomorphism(GroupSpec const& spec, std::vector<NormalForm> const& images,
                        std::string const& which) {
  if (images.size() != spec.generator_count()) {
    throw ValidationError(which + ": expected an image for every generator");
  }
  for (FactorId f = 0; f < spec.factor_count(); ++f) {
    auto const& factor = spec.factor(f);
    std::size_t first = first_generator(spec, f);
    for (std::size_t j = 0; j < factor.dimension(); ++j) {
      auto const& x = images[first + j];
      for (std::size_t k = j + 1; k < factor.dimension(); ++k) {
        auto const& y = images[first + k];
        if (!(spec.multiply(x, y) == spec.multiply(y, x))) {
          throw ValidationError(which + " is not a homomorphism: images of " +
                                factor.generator_names[j] + " and " + factor.generator_names[k] +
                                " do not commute");
        }
      }
      if (factor.modulus(j) != 0 && !spec.power(x, factor.modulus(j)).is_identity()) {
        throw ValidationError(which + " is not a homomorphism: image of " +
                              factor.generator_names[j] + " has the wrong order");
      }
    }
  }
}

}  // namespace

PeripheralImage peripheral_correspondence(GroupSpec const& spec,
                                          std::vector<NormalForm> const& forward,
                                          std::vector<NormalForm> const& backward,
                                          FactorId factor) {
  auto const& f = spec.factor(factor);
  std::size_t first = first_generator(spec, factor);
  std::optional<PeripheralImage> common;
  NormalForm w;
  for (std::size_t j = 0; j < f.dimension(); ++j) {
    auto const& y = forward[first + j];
    auto fail = [&](std::string const& why) {
      throw ValidationError("peripheral structure not respected: image " + spec.format(y) +
                            " of " + f.generator_names[j] + " " + why);
    };
    if (y.size() % 2 == 0) fail("is not conjugate into a peripheral factor");
    std::size_t k = y.size() / 2;
    auto const& middle = y[k];
    if (!spec.is_peripheral(middle.factor)) fail("is not conjugate into a peripheral factor");
    NormalForm::Syllables head(y.syllables().begin(),
                               y.syllables().begin() + static_cast<std::ptrdiff_t>(k));
    NormalForm candidate(std::move(head));
    NormalForm rebuilt = spec.multiply(spec.multiply(candidate, NormalForm({middle})),
                                       spec.invert(candidate));
    if (!(rebuilt == y)) fail("is not conjugate into a peripheral factor");
    PeripheralImage here{middle.factor, spec.invert(candidate)};
    if (!common) {
      common = here;
    } else if (common->target != here.target) {
      fail("lands in a different factor than the other generators");
    } else if (!(common->conjugator == here.conjugator)) {
      fail("has no conjugator in common with the other generators");
    }
  }
  // Every element of the conjugate must come from H_lambda.
  auto const& target = spec.factor(common->target);
  std::size_t target_first = first_generator(spec, common->target);
  for (std::size_t j = 0; j < target.dimension(); ++j) {
    NormalForm y = spec.generator_power(target_first + j, 1);
    NormalForm conj = spec.multiply(spec.multiply(spec.invert(common->conjugator), y),
                                    common->conjugator);
    NormalForm pre = apply_images(spec, backward, conj);
    if (!in_peripheral(spec, pre, factor)) {
      throw ValidationError("peripheral structure not respected: image of " + f.name +
                            " is a proper subgroup of a conjugate of " + target.name);
    }
  }
  return *common;
}

Automorphism Automorphism::build(GroupSpec const& spec, std::string name,
                                 std::vector<NormalForm> forward,
                                 std::vector<NormalForm> backward, MetricOptions options) {
  if (!spec.extra_x_elements().empty()) {
    throw PreconditionError("automorphisms are defined over the declared generators only");
  }
  check_homomorphism(spec, forward, "map");
  check_homomorphism(spec, backward, "inverse map");
  for (std::size_t i = 0; i < spec.generator_count(); ++i) {
    NormalForm x = spec.generator_power(i, 1);
    if (!(apply_images(spec, backward, forward[i]) == x) ||
        !(apply_images(spec, forward, backward[i]) == x)) {
      throw ValidationError("provided inverse fails on generator " + spec.generator_name(i));
    }
  }
  auto state = std::make_shared<State>();
  state->name = std::move(name);
  state->base = spec;
  state->options = options;
  state->peripheral.resize(spec.factor_count());
  std::vector<bool> hit(spec.factor_count(), false);
  std::vector<NormalForm> extras;
  // phi and phi^-1 share one alphabet: X receives the conjugators of both.
  auto adjoin = [&](NormalForm const& c) {
    if (c.is_identity()) return;
    for (std::size_t i = 0; i < spec.generator_count(); ++i) {
      if (c == spec.generator_power(i, 1) || c == spec.generator_power(i, -1)) return;
    }
    NormalForm inv = spec.invert(c);
    extras.push_back(inv < c ? inv : c);
  };
  for (FactorId f : spec.peripheral_factors()) {
    auto image = peripheral_correspondence(spec, forward, backward, f);
    if (hit[image.target]) {
      throw ValidationError("peripheral correspondence is not a bijection");
    }
    hit[image.target] = true;
    adjoin(image.conjugator);
    adjoin(peripheral_correspondence(spec, backward, forward, f).conjugator);
    state->peripheral[f] = std::move(image);
  }
  std::sort(extras.begin(), extras.end());
  extras.erase(std::unique(extras.begin(), extras.end()), extras.end());
  state->forward = std::move(forward);
  state->backward = std::move(backward);
  state->metrics = std::make_shared<Metrics const>(spec.with_extra_x_elements(extras), options);
  return Automorphism(std::move(state));
}

Automorphism Automorphism::from_images(GroupSpec const& spec, std::string name,
                                       std::vector<NormalForm> forward,
                                       std::vector<NormalForm> backward, MetricOptions options) {
  return build(spec, std::move(name), std::move(forward), std::move(backward), options);
}

Automorphism Automorphism::from_definition(GroupSpec const& spec,
                                           AutomorphismDefinition const& def,
                                           MetricOptions options) {
  auto images = [&](std::vector<std::pair<std::string, Word>> const& block) {
    std::vector<NormalForm> out(spec.generator_count());
    std::vector<bool> seen(spec.generator_count(), false);
    for (auto const& [name, word] : block) {
      auto i = spec.find_generator(name);
      if (!i) throw ValidationError("unknown generator '" + name + "'");
      if (seen[*i]) throw ValidationError("generator '" + name + "' mapped twice");
      seen[*i] = true;
      out[*i] = spec.normal_form(word);
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      throw ValidationError("aut '" + def.name + "' must give an image for every generator");
    }
    return out;
  };
  auto phi = build(spec, def.name, images(def.forward), images(def.backward), options);
  phi.S();
  return phi;
}

Automorphism Automorphism::inner(GroupSpec const& spec, NormalForm const& g,
                                 MetricOptions options) {
  std::vector<NormalForm> forward;
  std::vector<NormalForm> backward;
  NormalForm inv = spec.invert(g);
  for (std::size_t i = 0; i < spec.generator_count(); ++i) {
    NormalForm x = spec.generator_power(i, 1);
    forward.push_back(spec.multiply(spec.multiply(g, x), inv));
    backward.push_back(spec.multiply(spec.multiply(inv, x), g));
  }
  return build(spec, "inner(" + spec.format(g) + ")", std::move(forward), std::move(backward),
               options);
}

Automorphism Automorphism::identity(GroupSpec const& spec, MetricOptions options) {
  return inner(spec, spec.identity(), options);
}

std::string const& Automorphism::name() const { return state_->name; }
GroupSpec const& Automorphism::base_spec() const { return state_->base; }
GroupSpec const& Automorphism::spec() const { return state_->metrics->spec(); }
Metrics const& Automorphism::metrics() const { return *state_->metrics; }
MetricsPtr Automorphism::metrics_ptr() const { return state_->metrics; }
std::vector<NormalForm> const& Automorphism::forward_images() const { return state_->forward; }
std::vector<NormalForm> const& Automorphism::backward_images() const { return state_->backward; }
std::optional<PeripheralImage> const& Automorphism::peripheral_map(FactorId factor) const {
  return state_->peripheral.at(factor);
}

NormalForm Automorphism::apply(NormalForm const& g) const {
  return apply_images(state_->base, state_->forward, g);
}

NormalForm Automorphism::apply_inverse(NormalForm const& g) const {
  return apply_images(state_->base, state_->backward, g);
}

Automorphism Automorphism::inverse() const {
  return build(state_->base, state_->name + "^-1", state_->backward, state_->forward,
               state_->options);
}

Coord Automorphism::S() const {
  std::call_once(state_->s_once, [this] {
    Coord s = 0;
    auto const& m = metrics();
    for (auto const& x : m.x_alphabet()) {
      if (x.sign < 0) continue;
      NormalForm e = m.letter_element(x);
      s = std::max({s, m.x_length(apply(e)), m.x_length(apply_inverse(e))});
    }
    state_->s = s;
  });
  return state_->s;
}

LabelWord const& Automorphism::image_word(EdgeLabel const& x_letter) const {
  {
    std::lock_guard lock(state_->words_mutex);
    if (auto it = state_->words.find(x_letter); it != state_->words.end()) return it->second;
  }
  LabelWord w = metrics().shortest_x_word(apply(metrics().letter_element(x_letter)));
  std::lock_guard lock(state_->words_mutex);
  return state_->words.emplace(x_letter, std::move(w)).first->second;
}

Automorphism parse_automorphism(std::string_view text, GroupSpec const& spec,
                                MetricOptions options) {
  return Automorphism::from_definition(spec, parse_automorphism_definition(text, spec), options);
}

Coord compute_S(Automorphism const& phi) { return phi.S(); }

namespace {

// The X-letter whose element is g.
EdgeLabel letter_for(Metrics const& m, NormalForm const& g) {
  for (auto const& x : m.x_alphabet()) {
    if (m.letter_element(x) == g) return x;
  }
  throw Error("conjugator " + m.spec().format(g) + " is not a letter of X");
}

}  // namespace

ImagePath image_path(Automorphism const& phi, Path const& p) {
  auto const& m = phi.metrics();
  auto const& spec = m.spec();
  ImagePath out;
  out.path.base = phi.apply(p.base);
  for (auto const& label : p.labels) {
    out.offsets.push_back(out.path.labels.size());
    if (label.is_x()) {
      auto const& w = phi.image_word(label);
      out.path.labels.insert(out.path.labels.end(), w.begin(), w.end());
      out.companion_index.push_back(std::nullopt);
      continue;
    }
    auto const& image = *phi.peripheral_map(label.index);
    NormalForm h = phi.apply(spec.element(label.index, label.coords));
    NormalForm middle =
        spec.multiply(spec.multiply(image.conjugator, h), spec.invert(image.conjugator));
    if (middle.size() != 1 || middle.front().factor != image.target) {
      throw Error("image of an H-letter left its peripheral conjugate");
    }
    bool framed = !image.conjugator.is_identity();
    if (framed) out.path.labels.push_back(letter_for(m, spec.invert(image.conjugator)));
    out.companion_index.push_back(out.path.labels.size());
    out.path.labels.push_back(EdgeLabel::peripheral(image.target, middle.front().coords));
    if (framed) out.path.labels.push_back(letter_for(m, image.conjugator));
  }
  out.offsets.push_back(out.path.labels.size());
  return out;
}

std::size_t companion(Automorphism const& phi, Path const& p, std::size_t edge) {
  if (edge >= p.length() || !p.labels[edge].is_h()) {
    throw PreconditionError("companion: edge " + std::to_string(edge) + " is not an H-edge");
  }
  return *image_path(phi, p).companion_index[edge];
}

Rational quasigeodesic_constant_A(Rational kappa, Rational c, Coord s) {
  Rational big(std::max<Coord>(s, 3));
  return big * kappa * Rational(2 * s + 1) * Rational(2 * s + 2) + big * c;
}

}  // namespace relfix
