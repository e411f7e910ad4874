#pragma once

#include <cstddef>
#include <vector>

#include "qtwist/error.hpp"
#include "qtwist/tensor.hpp"

namespace qtwist {

/// One letter of an unordered word: hbar^power times a generator.
/// Ids 0..m-1 address H_1..H_m, ids m..m+n-1 address X_1..X_n.
struct Letter {
  std::size_t generator = 0;
  int power = 0;
};

using Word = std::vector<Letter>;

/// Normal-ordered value of a word, by left-to-right multiplication.
inline Element normal_order(const Word& w, const AlgebraPtr& alg, int order) {
  const std::size_t m = alg->m();
  Element acc = Element::unit(alg, order);
  for (const Letter& l : w) {
    if (l.generator >= alg->width()) throw malformed_word_error("word letter refers to an unknown generator");
    if (l.power < 0) throw malformed_word_error("word letter has a negative deformation power");
    Element g = l.generator < m ? generator_h(alg, order, l.generator) : generator_x(alg, order, l.generator - m);
    acc = acc * g.shifted(l.power);
  }
  return acc;
}

}  // namespace qtwist
