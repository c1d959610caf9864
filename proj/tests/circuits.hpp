#pragma once

// Random well-typed decompositions built from bialgebra generators.

#include "mwd/bialg.hpp"
#include "support.hpp"

namespace support {

using mwd::bialg::Dec;
using mwd::bialg::Generator;

/// A tensor of generators consuming exactly n inputs (plus the odd zero).
inline Dec random_layer(Rng& rng, Field field, std::size_t n) {
  std::vector<Dec> atoms;
  std::size_t left = n;
  while (left > 0 || (atoms.empty() && coin(rng, 0.5))) {
    Generator g;
    long pick = draw(rng, 0, 9);
    if (left == 0) {
      g = Generator::zero;
    } else if (pick < 2) {
      g = Generator::copy;
    } else if (pick < 4 && left >= 2) {
      g = Generator::add;
    } else if (pick < 5 && left >= 2) {
      g = Generator::swap;
    } else if (pick < 6) {
      g = Generator::discard;
    } else if (pick < 7) {
      g = Generator::zero;
    } else {
      g = Generator::id;
    }
    Matrix m = mwd::bialg::generator_matrix(g, field);
    left -= m.cols();
    atoms.push_back(Dec::leaf(m));
    if (left == 0 && atoms.size() > 6) break;
  }
  if (atoms.empty()) atoms.push_back(Dec::leaf(mwd::bialg::generator_matrix(Generator::zero, field)));
  Dec out = atoms.back();
  for (std::size_t i = atoms.size() - 1; i-- > 0;) out = Dec::tensor(atoms[i], out);
  return out;
}

inline std::size_t codomain(const Dec& d) { return mwd::bialg::evaluate(d).rows(); }

/// `layers` random layers starting from n wires, bracketed at random, with
/// the wire count kept at most cap.
inline Dec random_circuit(Rng& rng, Field field, std::size_t n, std::size_t layers,
                          std::size_t cap = 4) {
  std::vector<Dec> chain;
  std::size_t wires = n;
  for (std::size_t i = 0; i < layers; ++i) {
    Dec layer = random_layer(rng, field, wires);
    for (int retry = 0; retry < 20 && codomain(layer) > cap; ++retry)
      layer = random_layer(rng, field, wires);
    if (codomain(layer) > cap) break;
    chain.push_back(layer);
    wires = codomain(layer);
  }
  if (chain.empty()) chain.push_back(random_layer(rng, field, n));
  // random bracketing of the chain
  while (chain.size() > 1) {
    std::size_t i = rng() % (chain.size() - 1);
    std::size_t cut = codomain(chain[i]);
    chain[i] = Dec::compose(chain[i], cut, chain[i + 1]);
    chain.erase(chain.begin() + static_cast<long>(i) + 1);
  }
  return chain.front();
}

}  // namespace support
