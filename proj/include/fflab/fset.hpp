#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "fflab/field.hpp"

namespace fflab {

// Subset of Z/qZ as a dense bit vector with a cached cardinality.
// Word layout: residue x lives at bit (x & 63) of words()[x >> 6]; bits at
// positions >= q are always zero, which the shifted-or sumset kernels rely on.
class FSet {
 public:
  explicit FSet(const PrimeField& f);

  static FSet full(const PrimeField& f);
  static FSet of(const PrimeField& f, std::initializer_list<Elem> xs);
  static FSet from_elements(const PrimeField& f, std::span<const Elem> xs);
  // Takes ownership of a word vector (must be ceil(q/64) words, high bits 0).
  static FSet from_words(const PrimeField& f, std::vector<std::uint64_t> words);

  const PrimeField& field() const { return field_; }
  std::uint32_t q() const { return field_.q(); }
  std::size_t size() const { return card_; }
  bool empty() const { return card_ == 0; }

  bool contains(Elem x) const {
    return (words_[x >> 6] >> (x & 63)) & 1u;
  }
  void insert(Elem x);
  void erase(Elem x);

  std::vector<Elem> elements() const;  // ascending
  Elem min_element() const;            // raises EmptyInput on the empty set

  // Visits members in ascending order.
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        const int b = __builtin_ctzll(bits);
        fn(static_cast<Elem>((w << 6) + b));
        bits &= bits - 1;
      }
    }
  }

  // Popcount pass over the raw words; tests compare it with the cache.
  std::size_t recount() const;

  std::span<const std::uint64_t> words() const { return words_; }

  bool operator==(const FSet& o) const;
  bool operator!=(const FSet& o) const { return !(*this == o); }
  bool is_subset_of(const FSet& o) const;

  FSet union_with(const FSet& o) const;
  FSet intersect_with(const FSet& o) const;

 private:
  PrimeField field_;
  std::vector<std::uint64_t> words_;
  std::size_t card_ = 0;
};

// Uniform n-subset of Z/qZ (Floyd sampling), reproducible from the seed.
FSet rand_subset(const PrimeField& f, std::size_t n, std::uint64_t seed);

std::size_t word_count(std::uint32_t q);
std::uint64_t tail_mask(std::uint32_t q);

}  // namespace fflab
