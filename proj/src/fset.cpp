#include "fflab/fset.hpp"

#include <bit>
#include <string>

#include "fflab/rng.hpp"

namespace fflab {

std::size_t word_count(std::uint32_t q) { return (std::size_t(q) + 63) / 64; }

std::uint64_t tail_mask(std::uint32_t q) {
  const std::uint32_t r = q & 63;
  return r == 0 ? ~std::uint64_t{0} : ((std::uint64_t{1} << r) - 1);
}

FSet::FSet(const PrimeField& f) : field_(f), words_(word_count(f.q()), 0) {}

FSet FSet::full(const PrimeField& f) {
  FSet s(f);
  for (auto& w : s.words_) w = ~std::uint64_t{0};
  s.words_.back() &= tail_mask(f.q());
  s.card_ = f.q();
  return s;
}

FSet FSet::of(const PrimeField& f, std::initializer_list<Elem> xs) {
  FSet s(f);
  for (Elem x : xs) s.insert(x);
  return s;
}

FSet FSet::from_elements(const PrimeField& f, std::span<const Elem> xs) {
  FSet s(f);
  for (Elem x : xs) s.insert(x);
  return s;
}

FSet FSet::from_words(const PrimeField& f, std::vector<std::uint64_t> words) {
  FSet s(f);
  if (words.size() != s.words_.size()) {
    throw SizeOutOfRange("word vector has wrong length for q=" +
                         std::to_string(f.q()));
  }
  words.back() &= tail_mask(f.q());
  s.words_ = std::move(words);
  s.card_ = s.recount();
  return s;
}

void FSet::insert(Elem x) {
  if (x >= q()) throw SizeOutOfRange("element " + std::to_string(x) +
                                     " outside Z/" + std::to_string(q()) + "Z");
  std::uint64_t& w = words_[x >> 6];
  const std::uint64_t bit = std::uint64_t{1} << (x & 63);
  if (!(w & bit)) {
    w |= bit;
    ++card_;
  }
}

void FSet::erase(Elem x) {
  if (x >= q()) throw SizeOutOfRange("element " + std::to_string(x) +
                                     " outside Z/" + std::to_string(q()) + "Z");
  std::uint64_t& w = words_[x >> 6];
  const std::uint64_t bit = std::uint64_t{1} << (x & 63);
  if (w & bit) {
    w &= ~bit;
    --card_;
  }
}

std::vector<Elem> FSet::elements() const {
  std::vector<Elem> out;
  out.reserve(card_);
  for_each([&](Elem x) { out.push_back(x); });
  return out;
}

Elem FSet::min_element() const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w]) return static_cast<Elem>((w << 6) + __builtin_ctzll(words_[w]));
  }
  throw EmptyInput("min_element of empty set");
}

std::size_t FSet::recount() const {
  std::size_t n = 0;
  for (auto w : words_) n += std::popcount(w);
  return n;
}

bool FSet::operator==(const FSet& o) const {
  return field_ == o.field_ && words_ == o.words_;
}

bool FSet::is_subset_of(const FSet& o) const {
  check_same_field(field_, o.field_);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & ~o.words_[i]) return false;
  }
  return true;
}

FSet FSet::union_with(const FSet& o) const {
  check_same_field(field_, o.field_);
  FSet out(field_);
  for (std::size_t i = 0; i < words_.size(); ++i)
    out.words_[i] = words_[i] | o.words_[i];
  out.card_ = out.recount();
  return out;
}

FSet FSet::intersect_with(const FSet& o) const {
  check_same_field(field_, o.field_);
  FSet out(field_);
  for (std::size_t i = 0; i < words_.size(); ++i)
    out.words_[i] = words_[i] & o.words_[i];
  out.card_ = out.recount();
  return out;
}

FSet rand_subset(const PrimeField& f, std::size_t n, std::uint64_t seed) {
  if (n > f.q()) {
    throw SizeOutOfRange("subset size " + std::to_string(n) + " exceeds q=" +
                         std::to_string(f.q()));
  }
  Rng rng(seed);
  FSet s(f);
  // Floyd: for j in [q-n, q) pick t in [0, j]; insert t, or j on collision.
  for (std::uint64_t j = f.q() - n; j < f.q(); ++j) {
    const Elem t = static_cast<Elem>(rng.below(j + 1));
    if (s.contains(t)) {
      s.insert(static_cast<Elem>(j));
    } else {
      s.insert(t);
    }
  }
  return s;
}

}  // namespace fflab
