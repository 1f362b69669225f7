#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace haplomin {

// A haplotype over ±1 site values. The complementary pair (h, -h) is always
// implied; functions that compare haplotypes account for the global flip.
// Text form uses alleles: '0' <-> +1, '1' <-> -1.
class Haplotype {
 public:
  Haplotype() = default;

  explicit Haplotype(std::vector<std::int8_t> signs) : signs_(std::move(signs)) {
    for (auto s : signs_) {
      if (s != 1 && s != -1) {
        throw std::invalid_argument("haplotype entries must be +1 or -1");
      }
    }
  }

  static Haplotype from_allele_string(const std::string& text) {
    std::vector<std::int8_t> signs;
    signs.reserve(text.size());
    for (char c : text) {
      if (c == '0') {
        signs.push_back(1);
      } else if (c == '1') {
        signs.push_back(-1);
      } else if (c == '\r' || c == '\n') {
        break;
      } else {
        throw std::invalid_argument(std::string("invalid allele character '") +
                                    c + "'");
      }
    }
    return Haplotype(std::move(signs));
  }

  std::string allele_string() const {
    std::string out;
    out.reserve(signs_.size());
    for (auto s : signs_) out.push_back(s > 0 ? '0' : '1');
    return out;
  }

  Haplotype complement() const {
    std::vector<std::int8_t> flipped(signs_.size());
    for (std::size_t i = 0; i < signs_.size(); ++i) {
      flipped[i] = static_cast<std::int8_t>(-signs_[i]);
    }
    return Haplotype(std::move(flipped));
  }

  std::size_t size() const { return signs_.size(); }
  std::int8_t operator[](std::size_t i) const { return signs_[i]; }
  const std::vector<std::int8_t>& signs() const { return signs_; }

  bool operator==(const Haplotype&) const = default;

 private:
  std::vector<std::int8_t> signs_;
};

}  // namespace haplomin
