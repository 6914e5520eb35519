#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace cantor {

/// Finite word over {0,1}; the empty word addresses the root interval.
class BinaryWord {
 public:
  BinaryWord() = default;
  BinaryWord(std::initializer_list<int> letters);
  /// Parses "0110"; the empty string is the empty word.
  static BinaryWord parse(std::string_view text);
  /// The word j^n.
  static BinaryWord repeat(int letter, std::size_t n);
  /// Word of the given length whose letters are the binary digits of `index`, most significant first.
  static BinaryWord from_index(std::uint64_t index, std::size_t length);

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  int operator[](std::size_t i) const { return letters_[i]; }
  const std::vector<std::uint8_t>& letters() const { return letters_; }

  BinaryWord child(int letter) const;
  /// w with its last letter deleted.
  BinaryWord parent() const;
  BinaryWord concat(const BinaryWord& other) const;
  BinaryWord prefix(std::size_t n) const;

  std::string to_string() const;

  friend auto operator<=>(const BinaryWord&, const BinaryWord&) = default;
  friend bool operator==(const BinaryWord&, const BinaryWord&) = default;

 private:
  std::vector<std::uint8_t> letters_;
};

/// Finite word over map indices {0,...,M-1}; psi_v = psi_{v_1} o ... o psi_{v_n}.
class IfsWord {
 public:
  IfsWord() = default;
  IfsWord(std::initializer_list<std::size_t> letters) : letters_(letters) {}
  explicit IfsWord(std::vector<std::size_t> letters) : letters_(std::move(letters)) {}

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  std::size_t operator[](std::size_t i) const { return letters_[i]; }
  const std::vector<std::size_t>& letters() const { return letters_; }

  IfsWord child(std::size_t letter) const {
    IfsWord w = *this;
    w.letters_.push_back(letter);
    return w;
  }
  IfsWord concat(const IfsWord& other) const {
    IfsWord w = *this;
    w.letters_.insert(w.letters_.end(), other.letters_.begin(), other.letters_.end());
    return w;
  }
  std::string to_string() const;

  friend auto operator<=>(const IfsWord&, const IfsWord&) = default;
  friend bool operator==(const IfsWord&, const IfsWord&) = default;

 private:
  std::vector<std::size_t> letters_;
};

}  // namespace cantor
