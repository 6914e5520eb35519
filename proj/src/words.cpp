#include "cantor/words.hpp"

#include <algorithm>
#include <stdexcept>

namespace cantor {

BinaryWord::BinaryWord(std::initializer_list<int> letters) {
  letters_.reserve(letters.size());
  for (int l : letters) {
    if (l != 0 && l != 1) throw std::invalid_argument("binary word letters must be 0 or 1");
    letters_.push_back(static_cast<std::uint8_t>(l));
  }
}

BinaryWord BinaryWord::parse(std::string_view text) {
  BinaryWord w;
  w.letters_.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw std::invalid_argument("binary word letters must be 0 or 1");
    w.letters_.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return w;
}

BinaryWord BinaryWord::repeat(int letter, std::size_t n) {
  if (letter != 0 && letter != 1) throw std::invalid_argument("binary word letters must be 0 or 1");
  BinaryWord w;
  w.letters_.assign(n, static_cast<std::uint8_t>(letter));
  return w;
}

BinaryWord BinaryWord::from_index(std::uint64_t index, std::size_t length) {
  BinaryWord w;
  w.letters_.resize(length);
  for (std::size_t i = 0; i < length; ++i) {
    w.letters_[length - 1 - i] = static_cast<std::uint8_t>((index >> i) & 1U);
  }
  return w;
}

BinaryWord BinaryWord::child(int letter) const {
  if (letter != 0 && letter != 1) throw std::invalid_argument("binary word letters must be 0 or 1");
  BinaryWord w = *this;
  w.letters_.push_back(static_cast<std::uint8_t>(letter));
  return w;
}

BinaryWord BinaryWord::parent() const {
  if (letters_.empty()) throw std::out_of_range("the empty word has no parent");
  BinaryWord w = *this;
  w.letters_.pop_back();
  return w;
}

BinaryWord BinaryWord::concat(const BinaryWord& other) const {
  BinaryWord w = *this;
  w.letters_.insert(w.letters_.end(), other.letters_.begin(), other.letters_.end());
  return w;
}

BinaryWord BinaryWord::prefix(std::size_t n) const {
  BinaryWord w;
  w.letters_.assign(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(std::min(n, letters_.size())));
  return w;
}

std::string BinaryWord::to_string() const {
  std::string s;
  s.reserve(letters_.size());
  for (auto l : letters_) s.push_back(static_cast<char>('0' + l));
  return s;
}

std::string IfsWord::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) s.push_back('.');
    s += std::to_string(letters_[i]);
  }
  return s;
}

}  // namespace cantor
